"""Concrete integer-vector and mod-1 sequence generators.

Kinds covered: polynomial tuples (p_1(n), ..., p_d(n)); the same along
shifted primes; floor sequences [sum c_j n^{p_j} (log n)^{l_j}] with
guaranteed-correct floors; the Morse (even binary digit sum) sequence;
products of floors [a_1 n]...[a_k n] * n^e; explicit lists; and real
polynomial sequences mod 1.  Also the seeded random block sequences
Y_n = e(r*theta_m) for n = m^2 + r used in the law-of-large-numbers
experiments.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Sequence

import mpmath
import numpy as np
from mpmath import iv

from .exactreal import approx_constant, parse_fraction
from .lattice import MultiIndex
from .measures import AtomicTorusMeasure

# ---------------------------------------------------------------------------
# primes


def sieve_primes(limit: int) -> list[int]:
    """All primes <= limit by Eratosthenes' sieve."""
    if limit < 2:
        return []
    marks = bytearray([1]) * (limit + 1)
    marks[0] = marks[1] = 0
    for p in range(2, isqrt(limit) + 1):
        if marks[p]:
            marks[p * p :: p] = bytearray(len(range(p * p, limit + 1, p)))
    return [n for n in range(2, limit + 1) if marks[n]]


def first_primes(count: int) -> list[int]:
    if count <= 0:
        return []
    bound = 16
    while True:
        ps = sieve_primes(bound)
        if len(ps) >= count:
            return ps[:count]
        bound *= 2


def primes_in_class(q: int, limit: int) -> list[int]:
    """Ascending primes p <= limit with p = 1 mod q (complete below limit)."""
    if q < 1:
        raise ValueError("q must be >= 1")
    if limit < 2:
        raise ValueError("limit must be >= 2")
    return [p for p in sieve_primes(limit) if p % q == 1 % q]


# ---------------------------------------------------------------------------
# exact polynomial evaluation


def eval_int_poly(coeffs: Sequence[int], n: int) -> int:
    """Horner evaluation; coefficients ascending."""
    acc = 0
    for c in reversed(coeffs):
        acc = acc * n + c
    return acc


# ---------------------------------------------------------------------------
# guaranteed floors via interval refinement


class UndecidableFloorError(ArithmeticError):
    """Floor could not be separated from an integer at the precision cap."""


#: one additive term coef * n^power * (ln n)^logpower
@dataclass(frozen=True)
class FloorTerm:
    coef: Fraction | str  # Fraction, or "sqrtK" for a rigorous surd
    power: Fraction
    logpower: int = 0


def _iv_fraction(q: Fraction):
    return iv.mpf(q.numerator) / iv.mpf(q.denominator)


def _iv_coef(coef):
    if isinstance(coef, str):
        key = coef.strip().lower()
        if key.startswith("sqrt"):
            return iv.sqrt(int(key[4:]))
        raise ValueError(f"unknown coefficient constant {coef!r}")
    return _iv_fraction(coef)


def _iv_term(term: FloorTerm, n: int):
    x = iv.mpf(n)
    value = _iv_coef(term.coef)
    if term.power:
        p = _iv_fraction(term.power)
        value = value * iv.exp(p * iv.log(x))
    if term.logpower:
        value = value * iv.log(x) ** term.logpower
    return value


def _iroot(x: int, b: int) -> int | None:
    """Exact integer b-th root of x >= 0, or None if x is not a b-th power."""
    if x < 0:
        return None
    if x in (0, 1) or b == 1:
        return x
    r = max(1, int(round(x ** (1.0 / b))))
    while r**b > x:
        r -= 1
    while (r + 1) ** b <= x:
        r += 1
    return r if r**b == x else None


def _term_exact(term: FloorTerm, n: int) -> Fraction | None:
    """Exact rational value of a term when one exists (else None)."""
    if isinstance(term.coef, str):
        return None
    if term.logpower:
        return Fraction(0) if n == 1 else None  # log(1) = 0 kills the term
    p = term.power
    if p == 0:
        return term.coef
    if p < 0:
        return None
    if p.denominator == 1:
        return term.coef * Fraction(n) ** p.numerator
    root = _iroot(n**p.numerator, p.denominator)
    if root is None:
        return None
    return term.coef * root


def floor_of_terms(terms: Sequence[FloorTerm], n: int, max_prec: int = 2048) -> int:
    """Provably correct floor of sum(terms) at n.

    Rational-valued terms (integer powers, perfect-power roots) are
    summed exactly; the rest are enclosed by interval arithmetic with
    precision doubling.  Raises UndecidableFloorError when the enclosure
    still straddles an integer at max_prec bits.
    """
    if n < 1:
        raise ValueError("floor sequences are defined for n >= 1")
    exact_sum = Fraction(0)
    inexact = []
    for t in terms:
        v = _term_exact(t, n)
        if v is None:
            inexact.append(t)
        else:
            exact_sum += v
    if not inexact:
        return exact_sum.numerator // exact_sum.denominator
    prec = 64
    while True:
        old = iv.prec
        try:
            iv.prec = prec
            total = _iv_fraction(exact_sum)
            for t in inexact:
                total = total + _iv_term(t, n)
            flo = int(mpmath.floor(total.a))
            fhi = int(mpmath.floor(total.b))
        finally:
            iv.prec = old
        if flo == fhi:
            return flo
        if prec >= max_prec:
            raise UndecidableFloorError(
                f"floor at n={n} undecidable at {max_prec} bits "
                f"(enclosure straddles an integer)"
            )
        prec *= 2


# ---------------------------------------------------------------------------
# sequence specs


VALID_KINDS = (
    "polynomial-tuple",
    "shifted-prime",
    "floor-power",
    "morse",
    "genpoly-product",
    "explicit-list",
    "real-polynomial",
)


@dataclass(frozen=True)
class SequenceSpec:
    """Declarative description of a sequence generator.

    kind / parameters:
      polynomial-tuple : polys = list of ascending int coefficient lists
      shifted-prime    : polys as above, shift in {-1, +1}; terms f_i(p+shift)
      floor-power      : terms = list of FloorTerm (coef * n^power * log^l n)
      morse            : integers with an even binary digit sum
      genpoly-product  : alphas = exact decimals/named surds; extra_power = e;
                         term = [a_1 n]*...*[a_k n] * n^e
      explicit-list    : points = list of integer vectors
      real-polynomial  : coeffs (ascending, exact decimals or named
                         constants); x_n = sum c_j n^j mod 1 (real output)
    """

    kind: str
    polys: tuple[tuple[int, ...], ...] = ()
    shift: int = -1
    terms: tuple[FloorTerm, ...] = ()
    alphas: tuple = ()
    extra_power: int = 0
    points: tuple[MultiIndex, ...] = ()
    coeffs: tuple[Fraction, ...] = ()

    def __post_init__(self):
        if self.kind not in VALID_KINDS:
            raise ValueError(f"unknown sequence kind {self.kind!r}")
        if self.kind in ("polynomial-tuple", "shifted-prime") and not self.polys:
            raise ValueError("polynomial kinds need a nonempty polynomial list")
        if self.kind == "shifted-prime" and self.shift not in (-1, 1):
            raise ValueError("prime shift must be -1 or +1")
        if self.kind == "floor-power":
            if not self.terms:
                raise ValueError("floor-power needs at least one term")
            lead = max(self.terms, key=lambda t: (t.power, t.logpower))
            # the classical [b n^c] regime asks for c > 1; lower-order
            # companions (n^a, log powers) may sit below the lead term
            if lead.power <= 1 and len(self.terms) == 1:
                raise ValueError("floor-power leading exponent must exceed 1")
        if self.kind == "genpoly-product" and not self.alphas:
            raise ValueError("genpoly-product needs multipliers")
        if self.kind == "explicit-list" and not self.points:
            raise ValueError("explicit-list needs points")
        if self.kind == "real-polynomial" and not self.coeffs:
            raise ValueError("real-polynomial needs coefficients")

    @property
    def dim(self) -> int:
        if self.kind in ("polynomial-tuple", "shifted-prime"):
            return len(self.polys)
        if self.kind == "explicit-list":
            return len(self.points[0])
        return 1


def spec_from_json(obj) -> SequenceSpec:
    """Build a SequenceSpec from a JSON object, string or file path."""
    if isinstance(obj, str):
        text = obj.strip()
        if text.startswith("{"):
            obj = json.loads(text)
        else:
            with open(obj) as fh:
                obj = json.load(fh)
    kind = obj["kind"]
    if kind in ("polynomial-tuple", "shifted-prime"):
        polys = tuple(tuple(int(c) for c in p) for p in obj["polys"])
        return SequenceSpec(kind, polys=polys, shift=int(obj.get("shift", -1)))
    if kind == "floor-power":
        terms = []
        for t in obj["terms"]:
            coef = t.get("coef", 1)
            if isinstance(coef, str) and coef.strip().lower().startswith("sqrt"):
                coef = coef.strip().lower()
            else:
                coef = parse_fraction(coef)
            terms.append(
                FloorTerm(
                    coef=coef,
                    power=parse_fraction(t.get("power", 1)),
                    logpower=int(t.get("logpower", 0)),
                )
            )
        return SequenceSpec(kind, terms=tuple(terms))
    if kind == "morse":
        return SequenceSpec(kind)
    if kind == "genpoly-product":
        alphas = tuple(approx_constant(a) for a in obj["alphas"])
        return SequenceSpec(kind, alphas=alphas, extra_power=int(obj.get("extra_power", 0)))
    if kind == "explicit-list":
        return SequenceSpec(kind, points=tuple(tuple(int(c) for c in p) for p in obj["points"]))
    if kind == "real-polynomial":
        return SequenceSpec(kind, coeffs=tuple(approx_constant(c) for c in obj["coeffs"]))
    raise ValueError(f"unknown sequence kind {kind!r}")


def _morse_members(count: int) -> list[int]:
    out = []
    n = 0
    while len(out) < count:
        if n.bit_count() % 2 == 0:
            out.append(n)
        n += 1
    return out


def generate(spec: SequenceSpec, count: int) -> list[MultiIndex]:
    """First `count` terms of the integer-vector sequence (n = 1, 2, ...)."""
    if count < 0:
        raise ValueError("count must be >= 0")
    if spec.kind == "polynomial-tuple":
        return [
            tuple(eval_int_poly(p, n) for p in spec.polys) for n in range(1, count + 1)
        ]
    if spec.kind == "shifted-prime":
        return [
            tuple(eval_int_poly(f, p + spec.shift) for f in spec.polys)
            for p in first_primes(count)
        ]
    if spec.kind == "floor-power":
        return [(floor_of_terms(spec.terms, n),) for n in range(1, count + 1)]
    if spec.kind == "morse":
        return [(m,) for m in _morse_members(count)]
    if spec.kind == "genpoly-product":
        out = []
        for n in range(1, count + 1):
            v = n**spec.extra_power
            for a in spec.alphas:
                v *= math.floor(a * n)
            out.append((v,))
        return out
    if spec.kind == "explicit-list":
        return list(spec.points[:count])
    raise ValueError(f"{spec.kind!r} does not generate integer vectors")


def morse_member(n: int) -> bool:
    """Membership in the Morse sequence: even binary digit sum."""
    return n.bit_count() % 2 == 0


def real_mod1_sequence(spec: SequenceSpec, count: int) -> np.ndarray:
    """x_n = sum c_j n^j mod 1 for n = 1..count, computed in exact rationals.

    Only the final reduction mod 1 is rounded to float; named-constant
    coefficients are 60-digit rational approximants.
    """
    if spec.kind != "real-polynomial":
        raise ValueError("real sequences come from kind 'real-polynomial'")
    out = np.empty(count)
    dens = [c.denominator for c in spec.coeffs]
    nums = [c.numerator for c in spec.coeffs]
    for n in range(1, count + 1):
        num, den = 0, 1
        power = 1
        for cn, cd in zip(nums, dens):
            num = num * cd + cn * power * den
            den *= cd
            power *= n
        out[n - 1] = (num % den) / den
    return out


# ---------------------------------------------------------------------------
# random block sequences (n = m^2 + r, 0 <= r <= 2m)


@dataclass(frozen=True)
class BlockSequenceParams:
    """Parameters for the square-block random sequences.

    mode "Y": Y_n = e(r * theta_m); mode "Z": plain block repetition
    Z_n = e(theta_m) (e(theta_1 + theta_2) for a 2-d measure).
    """

    measure: AtomicTorusMeasure
    seed: int
    mode: str = "Y"

    def __post_init__(self):
        if self.mode not in ("Y", "Z"):
            raise ValueError("mode must be 'Y' or 'Z'")
        if self.measure.dim not in (1, 2):
            raise ValueError("block sequences take a measure on T^1 or T^2")


def block_decompose(n: int) -> tuple[int, int]:
    """Unique (m, r) with n = m^2 + r and 0 <= r <= 2m, for n >= 1."""
    if n < 1:
        raise ValueError("block index starts at n = 1")
    m = isqrt(n)
    return m, n - m * m


class AliasSampler:
    """Walker/Vose alias sampling over exact rational weights.

    The table is built with exact arithmetic; queues are processed in
    atom index order so cumulative-weight ties resolve deterministically.
    Draws consume two 64-bit words: one for the column, one for the
    exact threshold comparison u/2^64 < prob (integer compare).
    """

    def __init__(self, weights: Sequence[Fraction]):
        k = len(weights)
        total = sum(weights, Fraction(0))
        if total <= 0:
            raise ValueError("weights must be positive")
        scaled = [Fraction(w, 1) * k / total for w in weights]
        prob = [Fraction(0)] * k
        alias = [0] * k
        small = [i for i in range(k) if scaled[i] < 1]
        large = [i for i in range(k) if scaled[i] >= 1]
        small.reverse()
        large.reverse()
        while small and large:
            s = small.pop()
            g = large.pop()
            prob[s] = scaled[s]
            alias[s] = g
            scaled[g] = scaled[g] - (1 - scaled[s])
            if scaled[g] < 1:
                small.append(g)
            else:
                large.append(g)
        for i in large:
            prob[i] = Fraction(1)
        for i in small:
            prob[i] = Fraction(1)
        # precompute integer thresholds: u < ceil(prob * 2^64) accepts
        self._threshold = [
            min((p.numerator << 64) // p.denominator + (1 if (p.numerator << 64) % p.denominator else 0), 1 << 64)
            for p in prob
        ]
        self._alias = alias
        self._k = k

    def draw(self, rng: np.random.Generator) -> int:
        j = int(rng.integers(0, self._k))
        u = int(rng.integers(0, 1 << 64, dtype=np.uint64))
        return j if u < self._threshold[j] else self._alias[j]


def _substream(seed: int, *key: int) -> np.random.Generator:
    # documented splitting rule: PCG64 keyed by SeedSequence([seed, *block index])
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, *key])))


def _atom_sampler(measure: AtomicTorusMeasure) -> tuple[AliasSampler, list]:
    weights = []
    for w in measure.weights:
        weights.append(w if isinstance(w, Fraction) else Fraction(w).limit_denominator(10**12))
    return AliasSampler(weights), list(measure.atoms)


def block_sequence(params: BlockSequenceParams, n_max: int) -> np.ndarray:
    """The block sequence for n = 1..n_max (2-d: (n1, n2) in (0, n_max]^2).

    Deterministic given the seed: block m uses the PCG64 substream keyed
    by (seed, m).  Returns complex values of modulus <= 1 (exactly 1 up
    to floating rounding).
    """
    if n_max < 1:
        raise ValueError("need n_max >= 1")
    measure = params.measure
    if not measure.is_probability():
        raise ValueError("block sequences need a probability measure")
    sampler, atoms = _atom_sampler(measure)
    if measure.dim == 1:
        out = np.empty(n_max, dtype=complex)
        m_top = isqrt(n_max)
        for m in range(1, m_top + 1):
            rng = _substream(params.seed, m)
            theta = float(atoms[sampler.draw(rng)][0])
            start = m * m
            stop = min(n_max + 1, start + 2 * m + 1)
            r = np.arange(0, stop - start)
            if params.mode == "Y":
                out[start - 1 : stop - 1] = np.exp(2j * np.pi * theta * r)
            else:
                out[start - 1 : stop - 1] = np.exp(2j * np.pi * theta)
        return out
    # dim 2: the doubly indexed family on (0, n_max]^2
    out = np.empty((n_max, n_max), dtype=complex)
    m_top = isqrt(n_max)
    for m1 in range(1, m_top + 1):
        s1 = m1 * m1
        e1 = min(n_max + 1, s1 + 2 * m1 + 1)
        r1 = np.arange(0, e1 - s1)
        for m2 in range(1, m_top + 1):
            rng = _substream(params.seed, m1, m2)
            atom = atoms[sampler.draw(rng)]
            t1, t2 = float(atom[0]), float(atom[1])
            s2 = m2 * m2
            e2 = min(n_max + 1, s2 + 2 * m2 + 1)
            r2 = np.arange(0, e2 - s2)
            if params.mode == "Y":
                block = np.outer(
                    np.exp(2j * np.pi * t1 * r1), np.exp(2j * np.pi * t2 * r2)
                )
            else:
                block = np.full((len(r1), len(r2)), np.exp(2j * np.pi * (t1 + t2)))
            out[s1 - 1 : e1 - 1, s2 - 1 : e2 - 1] = block
    return out
