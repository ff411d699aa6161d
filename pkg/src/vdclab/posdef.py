"""Positive-definite coefficient families and witness polynomials.

A finitely supported family (a_h) on Z^d is positive-definite exactly
when its trigonometric polynomial T(x) = sum a_h e(h.x) is nonnegative,
so certification works on T: the Gram route checks the multilevel
Toeplitz quadratic forms of growing windows, the grid route evaluates T
on a uniform grid and pushes the minimum down by a Lipschitz bound
L = 2*pi*sum |a_h| |h|_2.  Fejer does not factor in several variables,
so the grid certificate is analytic rather than algebraic.

Witness polynomials (spectrum in +-D, P(0) = 1, P >= -eps) are built
from sequences, verified with the Lipschitz certificate, and searched
for by an exact-rational LP over grid constraints.
"""

from __future__ import annotations

import itertools
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from .lattice import FiniteSet, MultiIndex, as_index
from .simplex import solve_lp


class ExactComplex(NamedTuple):
    """Complex number with exact rational real and imaginary parts."""

    re: Fraction
    im: Fraction


Entry = int | Fraction | complex | ExactComplex


def _entry_exact(v: Entry) -> bool:
    return isinstance(v, (int, Fraction, ExactComplex))


def _entry_complex(v: Entry) -> complex:
    if isinstance(v, ExactComplex):
        return complex(float(v.re), float(v.im))
    return complex(v)


def _entry_conj(v: Entry) -> Entry:
    if isinstance(v, ExactComplex):
        return ExactComplex(v.re, -v.im)
    if isinstance(v, (int, Fraction)):
        return v
    return v.conjugate()


def _entry_add(a: Entry, b: Entry) -> Entry:
    if _entry_exact(a) and _entry_exact(b):
        ar, ai = _entry_parts(a)
        br, bi = _entry_parts(b)
        return _entry_normalize(ar + br, ai + bi)
    return _entry_complex(a) + _entry_complex(b)


def _entry_mul(a: Entry, b: Entry) -> Entry:
    if _entry_exact(a) and _entry_exact(b):
        ar, ai = _entry_parts(a)
        br, bi = _entry_parts(b)
        return _entry_normalize(ar * br - ai * bi, ar * bi + ai * br)
    return _entry_complex(a) * _entry_complex(b)


def _entry_parts(v: Entry) -> tuple[Fraction, Fraction]:
    if isinstance(v, ExactComplex):
        return v.re, v.im
    if isinstance(v, (int, Fraction)):
        return Fraction(v), Fraction(0)
    raise TypeError("not an exact entry")


def _entry_normalize(re: Fraction, im: Fraction) -> Entry:
    return re if im == 0 else ExactComplex(re, im)


@dataclass(frozen=True)
class CoefficientFamily:
    """Finitely supported coefficients a_h on Z^d.

    Entries may be exact (int / Fraction / ExactComplex) or complex
    floats; exact constructors keep sums like P(0) exact.
    """

    dim: int
    entries: dict
    hermitian: bool = field(default=False)

    def __post_init__(self):
        cleaned = {}
        for h, v in self.entries.items():
            h = as_index(h)
            if len(h) != self.dim:
                raise ValueError("entry index dimension mismatch")
            if _entry_complex(v) != 0:
                cleaned[h] = v
        object.__setattr__(self, "entries", cleaned)
        object.__setattr__(self, "hermitian", self._check_hermitian())

    def _check_hermitian(self) -> bool:
        for h, v in self.entries.items():
            neg = tuple(-c for c in h)
            other = self.entries.get(neg)
            if other is None:
                return False
            if _entry_exact(v) and _entry_exact(other):
                if _entry_parts(other) != _entry_parts(_entry_conj(v)):
                    return False
            elif _entry_complex(other) != _entry_complex(v).conjugate():
                return False
        return True

    def support_bound(self) -> MultiIndex:
        """Smallest H with support inside the open box (-H, H)."""
        if not self.entries:
            return tuple(1 for _ in range(self.dim))
        return tuple(
            max(abs(h[i]) for h in self.entries) + 1 for i in range(self.dim)
        )

    def total(self) -> Entry:
        """Sum of all entries = T(0); exact when all entries are exact."""
        acc: Entry = Fraction(0)
        for h in sorted(self.entries):
            acc = _entry_add(acc, self.entries[h])
        return acc

    def coefficient_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        hs = sorted(self.entries)
        if not hs:
            return np.zeros((0, self.dim), dtype=int), np.zeros(0, dtype=complex)
        freq = np.array(hs, dtype=float).reshape(len(hs), self.dim)
        coef = np.array([_entry_complex(self.entries[h]) for h in hs])
        return freq, coef

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        """T at an array of torus points, shape (..., d); complex output."""
        freq, coef = self.coefficient_arrays()
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        phases = pts @ freq.T
        return np.exp(2j * np.pi * phases) @ coef

    def lipschitz_bound(self) -> float:
        """L with |T(x) - T(y)| <= L * dist(x, y): 2*pi*sum |a_h| |h|_2."""
        total = 0.0
        for h, v in self.entries.items():
            total += abs(_entry_complex(v)) * math.sqrt(sum(c * c for c in h))
        return 2 * math.pi * total

    def scale(self, factor: Fraction) -> "CoefficientFamily":
        return CoefficientFamily(
            self.dim,
            {h: _entry_mul(v, factor) for h, v in self.entries.items()},
        )


def normal_form(family: CoefficientFamily) -> CoefficientFamily:
    """Normalize to the stored-witness form: sum of entries equal to 1.

    The positive-definite reformulation keeps a_0 <= eps and
    sum a_h = 1; constructors call this so stored witnesses agree.
    """
    total = family.total()
    if _entry_exact(total):
        re, im = _entry_parts(total)
        if im != 0 or re <= 0:
            raise ValueError("cannot normalize: total is not a positive real")
        return family.scale(Fraction(1) / re)
    t = _entry_complex(total)
    if abs(t.imag) > 1e-12 * abs(t) or t.real <= 0:
        raise ValueError("cannot normalize: total is not a positive real")
    return CoefficientFamily(
        family.dim, {h: _entry_complex(v) / t for h, v in family.entries.items()}
    )


# ---------------------------------------------------------------------------
# constructions


def fejer_family(h_bound: MultiIndex) -> CoefficientFamily:
    """Fejer weights a_h = prod (H_i - |h_i|) / H_i^2 on -H < h < H.

    Exact rationals; the entries sum to 1 and a_0 = prod 1/H_i.
    """
    h_bound = as_index(h_bound)
    if any(h < 1 for h in h_bound):
        raise ValueError("H must be >= 1 componentwise")
    denom = 1
    for h in h_bound:
        denom *= h * h
    entries = {}
    for h in itertools.product(*(range(-b + 1, b) for b in h_bound)):
        num = 1
        for c, b in zip(h, h_bound):
            num *= b - abs(c)
        entries[h] = Fraction(num, denom)
    return CoefficientFamily(len(h_bound), entries)


def product_family(a: CoefficientFamily, b: CoefficientFamily) -> CoefficientFamily:
    """Tensor product on Z^(k+l): entries a_d * b_e at concatenated indices.

    Positive-definiteness is preserved (the product polynomial is
    T_a(x) * T_b(y)); certify on demand.
    """
    entries = {}
    for d, va in a.entries.items():
        for e, vb in b.entries.items():
            entries[d + e] = _entry_mul(va, vb)
    return CoefficientFamily(a.dim + b.dim, entries)


def kmf_witness_from_sequence(seq_spec, q: int, count: int) -> CoefficientFamily:
    """Symmetrized averaging polynomial over the q!-divisible sequence terms.

    Generates the first `count` terms d_n, keeps those with q! dividing
    every component, and returns (1/2)(P + conj P) for
    P(x) = (1/K) sum e(d_n . x): real, P(0) = 1 exactly, spectrum inside
    the +- filtered terms.
    """
    from .sequences import generate

    if q < 1:
        raise ValueError("q must be >= 1")
    terms = generate(seq_spec, count)
    if not terms:
        raise ValueError("empty sequence")
    modulus = math.factorial(q)
    kept = [t for t in terms if all(c % modulus == 0 for c in t)]
    if not kept:
        raise ValueError(
            f"no term among the first {count} has all components divisible by {q}!"
            f" = {modulus}"
        )
    weight = Fraction(1, 2 * len(kept))
    entries: dict = {}
    for t in kept:
        neg = tuple(-c for c in t)
        entries[t] = entries.get(t, Fraction(0)) + weight
        entries[neg] = entries.get(neg, Fraction(0)) + weight
    return CoefficientFamily(len(kept[0]), entries)


# ---------------------------------------------------------------------------
# positive-definiteness certificates


@dataclass(frozen=True)
class PosDefCertificate:
    verdict: str  # "positive-definite" | "not-positive-definite" | "inconclusive"
    method: str
    tol: float
    min_eigenvalue: float | None = None
    window: int | None = None
    grid_min: float | None = None
    certified_lower: float | None = None
    grid_points: int | None = None
    witness_point: tuple | None = None
    witness_vector: tuple | None = None

    @property
    def is_positive_definite(self) -> bool:
        return self.verdict == "positive-definite"


def _toeplitz_window(family: CoefficientFamily, c: int) -> np.ndarray:
    idx = list(itertools.product(range(c), repeat=family.dim))
    m = len(idx)
    mat = np.zeros((m, m), dtype=complex)
    for i, a in enumerate(idx):
        for j, b in enumerate(idx):
            h = tuple(x - y for x, y in zip(a, b))
            v = family.entries.get(h)
            if v is not None:
                mat[i, j] = _entry_complex(v)
    return mat


def _gram_check(family: CoefficientFamily, cmax: int, tol: float) -> PosDefCertificate:
    worst = math.inf
    worst_c = None
    ladder = sorted({min(2**k, cmax) for k in range(1, 12)} | {cmax})
    for c in ladder:
        if c < 1 or c**family.dim > 4096:
            continue
        mat = _toeplitz_window(family, c)
        vals, vecs = np.linalg.eigh(mat)
        lam = float(vals[0])
        if lam < worst:
            worst, worst_c = lam, c
        if lam < -tol:
            return PosDefCertificate(
                "not-positive-definite",
                "gram",
                tol,
                min_eigenvalue=lam,
                window=c,
                witness_vector=tuple(complex(z) for z in vecs[:, 0]),
            )
    return PosDefCertificate(
        "positive-definite", "gram", tol, min_eigenvalue=worst, window=worst_c
    )


def _grid_axes(g: int, dim: int) -> np.ndarray:
    axes = [np.arange(g) / g] * dim
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


def grid_minimum(
    family: CoefficientFamily, g: int, jobs: int = 1, chunk: int = 1 << 16
) -> tuple[float, tuple]:
    """Minimum of Re T over the uniform g^d grid, with the argmin point."""
    pts = _grid_axes(g, family.dim)
    spans = [(s, min(s + chunk, len(pts))) for s in range(0, len(pts), chunk)]

    def eval_span(span):
        lo, hi = span
        vals = family.evaluate(pts[lo:hi]).real
        k = int(np.argmin(vals))
        return float(vals[k]), lo + k

    if jobs > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(eval_span, spans))
    else:
        results = [eval_span(s) for s in spans]
    best, arg = min(results)
    return best, tuple(pts[arg])


_GRID_CAPS = {1: 1 << 21, 2: 1 << 11, 3: 1 << 7}


def _grid_check(
    family: CoefficientFamily, grid: int, tol: float, jobs: int
) -> PosDefCertificate:
    lip = family.lipschitz_bound()
    g = max(4, grid)
    cap = _GRID_CAPS.get(family.dim, 16)
    while True:
        gmin, point = grid_minimum(family, g, jobs=jobs)
        margin = lip * math.sqrt(family.dim) / (2 * g)
        lower = gmin - margin
        if gmin < -tol:
            return PosDefCertificate(
                "not-positive-definite",
                "grid",
                tol,
                grid_min=gmin,
                certified_lower=lower,
                grid_points=g,
                witness_point=point,
            )
        if lower >= -tol:
            return PosDefCertificate(
                "positive-definite",
                "grid",
                tol,
                grid_min=gmin,
                certified_lower=lower,
                grid_points=g,
            )
        if g >= cap:
            return PosDefCertificate(
                "inconclusive",
                "grid",
                tol,
                grid_min=gmin,
                certified_lower=lower,
                grid_points=g,
            )
        g = min(cap, g * 2)


def is_positive_definite(
    family: CoefficientFamily,
    method: str = "gram",
    cmax: int | None = None,
    grid: int = 4096,
    tol: float = 1e-6,
    jobs: int = 1,
) -> PosDefCertificate:
    """Certify T = sum a_h e(h.x) >= -tol, or exhibit a counterexample.

    gram: smallest eigenvalue of the window quadratic forms up to cmax;
    a negative eigenvalue gives a vector witness.  grid: uniform grid
    values backed by the Lipschitz bound; refines until decisive or the
    per-dimension cap, else 'inconclusive'.
    """
    if not family.hermitian:
        raise ValueError("positive-definite certification needs a Hermitian family")
    if method == "gram":
        if cmax is None:
            cmax = 32 if family.dim == 1 else 8
        return _gram_check(family, cmax, tol)
    if method == "grid":
        return _grid_check(family, grid, tol, jobs)
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# witness verification


class SpectrumViolation(ValueError):
    def __init__(self, offenders):
        self.offenders = offenders
        super().__init__(f"spectrum outside +-D (offending frequencies: {offenders})")


def verify_kmf_witness(
    family: CoefficientFamily,
    d_set: FiniteSet,
    eps: float | Fraction,
    grid: int = 8192,
    jobs: int = 1,
) -> dict:
    """Check the witness clauses: spectrum in +-D (0 allowed), T(0) = 1
    exactly, and a Lipschitz-certified min T >= -eps.

    The certified bound refines the grid up to the dimension cap; an
    exactly boundary-tight minimum can therefore never certify (the
    rigorous lower bound sits strictly below it by the grid margin).
    """
    if not family.hermitian:
        raise ValueError("witness polynomials must be real (Hermitian family)")
    allowed = set(d_set.points) | {tuple(-c for c in p) for p in d_set.points}
    allowed.add(tuple(0 for _ in range(family.dim)))
    offenders = sorted(h for h in family.entries if h not in allowed)
    if offenders:
        raise SpectrumViolation(offenders)

    total = family.total()
    if _entry_exact(total):
        re, im = _entry_parts(total)
        normalized = im == 0 and re == 1
    else:
        t = _entry_complex(total)
        normalized = abs(t - 1) <= 1e-12

    eps_f = float(eps)
    lip = family.lipschitz_bound()
    g = max(4, grid)
    cap = _GRID_CAPS.get(family.dim, 16)
    gmin, point = grid_minimum(family, g, jobs=jobs)
    certified = gmin - lip * math.sqrt(family.dim) / (2 * g)
    while certified < -eps_f - 1e-12 and gmin >= -eps_f and g < cap:
        g = min(cap, g * 2)
        gmin, point = grid_minimum(family, g, jobs=jobs)
        certified = gmin - lip * math.sqrt(family.dim) / (2 * g)

    is_witness = normalized and certified >= -eps_f - 1e-12
    reason = None
    if not normalized:
        reason = "normalization failure: T(0) != 1"
    elif not is_witness:
        reason = f"certified minimum {certified} below -eps = {-eps_f}"
    return {
        "is_witness": bool(is_witness),
        "certified_min": certified,
        "grid_min": gmin,
        "grid_points": g,
        "min_location": point,
        "normalized": bool(normalized),
        "eps": eps_f,
        "reason": reason,
    }


# ---------------------------------------------------------------------------
# discretized witness search (exact rational LP)

MAX_SUPPORT = 12
MAX_GRID = 10**4
_RATIONALIZE_BITS = 24


def _rationalize(x: float) -> Fraction:
    scale = 1 << _RATIONALIZE_BITS
    return Fraction(round(x * scale), scale)


def _fold_frequencies(d_set: FiniteSet) -> list[MultiIndex]:
    reps = []
    seen = set()
    for p in d_set:
        if all(c == 0 for c in p):
            raise ValueError("witness sets must avoid 0")
        rep = max(p, tuple(-c for c in p))
        if rep not in seen:
            seen.add(rep)
            reps.append(rep)
    return sorted(reps)


def _search_grid(g: int, dim: int) -> np.ndarray:
    per_axis = g if dim == 1 else max(2, int(round(g ** (1 / dim))))
    return _grid_axes(per_axis, dim)


def witness_search(
    d_set: FiniteSet,
    eps: float | Fraction,
    grid: int = 2048,
    jobs: int = 1,
    max_rounds: int = 40,
) -> dict:
    """Search for a witness with spectrum in +-D via a discretized LP.

    Variables are the cosine/sine coefficients on the folded
    frequencies; constraints are P(0) = 1 and P(x_g) >= -eps on grid
    points (cos/sin data rounded to 2^-40, then solved exactly, so the
    feasibility answer is exact for the rationalized discretization).
    Feasible solutions minimize the l1 coefficient norm, then get
    re-certified at eps' = eps + Lipschitz margin.  Infeasibility is
    only ever reported for this grid, never as a claim about D.
    """
    freqs = _fold_frequencies(d_set)
    if len(freqs) > MAX_SUPPORT:
        raise ValueError(f"support {len(freqs)} exceeds the limit {MAX_SUPPORT}")
    if grid > MAX_GRID:
        raise ValueError(f"grid {grid} exceeds the limit {MAX_GRID}")
    dim = d_set.dim
    eps_q = eps if isinstance(eps, Fraction) else Fraction(repr(float(eps)))
    pts = _search_grid(grid, dim)
    n_pts = len(pts)

    freq_arr = np.array(freqs, dtype=float)
    angles = 2 * np.pi * (pts @ freq_arr.T)  # (n_pts, n_freq)
    cos_data = np.cos(angles)
    sin_data = np.sin(angles)

    nf = len(freqs)
    nvar = 4 * nf  # a+, a-, b+, b- per frequency

    def coeff_row(g_idx: int) -> list[Fraction]:
        row = []
        for j in range(nf):
            c = _rationalize(float(cos_data[g_idx, j]))
            s = _rationalize(float(sin_data[g_idx, j]))
            row.extend([c, -c, s, -s])
        return row

    ones_row = []
    for _ in range(nf):
        ones_row.extend([Fraction(1), Fraction(-1), Fraction(0), Fraction(0)])

    active: list[int] = sorted(set(range(0, n_pts, max(1, n_pts // 32))))
    rounds = 0
    while True:
        rounds += 1
        m = len(active)
        width = nvar + m
        a_eq: list[list[Fraction]] = []
        b_eq: list[Fraction] = []
        a_eq.append(ones_row + [Fraction(0)] * m)
        b_eq.append(Fraction(1))
        for slot, g_idx in enumerate(active):
            row = coeff_row(g_idx) + [Fraction(0)] * m
            row[nvar + slot] = Fraction(-1)  # surplus: P(x_g) - s = -eps
            a_eq.append(row)
            b_eq.append(-eps_q)
        objective = [Fraction(1)] * nvar + [Fraction(0)] * m
        result = solve_lp(objective, a_eq, b_eq)
        if result.status != "optimal":
            return {
                "status": "infeasible-at-this-grid",
                "family": None,
                "eps": float(eps_q),
                "grid_points": n_pts,
                "active_constraints": len(active),
                "rounds": rounds,
                "note": "the discretized feasibility problem has no solution on this grid; no conclusion about the set itself",
            }
        x = result.x
        alphas = [x[4 * j] - x[4 * j + 1] for j in range(nf)]
        betas = [x[4 * j + 2] - x[4 * j + 3] for j in range(nf)]
        entries: dict = {}
        for f, al, be in zip(freqs, alphas, betas):
            if al == 0 and be == 0:
                continue
            neg = tuple(-c for c in f)
            entries[f] = _entry_normalize(al / 2, -be / 2)
            entries[neg] = _entry_normalize(al / 2, be / 2)
        family = CoefficientFamily(dim, entries)
        values = family.evaluate(pts).real
        violated = np.nonzero(values < -float(eps_q) - 1e-9)[0]
        if len(violated) == 0 or rounds >= max_rounds:
            break
        worst = violated[np.argsort(values[violated])][:8]
        active = sorted(set(active) | {int(w) for w in worst})

    lip = family.lipschitz_bound()
    per_axis_delta = 1.0 / (n_pts if dim == 1 else max(2, int(round(grid ** (1 / dim)))))
    margin = lip * math.sqrt(dim) * per_axis_delta / 2 + 1e-9
    eps_prime = float(eps_q) + margin
    report = verify_kmf_witness(family, d_set, eps_prime, grid=4 * grid, jobs=jobs)
    return {
        "status": "feasible",
        "family": family,
        "eps": float(eps_q),
        "eps_prime": eps_prime,
        "margin": margin,
        "l1_norm": float(sum(abs(a) + abs(b) for a, b in zip(alphas, betas))),
        "lipschitz_bound": lip,
        "grid_points": n_pts,
        "active_constraints": len(active),
        "rounds": rounds,
        "certified_min": report["certified_min"],
        "is_witness_at_eps_prime": report["is_witness"],
    }


# ---------------------------------------------------------------------------
# JSON round trip: {dim, entries: [{h, re, im}]}; re/im number or [num, den]


def family_to_json(family: CoefficientFamily) -> dict:
    entries = []
    for h in sorted(family.entries):
        v = family.entries[h]
        if _entry_exact(v):
            re, im = _entry_parts(v)
            entries.append(
                {
                    "h": list(h),
                    "re": [re.numerator, re.denominator],
                    "im": [im.numerator, im.denominator],
                }
            )
        else:
            c = _entry_complex(v)
            entries.append({"h": list(h), "re": c.real, "im": c.imag})
    return {"dim": family.dim, "entries": entries}


def _part_from_json(v) -> Fraction | float:
    if isinstance(v, list):
        return Fraction(int(v[0]), int(v[1]))
    if isinstance(v, int):
        return Fraction(v)
    return float(v)


def family_from_json(obj) -> CoefficientFamily:
    if isinstance(obj, str):
        text = obj.strip()
        if text.startswith("{"):
            obj = json.loads(text)
        else:
            with open(obj) as fh:
                obj = json.load(fh)
    entries = {}
    for item in obj["entries"]:
        h = tuple(int(c) for c in item["h"])
        re = _part_from_json(item.get("re", 0))
        im = _part_from_json(item.get("im", 0))
        if isinstance(re, Fraction) and isinstance(im, Fraction):
            entries[h] = _entry_normalize(re, im)
        else:
            entries[h] = complex(float(re), float(im))
    return CoefficientFamily(int(obj["dim"]), entries)
