"""Positive measures on the torus T^d as computational objects.

Atomic measures carry exact rational atom coordinates where possible,
so Fourier coefficients at special phases (halves, quarters) come out
exactly and Hermitian symmetry holds exactly.  Fourier-defined measures
are coefficient oracles (used for the Bernoulli spectral measure).  The
spectral tests only ever emit negative certificates: an atomic measure
whose coefficients vanish (tend to zero, average to zero, ...) along a
set obstructs the corresponding vdC-type property; nothing here can
certify that a set has the property.
"""

from __future__ import annotations

import cmath
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .lattice import FiniteSet, MultiIndex

Coordinate = Fraction | float

#: merge tolerance for floating-point atoms (rational atoms merge exactly)
FLOAT_ATOM_TOL = 1e-12


def _reduce_mod1(c: Coordinate) -> Coordinate:
    if isinstance(c, Fraction):
        return c % 1
    return float(c) % 1.0


def e_phase(t: Coordinate) -> complex:
    """e(t) = exp(2*pi*i*t) with exact values at denominators 1, 2, 4.

    Phases in (1/2, 1) are evaluated as conjugates of their mirror so
    that Hermitian symmetry is exact for rational atoms.
    """
    t = _reduce_mod1(t)
    if isinstance(t, Fraction):
        if t == 0:
            return complex(1, 0)
        if t == Fraction(1, 2):
            return complex(-1, 0)
        if t == Fraction(1, 4):
            return complex(0, 1)
        if t == Fraction(3, 4):
            return complex(0, -1)
        if t > Fraction(1, 2):
            return e_phase(1 - t).conjugate()
        return cmath.exp(2j * cmath.pi * float(t))
    if t > 0.5:
        return cmath.exp(2j * cmath.pi * (1.0 - t)).conjugate()
    return cmath.exp(2j * cmath.pi * t)


def _dot_phase(n: MultiIndex, atom: tuple[Coordinate, ...]) -> Coordinate:
    exact = all(isinstance(c, Fraction) for c in atom)
    if exact:
        total = Fraction(0)
        for k, c in zip(n, atom, strict=True):
            total += k * c
        return total % 1
    total_f = 0.0
    for k, c in zip(n, atom, strict=True):
        total_f += k * (float(c) % 1.0)
    return total_f % 1.0


@dataclass(frozen=True)
class AtomicTorusMeasure:
    """Finite positive atomic measure on T^d: atoms + positive weights."""

    atoms: tuple[tuple[Coordinate, ...], ...]
    weights: tuple[Fraction | float, ...]
    dim: int = 0

    def __post_init__(self):
        if len(self.atoms) != len(self.weights) or not self.atoms:
            raise ValueError("need matching nonempty atoms and weights")
        dims = {len(a) for a in self.atoms}
        if len(dims) != 1:
            raise ValueError("atoms of mixed dimension")
        if any((w <= 0) for w in self.weights):
            raise ValueError("weights must be positive")
        merged: dict = {}
        order: list = []
        for atom, w in zip(self.atoms, self.weights):
            key = tuple(_reduce_mod1(c) for c in atom)
            key = _merge_key(key, merged)
            if key in merged:
                merged[key] = merged[key] + w
            else:
                merged[key] = w
                order.append(key)
        order.sort(key=lambda a: tuple(float(c) for c in a))
        object.__setattr__(self, "atoms", tuple(order))
        object.__setattr__(self, "weights", tuple(merged[a] for a in order))
        object.__setattr__(self, "dim", dims.pop())

    def mass(self):
        return sum(self.weights)

    def is_probability(self, tol: float = 1e-12) -> bool:
        m = self.mass()
        if isinstance(m, Fraction):
            return m == 1
        return abs(m - 1) <= tol

    def mass_at(self, point: Sequence[Coordinate]):
        target = tuple(_reduce_mod1(Fraction(c) if isinstance(c, int) else c) for c in point)
        for atom, w in zip(self.atoms, self.weights):
            if _atoms_equal(atom, target):
                return w
        return Fraction(0)

    def mass_at_zero(self):
        return self.mass_at(tuple(Fraction(0) for _ in range(self.dim)))


def _merge_key(key, existing):
    # rational atoms match exactly; float atoms snap to a close existing atom
    if all(isinstance(c, Fraction) for c in key):
        return key
    for other in existing:
        if _atoms_equal(key, other):
            return other
    return key


def _atoms_equal(a, b) -> bool:
    if len(a) != len(b):
        return False
    for x, y in zip(a, b):
        if isinstance(x, Fraction) and isinstance(y, Fraction):
            if x != y:
                return False
        else:
            d = abs(float(x) - float(y))
            if min(d, 1.0 - d) > FLOAT_ATOM_TOL:
                return False
    return True


def dirac(point: Sequence[Coordinate]) -> AtomicTorusMeasure:
    atom = tuple(Fraction(c) if isinstance(c, int) else c for c in point)
    return AtomicTorusMeasure((atom,), (Fraction(1),))


def fourier_coefficient(measure: AtomicTorusMeasure, n: MultiIndex) -> complex:
    """sigma_hat(n) = sum_j w_j e(n . x_j)."""
    n = tuple(int(k) for k in n)
    if len(n) != measure.dim:
        raise ValueError("frequency dimension mismatch")
    total = complex(0, 0)
    for atom, w in zip(measure.atoms, measure.weights):
        total += float(w) * e_phase(_dot_phase(n, atom))
    return total


def convolve(a: AtomicTorusMeasure, b: AtomicTorusMeasure) -> AtomicTorusMeasure:
    """Convolution: atoms x + y mod 1, weights multiplied, equal atoms merged."""
    if a.dim != b.dim:
        raise ValueError("dimension mismatch")
    atoms = []
    weights = []
    for xa, wa in zip(a.atoms, a.weights):
        for xb, wb in zip(b.atoms, b.weights):
            atoms.append(tuple(_add_coord(p, q) for p, q in zip(xa, xb)))
            weights.append(wa * wb)
    return AtomicTorusMeasure(tuple(atoms), tuple(weights))


def _add_coord(p: Coordinate, q: Coordinate) -> Coordinate:
    if isinstance(p, Fraction) and isinstance(q, Fraction):
        return (p + q) % 1
    return (float(p) + float(q)) % 1.0


def affinity(a: AtomicTorusMeasure, b: AtomicTorusMeasure) -> float:
    """Hellinger affinity of two atomic measures: sum over common atoms of sqrt(w*v)."""
    if a.dim != b.dim:
        raise ValueError("dimension mismatch")
    total = 0.0
    for xa, wa in zip(a.atoms, a.weights):
        for xb, wb in zip(b.atoms, b.weights):
            if _atoms_equal(xa, xb):
                total += (float(wa) * float(wb)) ** 0.5
                break
    return total


def pushforward(measure: AtomicTorusMeasure, matrix: Sequence[Sequence[int]]) -> AtomicTorusMeasure:
    """Image of the measure under the transpose of an integer matrix.

    For an e x d matrix L (mapping frequencies Z^d -> Z^e) this sends a
    measure on T^e to one on T^d, and the transforms satisfy
    image_hat(k) = sigma_hat(L k).
    """
    rows = [tuple(int(x) for x in r) for r in matrix]
    if any(len(r) != len(rows[0]) for r in rows):
        raise ValueError("ragged matrix")
    if len(rows) != measure.dim:
        raise ValueError("matrix height must match the measure dimension")
    atoms = []
    for atom in measure.atoms:
        # transpose action: y_j = sum_i L[i][j] x_i
        y = []
        for j in range(len(rows[0])):
            exact = all(isinstance(atom[i], Fraction) for i in range(len(rows)))
            if exact:
                s = Fraction(0)
                for i in range(len(rows)):
                    s += rows[i][j] * atom[i]
                y.append(s % 1)
            else:
                s = 0.0
                for i in range(len(rows)):
                    s += rows[i][j] * float(atom[i])
                y.append(s % 1.0)
        atoms.append(tuple(y))
    return AtomicTorusMeasure(tuple(atoms), measure.weights)


# ---------------------------------------------------------------------------
# Fourier-defined measures (coefficient oracles)


@dataclass(frozen=True)
class FourierMeasure:
    """Measure known through its Fourier coefficients sigma_hat(n).

    mass_at_zero is the point mass at 0 when known (None otherwise);
    oracle(n) must satisfy sigma_hat(-n) = conj(sigma_hat(n)) and
    sigma_hat(0) = total mass.
    """

    dim: int
    oracle: Callable[[MultiIndex], complex]
    mass_at_zero: float | Fraction | None = None

    def coefficient(self, n: MultiIndex) -> complex:
        n = tuple(int(k) for k in n)
        if len(n) != self.dim:
            raise ValueError("frequency dimension mismatch")
        return complex(self.oracle(n))

    def product(self, other: "FourierMeasure") -> "FourierMeasure":
        """Coefficientwise product = transform of the convolution."""
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        return FourierMeasure(
            self.dim, lambda n: self.coefficient(n) * other.coefficient(n), None
        )


def measure_coefficient(measure, n: MultiIndex) -> complex:
    if isinstance(measure, AtomicTorusMeasure):
        return fourier_coefficient(measure, n)
    return measure.coefficient(n)


def bernoulli_spectral_measure(k: int, mass0: Fraction | float) -> FourierMeasure:
    """Spectral measure of the 1 0^k cylinder in a Bernoulli shift.

    Coefficients: nu(B) at 0; 0 for 1 <= |n| <= k; nu(B)^2 for |n| > k.
    mass0 is the measure's point mass at zero, which equals nu(B)^2; the
    cylinder mass used at n = 0 is nu(B) = sqrt(mass0).
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    m0 = mass0 if isinstance(mass0, Fraction) else float(mass0)
    if not (0 < m0 <= 1):
        raise ValueError("mass0 must lie in (0, 1]")
    if isinstance(m0, Fraction):
        num, den = m0.numerator, m0.denominator
        rn, rd = _exact_sqrt(num), _exact_sqrt(den)
        nu_b = Fraction(rn, rd) if rn is not None and rd is not None else float(m0) ** 0.5
    else:
        nu_b = m0**0.5

    def oracle(n: MultiIndex) -> complex:
        (j,) = n
        j = abs(j)
        if j == 0:
            return complex(float(nu_b), 0)
        if j <= k:
            return complex(0, 0)
        return complex(float(m0), 0)

    return FourierMeasure(1, oracle, mass_at_zero=m0)


def _exact_sqrt(n: int) -> int | None:
    from math import isqrt

    r = isqrt(n)
    return r if r * r == n else None


# ---------------------------------------------------------------------------
# spectral tests


MODES = ("vanish", "tail", "cesaro", "nice", "summable")

_CLAIMS = {
    "vanish": "not a vdC set (atomic obstruction with vanishing coefficients)",
    "tail": "not an FC+ set, hence not enhanced vdC (coefficients tend to 0 along the window tail)",
    "cesaro": "not a density FC+ set (Cesaro average of coefficients vanishes)",
    "nice": "not a nice FC+ set (tail coefficients stay below the mass at zero)",
    "summable": "not a vdC set if the coefficient series stays summable (bounded-partial-sum evidence)",
}


def spectral_test(
    measure,
    d_seq: Sequence[MultiIndex],
    m_count: int,
    mode: str,
    tol: float = 1e-12,
) -> dict:
    """Negative-certificate spectral statistics along d_1..d_M.

    Never claims that a set *is* vdC: the verdict is either a
    certificate that the measure obstructs the property, or
    'no conclusion from this measure'.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if m_count < 1:
        raise ValueError("need at least one frequency")
    d_list = [tuple(int(c) for c in d) for d in d_seq[:m_count]]
    if not d_list:
        raise ValueError("empty frequency sequence")
    coeffs = [measure_coefficient(measure, d) for d in d_list]
    moduli = [abs(c) for c in coeffs]

    if isinstance(measure, AtomicTorusMeasure):
        mass0 = measure.mass_at_zero()
        atom_count = len(measure.atoms)
        atoms = [[_coord_float(c) for c in a] for a in measure.atoms]
    else:
        mass0 = measure.mass_at_zero
        if mass0 is None and mode != "cesaro":
            raise ValueError("Fourier-defined measure needs a declared mass at zero")
        atom_count = None
        atoms = None

    tail_start = len(d_list) // 2
    has_atom = (mass0 is not None and float(mass0) > 0) or (
        atom_count is not None and atom_count > 0
    )

    if mode == "vanish":
        stat = max(moduli)
        certificate = stat <= tol and has_atom
    elif mode == "tail":
        stat = max(moduli[tail_start:])
        certificate = stat <= tol and has_atom
    elif mode == "cesaro":
        mean = sum(coeffs) / len(coeffs)
        stat = abs(mean)
        certificate = stat <= tol and has_atom
    elif mode == "nice":
        stat = max(moduli[tail_start:])
        certificate = mass0 is not None and stat < float(mass0) - tol
    else:  # summable
        partial = 0.0
        partials = []
        for m in moduli:
            partial += m
            partials.append(partial)
        stat = partial
        tail_increment = partial - partials[(3 * len(partials)) // 4 - 1] if len(partials) >= 4 else partial
        certificate = tail_increment <= tol and has_atom

    report = {
        "mode": mode,
        "window": len(d_list),
        "tolerance": tol,
        "statistic": stat,
        "mass_at_zero": None if mass0 is None else float(mass0),
        "coefficients": [
            {"d": list(d), "re": c.real, "im": c.imag, "modulus": abs(c)}
            for d, c in zip(d_list, coeffs)
        ],
        "certificate": bool(certificate),
        "claim": _CLAIMS[mode] if certificate else "no conclusion from this measure",
    }
    if atoms is not None:
        report["atoms"] = atoms
        report["weights"] = [float(w) for w in measure.weights]
    if mode == "summable":
        report["partial_sums"] = partials
    return report


def _coord_float(c: Coordinate) -> float:
    return float(c)


# ---------------------------------------------------------------------------
# JSON round trip: {dim, atoms, weights}; coordinates [num, den] or float


def measure_to_json(measure: AtomicTorusMeasure) -> dict:
    atoms = []
    for atom in measure.atoms:
        coords = [
            [c.numerator, c.denominator] if isinstance(c, Fraction) else float(c)
            for c in atom
        ]
        atoms.append(coords[0] if measure.dim == 1 else coords)
    weights = [
        [w.numerator, w.denominator] if isinstance(w, Fraction) else float(w)
        for w in measure.weights
    ]
    return {"dim": measure.dim, "atoms": atoms, "weights": weights}


def _coord_from_json(c) -> Coordinate:
    if isinstance(c, list):
        num, den = c
        return Fraction(int(num), int(den))
    if isinstance(c, int):
        return Fraction(c)
    return float(c)


def measure_from_json(obj) -> AtomicTorusMeasure:
    if isinstance(obj, str):
        text = obj.strip()
        if text.startswith("{"):
            obj = json.loads(text)
        else:
            with open(obj) as fh:
                obj = json.load(fh)
    dim = int(obj["dim"])
    atoms = []
    for entry in obj["atoms"]:
        if dim == 1:
            coords = [entry]
        else:
            coords = entry
        atoms.append(tuple(_coord_from_json(c) for c in coords))
    weights = tuple(_coord_from_json(w) for w in obj["weights"])
    return AtomicTorusMeasure(tuple(atoms), weights)


def spectrum_sequence_from_set(d_set: FiniteSet) -> list[MultiIndex]:
    """Order a finite set by |d| (max norm), then lexicographically."""
    return sorted(d_set.points, key=lambda p: (max(abs(c) for c in p), p))
