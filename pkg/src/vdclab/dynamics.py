"""Closed-form measure-preserving systems and empirical recurrence testers.

Supported systems: circle rotations (with exact quadratic-irrational
angles for sqrt2-based and golden angles, exact rationals otherwise),
cyclic shifts on Z/m, the Bernoulli 1 0^k cylinder through its closed
correlation form, and products.  Correlations mu(A cap T^{-n} A) are
exact: rotation overlaps are computed from interval endpoints in the
quadratic field, so positivity decisions in the recurrence testers are
exact sign computations, not float comparisons.

Verdicts describe the tested window only; report fields are named
window_* to keep that visible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exactreal import QuadSurd, parse_fraction, surd_or_fraction

Angle = Fraction | QuadSurd | float


@dataclass(frozen=True)
class RotationSystem:
    """x -> x + alpha mod 1 on the circle with Lebesgue measure."""

    alpha: Angle

    kind = "rotation"

    def exact(self) -> bool:
        return isinstance(self.alpha, (Fraction, QuadSurd))


@dataclass(frozen=True)
class CyclicSystem:
    """x -> x + 1 mod m with normalized counting measure."""

    m: int

    kind = "cyclic"

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("cyclic order must be >= 1")


@dataclass(frozen=True)
class BernoulliCylinderSystem:
    """Shift correlations of the cylinder B = [1 0^k]: closed form only.

    nu(B cap S^{-n} B) is nu(B) at n = 0, 0 for 1 <= |n| <= k and
    nu(B)^2 for |n| > k.
    """

    k: int
    cylinder_mass: Fraction | float

    kind = "bernoulli"

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("k must be >= 0")
        m = self.cylinder_mass
        if not (0 < float(m) <= 1):
            raise ValueError("cylinder mass must be in (0, 1]")


@dataclass(frozen=True)
class ProductSystem:
    factors: tuple

    kind = "product"


@dataclass(frozen=True)
class IntervalSet:
    """[a, b) on the circle, 0 <= a < b <= 1, rational endpoints."""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        a, b = parse_fraction(self.a), parse_fraction(self.b)
        if not (0 <= a < b <= 1):
            raise ValueError("need 0 <= a < b <= 1")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def length(self) -> Fraction:
        return self.b - self.a


@dataclass(frozen=True)
class CyclicSet:
    members: tuple[int, ...]

    def __post_init__(self):
        ms = tuple(sorted(set(int(x) for x in self.members)))
        if not ms:
            raise ValueError("cyclic set must be nonempty")
        object.__setattr__(self, "members", ms)


@dataclass(frozen=True)
class CylinderSet:
    """The distinguished cylinder of a Bernoulli system."""


@dataclass(frozen=True)
class ProductSet:
    factors: tuple


def parse_system(text: str):
    """Parse CLI system descriptions like rotation:sqrt2m1, cyclic:6,
    bernoulli:k=3,mass=1/4."""
    kind, _, rest = text.partition(":")
    kind = kind.strip().lower()
    if kind == "rotation":
        return RotationSystem(surd_or_fraction(rest))
    if kind == "cyclic":
        return CyclicSystem(int(rest))
    if kind == "bernoulli":
        params = dict(item.split("=", 1) for item in rest.split(","))
        return BernoulliCylinderSystem(int(params["k"]), parse_fraction(params["mass"]))
    raise ValueError(f"unknown system kind {kind!r}")


def parse_set(system, text: str):
    if isinstance(system, RotationSystem):
        a, _, b = text.partition(":")
        return IntervalSet(parse_fraction(a), parse_fraction(b))
    if isinstance(system, CyclicSystem):
        return CyclicSet(tuple(int(t) for t in text.split(",")))
    if isinstance(system, BernoulliCylinderSystem):
        return CylinderSet()
    raise ValueError("unsupported system for set parsing")


def set_measure(system, a_set):
    """mu(A), exact."""
    if isinstance(system, RotationSystem):
        return a_set.length
    if isinstance(system, CyclicSystem):
        return Fraction(len(a_set.members), system.m)
    if isinstance(system, BernoulliCylinderSystem):
        return system.cylinder_mass
    if isinstance(system, ProductSystem):
        out = Fraction(1)
        for sys_f, set_f in zip(system.factors, a_set.factors):
            out = out * set_measure(sys_f, set_f)
        return out
    raise ValueError("unknown system")


def _frac_mod1(x: Angle):
    if isinstance(x, Fraction):
        return x % 1
    if isinstance(x, QuadSurd):
        return x.frac()
    return float(x) % 1.0


def _circular_overlap(length, shift):
    """|[0, L) cap ([0, L) + s)| on the circle; exact for exact inputs."""
    zero = Fraction(0)
    one = Fraction(1)
    t1 = length - shift
    first = t1 if t1 > zero else zero
    t2 = length - (one - shift)
    second = t2 if t2 > zero else zero
    return first + second


def correlation_exact(system, a_set, n: int):
    """mu(A cap T^{-n} A), exact per system kind."""
    if isinstance(system, RotationSystem):
        shift = _frac_mod1(system.alpha * n if isinstance(system.alpha, QuadSurd) else n * system.alpha)
        if isinstance(shift, float):
            lam = float(a_set.length)
            return max(0.0, lam - shift) + max(0.0, lam - (1.0 - shift))
        if shift == 0:
            return a_set.length
        return _circular_overlap(a_set.length, shift)
    if isinstance(system, CyclicSystem):
        members = set(a_set.members)
        hits = sum(1 for x in a_set.members if (x + n) % system.m in members)
        return Fraction(hits, system.m)
    if isinstance(system, BernoulliCylinderSystem):
        nu = system.cylinder_mass
        if n == 0:
            return nu
        if abs(n) <= system.k:
            return Fraction(0) if isinstance(nu, Fraction) else 0.0
        return nu * nu
    if isinstance(system, ProductSystem):
        out = None
        for sys_f, set_f in zip(system.factors, a_set.factors):
            v = correlation_exact(sys_f, set_f, n)
            if out is None:
                out = v
            else:
                try:
                    out = out * v
                except (TypeError, ValueError):
                    out = float(out) * float(v)
        return out
    raise ValueError("unknown system")


MODES = ("plain", "strong", "nice", "averaging")


def recurrence_test(
    system,
    a_set,
    d_seq: Sequence[int],
    m_count: int,
    mode: str = "plain",
    eps: float = 1e-3,
) -> dict:
    """Evaluate mu(A cap T^{-d} A) along d_1..d_M and summarize per mode.

    plain: first d with exactly positive correlation; strong: max over
    the last half of the window; nice: the d with value >= mu(A)^2 - eps
    and their count; averaging: running Cesaro means.  All values are
    exact; verdicts are statements about this window only.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if m_count < 1:
        raise ValueError("need at least one d")
    ds = [int(d) for d in d_seq[:m_count]]
    if len(set(ds)) != len(ds):
        raise ValueError("the d_m must be pairwise distinct")
    mags = [abs(d) for d in ds]
    if any(x > y for x, y in zip(mags, mags[1:])):
        raise ValueError("|d_m| must be nondecreasing")
    values = [correlation_exact(system, a_set, d) for d in ds]
    floats = [float(v) for v in values]
    mu = set_measure(system, a_set)
    report = {
        "mode": mode,
        "mu_A": float(mu),
        "window_size": len(ds),
        "d": ds,
        "correlations": floats,
    }
    if mode == "plain":
        first = next((d for d, v in zip(ds, values) if _exact_positive(v)), None)
        report["window_first_positive_d"] = first
        report["window_has_recurrence"] = first is not None
    elif mode == "strong":
        half = len(ds) // 2
        tail = floats[half:]
        report["window_tail_max"] = max(tail)
        report["window_tail_argmax"] = ds[half + int(np.argmax(tail))]
    elif mode == "nice":
        threshold = mu * mu - _as_exact(eps)
        good = [d for d, v in zip(ds, values) if _exact_ge(v, threshold)]
        report["window_threshold"] = float(threshold)
        report["window_nice_count"] = len(good)
        report["window_nice_d"] = good[:1000]
        report["window_has_nice_recurrence"] = bool(good)
    else:
        acc = 0.0
        means = []
        for v in floats:
            acc += v
            means.append(acc / (len(means) + 1))
        report["window_cesaro_means"] = means
        report["window_cesaro_final"] = means[-1]
        report["window_cesaro_max"] = max(means)
    return report


def _as_exact(x):
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    return Fraction(repr(float(x)))


def _exact_positive(v) -> bool:
    if isinstance(v, QuadSurd):
        return v.sign() > 0
    return v > 0


def _exact_ge(v, threshold) -> bool:
    if isinstance(v, QuadSurd):
        return (v - threshold).sign() >= 0
    if isinstance(threshold, QuadSurd):
        return (threshold - v).sign() <= 0
    return v >= threshold


def _substream(seed: int, k: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, k])))


def random_block_orbit(
    system,
    a_set,
    seed: int,
    n_max: int,
    lags: Sequence[int] = (1,),
) -> dict:
    """0/1 sequence u_n = 1_A(y_n) along the triangular block orbit
    (x_1; x_2, T x_2; x_3, T x_3, T^2 x_3; ...) with i.i.d. uniform x_k.

    Block k draws from the PCG64 substream keyed by (seed, k).  Reports
    the empirical density and empirical lag correlations next to their
    exact targets mu(A) and mu(A cap T^{-d} A).
    """
    if n_max < 1:
        raise ValueError("need n_max >= 1")
    u = np.zeros(n_max, dtype=np.int8)
    if isinstance(system, RotationSystem):
        alpha = float(system.alpha) if not isinstance(system.alpha, Fraction) else float(system.alpha)
        a, b = float(a_set.a), float(a_set.b)
        pos = 0
        k = 0
        while pos < n_max:
            k += 1
            rng = _substream(seed, k)
            x = rng.random()
            take = min(k, n_max - pos)
            orbit = (x + alpha * np.arange(take)) % 1.0
            u[pos : pos + take] = ((orbit >= a) & (orbit < b)).astype(np.int8)
            pos += take
    elif isinstance(system, CyclicSystem):
        members = np.zeros(system.m, dtype=np.int8)
        for x in a_set.members:
            members[x % system.m] = 1
        pos = 0
        k = 0
        while pos < n_max:
            k += 1
            rng = _substream(seed, k)
            x = int(rng.integers(0, system.m))
            take = min(k, n_max - pos)
            orbit = (x + np.arange(take)) % system.m
            u[pos : pos + take] = members[orbit]
            pos += take
    else:
        raise ValueError("block orbits need point orbits (rotation or cyclic)")
    density = float(np.mean(u))
    correlations = {}
    for d in lags:
        d = int(d)
        if d < 1 or d >= n_max:
            raise ValueError("lags must satisfy 1 <= d < N")
        emp = float(np.mean(u[d:] * u[:-d]))
        correlations[d] = {
            "empirical": emp,
            "exact_target": float(correlation_exact(system, a_set, d)),
        }
    return {
        "N": n_max,
        "blocks": k,
        "density": density,
        "density_target": float(set_measure(system, a_set)),
        "lag_correlations": correlations,
        "u": u,
    }
