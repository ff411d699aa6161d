"""Finite-window averages: Cesaro means, correlation sums, Weyl sums,
star discrepancy and tail statistics.

Everything here is a finite-window quantity reported together with its
window; verdicts are threshold comparisons against user tolerances and
never claims about limits.  Sums are accumulated with math.fsum
(exactly rounded, order-independent), which is stronger than
compensated summation and bit-reproducible across platforms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .lattice import Box, MultiIndex, as_index, box_from_count

DEFAULT_TOL = 1e-2


def csum(values: np.ndarray) -> complex:
    """Exactly rounded sum of a complex or real array."""
    arr = np.asarray(values)
    if arr.size == 0:
        return complex(0, 0)
    if np.iscomplexobj(arr):
        return complex(math.fsum(arr.real.ravel()), math.fsum(arr.imag.ravel()))
    return complex(math.fsum(arr.ravel()), 0.0)


def vsum(values: np.ndarray) -> np.ndarray:
    """Exactly rounded sum over all but the last (vector component) axis."""
    arr = np.asarray(values)
    flat = arr.reshape(-1, arr.shape[-1])
    if np.iscomplexobj(flat):
        return np.array(
            [complex(math.fsum(flat[:, j].real), math.fsum(flat[:, j].imag)) for j in range(flat.shape[1])]
        )
    return np.array([math.fsum(flat[:, j]) for j in range(flat.shape[1])])


@dataclass(frozen=True)
class SampledFamily:
    """Complex (or fixed-length real/complex vector) values on a box.

    values has shape box.shape for scalars, box.shape + (k,) for
    vector-valued families.  norm_bound is the sup of |u_n| (Euclidean
    norm for vectors).
    """

    box: Box
    values: np.ndarray
    vector: bool = False
    norm_bound: float = field(default=0.0)

    def __post_init__(self):
        arr = np.asarray(self.values)
        expected = self.box.shape + (arr.shape[-1],) if self.vector else self.box.shape
        if arr.shape != expected:
            raise ValueError(f"values shape {arr.shape} does not match box shape {expected}")
        if self.vector:
            norms = np.sqrt(np.sum(np.abs(arr) ** 2, axis=-1))
            bound = float(norms.max()) if norms.size else 0.0
        else:
            bound = float(np.abs(arr).max()) if arr.size else 0.0
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "norm_bound", max(bound, float(self.norm_bound)))

    @property
    def dim(self) -> int:
        return self.box.dim

    def slice_for(self, window: Box) -> np.ndarray:
        if not self.box.contains_box(window):
            raise ValueError(f"window {window} is not inside the domain {self.box}")
        idx = tuple(
            slice(lo - dlo, hi - dlo) for lo, hi, dlo in zip(window.lo, window.hi, self.box.lo)
        )
        return self.values[idx]


def family_on_counts(n: MultiIndex, values: np.ndarray, vector: bool = False) -> SampledFamily:
    """A family indexed by the box (0, N]."""
    return SampledFamily(box_from_count(n), np.asarray(values), vector=vector)


def cesaro_average(u: SampledFamily, window: Box):
    """Exact sum over the window divided by its volume."""
    vol = window.volume()
    if vol == 0:
        raise ValueError("empty averaging window")
    block = u.slice_for(window)
    if u.vector:
        return vsum(block) / vol
    return csum(block) / vol


def correlation_gamma(u: SampledFamily, n: MultiIndex, h: MultiIndex) -> complex:
    """gamma(N, h) = sum over 0 < n <= N with 0 < n+h <= N of u_{n+h} conj(u_n).

    Vector-valued families use the inner product <u_{n+h}, u_n>.
    """
    n = as_index(n)
    h = as_index(h)
    if len(h) != u.dim or len(n) != u.dim:
        raise ValueError("dimension mismatch")
    domain = box_from_count(n)
    if not u.box.contains_box(domain):
        raise ValueError("family is not defined on all of (0, N]")
    lo = [max(1, 1 - hi) for hi in h]
    hi = [min(ni, ni - hj) for ni, hj in zip(n, h)]
    if any(a > b for a, b in zip(lo, hi)):
        return complex(0, 0)
    base = Box(tuple(lo), tuple(b + 1 for b in hi))
    shifted = Box(
        tuple(a + hj for a, hj in zip(lo, h)), tuple(b + 1 + hj for b, hj in zip(hi, h))
    )
    a_block = u.slice_for(shifted)
    b_block = u.slice_for(base)
    prod = a_block * np.conj(b_block)
    if u.vector:
        return csum(np.sum(prod, axis=-1))
    return csum(prod)


def weyl_test(x: Sequence[float], n: int, kmax: int, tol: float = DEFAULT_TOL) -> dict:
    """Moduli of the Weyl sums (1/N) sum e(k x_j) for 1 <= k <= kmax.

    Moduli for -k equal those for k (conjugate sums), so rows cover
    k = 1..kmax.  The verdict is advisory, a finite-N threshold test.
    """
    if n < 1 or kmax < 1:
        raise ValueError("need N >= 1 and kmax >= 1")
    xs = np.asarray(x, dtype=float)[:n]
    if len(xs) < n:
        raise ValueError("sample shorter than N")
    rows = []
    sup = 0.0
    for k in range(1, kmax + 1):
        s = csum(np.exp(2j * np.pi * k * xs)) / n
        rows.append({"k": k, "re": s.real, "im": s.imag, "modulus": abs(s)})
        sup = max(sup, abs(s))
    return {
        "N": n,
        "kmax": kmax,
        "rows": rows,
        "sup_modulus": sup,
        "tolerance": tol,
        "below_tolerance": bool(sup <= tol),
    }


def discrepancy_star(x: Sequence[float], n: int) -> float:
    """Star discrepancy by the sorted-sample formula.

    D_N^* = max_i max(i/N - s_i, s_i - (i-1)/N) over the sorted sample.
    """
    if n < 1:
        raise ValueError("need N >= 1")
    xs = np.sort(np.asarray(x, dtype=float)[:n] % 1.0)
    if len(xs) < n:
        raise ValueError("sample shorter than N")
    i = np.arange(1, n + 1)
    return float(np.max(np.maximum(i / n - xs, xs - (i - 1) / n)))


def gamma_tail(
    u: SampledFamily,
    d_seq: Sequence[MultiIndex],
    m_count: int,
    n: MultiIndex,
) -> dict:
    """Per-d normalized correlations with tail-sup and Cesaro summaries.

    gamma_hat(d) = gamma(N, d) / vol(N).  The running tail supremum (for
    the 'coefficients tend to zero along D' reading) and the running
    Cesaro mean of |gamma_hat| (for the density reading) are reported
    side by side.
    """
    if m_count < 1:
        raise ValueError("need at least one d")
    n = as_index(n)
    d_list = [as_index(d) for d in d_seq[:m_count]]
    if len(set(d_list)) != len(d_list):
        raise ValueError("the d_m must be pairwise distinct")
    mags = [max(abs(c) for c in d) for d in d_list]
    if any(a > b for a, b in zip(mags, mags[1:])):
        raise ValueError("|d_m| must be nondecreasing")
    vol = box_from_count(n).volume()
    values = [correlation_gamma(u, n, d) / vol for d in d_list]
    moduli = [abs(v) for v in values]
    tail_sup = [0.0] * len(values)
    running = 0.0
    for i in range(len(values) - 1, -1, -1):
        running = max(running, moduli[i])
        tail_sup[i] = running
    cesaro = []
    acc = 0.0
    for i, m in enumerate(moduli):
        acc += m
        cesaro.append(acc / (i + 1))
    return {
        "N": list(n),
        "window": len(d_list),
        "entries": [
            {"d": list(d), "re": v.real, "im": v.imag, "modulus": m}
            for d, v, m in zip(d_list, values, moduli)
        ],
        "running_tail_sup": tail_sup,
        "running_cesaro_mean": cesaro,
        "tail_sup_last_half": max(moduli[len(moduli) // 2 :]),
        "cesaro_mean": cesaro[-1],
    }
