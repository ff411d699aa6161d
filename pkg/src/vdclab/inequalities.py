"""Exact verification of the correlation inequalities.

Three forms: the box inequality with Fejer-type weights and its simpler
absolute-value variant; the abstract finite-group form with exact set
algebra; and the generalized positive-definite-weighted form, for
scalar or Hilbert-space (vector) families.  Each check computes both
sides numerically and reports a one-sided 'holds' flag with a small
relative slack, so property tests fail loudly on genuine violations but
not on last-bit rounding.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Sequence

import numpy as np

from .correlations import SampledFamily, correlation_gamma, csum, vsum
from .lattice import FiniteSet, MultiIndex, as_index, box_from_count
from .posdef import CoefficientFamily, _entry_complex, is_positive_definite

REL_SLACK = 1e-12
IMAG_DUST = 1e-9


class ImaginaryDustError(ArithmeticError):
    """A quantity that must be real carried a non-negligible imaginary part."""


def _realize(value: complex, scale: float) -> float:
    if abs(value.imag) > IMAG_DUST * max(abs(value), scale, 1.0):
        raise ImaginaryDustError(
            f"imaginary part {value.imag} too large for a real quantity (value {value})"
        )
    return value.real


def _holds(lhs: float, rhs: float) -> bool:
    return lhs <= rhs + REL_SLACK * max(abs(lhs), abs(rhs), 1.0)


def _family_sum(u: SampledFamily, n: MultiIndex):
    window = box_from_count(n)
    block = u.slice_for(window)
    if u.vector:
        return vsum(block)
    return csum(block)


def check_box_vdc(u: SampledFamily, n: MultiIndex, h: MultiIndex) -> dict:
    """Both box inequalities at window N with averaging parameter H.

    lhs = |sum u_n|^2;
    rhs_weighted = prod((N_i+H_i)) / prod(H_i^2) * sum_{-H<h<H}
                   prod(H_i - |h_i|) gamma(N, h)   (real by symmetry);
    rhs_simple   = prod((N_i+H_i)/H_i) * sum |gamma(N, h)|.
    """
    n = as_index(n)
    h = as_index(h)
    if any(c < 1 for c in h):
        raise ValueError("H must be >= 1 componentwise")
    s = _family_sum(u, n)
    lhs = float(abs(s)) ** 2 if not u.vector else float(np.sum(np.abs(s) ** 2))
    terms = []
    weighted = complex(0, 0)
    absolute = 0.0
    for hh in itertools.product(*(range(-c + 1, c) for c in h)):
        gam = correlation_gamma(u, n, hh)
        weight = 1
        for c, b in zip(hh, h):
            weight *= b - abs(c)
        weighted += weight * gam
        absolute += abs(gam)
        terms.append(
            {"h": list(hh), "gamma_re": gam.real, "gamma_im": gam.imag, "weight": weight}
        )
    front = Fraction(1)
    for ni, hi in zip(n, h):
        front *= Fraction(ni + hi)
    weighted_factor = front / math.prod(c * c for c in h)
    simple_factor = front / math.prod(h)
    rhs_weighted = float(weighted_factor) * _realize(weighted, abs(weighted))
    rhs_simple = float(simple_factor) * absolute
    holds = _holds(lhs, rhs_weighted) and _holds(lhs, rhs_simple)
    return {
        "lhs": lhs,
        "rhs_weighted": rhs_weighted,
        "rhs_simple": rhs_simple,
        "margin": min(rhs_weighted, rhs_simple) - lhs,
        "holds": bool(holds),
        "N": list(n),
        "H": list(h),
        "terms": terms,
    }


# ---------------------------------------------------------------------------
# abstract finite-group form


def _group_elements(orders: Sequence[int]):
    return itertools.product(*(range(m) for m in orders))


def _g_add(a, b, orders):
    return tuple((x + y) % m for x, y, m in zip(a, b, orders))


def _g_neg(a, orders):
    return tuple((-x) % m for x, m in zip(a, orders))


def check_group_vdc(
    orders: Sequence[int],
    e_set: FiniteSet,
    d_set: FiniteSet,
    u: dict,
) -> dict:
    """The group inequality on the finite abelian group prod Z/m_i.

    lhs = |sum_{n in E} u(n)|^2;
    rhs = |E - D| / |D| * sum_{d in D - D} |sum_{n in E, n+d in E}
          u(n + d) conj(u(n))|.
    Set algebra (E - D, D - D) is exact.
    """
    orders = [int(m) for m in orders]
    if any(m < 1 for m in orders):
        raise ValueError("cyclic orders must be >= 1")
    e_pts = [tuple(c % m for c, m in zip(p, orders)) for p in e_set]
    d_pts = [tuple(c % m for c, m in zip(p, orders)) for p in d_set]
    if not d_pts:
        raise ValueError("D must be nonempty")
    e_uniq = sorted(set(e_pts))
    d_uniq = sorted(set(d_pts))

    def val(n) -> complex:
        return complex(u.get(n, 0))

    lhs = abs(sum(val(n) for n in e_uniq)) ** 2
    e_minus_d = {
        _g_add(e, _g_neg(d, orders), orders) for e in e_uniq for d in d_uniq
    }
    d_minus_d = sorted(
        {_g_add(a, _g_neg(b, orders), orders) for a in d_uniq for b in d_uniq}
    )
    e_lookup = set(e_uniq)
    total = 0.0
    terms = []
    for d in d_minus_d:
        inner = complex(0, 0)
        for nnn in e_uniq:
            shifted = _g_add(nnn, d, orders)
            if shifted in e_lookup:
                inner += val(shifted) * val(nnn).conjugate()
        total += abs(inner)
        terms.append({"d": list(d), "modulus": abs(inner)})
    rhs = len(e_minus_d) / len(d_uniq) * total
    return {
        "lhs": lhs,
        "rhs": rhs,
        "margin": rhs - lhs,
        "holds": bool(_holds(lhs, rhs)),
        "orders": orders,
        "terms": terms,
    }


# ---------------------------------------------------------------------------
# generalized positive-definite-weighted form


def _boundary_weight(h: MultiIndex, n: MultiIndex) -> int:
    # prod(N_i + |h_i|) - prod(N_i): the d = 2 case is
    # |h1| N2 + |h2| N1 + |h1 h2|
    plus = 1
    base = 1
    for c, ni in zip(h, n):
        plus *= ni + abs(c)
        base *= ni
    return plus - base


def check_generalized_vdc(
    u: SampledFamily,
    n: MultiIndex,
    a: CoefficientFamily,
    assume_posdef: bool = False,
) -> dict:
    """The weighted inequality |sum u_n|^2 <= main_term + error_term with

    main_term  = vol(N) * sum_h a_h gamma(N, h),
    error_term = vol(N) * 5 ||u||_inf^2 * sum_h boundary(h, N) |a_h|,

    where boundary(h, N) = prod(N_i + |h_i|) - prod(N_i) (the displayed
    |h1| N2 + |h2| N1 + |h1 h2| when d = 2).  Works for scalar and
    vector-valued families; a must be positive-definite with sum 1.
    """
    n = as_index(n)
    if a.dim != u.dim:
        raise ValueError("weight family dimension mismatch")
    total = a.total()
    total_c = _entry_complex(total)
    if abs(total_c - 1) > 1e-12:
        raise ValueError(f"weights must sum to 1 (got {total_c})")
    support = a.support_bound()
    if any(s > ni + 1 for s, ni in zip(support, n)):
        raise ValueError("weight support exceeds the window")
    if not assume_posdef:
        cert = is_positive_definite(a, method="gram")
        if cert.verdict == "not-positive-definite":
            raise ValueError("weight family is not positive-definite")
    vol = box_from_count(n).volume()
    s = _family_sum(u, n)
    lhs = float(abs(s)) ** 2 if not u.vector else float(np.sum(np.abs(s) ** 2))
    main = complex(0, 0)
    err_sum = 0.0
    terms = []
    for h in sorted(a.entries):
        coef = _entry_complex(a.entries[h])
        gam = correlation_gamma(u, n, h)
        main += coef * gam
        bw = _boundary_weight(h, n)
        err_sum += bw * abs(coef)
        terms.append(
            {
                "h": list(h),
                "a_re": coef.real,
                "a_im": coef.imag,
                "gamma_re": gam.real,
                "gamma_im": gam.imag,
                "boundary_weight": bw,
            }
        )
    main_term = vol * _realize(main, abs(main))
    error_term = vol * 5 * u.norm_bound**2 * err_sum
    holds = lhs <= main_term + error_term + 1e-9
    return {
        "lhs": lhs,
        "main_term": main_term,
        "error_term": error_term,
        "margin": main_term + error_term - lhs,
        "holds": bool(holds),
        "N": list(n),
        "a0": _a0(a),
        "terms": terms,
    }


def _a0(a: CoefficientFamily) -> float:
    zero = tuple(0 for _ in range(a.dim))
    v = a.entries.get(zero, 0)
    return float(_entry_complex(v).real)


def quant_schedule(
    u: SampledFamily,
    a: CoefficientFamily,
    schedule: Sequence[MultiIndex],
) -> dict:
    """Quantitative trick along a growing window schedule.

    For weights whose off-zero correlations vanish in the limit, the
    normalized means are eventually bounded by ||u||_inf * sqrt(a_0);
    this reports |mean| and the bound at each window.
    """
    bound = u.norm_bound * math.sqrt(max(_a0(a), 0.0))
    rows = []
    for n in schedule:
        n = as_index(n)
        vol = box_from_count(n).volume()
        s = _family_sum(u, n)
        mean = abs(s) / vol if not u.vector else float(np.sqrt(np.sum(np.abs(s) ** 2))) / vol
        res = check_generalized_vdc(u, n, a, assume_posdef=True)
        rows.append(
            {
                "N": list(n),
                "mean_modulus": float(mean),
                "normalized_main": res["main_term"] / vol**2,
                "normalized_error": res["error_term"] / vol**2,
            }
        )
    return {"limsup_bound": bound, "windows": rows}


def check_eps_factored_vdc(
    u: SampledFamily, n: int, a: CoefficientFamily
) -> dict:
    """One-dimensional eps-factored inequality for a stored witness family.

    With a_0 = eps, |a_d| <= a_0 and support in (-H, H):
    |1/N sum u_n|^2 <= eps * ( (1/N) sum |u_n|^2
                               + sum_{d in supp, d != 0} |gamma(N, d)| / N
                               + 5 H^2 ||u||_inf^2 / N ).
    """
    if u.dim != 1 or a.dim != 1:
        raise ValueError("the eps-factored form is one-dimensional")
    n_idx = (int(n),)
    vol = n
    eps = _a0(a)
    s = _family_sum(u, n_idx)
    lhs = (abs(s) / vol) ** 2
    gamma0 = correlation_gamma(u, n_idx, (0,)).real / vol
    corr_sum = 0.0
    h_bound = a.support_bound()[0]
    for (d,), _v in sorted(a.entries.items()):
        if d != 0:
            corr_sum += abs(correlation_gamma(u, n_idx, (d,))) / vol
    rhs = eps * (gamma0 + corr_sum + 5 * u.norm_bound**2 * h_bound**2 / vol)
    return {
        "lhs": lhs,
        "rhs": rhs,
        "eps": eps,
        "holds": bool(_holds(lhs, rhs)),
        "N": n,
    }
