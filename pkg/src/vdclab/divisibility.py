"""Exact polynomial divisibility: simultaneous divisibility modulo q,
prime-power scanning, and the constructive 2-adic lifting plus Bezout
combination for the fixed pair

    p(X) = (2 + X^2 + X^3)(1 + 2X),   q(X) = X(1 + X)(1 + 2X).

Every linear combination a*p + b*q is divisible by every integer, yet p
and q are not simultaneously divisible by 4; the construction here
exhibits, for each (a, b, d), an explicit n with d | a*p(n) + b*q(n),
verified by exact evaluation before it is returned.

All arithmetic is arbitrary-precision; values of a polynomial mod q are
q-periodic in the argument, so a scan over [0, q) is complete.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


@dataclass(frozen=True)
class IntPolynomial:
    """Integer-coefficient polynomial, coefficients ascending by degree."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        cs = [int(c) for c in self.coeffs]
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def degree(self) -> int:
        if self.coeffs == (0,):
            return -1
        return len(self.coeffs) - 1

    def __call__(self, n: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * n + c
        return acc

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        a, b = self.coeffs, other.coeffs
        size = max(len(a), len(b))
        return IntPolynomial(
            tuple(
                (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                for i in range(size)
            )
        )

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPolynomial(tuple(c * other for c in self.coeffs))
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, ci in enumerate(self.coeffs):
            for j, cj in enumerate(other.coeffs):
                out[i + j] += ci * cj
        return IntPolynomial(tuple(out))

    __rmul__ = __mul__

    def text(self) -> str:
        return ",".join(str(c) for c in self.coeffs)


def poly_from_text(text: str) -> IntPolynomial:
    """Parse 'c0,c1,c2,...' (ascending coefficients)."""
    return IntPolynomial(tuple(int(tok) for tok in text.split(",")))


# the fixed appendix pair and their common factor
APPENDIX_P = IntPolynomial((2, 0, 1, 1)) * IntPolynomial((1, 2))   # (2+X^2+X^3)(1+2X)
APPENDIX_Q = IntPolynomial((0, 1)) * IntPolynomial((1, 1)) * IntPolynomial((1, 2))
_P_REDUCED = IntPolynomial((2, 0, 1, 1))  # p / (1+2X)
_Q_REDUCED = IntPolynomial((0, 1, 1))     # q / (1+2X)


def simultaneous_divisible(
    polys: Sequence[IntPolynomial], q: int
) -> int | None:
    """Least n in [0, q) with q | p_i(n) for every i, or None."""
    if q < 1:
        raise ValueError("modulus must be >= 1")
    if not polys:
        raise ValueError("need at least one polynomial")
    for n in range(q):
        if all(p(n) % q == 0 for p in polys):
            return n
    return None


def _prime_powers_up_to(limit: int) -> list[int]:
    from .sequences import sieve_primes

    out = []
    for p in sieve_primes(limit):
        pk = p
        while pk <= limit:
            out.append(pk)
            pk *= p
    return sorted(out)


def divisible_up_to(polys: Sequence[IntPolynomial], q_max: int) -> dict:
    """Simultaneous divisibility for every prime power <= Q.

    Composites with coprime factorizations follow by CRT (witnesses mod
    coprime d, e combine to one mod d*e), so prime powers decide the
    full range.  Returns the first failing prime power, if any.
    """
    if q_max < 1:
        raise ValueError("Q must be >= 1")
    checked = []
    for pk in _prime_powers_up_to(q_max):
        witness = simultaneous_divisible(polys, pk)
        checked.append(pk)
        if witness is None:
            return {
                "all_pass": False,
                "first_failure": pk,
                "checked_prime_powers": checked,
            }
    return {"all_pass": True, "first_failure": None, "checked_prime_powers": checked}


def crt_combine(n1: int, m1: int, n2: int, m2: int) -> int:
    """n with n = n1 mod m1 and n = n2 mod m2, for coprime m1, m2."""
    g, inv, _ = _egcd(m1 % m2, m2)
    if g != 1:
        raise ValueError("moduli must be coprime")
    t = ((n2 - n1) * inv) % m2
    return (n1 + m1 * t) % (m1 * m2)


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    if a == 0:
        return b, 0, 1
    g, x, y = _egcd(b % a, a)
    return g, y - (b // a) * x, x


def _v2(n: int) -> int:
    if n == 0:
        raise ValueError("2-adic valuation of 0")
    return (n & -n).bit_length() - 1


def lift_pow2(r: IntPolynomial, k: int, start: int) -> dict:
    """n in [0, 2^k) with 2^k | r(n), by the valuation-increment recursion.

    Follows n_{j+1} = n_j + 2^l with l = v2(r(n_j)) while the recursion
    invariant (the valuation strictly increases) holds from `start`;
    otherwise falls back to a complete scan of [0, 2^k).  The report
    says which path produced the answer.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    mod = 1 << k
    n = start
    steps = 0
    for _ in range(k + 4):
        val = r(n)
        if val == 0 or _v2(val) >= k:
            return {"n": n % mod, "path": "recursion", "steps": steps}
        ell = _v2(val)
        nxt = n + (1 << ell)
        nval = r(nxt)
        if nval != 0 and _v2(nval) <= ell:
            break  # valuation did not increase: invariant broke
        n = nxt
        steps += 1
    for n in range(mod):
        if r(n) % mod == 0:
            return {"n": n, "path": "scan", "steps": steps}
    return {"n": None, "path": "scan", "steps": steps}


def appendix_construct(a: int, b: int, d: int) -> int:
    """Explicit n with d | a*p(n) + b*q(n) for the fixed appendix pair.

    Writes d = 2^k * alpha (alpha odd), lifts a solution mod 2^k along
    the parity-dependent recursion (odd n when exactly one of a, b is
    even, even n when both are odd), and reaches the odd part through
    the common factor 1 + 2X via the Bezout identity
    2 n_k + 1 = -u 2^(k+1) + v alpha.  The result is re-verified by
    exact evaluation; failure to verify raises (implementation bug).
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    combo = a * APPENDIX_P + b * APPENDIX_Q

    def verified(n: int) -> int:
        if combo(n) % d != 0:
            raise RuntimeError(
                f"appendix construction failed verification at a={a}, b={b}, d={d}, n={n}"
            )
        return n

    if a == 0 and b == 0:
        return verified(0)
    g = math.gcd(a, b)
    if g > 1:
        # combo = g * combo' and d = gcd(d, g) * e, so e | combo'(n)
        # already gives d | combo(n)
        return verified(appendix_construct(a // g, b // g, d // math.gcd(d, g)))

    k = _v2(d) if d % 2 == 0 else 0
    alpha = d >> k

    # 2-adic lifting with the parity rule; r = (a p + b q) / (1 + 2X)
    r = a * _P_REDUCED + b * _Q_REDUCED
    both_odd = a % 2 == 1 and b % 2 == 1
    n_k = 2 if both_odd else 1
    for _ in range(k + 8):
        val = a * APPENDIX_P(n_k) + b * APPENDIX_Q(n_k)
        if val == 0 or _v2(val) >= k:
            break
        ell = _v2(val)
        n_k = n_k + (1 << ell)
    val = a * APPENDIX_P(n_k) + b * APPENDIX_Q(n_k)
    if val != 0 and _v2(val) < k:
        raise RuntimeError("2-adic lifting stalled (implementation bug)")

    if alpha == 1:
        return verified(n_k % d)
    # Bezout: 2 n_k + 1 = -u 2^(k+1) + v alpha, then n = n_k + 2^k u
    g2, inv, _ = _egcd((1 << (k + 1)) % alpha, alpha)
    assert g2 == 1
    u = (-(2 * n_k + 1) * inv) % alpha
    n = n_k + (1 << k) * u
    return verified(n % d)
