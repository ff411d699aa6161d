"""Exact real scalars: rational parsing, named surds, and quadratic irrationals.

Two levels of exactness are provided.  `parse_fraction` turns decimal /
fraction strings into exact `Fraction`s; `approx_constant` additionally
resolves a few named irrational constants to 60-digit rational
approximants (fine for empirical mod-1 statistics).  `QuadSurd`
represents (a + b*sqrt(root)) with rational a, b and supports exact
comparison, floor and fractional part, which is what irrational-rotation
overlap computations need.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

#: decimal digits carried by rational approximants of named constants
APPROX_DIGITS = 60


def sqrt_fraction(n: int, digits: int = APPROX_DIGITS) -> Fraction:
    """Rational approximation of sqrt(n), correct to `digits` decimals."""
    if n < 0:
        raise ValueError("negative radicand")
    scale = 10**digits
    return Fraction(isqrt(n * scale * scale), scale)


def _named_constants() -> dict[str, Fraction]:
    s2 = sqrt_fraction(2)
    s3 = sqrt_fraction(3)
    s5 = sqrt_fraction(5)
    return {
        "sqrt2": s2,
        "sqrt3": s3,
        "sqrt5": s5,
        "sqrt2m1": s2 - 1,        # sqrt(2) - 1
        "golden": (1 + s5) / 2,   # golden ratio
        "goldenm1": (s5 - 1) / 2,
    }


NAMED_CONSTANTS = _named_constants()


def parse_fraction(value: int | float | str | Fraction) -> Fraction:
    """Exact rational from an int, Fraction, decimal string or 'p/q' string.

    Floats are read through their shortest decimal repr, i.e. 1.5 means
    the decimal 3/2, not the binary expansion.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot parse {value!r} as an exact rational")


def approx_constant(value) -> Fraction:
    """Exact rational or a 60-digit approximant of a named constant.

    Accepts ints, Fractions, decimal strings, 'p/q' strings and the
    named constants sqrt2, sqrt3, sqrt5, sqrt2m1, golden, goldenm1.
    """
    if isinstance(value, str):
        key = value.strip().lower()
        if key in NAMED_CONSTANTS:
            return NAMED_CONSTANTS[key]
    return parse_fraction(value)


@dataclass(frozen=True)
class QuadSurd:
    """Exact number a + b*sqrt(root) with a, b rational and root a nonsquare int >= 2."""

    rat: Fraction
    coef: Fraction
    root: int

    def __post_init__(self):
        if self.root < 2:
            raise ValueError("root must be >= 2 (use Fraction for rationals)")

    # -- arithmetic (closed under +, -, rational scaling, same-root product)

    def _lift(self, other) -> "QuadSurd":
        if isinstance(other, QuadSurd):
            if other.root != self.root:
                raise ValueError("mixed radicands are not supported exactly")
            return other
        return QuadSurd(Fraction(other), Fraction(0), self.root)

    def __add__(self, other):
        o = self._lift(other)
        return QuadSurd(self.rat + o.rat, self.coef + o.coef, self.root)

    __radd__ = __add__

    def __neg__(self):
        return QuadSurd(-self.rat, -self.coef, self.root)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, QuadSurd):
            o = self._lift(other)
            return QuadSurd(
                self.rat * o.rat + self.coef * o.coef * self.root,
                self.rat * o.coef + self.coef * o.rat,
                self.root,
            )
        q = Fraction(other)
        return QuadSurd(self.rat * q, self.coef * q, self.root)

    __rmul__ = __mul__

    # -- exact sign, comparison, floor

    def sign(self) -> int:
        """Exact sign of a + b*sqrt(root)."""
        a, b = self.rat, self.coef
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return (b > 0) - (b < 0)
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        # opposite signs: compare a^2 with b^2*root
        lhs, rhs = a * a, b * b * self.root
        if lhs == rhs:
            return 0
        bigger_rational = lhs > rhs
        return (1 if bigger_rational else -1) if a > 0 else (-1 if bigger_rational else 1)

    def _cmp(self, other) -> int:
        diff = self - self._lift(other)
        return diff.sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __eq__(self, other):
        if isinstance(other, (QuadSurd, int, Fraction)):
            return self._cmp(other) == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.rat, self.coef, self.root))

    def __float__(self):
        return float(self.rat) + float(self.coef) * math.sqrt(self.root)

    def floor(self) -> int:
        est = math.floor(float(self))
        # float estimate can be off by one ulp-scale error; fix exactly
        while self._cmp(est) < 0:
            est -= 1
        while self._cmp(est + 1) >= 0:
            est += 1
        return est

    def frac(self) -> "QuadSurd":
        """Fractional part, exact, in [0, 1)."""
        return self - self.floor()

    def __repr__(self):
        return f"QuadSurd({self.rat} + {self.coef}*sqrt({self.root}))"


def surd_or_fraction(value) -> Fraction | QuadSurd:
    """Exact scalar for rotation angles: named surds stay exact surds."""
    if isinstance(value, QuadSurd):
        return value
    if isinstance(value, str):
        key = value.strip().lower()
        if key == "sqrt2":
            return QuadSurd(Fraction(0), Fraction(1), 2)
        if key == "sqrt2m1":
            return QuadSurd(Fraction(-1), Fraction(1), 2)
        if key == "sqrt3":
            return QuadSurd(Fraction(0), Fraction(1), 3)
        if key == "sqrt5":
            return QuadSurd(Fraction(0), Fraction(1), 5)
        if key == "golden":
            return QuadSurd(Fraction(1, 2), Fraction(1, 2), 5)
        if key == "goldenm1":
            return QuadSurd(Fraction(-1, 2), Fraction(1, 2), 5)
    return parse_fraction(value)
