"""Multi-indices, boxes and finite point sets in Z^d.

Points are plain tuples of ints.  Boxes are half-open on the upper
corner; enumeration is lexicographic so that every downstream sum has a
fixed, reproducible term order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

MultiIndex = tuple[int, ...]


def as_index(coords: Iterable[int]) -> MultiIndex:
    pt = tuple(int(c) for c in coords)
    if not pt:
        raise ValueError("multi-index must have dimension >= 1")
    return pt


def leq(a: MultiIndex, b: MultiIndex) -> bool:
    """Componentwise a <= b."""
    return all(x <= y for x, y in zip(a, b, strict=True))


def lt(a: MultiIndex, b: MultiIndex) -> bool:
    """Componentwise a < b (strict in every coordinate)."""
    return all(x < y for x, y in zip(a, b, strict=True))


@dataclass(frozen=True)
class Box:
    """Axis-aligned box of lattice points: lo <= p < hi componentwise."""

    lo: MultiIndex
    hi: MultiIndex

    def __post_init__(self):
        object.__setattr__(self, "lo", as_index(self.lo))
        object.__setattr__(self, "hi", as_index(self.hi))
        if len(self.lo) != len(self.hi):
            raise ValueError("box corners must share a dimension")
        if any(l > h for l, h in zip(self.lo, self.hi)):
            raise ValueError(f"box corners out of order: {self.lo} !<= {self.hi}")

    @property
    def dim(self) -> int:
        return len(self.lo)

    @property
    def shape(self) -> MultiIndex:
        return tuple(h - l for l, h in zip(self.lo, self.hi))

    def volume(self) -> int:
        v = 1
        for s in self.shape:
            v *= s
        return v

    def contains(self, p: MultiIndex) -> bool:
        return leq(self.lo, p) and all(x < h for x, h in zip(p, self.hi))

    def contains_box(self, other: "Box") -> bool:
        if other.volume() == 0:
            return True
        return leq(self.lo, other.lo) and leq(other.hi, self.hi)


def box_from_count(n: MultiIndex) -> Box:
    """The index box (0, N] = {1, ..., N_1} x ... x {1, ..., N_d}."""
    n = as_index(n)
    if any(c < 0 for c in n):
        raise ValueError("counts must be nonnegative")
    return Box(tuple(1 for _ in n), tuple(c + 1 for c in n))


def box_points(b: Box) -> Iterator[MultiIndex]:
    """All lattice points of the box, in lexicographic order."""
    return itertools.product(*(range(l, h) for l, h in zip(b.lo, b.hi)))


@dataclass(frozen=True)
class FiniteSet:
    """Deduplicated finite subset of Z^d, kept in sorted order."""

    points: tuple[MultiIndex, ...]
    dim: int = field(default=0)

    def __post_init__(self):
        pts = sorted({as_index(p) for p in self.points})
        if not pts:
            raise ValueError("finite set must be nonempty")
        dims = {len(p) for p in pts}
        if len(dims) != 1:
            raise ValueError("points of mixed dimension")
        object.__setattr__(self, "points", tuple(pts))
        object.__setattr__(self, "dim", dims.pop())

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)

    def __contains__(self, p):
        return tuple(p) in set(self.points)


def delta_density(d_set: FiniteSet, hmax: MultiIndex) -> Fraction:
    """Max over 0 <= H <= Hmax of |D cap [-H, H]| / prod(2*H_i + 1).

    Truncated version of the windowed density sup; exact rational.
    """
    hmax = as_index(hmax)
    if len(hmax) != d_set.dim:
        raise ValueError("Hmax dimension does not match the set")
    if any(h < 0 for h in hmax):
        raise ValueError("Hmax must be nonnegative")
    best = Fraction(0)
    for h in itertools.product(*(range(m + 1) for m in hmax)):
        cells = 1
        for c in h:
            cells *= 2 * c + 1
        count = sum(
            1 for p in d_set if all(-c <= x <= c for x, c in zip(p, h))
        )
        best = max(best, Fraction(count, cells))
    return best


def transform_set(d_set: FiniteSet, matrix: Sequence[Sequence[int]]) -> tuple[FiniteSet, bool]:
    """Image L(D) under an integer e x d matrix, plus a 0-in-image flag."""
    rows = [tuple(int(x) for x in row) for row in matrix]
    if not rows:
        raise ValueError("empty matrix")
    if any(len(r) != d_set.dim for r in rows):
        raise ValueError("matrix width does not match the set dimension")
    image = []
    for p in d_set:
        image.append(tuple(sum(c * x for c, x in zip(row, p)) for row in rows))
    out = FiniteSet(tuple(image))
    zero = tuple(0 for _ in rows)
    return out, zero in out


# file format: one point per line, comma-separated integers, '#' comments


def read_finite_set(path) -> FiniteSet:
    points = []
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            points.append(tuple(int(tok) for tok in line.split(",")))
    return FiniteSet(tuple(points))


def write_finite_set(d_set: FiniteSet, path) -> None:
    with open(path, "w") as fh:
        for p in d_set:
            fh.write(",".join(str(c) for c in p) + "\n")
