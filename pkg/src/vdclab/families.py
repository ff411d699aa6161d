"""Seeded demo families on index boxes, shared by the CLI and the tests."""

from __future__ import annotations

import numpy as np

from .correlations import SampledFamily, family_on_counts
from .lattice import MultiIndex, as_index, box_from_count, box_points


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed])))


def constant_family(n: MultiIndex) -> SampledFamily:
    n = as_index(n)
    return family_on_counts(n, np.ones(box_from_count(n).shape, dtype=complex))


def alternating_family(n: MultiIndex) -> SampledFamily:
    n = as_index(n)
    box = box_from_count(n)
    vals = np.empty(box.shape, dtype=complex)
    for p in box_points(box):
        idx = tuple(c - 1 for c in p)
        vals[idx] = (-1) ** sum(p)
    return family_on_counts(n, vals)


def random_unimodular_family(n: MultiIndex, seed: int) -> SampledFamily:
    n = as_index(n)
    shape = box_from_count(n).shape
    phases = _rng(seed).random(shape)
    return family_on_counts(n, np.exp(2j * np.pi * phases))


def single_entry_family(n: MultiIndex, at: MultiIndex) -> SampledFamily:
    n = as_index(n)
    box = box_from_count(n)
    vals = np.zeros(box.shape, dtype=complex)
    vals[tuple(c - 1 for c in as_index(at))] = 1.0
    return family_on_counts(n, vals)


def random_unit_vector_family(n: MultiIndex, k: int, seed: int) -> SampledFamily:
    """Random unit vectors in R^k at every index of (0, N]."""
    n = as_index(n)
    shape = box_from_count(n).shape + (k,)
    raw = _rng(seed).normal(size=shape)
    norms = np.sqrt(np.sum(raw**2, axis=-1, keepdims=True))
    return family_on_counts(n, raw / norms, vector=True)


def exponential_family(n: MultiIndex, alpha: float, degree: int = 1) -> SampledFamily:
    """u_n = e(alpha * (n_1 + ... + n_d)^degree)."""
    n = as_index(n)
    box = box_from_count(n)
    vals = np.empty(box.shape, dtype=complex)
    for p in box_points(box):
        idx = tuple(c - 1 for c in p)
        vals[idx] = np.exp(2j * np.pi * (alpha * float(sum(p)) ** degree % 1.0))
    return family_on_counts(n, vals)


def random_group_values(orders, seed: int) -> dict:
    rng = _rng(seed)
    out = {}
    import itertools

    for pt in itertools.product(*(range(m) for m in orders)):
        out[pt] = complex(np.exp(2j * np.pi * rng.random()))
    return out
