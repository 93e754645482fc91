from __future__ import annotations

import itertools

import numpy as np
import pytest

from kuelshammer.algebra import Algebra, algebra_from_matrices
from kuelshammer.field import Field
from kuelshammer.linalg import Subspace


def dual_numbers(F: Field) -> Algebra:
    """K[x]/x^2 with basis (1, x), written down by hand."""
    return Algebra(F, 2, [(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1)], [1, 0], ["1", "x"])


def truncated(F: Field, n: int) -> Algebra:
    """K[x]/x^n with basis 1, x, ..., x^(n-1)."""
    entries = [(i, j, i + j, 1) for i in range(n) for j in range(n) if i + j < n]
    return Algebra(F, n, entries, [1] + [0] * (n - 1), [f"x^{i}" for i in range(n)])


def product_of_fields(F: Field, n: int) -> Algebra:
    return Algebra(F, n, [(i, i, i, 1) for i in range(n)], [1] * n, [f"e{i}" for i in range(n)])


def matrix_units(F: Field, n: int) -> Algebra:
    mats = []
    for i, j in itertools.product(range(n), repeat=2):
        m = np.zeros((n, n), dtype=np.int64)
        m[i, j] = 1
        mats.append(m)
    return algebra_from_matrices(F, mats, [f"E{i}{j}" for i, j in itertools.product(range(1, n + 1), repeat=2)])


def local_square_zero(F: Field) -> Algebra:
    """K[x, y]/(x, y)^2."""
    return Algebra(F, 3, [(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1), (0, 2, 2, 1), (2, 0, 2, 1)], [1, 0, 0])


def all_vectors(F: Field, n: int):
    for t in itertools.product(range(F.q), repeat=n):
        yield np.array(t, dtype=np.int64)


def brute_span(F: Field, rows, n: int) -> set:
    """Every vector of the span, grown one generator at a time."""
    out = {(0,) * n}
    for r in rows:
        r = np.asarray(r, dtype=np.int64)
        multiples = [F.mul(r, c) for c in range(F.q)]
        out = {tuple(int(x) for x in F.add(np.array(v, dtype=np.int64), m)) for v in out for m in multiples}
    return out


def elements_of(sub: Subspace) -> set:
    return brute_span(sub.field, list(sub.basis), sub.ambient_dim)


@pytest.fixture
def gf2():
    return Field(2)


@pytest.fixture
def gf3():
    return Field(3)


@pytest.fixture
def gf4():
    return Field.gf(4)
