"""Dense exact linear algebra over GF(p^e).

Matrices are ``int64`` numpy arrays in the field's integer encoding and act on
column vectors.  A :class:`Subspace` is held by the reduced row echelon form
of a spanning set, which makes equality a plain array comparison.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AmbientMismatch, NotASubspace, SingularGram
from .field import Field


def _is_gf2(F: Field) -> bool:
    return F.p == 2 and F.e == 1


def rref(F: Field, m) -> tuple[np.ndarray, int, list[int]]:
    """Reduced row echelon form; returns (nonzero rows, rank, pivot columns)."""
    a = np.array(m, dtype=np.int64, copy=True)
    if a.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    rows, cols = a.shape
    gf2 = _is_gf2(F)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        if a[r, c] != 1:
            a[r, c:] = F.mul(a[r, c:], F.inv(a[r, c]))
        others = np.flatnonzero(a[:, c])
        others = others[others != r]
        if others.size:
            if gf2:
                a[others, c:] ^= a[r, c:]
            else:
                a[np.ix_(others, np.arange(c, cols))] = F.sub(
                    a[others, c:], F.mul(a[others, c][:, None], a[r, c:][None, :])
                )
        pivots.append(c)
        r += 1
    return a[:r], r, pivots


def _gf2_rank(m: np.ndarray) -> int:
    rows = [int.from_bytes(np.packbits(row.astype(np.uint8)).tobytes(), "big") for row in m]
    basis: dict[int, int] = {}
    for v in rows:
        while v:
            top = v.bit_length() - 1
            if top in basis:
                v ^= basis[top]
            else:
                basis[top] = v
                break
    return len(basis)


def rank(F: Field, m) -> int:
    m = np.asarray(m, dtype=np.int64)
    if m.size == 0:
        return 0
    if _is_gf2(F):
        return _gf2_rank(m)
    return rref(F, m)[1]


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def inverse(F: Field, m) -> np.ndarray:
    m = np.asarray(m, dtype=np.int64)
    n = m.shape[0]
    if m.shape != (n, n):
        raise SingularGram("only square matrices are invertible")
    r, rk, piv = rref(F, np.hstack([m, identity(n)]))
    if rk < n or piv[n - 1] != n - 1:
        raise SingularGram("matrix is singular")
    return r[:, n:]


def is_invertible(F: Field, m) -> bool:
    m = np.asarray(m)
    return m.shape[0] == m.shape[1] and rank(F, m) == m.shape[0]


def kernel(F: Field, m) -> "Subspace":
    """``{v : m v = 0}`` as a subspace of the column space."""
    m = np.asarray(m, dtype=np.int64)
    cols = m.shape[1]
    if m.shape[0] == 0:
        return Subspace.full(F, cols)
    r, rk, piv = rref(F, m)
    free = [c for c in range(cols) if c not in set(piv)]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        if rk:
            basis[i, piv] = F.neg(r[:, f])
    return Subspace.span(F, basis, cols)


def image(F: Field, m) -> "Subspace":
    """Column space of ``m``."""
    m = np.asarray(m, dtype=np.int64)
    return Subspace.span(F, m.T, m.shape[0])


def solve(F: Field, m, b) -> np.ndarray | None:
    """One solution x of ``m x = b`` or None."""
    m = np.asarray(m, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    n = m.shape[1]
    r, rk, piv = rref(F, np.hstack([m, b[:, None]]))
    if piv and piv[-1] == n:
        return None
    x = np.zeros(n, dtype=np.int64)
    x[piv] = r[:, n]
    return x


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of ``F^ambient_dim`` stored as a canonical RREF basis."""

    field: Field
    ambient_dim: int
    basis: np.ndarray
    pivots: tuple[int, ...]

    @classmethod
    def span(cls, F: Field, rows, ambient_dim: int | None = None) -> "Subspace":
        rows = np.asarray(rows, dtype=np.int64)
        if ambient_dim is None:
            ambient_dim = rows.shape[1]
        rows = rows.reshape(-1, ambient_dim)
        if rows.shape[0] == 0:
            return cls.zero(F, ambient_dim)
        r, _, piv = rref(F, rows)
        r.setflags(write=False)
        return cls(F, ambient_dim, r, tuple(piv))

    @classmethod
    def zero(cls, F: Field, n: int) -> "Subspace":
        b = np.zeros((0, n), dtype=np.int64)
        b.setflags(write=False)
        return cls(F, n, b, ())

    @classmethod
    def full(cls, F: Field, n: int) -> "Subspace":
        b = identity(n)
        b.setflags(write=False)
        return cls(F, n, b, tuple(range(n)))

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def __len__(self):
        return self.dim

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.field == other.field
            and self.ambient_dim == other.ambient_dim
            and np.array_equal(self.basis, other.basis)
        )

    def __hash__(self):
        return hash((self.field, self.ambient_dim, self.basis.tobytes()))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim}, {self.field})"

    def _check(self, other: "Subspace") -> None:
        self.field.check_same(other.field)
        if self.ambient_dim != other.ambient_dim:
            raise AmbientMismatch(f"ambient {self.ambient_dim} versus {other.ambient_dim}")

    # -- membership and coordinates --------------------------------------------

    def reduce(self, v) -> np.ndarray:
        """Remainder of vectors (rows) after eliminating the pivot coordinates."""
        v = np.asarray(v, dtype=np.int64)
        if self.dim == 0:
            return v.copy()
        F = self.field
        return F.sub(v, F.matmul(v[..., list(self.pivots)], self.basis))

    def contains_vector(self, v) -> bool:
        return not np.any(self.reduce(v))

    def contains(self, other: "Subspace") -> bool:
        self._check(other)
        return other.dim == 0 or not np.any(self.reduce(other.basis))

    def __contains__(self, v) -> bool:
        return self.contains_vector(v)

    def coords(self, v) -> np.ndarray:
        """Coordinates of vectors of this subspace in the RREF basis."""
        return np.asarray(v, dtype=np.int64)[..., list(self.pivots)]

    def complement_indices(self) -> list[int]:
        pv = set(self.pivots)
        return [i for i in range(self.ambient_dim) if i not in pv]

    # -- lattice operations --------------------------------------------------

    def sum(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.span(self.field, np.vstack([self.basis, other.basis]), self.ambient_dim)

    __add__ = sum

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check(other)
        F = self.field
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(F, self.ambient_dim)
        stacked = np.vstack([self.basis, F.neg(other.basis)]).T
        ker = kernel(F, stacked)
        if ker.dim == 0:
            return Subspace.zero(F, self.ambient_dim)
        return Subspace.span(F, F.matmul(ker.basis[:, : self.dim], self.basis), self.ambient_dim)

    __and__ = intersect

    def quotient_dim(self, other: "Subspace") -> int:
        if not self.contains(other):
            raise NotASubspace("quotient_dim requires other to lie in self")
        return self.dim - other.dim

    def orthogonal(self, gram) -> "Subspace":
        """``{w : w^T gram x = 0 for all x in self}``."""
        gram = np.asarray(gram, dtype=np.int64)
        if self.dim == 0:
            return Subspace.full(self.field, self.ambient_dim)
        return kernel(self.field, self.field.matmul(self.basis, gram.T))

    def map(self, m) -> "Subspace":
        """Image under the matrix ``m`` acting on column vectors."""
        m = np.asarray(m, dtype=np.int64)
        if self.dim == 0:
            return Subspace.zero(self.field, m.shape[0])
        return Subspace.span(self.field, self.field.matmul(self.basis, m.T), m.shape[0])

    def frobenius(self, k: int) -> "Subspace":
        """Entrywise Frobenius twist; an RREF basis stays in RREF."""
        b = self.field.frob(self.basis, k)
        b.setflags(write=False)
        return Subspace(self.field, self.ambient_dim, b, self.pivots)


def subspace_ops(a: Subspace, b: Subspace, op: str):
    if op == "sum":
        return a.sum(b)
    if op == "intersect":
        return a.intersect(b)
    if op == "contains":
        return a.contains(b)
    if op == "quotient_dim":
        return a.quotient_dim(b)
    raise ValueError(f"unknown subspace operation {op!r}")


def orthogonal(v: Subspace, gram) -> Subspace:
    return v.orthogonal(gram)


@dataclass(frozen=True, eq=False)
class SemilinearMap:
    """``v -> matrix @ frob(v, twist)``; the twist is kept modulo e."""

    field: Field
    matrix: np.ndarray
    twist: int = 0

    def __post_init__(self):
        object.__setattr__(self, "matrix", np.asarray(self.matrix, dtype=np.int64))
        object.__setattr__(self, "twist", self.twist % self.field.e)

    def __call__(self, v) -> np.ndarray:
        return self.field.matmul(self.matrix, self.field.frob(np.asarray(v), self.twist))

    def __eq__(self, other):
        return (
            isinstance(other, SemilinearMap)
            and self.field == other.field
            and self.twist == other.twist
            and np.array_equal(self.matrix, other.matrix)
        )

    def compose(self, other: "SemilinearMap") -> "SemilinearMap":
        """``self o other``."""
        F = self.field
        m = F.matmul(self.matrix, F.frob(other.matrix, self.twist))
        return SemilinearMap(F, m, self.twist + other.twist)

    def kernel(self) -> Subspace:
        return kernel(self.field, self.matrix).frobenius(-self.twist)

    def image(self) -> Subspace:
        return image(self.field, self.matrix)


def semilinear_power(f: SemilinearMap, n: int) -> SemilinearMap:
    if n < 0:
        raise ValueError("power must be non-negative")
    result = SemilinearMap(f.field, identity(f.matrix.shape[0]), 0)
    for _ in range(n):
        result = f.compose(result)
    return result


def semilinear_adjoint(f: SemilinearMap, gram) -> SemilinearMap:
    """The map z with ``<v, f(w)> = frob(<z(v), w>, twist(f))`` for all v, w.

    ``gram`` pairs the adjoint's space (rows) with ``f``'s space (columns);
    it must be square and invertible.
    """
    F = f.field
    P = np.asarray(gram, dtype=np.int64)
    k = f.twist
    inv_t = inverse(F, P).T
    m = F.matmul(inv_t, F.frob(F.matmul(f.matrix.T, P.T), -k))
    return SemilinearMap(F, m, -k)
