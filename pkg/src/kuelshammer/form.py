"""Bilinear forms on algebras: socle forms, Nakayama automorphisms, symmetric form search."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .algebra import Algebra
from .errors import DegenerateForm, NotMultiplicative, SingularGram, ValidationError
from .linalg import Subspace, inverse, is_invertible, kernel, rank

DEFAULT_SEED = 20240601
EXHAUSTIVE_LIMIT = 1 << 20
RANDOM_TRIALS = 10_000


@dataclass(frozen=True, eq=False)
class BilinearForm:
    """``<x, y> = x^T gram y`` on coordinate vectors."""

    gram: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.gram, dtype=np.int64)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise ValidationError("Gram matrix must be square")
        g.setflags(write=False)
        object.__setattr__(self, "gram", g)

    @property
    def dim(self) -> int:
        return self.gram.shape[0]

    def value(self, A: Algebra, x, y) -> int:
        F = A.field
        return int(F.matmul(F.matmul(np.asarray(x)[None, :], self.gram), np.asarray(y)[:, None])[0, 0])

    def to_json(self) -> list:
        return self.gram.tolist()


@dataclass(frozen=True, eq=False)
class AlgebraAutomorphism:
    """Invertible multiplicative unital map given by its matrix on column vectors."""

    matrix: np.ndarray

    def __call__(self, A: Algebra, x) -> np.ndarray:
        return A.field.matmul(self.matrix, np.asarray(x))


def _check_dim(f: BilinearForm, A: Algebra) -> None:
    if f.dim != A.dim:
        raise ValidationError(f"form of size {f.dim} on an algebra of dimension {A.dim}")


def socle_form(A: Algebra, check: bool = True) -> BilinearForm:
    """``<x, y> = psi(x y)`` with psi summing the coefficients on socle basis paths."""
    paths = A.metadata.get("socle_paths")
    if paths is None:
        raise ValidationError("algebra carries no socle-path metadata")
    F = A.field
    T = A.table
    gram = F.sum(T[:, :, list(paths)], axis=2) if paths else np.zeros((A.dim, A.dim), dtype=np.int64)
    f = BilinearForm(gram)
    if check and not is_invertible(F, gram):
        raise DegenerateForm("socle form is degenerate")
    return f


def is_associative(f: BilinearForm, A: Algebra) -> bool:
    F, d = A.field, A.dim
    T = A.table.reshape(d * d, d)
    lhs = F.matmul(T, f.gram).reshape(d, d * d)  # <b_a b_b, b_c>
    rhs = F.matmul(f.gram, T.T)  # <b_a, b_b b_c>
    return bool(np.array_equal(lhs, rhs))


def form_predicates(f: BilinearForm, A: Algebra) -> dict:
    _check_dim(f, A)
    return {
        "associative": is_associative(f, A),
        "symmetric": bool(np.array_equal(f.gram, f.gram.T)),
        "nondegenerate": is_invertible(A.field, f.gram),
    }


def is_multiplicative(A: Algebra, m: np.ndarray) -> bool:
    """``m(b_i b_j) = m(b_i) m(b_j)`` on all basis pairs and ``m(1) = 1``."""
    F, d = A.field, A.dim
    T = A.table
    lhs = F.matmul(T.reshape(d * d, d), m.T)  # rows: m(b_i b_j)
    P = m.T  # row i: m(b_i)
    X = F.matmul(P, T.reshape(d, d * d)).reshape(d, d, d)
    Y = F.matmul(P, np.ascontiguousarray(X.transpose(1, 0, 2)).reshape(d, d * d))
    rhs = Y.reshape(d, d, d).transpose(1, 0, 2).reshape(d * d, d)
    return bool(np.array_equal(lhs, rhs)) and bool(np.array_equal(F.matmul(m, A.unit), A.unit))


def nakayama(f: BilinearForm, A: Algebra) -> AlgebraAutomorphism:
    """The map with ``<a, b> = <b, nu(a)>``: its matrix is ``G^{-1} G^T``."""
    _check_dim(f, A)
    F = A.field
    try:
        ginv = inverse(F, f.gram)
    except SingularGram:
        raise SingularGram("form is degenerate; no Nakayama automorphism") from None
    m = F.matmul(ginv, f.gram.T)
    if not is_multiplicative(A, m):
        raise NotMultiplicative("Nakayama map is not an algebra automorphism")
    return AlgebraAutomorphism(m)


def twisted_center(A: Algebra, nu: AlgebraAutomorphism) -> Subspace:
    return A.twisted_center(nu.matrix)


# -- symmetric forms -------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class NotSymmetricCertificate:
    """Exhaustive search found no invertible Gram matrix in the solution space."""

    solution_basis: np.ndarray  # rows: Gram matrices flattened
    searched: int


@dataclass(frozen=True, eq=False)
class SearchInconclusive:
    """Random search over a large solution space found no invertible Gram matrix."""

    solution_basis: np.ndarray
    trials: int


def trace_functionals(A: Algebra) -> np.ndarray:
    """Basis (rows) of the functionals vanishing on ``[A, A]``."""
    C = A.commutator_space
    if C.dim == 0:
        return np.eye(A.dim, dtype=np.int64)
    return kernel(A.field, C.basis).basis


def gram_of_functional(A: Algebra, lam) -> np.ndarray:
    """Gram matrix of ``<x, y> = lam(x y)``."""
    d = A.dim
    return A.field.matmul(A.table.reshape(d * d, d), np.asarray(lam)[:, None]).reshape(d, d)


def symmetric_form_space(A: Algebra) -> np.ndarray:
    """Basis (rows, flattened Gram matrices) of all symmetric associative forms.

    Associativity forces ``<x, y> = <1, x y>``, and symmetry then says the
    functional ``<1, ->`` kills every commutator; conversely each such
    functional gives a symmetric associative form.
    """
    lams = trace_functionals(A)
    return np.stack([gram_of_functional(A, lam).ravel() for lam in lams]) if len(lams) else np.zeros((0, A.dim * A.dim), dtype=np.int64)


def find_symmetric_form(A: Algebra, seed: int = DEFAULT_SEED):
    """A symmetric associative nondegenerate form, or why none was found.

    Returns a :class:`BilinearForm`, a :class:`NotSymmetricCertificate`
    (exhaustive search, so no such form exists over this field) or
    :class:`SearchInconclusive`.
    """
    F, d = A.field, A.dim
    lams = trace_functionals(A)
    basis = symmetric_form_space(A)
    m = len(lams)
    if m == 0:
        return NotSymmetricCertificate(basis, 0)
    size = F.q ** m

    def try_coeffs(c):
        lam = F.sum(F.mul(np.asarray(c, dtype=np.int64)[:, None], lams), axis=0)
        g = gram_of_functional(A, lam)
        return g if rank(F, g) == d else None

    if size <= EXHAUSTIVE_LIMIT:
        # single basis functionals first, then everything else in lexicographic order
        units = [tuple(int(i == j) for j in range(m)) for i in range(m)]
        rest = (c for c in itertools.product(range(F.q), repeat=m) if any(c) and c not in units)
        count = 0
        for c in itertools.chain(units, rest):
            count += 1
            g = try_coeffs(c)
            if g is not None:
                return BilinearForm(g)
        return NotSymmetricCertificate(basis, count)
    rng = np.random.default_rng(seed)
    for _ in range(RANDOM_TRIALS):
        g = try_coeffs(F.random(rng, m))
        if g is not None:
            return BilinearForm(g)
    return SearchInconclusive(basis, RANDOM_TRIALS)


def brute_force_symmetric_form_space(A: Algebra) -> Subspace:
    """All symmetric Gram matrices satisfying ``<b_a b_b, b_c> = <b_a, b_b b_c>``.

    Solves the linear system in the d^2 Gram entries directly; used as a
    cross-check for :func:`symmetric_form_space` on small algebras.
    """
    F, d = A.field, A.dim
    T = A.table
    rows = []
    for i in range(d):
        for j in range(i + 1, d):
            r = np.zeros(d * d, dtype=np.int64)
            r[i * d + j] = 1
            r[j * d + i] = F.neg(1)
            rows.append(r)
    for a, b, c in itertools.product(range(d), repeat=3):
        r = np.zeros(d * d, dtype=np.int64)
        # sum_k T[a,b,k] G[k,c] - sum_k T[b,c,k] G[a,k]
        for k in range(d):
            r[k * d + c] = F.add(r[k * d + c], T[a, b, k])
            r[a * d + k] = F.sub(r[a * d + k], T[b, c, k])
        rows.append(r)
    return kernel(F, np.stack(rows))
