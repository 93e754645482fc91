"""Invariants of stable equivalences of Morita type."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .algebra import Algebra
from .errors import InternalInvariantError
from .linalg import Subspace, kernel, rank
from .tower import CommutatorQuotient, reynolds_ideal


@dataclass(frozen=True)
class StableInvariants:
    cartan_rank_over_K: int
    dim_Z_pr: int | None  # only defined through the rank formula when symmetric
    dim_Z_st: int | None
    dim_HH0_st: int
    dim_commutator_quotient: int

    def to_json(self) -> dict:
        return asdict(self)


def cartan_rank(A: Algebra) -> int:
    """Rank of the Cartan matrix with entries read in the ground field."""
    C = A.cartan_matrix()
    F = A.field
    return rank(F, np.asarray(C) % F.p)  # integers embed through the prime field


def dim_projective_center(A: Algebra) -> int:
    """``dim Z^pr(A)`` for a basic split symmetric algebra, via the Cartan rank."""
    return cartan_rank(A)


def trace_functionals(A: Algebra, cq: CommutatorQuotient) -> np.ndarray:
    """Row i: ``a -> trace(left multiplication by a on A e_i)`` on quotient coordinates."""
    F, d = A.field, A.dim
    rows = []
    for v in A.vertices:
        Ae = Subspace.span(F, A.right_basis_matrices[v].T, d)  # rows span A e_v
        piv = list(Ae.pivots)
        # trace(L_a | Ae) = sum_r (L_a w_r)[pivot_r]; linear in a = b_c
        L = A.left_basis_matrices[list(cq.reps)] if cq.dim else np.zeros((0, d, d), dtype=np.int64)
        vals = []
        for Lc in L:
            images = F.matmul(Ae.basis, Lc.T)  # rows L_c w_r
            vals.append(F.sum(images[np.arange(Ae.dim), piv]) if Ae.dim else 0)
        rows.append(np.asarray(vals, dtype=np.int64))
        # the functional must vanish on commutators
        for c in A.commutator_space.basis:
            tr = F.sum(F.matmul(Ae.basis, A.left_matrix(c).T)[np.arange(Ae.dim), piv]) if Ae.dim else 0
            if int(tr) != 0:
                raise InternalInvariantError("trace functional does not vanish on [A,A]")
    return np.stack(rows) if rows else np.zeros((0, cq.dim), dtype=np.int64)


def hh0_stable(A: Algebra, cq: CommutatorQuotient | None = None) -> Subspace:
    """Common kernel of the projective trace functionals, inside A/[A,A]."""
    cq = cq or CommutatorQuotient.of(A)
    tau = trace_functionals(A, cq)
    if cq.dim == 0:
        return Subspace.zero(A.field, 0)
    return kernel(A.field, tau)


def stable_invariants(A: Algebra, symmetric: bool = True) -> StableInvariants:
    cq = CommutatorQuotient.of(A)
    r = cartan_rank(A)
    hh0 = hh0_stable(A, cq).dim
    if hh0 + r != cq.dim:
        raise InternalInvariantError(
            f"dim HH0_st ({hh0}) + Cartan rank ({r}) != dim A/[A,A] ({cq.dim})"
        )
    if not symmetric:
        return StableInvariants(r, None, None, hh0, cq.dim)
    z_pr = dim_projective_center(A)
    if z_pr > reynolds_ideal(A).dim:
        raise InternalInvariantError("dim Z^pr exceeds dim Z(A) cap soc(A)")
    return StableInvariants(r, z_pr, A.center.dim - z_pr, hh0, cq.dim)
