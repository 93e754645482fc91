"""Kuelshammer ideals: the p-power map on A/[A,A], the spaces T_n, their orthogonals.

Also quotient rings ``Z(A)/T_n(A)^perp``, ring fingerprints and an exact
isomorphism search for small commutative local rings.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .algebra import Algebra
from .errors import (
    InternalInvariantError,
    NotSymmetric,
    RouteMismatch,
    SearchBoundExceeded,
    ValidationError,
)
from .form import BilinearForm
from .linalg import SemilinearMap, Subspace, inverse, rank, semilinear_adjoint, semilinear_power

DEPTH_CAP = 16


@dataclass(frozen=True, eq=False)
class CommutatorQuotient:
    """``A / [A, A]`` with coset representatives at the non-pivot coordinates."""

    algebra: Algebra
    commutator: Subspace
    reps: tuple[int, ...]
    projection: np.ndarray  # m x d

    @classmethod
    def of(cls, A: Algebra) -> "CommutatorQuotient":
        C = A.commutator_space
        reps = tuple(C.complement_indices())
        proj = C.reduce(np.eye(A.dim, dtype=np.int64))[:, list(reps)].T
        cq = cls(A, C, reps, np.ascontiguousarray(proj))
        if len(reps) + C.dim != A.dim:
            raise InternalInvariantError("complement and commutator do not add up to A")
        return cq

    @property
    def dim(self) -> int:
        return len(self.reps)

    def project(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=np.int64)
        return self.algebra.field.matmul(v, self.projection.T)

    def lift(self, coords) -> np.ndarray:
        coords = np.asarray(coords, dtype=np.int64)
        out = np.zeros(coords.shape[:-1] + (self.algebra.dim,), dtype=np.int64)
        out[..., list(self.reps)] = coords
        return out

    def lift_subspace(self, sub: Subspace) -> Subspace:
        """Preimage of a subspace of the quotient."""
        A = self.algebra
        rows = self.lift(sub.basis) if sub.dim else np.zeros((0, A.dim), dtype=np.int64)
        return self.commutator.sum(Subspace.span(A.field, rows, A.dim))


def mu_map(cq: CommutatorQuotient) -> SemilinearMap:
    """``a + [A,A] -> a^p + [A,A]`` on the quotient coordinates (twist 1)."""
    A = cq.algebra
    p = A.field.p
    if cq.dim == 0:
        return SemilinearMap(A.field, np.zeros((0, 0), dtype=np.int64), 1)
    powers = np.stack([A.power(A.basis_vector(c), p) for c in cq.reps])
    return SemilinearMap(A.field, cq.project(powers).T, 1)


@dataclass
class KuelshammerTower:
    algebra: Algebra
    T: list  # Subspace of A per level
    stabilization: int
    perp: list | None = None  # Subspace of A per level, inside Z(A)
    zeta_route: list | None = None

    @property
    def TA(self) -> Subspace:
        return self.T[self.stabilization]

    def depth(self) -> int:
        return len(self.T) - 1


def t_spaces(A: Algebra, depth: int | None = None, cq: CommutatorQuotient | None = None) -> KuelshammerTower:
    """``T_n = {a : a^(p^n) in [A,A]}`` for n = 0.. until stable (and at least to ``depth``)."""
    cq = cq or CommutatorQuotient.of(A)
    mu = mu_map(cq)
    T = [cq.commutator]
    stab = None
    n = 0
    power = SemilinearMap(A.field, np.eye(cq.dim, dtype=np.int64), 0)
    while True:
        if stab is not None and (depth is None or n >= depth):
            break
        if n >= DEPTH_CAP and stab is None:
            raise InternalInvariantError("T_n did not stabilise below the depth cap")
        n += 1
        power = mu.compose(power)
        T.append(cq.lift_subspace(power.kernel()) if cq.dim else cq.commutator)
        if stab is None and T[n] == T[n - 1]:
            stab = n - 1
    for a, b in zip(T, T[1:]):
        if not b.contains(a):
            raise InternalInvariantError("T_n is not ascending")
    return KuelshammerTower(A, T, stab)


def center_pairing(A: Algebra, form: BilinearForm, cq: CommutatorQuotient) -> np.ndarray:
    """``P[i, c] = <z_i, b_c>`` for the centre basis z_i and representatives b_c."""
    Z = A.center
    F = A.field
    return F.matmul(F.matmul(Z.basis, form.gram), np.eye(A.dim, dtype=np.int64)[:, list(cq.reps)])


def zeta_map(A: Algebra, form: BilinearForm, cq: CommutatorQuotient | None = None) -> SemilinearMap:
    """Adjoint of the p-power map: ``<zeta(z), a>^p = <z, a^p>`` on Z(A) coordinates."""
    if not np.array_equal(form.gram, form.gram.T):
        raise NotSymmetric("the adjoint needs a symmetric form")
    cq = cq or CommutatorQuotient.of(A)
    P = center_pairing(A, form, cq)
    if P.shape[0] != P.shape[1]:
        raise NotSymmetric("dim Z(A) differs from dim A/[A,A]")
    return semilinear_adjoint(mu_map(cq), P)


def _center_coords_to_A(A: Algebra, sub: Subspace) -> Subspace:
    if sub.dim == 0:
        return Subspace.zero(A.field, A.dim)
    return Subspace.span(A.field, A.field.matmul(sub.basis, A.center.basis), A.dim)


def kuelshammer_ideals(A: Algebra, form: BilinearForm, depth: int | None = None) -> KuelshammerTower:
    """``T_n(A)^perp`` by orthogonality and, independently, as ``im(zeta^n)``."""
    cq = CommutatorQuotient.of(A)
    tower = t_spaces(A, depth, cq)
    Z = A.center
    zeta = zeta_map(A, form, cq)
    perp, via_zeta = [], []
    for n, Tn in enumerate(tower.T):
        orth = Tn.orthogonal(form.gram).intersect(Z)
        img = _center_coords_to_A(A, semilinear_power(zeta, n).image()) if Z.dim else Subspace.zero(A.field, A.dim)
        if orth != img:
            raise RouteMismatch(f"T_{n}^perp: orthogonal route has dim {orth.dim}, zeta route {img.dim}")
        perp.append(orth)
        via_zeta.append(img)
    tower.perp = perp
    tower.zeta_route = via_zeta
    check_tower(A, tower)
    return tower


def check_tower(A: Algebra, tower: KuelshammerTower) -> None:
    """Chain, ideal and endpoint properties of a computed tower."""
    Z = A.center
    if tower.TA != A.radical.sum(A.commutator_space):
        raise InternalInvariantError("T(A) differs from rad(A) + [A,A]")
    if tower.perp is None:
        return
    if tower.perp[0] != Z:
        raise InternalInvariantError("T_0^perp differs from Z(A)")
    for a, b in zip(tower.perp, tower.perp[1:]):
        if not a.contains(b):
            raise InternalInvariantError("T_n^perp is not descending")
    for I in tower.perp:
        if I.dim == 0:
            continue
        for z in Z.basis:
            if not I.contains(I.map(A.left_matrix(z))):
                raise InternalInvariantError("T_n^perp is not an ideal of Z(A)")
    if tower.perp[tower.stabilization] != reynolds_ideal(A):
        raise InternalInvariantError("stable T_n^perp differs from Z(A) cap soc(A)")


def reynolds_ideal(A: Algebra) -> Subspace:
    return A.center.intersect(A.socle)


def reynolds_routes(A: Algebra, group=None) -> dict:
    """The Reynolds ideal by every available route (group sums only for group algebras)."""
    from .presentation import reynolds_class_sums

    Z = A.center
    out = {
        "center_cap_socle": Z.intersect(A.socle),
        "center_annihilator_of_radical": A.annihilator_in(Z, A.radical),
    }
    if group is not None:
        out["section_sums"] = reynolds_class_sums(group, A.field)
    return out


def quotient_ring(A: Algebra, Z: Subspace, I: Subspace) -> Algebra:
    """``Z / I`` for a unital subalgebra Z (usually the centre) and an ideal I."""
    Q = A.subquotient(Z, I)
    if Q.dim and not Q.is_commutative():
        raise ValidationError("quotient ring is not commutative")
    return Q


# -- fingerprints -------------------------------------------------------------------


FINGERPRINT_COMPONENTS = (
    "dim",
    "radical_power_dims",
    "frobenius_on_ring",
    "frobenius_on_radical",
    "frobenius_on_radical_squared",
    "idempotent_count",
)

IDEMPOTENT_LIMIT = 1 << 16


def _frobenius_dims(Q: Algebra, sub: Subspace) -> tuple[int, int]:
    """(kernel dim, image dim) of x -> x^p restricted to a subspace of commutative Q."""
    if sub.dim == 0:
        return (0, 0)
    p = Q.field.p
    imgs = np.stack([Q.power(v, p) for v in sub.basis])
    r = rank(Q.field, imgs)
    return (sub.dim - r, r)


def count_idempotents(Q: Algebra) -> int | None:
    F, d = Q.field, Q.dim
    total = F.q ** d
    if total > IDEMPOTENT_LIMIT:
        return None
    if d == 0:
        return 1
    count = 0
    T = Q.table.reshape(d, d * d)
    elems = np.array(list(itertools.product(range(F.q), repeat=d)), dtype=np.int64)
    for chunk in np.array_split(elems, max(1, len(elems) // 4096)):
        xt = F.matmul(chunk, T).reshape(len(chunk), d, d)  # sum_i x_i T[i, j, k]
        sq = F.sum(F.mul(chunk[:, :, None], xt), axis=1)
        count += int(np.sum(np.all(sq == chunk, axis=1)))
    return count


def ring_fingerprint(Q: Algebra) -> dict:
    """Ring-isomorphism invariants of a commutative algebra in characteristic p."""
    if Q.dim and not Q.is_commutative():
        raise ValidationError("fingerprints are defined for commutative rings")
    if Q.dim == 0:
        return {"dim": 0, "radical_power_dims": [], "frobenius_on_ring": [0, 0],
                "frobenius_on_radical": [0, 0], "frobenius_on_radical_squared": [0, 0],
                "idempotent_count": 1}
    F = Q.field
    powers = Q.radical_powers()
    rad = powers[0]
    rad2 = powers[1] if len(powers) > 1 else Subspace.zero(F, Q.dim)
    return {
        "dim": Q.dim,
        "radical_power_dims": [s.dim for s in powers],
        "frobenius_on_ring": list(_frobenius_dims(Q, Subspace.full(F, Q.dim))),
        "frobenius_on_radical": list(_frobenius_dims(Q, rad)),
        "frobenius_on_radical_squared": list(_frobenius_dims(Q, rad2)),
        "idempotent_count": count_idempotents(Q),
    }


def fingerprint_difference(f1: dict, f2: dict) -> tuple[int, str] | None:
    """First differing component as (1-based index, name), or None."""
    for k, name in enumerate(FINGERPRINT_COMPONENTS, 1):
        if f1.get(name) != f2.get(name):
            return k, name
    return None


# -- isomorphism search ------------------------------------------------------------------

SEARCH_MAX_DIM = 8
SEARCH_MAX_FIELD = 4
DEFAULT_NODE_BUDGET = 200_000


@dataclass
class _Monomial:
    exps: tuple[int, ...]
    parent: int  # index of parent monomial, -1 for 1
    gen: int  # generator appended to the parent
    value: np.ndarray


def _is_local(Q: Algebra) -> bool:
    return Q.dim > 0 and Q.radical.dim == Q.dim - 1


def _generators_mod_rad2(Q: Algebra) -> list[np.ndarray]:
    powers = Q.radical_powers()
    rad = powers[0]
    rad2 = powers[1] if len(powers) > 1 else Subspace.zero(Q.field, Q.dim)
    gens, span = [], rad2
    for v in rad.basis:
        if not span.contains_vector(v):
            gens.append(v)
            span = span.sum(Subspace.span(Q.field, v[None, :], Q.dim))
    return gens


def _monomial_basis(Q: Algebra, gens) -> list[_Monomial]:
    F, d = Q.field, Q.dim
    r = len(gens)
    monos = [_Monomial((0,) * r, -1, -1, Q.unit.copy())]
    span = Subspace.span(F, Q.unit[None, :], d)
    frontier = [0]
    while span.dim < d and frontier:
        nxt = []
        for m in frontier:
            for g in range(r):
                val = Q.multiply(monos[m].value, gens[g])
                if span.contains_vector(val):
                    continue
                exps = list(monos[m].exps)
                exps[g] += 1
                monos.append(_Monomial(tuple(exps), m, g, val))
                span = span.sum(Subspace.span(F, val[None, :], d))
                nxt.append(len(monos) - 1)
        frontier = nxt
    if span.dim < d:
        raise InternalInvariantError("generators do not generate the local ring")
    return monos


def iso_search_local(Q1: Algebra, Q2: Algebra, budget: int = DEFAULT_NODE_BUDGET):
    """Decide ``Q1 ~= Q2`` for small commutative local rings.

    Returns ``(True, matrix)`` with the isomorphism's matrix on column
    vectors, or ``(False, reason)``.
    """
    Q1.field.check_same(Q2.field)
    F = Q1.field
    if Q1.dim > SEARCH_MAX_DIM or Q2.dim > SEARCH_MAX_DIM or F.q > SEARCH_MAX_FIELD:
        raise SearchBoundExceeded("local isomorphism search is limited to dim <= 8 over fields of size <= 4")
    if Q1.dim != Q2.dim:
        return False, "dimensions differ"
    if not (_is_local(Q1) and _is_local(Q2)):
        if _is_local(Q1) != _is_local(Q2):
            return False, "exactly one ring is local"
        if Q1.dim == 0:
            return True, np.zeros((0, 0), dtype=np.int64)
        raise SearchBoundExceeded("search handles local rings only")
    for Q in (Q1, Q2):
        if not Q.is_commutative():
            raise ValidationError("search handles commutative rings only")
    d = Q1.dim
    gens = _generators_mod_rad2(Q1)
    r = len(gens)
    p2 = Q2.radical_powers()
    rad2_2 = p2[1] if len(p2) > 1 else Subspace.zero(F, d)
    if p2[0].dim - rad2_2.dim != r:
        return False, "embedding dimensions differ"
    monos = _monomial_basis(Q1, gens)
    basis1 = np.stack([m.value for m in monos])  # rows
    # relations: monomial m times generator g equals a combination of monomials
    B1inv = inverse(F, basis1.T)  # coords = B1inv @ v
    checks = [[] for _ in range(r)]  # per level: (m, g, coeffs)
    level_of = [max([i for i, e in enumerate(m.exps) if e] or [-1]) for m in monos]
    for mi, m in enumerate(monos):
        for g in range(r):
            coeffs = F.matmul(B1inv, Q1.multiply(m.value, gens[g]))
            need = max([level_of[mi], g] + [level_of[k] for k in np.flatnonzero(coeffs)])
            checks[need].append((mi, g, coeffs))
    # candidates: elements of rad(Q2) outside rad^2(Q2)
    rad_2 = p2[0]
    cands = []
    for c in itertools.product(range(F.q), repeat=rad_2.dim):
        v = F.sum(F.mul(np.asarray(c, dtype=np.int64)[:, None], rad_2.basis), axis=0) if rad_2.dim else np.zeros(d, dtype=np.int64)
        if not rad2_2.contains_vector(v):
            cands.append(v)
    nodes = 0
    images = [np.zeros(d, dtype=np.int64) for _ in monos]
    images[0] = Q2.unit.copy()
    chosen: list = []

    def assign(level: int) -> bool:
        nonlocal nodes
        if level == r:
            M = np.stack(images).T  # columns: images of the monomial basis
            if rank(F, M) != d:
                return False
            return True
        for h in cands:
            nodes += 1
            if nodes > budget:
                raise SearchBoundExceeded(f"isomorphism search exceeded {budget} nodes")
            span = Subspace.span(F, np.vstack([rad2_2.basis] + [x[None, :] for x in chosen] + [h[None, :]]), d)
            if span.dim != rad2_2.dim + level + 1:
                continue
            chosen.append(h)
            for mi, m in enumerate(monos):
                if mi and level_of[mi] == level:
                    images[mi] = Q2.multiply(images[m.parent], chosen[m.gen])
            ok = True
            for mi, g, coeffs in checks[level]:
                lhs = Q2.multiply(images[mi], chosen[g])
                rhs = F.sum(F.mul(coeffs[:, None], np.stack(images)), axis=0) if np.any(coeffs) else np.zeros(d, dtype=np.int64)
                if not np.array_equal(lhs, rhs):
                    ok = False
                    break
            if ok and assign(level + 1):
                return True
            chosen.pop()
        return False

    # monomials at a level only depend on generators up to that level
    for mi, m in enumerate(monos):
        if mi and m.parent >= 0 and level_of[m.parent] > level_of[mi]:
            raise InternalInvariantError("monomial ordering broke the level structure")
    if assign(0):
        M = np.stack(images).T
        iso = F.matmul(M, B1inv)  # Q1 coordinates -> Q2 coordinates
        return True, iso
    return False, "exhaustive search found no isomorphism"


# -- trivial extension route ---------------------------------------------------------


@dataclass
class TrivialExtensionTower:
    """``T_n(T A)^perp`` inside the trivial extension, next to ``Ann(T_n A) x 0``."""

    extension: Algebra
    form: BilinearForm
    tower: KuelshammerTower
    annihilators: list  # Subspace of T(A) per level

    @property
    def matches(self) -> bool:
        """Agreement for n >= 1 (at n = 0 the left side is all of Z(T A))."""
        return all(a == b for a, b in zip(self.tower.perp[1:], self.annihilators[1:]))


def annihilator_times_zero(A: Algebra, sub: Subspace) -> Subspace:
    """``{(f, 0) : f(sub) = 0}`` in the trivial extension coordinates (duals first)."""
    from .linalg import kernel

    F, d = A.field, A.dim
    funcs = kernel(F, sub.basis).basis if sub.dim else np.eye(d, dtype=np.int64)
    rows = np.zeros((len(funcs), 2 * d), dtype=np.int64)
    rows[:, :d] = funcs
    return Subspace.span(F, rows, 2 * d)


def trivial_extension_tower(A: Algebra, depth: int | None = None) -> TrivialExtensionTower:
    """Kuelshammer ideals of ``T(A)`` compared with the annihilators of ``T_n(A)``."""
    from .presentation import trivial_extension

    TA, form = trivial_extension(A)
    own = t_spaces(A, depth)
    tower = kuelshammer_ideals(TA, form, max(depth or 0, own.depth()))
    n = min(len(tower.T), len(own.T))
    tower.T, tower.perp, tower.zeta_route = tower.T[:n], tower.perp[:n], tower.zeta_route[:n]
    anns = [annihilator_times_zero(A, T) for T in own.T[:n]]
    return TrivialExtensionTower(TA, form, tower, anns)


def trivial_extension_center(A: Algebra) -> Subspace:
    """``Ann([A,A]) x Z(A)`` in trivial extension coordinates."""
    F, d = A.field, A.dim
    ann = annihilator_times_zero(A, A.commutator_space)
    Z = A.center
    rows = np.zeros((Z.dim, 2 * d), dtype=np.int64)
    rows[:, d:] = Z.basis
    return ann.sum(Subspace.span(F, rows, 2 * d))
