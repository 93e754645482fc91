from __future__ import annotations

import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import all_vectors, brute_span, dual_numbers, local_square_zero, matrix_units, product_of_fields, truncated
from kuelshammer import instantiate
from kuelshammer.errors import InternalInvariantError, SearchBoundExceeded
from kuelshammer.field import Field
from kuelshammer.form import form_predicates
from kuelshammer.linalg import Subspace, rank
from kuelshammer.presentation import Quiver, Relation, quotient_algebra, trivial_extension
from kuelshammer.tower import (
    CommutatorQuotient,
    check_tower,
    iso_search_local,
    kuelshammer_ideals,
    mu_map,
    quotient_ring,
    reynolds_ideal,
    reynolds_routes,
    ring_fingerprint,
    t_spaces,
    trivial_extension_center,
    trivial_extension_tower,
    zeta_map,
)

F2, F3, F4 = Field(2), Field(3), Field.gf(4)


def as_set(sub: Subspace) -> set:
    return brute_span(sub.field, list(sub.basis), sub.ambient_dim)


def naive_power(A, a, k):
    out = A.unit.copy()
    for _ in range(k):
        out = A.multiply(out, a)
    return out


def brute_commutators(A) -> set:
    F = A.field
    rows = []
    for i, j in itertools.combinations(range(A.dim), 2):
        x, y = A.basis_vector(i), A.basis_vector(j)
        rows.append(F.sub(A.multiply(x, y), A.multiply(y, x)))
    return brute_span(F, rows, A.dim)


def brute_T(A, n) -> set:
    """Every a in A whose p^n-th power is a sum of commutators."""
    C = brute_commutators(A)
    k = A.field.p ** n
    return {tuple(int(x) for x in a) for a in all_vectors(A.field, A.dim) if tuple(int(x) for x in naive_power(A, a, k)) in C}


def instance(name, field=F2):
    return instantiate(name, field=field)


SMALL = [
    ("dual/GF2", lambda: dual_numbers(F2)),
    ("x^4/GF2", lambda: truncated(F2, 4)),
    ("x^3/GF3", lambda: truncated(F3, 3)),
    ("M2/GF2", lambda: matrix_units(F2, 2)),
    ("S3/GF2", lambda: instance("S[n=3]").algebra),
    ("S3/GF3", lambda: instance("S[n=3]", F3).algebra),
    ("C4/GF2", lambda: instance("C[n=4]").algebra),
    ("D1A1/GF2", lambda: instance("D1A1[k=2]").algebra),
    ("Aq/GF3", lambda: instance("Aq[q=2]", F3).algebra),
    ("PathA3/GF2", lambda: instance("PathA[n=3]").algebra),
    ("Ln2/GF2", lambda: instance("Ln[n=2,j=1]").algebra),
]


@pytest.mark.parametrize("make", [m for _, m in SMALL], ids=[i for i, _ in SMALL])
def test_t_spaces_match_enumeration(make):
    A = make()
    tower = t_spaces(A, depth=3)
    assert as_set(tower.T[0]) == brute_commutators(A)
    for n in (1, 2):
        assert as_set(tower.T[n]) == brute_T(A, n)


SYMMETRIC = [("Trunc[n=4]", F2), ("Trunc[n=3]", F3), ("S[n=3]", F2), ("S[n=3]", F3), ("C[n=4]", F2), ("D1A1[k=2]", F2), ("Ln[n=2,j=1]", F2)]


@pytest.mark.parametrize("name,field", SYMMETRIC)
def test_perp_matches_enumeration(name, field):
    inst = instance(name, field)
    A, f = inst.algebra, inst.form
    tower = kuelshammer_ideals(A, f, depth=2)
    for n in (0, 1, 2):
        Tn = tower.T[n]
        brute = {
            tuple(int(x) for x in z)
            for z in all_vectors(A.field, A.dim)
            if all(f.value(A, z, t) == 0 for t in Tn.basis)
        }
        assert as_set(tower.perp[n]) == brute
        assert tower.perp[n] == tower.zeta_route[n]


def test_dual_numbers_mu_and_tower():
    A = dual_numbers(F2)
    cq = CommutatorQuotient.of(A)
    assert cq.dim == 2
    mu = mu_map(cq)
    # 1 -> 1 and x -> x^2 = 0
    assert mu.matrix.tolist() == [[1, 0], [0, 0]]
    tower = t_spaces(A)
    assert [T.dim for T in tower.T] == [0, 1, 1]
    assert tower.stabilization == 1
    assert tower.TA == A.radical


def test_truncated_tower_grows_one_level_at_a_time():
    # a = sum a_i x^i over GF(2): a^2 = a_0 + a_1 x^2, a^4 = a_0
    tower = t_spaces(truncated(F2, 4))
    assert [T.dim for T in tower.T] == [0, 2, 3, 3]
    assert tower.stabilization == 2


def test_matrix_algebra_tower_is_constant():
    A = matrix_units(F2, 2)
    tower = t_spaces(A, depth=2)
    assert tower.T[0].dim == 3  # trace zero matrices
    assert tower.stabilization == 0
    assert all(T == tower.T[0] for T in tower.T)


def test_semisimple_commutative_tower_is_zero():
    tower = t_spaces(product_of_fields(F3, 3), depth=2)
    assert all(T.dim == 0 for T in tower.T)


@pytest.mark.parametrize("name,field", SYMMETRIC + [("Trunc[n=3]", F4), ("S[n=3]", F4)])
def test_zeta_is_adjoint_of_power_map(name, field):
    inst = instance(name, field)
    A, f = inst.algebra, inst.form
    F = A.field
    zeta = zeta_map(A, f)
    Z = A.center
    rng = np.random.default_rng(7)
    for _ in range(6):
        c = F.random(rng, Z.dim)
        z = F.matmul(c[None, :], Z.basis)[0]
        zz = F.matmul(zeta(c)[None, :], Z.basis)[0]
        for i in range(A.dim):
            a = A.basis_vector(i)
            assert F.power(f.value(A, zz, a), F.p) == f.value(A, z, naive_power(A, a, F.p))


@pytest.mark.parametrize("name,field", [("S[n=3]", F2), ("S[n=3]", F3), ("C[n=4]", F2), ("C[n=6]", F3)])
def test_reynolds_routes_agree(name, field):
    inst = instance(name, field)
    routes = reynolds_routes(inst.algebra, inst.group)
    assert len({r.dim for r in routes.values()}) == 1
    first = routes["center_cap_socle"]
    assert all(r == first for r in routes.values())


@pytest.mark.parametrize("name,field", SYMMETRIC)
def test_stable_perp_is_reynolds_ideal(name, field):
    inst = instance(name, field)
    tower = kuelshammer_ideals(inst.algebra, inst.form)
    assert tower.perp[tower.stabilization] == reynolds_ideal(inst.algebra)


def test_check_tower_rejects_tampering():
    inst = instance("D1A1[k=2]")
    tower = kuelshammer_ideals(inst.algebra, inst.form, depth=2)
    tower.perp = list(reversed(tower.perp))
    with pytest.raises(InternalInvariantError):
        check_tower(inst.algebra, tower)


def test_truncated_quotient_ring():
    inst = instance("Trunc[n=2]")
    A = inst.algebra
    tower = kuelshammer_ideals(A, inst.form, depth=1)
    # <1, x> = 1 and <x, x> = 0, so T_1^perp = span(x)
    assert tower.perp[1].dim == 1
    Q = quotient_ring(A, A.center, tower.perp[1])
    assert Q.dim == 1
    fp = ring_fingerprint(Q)
    assert fp["radical_power_dims"] == [0]
    assert fp["idempotent_count"] == 2


def _two_loop_commutative(F, extra, bound=3):
    q = Quiver(1, (("x", 0, 0), ("y", 0, 0)))
    rels = [Relation.of((1, "x y"), (F.neg(1), "y x"))] + extra
    return quotient_algebra(q, rels, F, bound).algebra


def exterior_like(F):
    """K[x, y]/(x^2, y^2)."""
    return _two_loop_commutative(F, [Relation.of((1, "x x")), Relation.of((1, "y y"))])


def split_square(F):
    """K[x, y]/(xy, x^2 - y^2)."""
    return _two_loop_commutative(F, [Relation.of((1, "x y")), Relation.of((1, "x x"), (F.neg(1), "y y"))])


def assert_ring_isomorphism(Q1, Q2, M):
    F = Q1.field
    assert rank(F, M) == Q1.dim
    assert np.array_equal(F.matmul(M, Q1.unit), Q2.unit)
    for i, j in itertools.product(range(Q1.dim), repeat=2):
        x, y = Q1.basis_vector(i), Q1.basis_vector(j)
        assert np.array_equal(F.matmul(M, Q1.multiply(x, y)), Q2.multiply(F.matmul(M, x), F.matmul(M, y)))


@pytest.mark.parametrize("make", [lambda: truncated(F2, 4), lambda: exterior_like(F2), lambda: split_square(F3), lambda: truncated(F4, 3)])
def test_iso_search_finds_identity_class(make):
    Q = make()
    rnd = random.Random(3)
    F, d = Q.field, Q.dim
    # rebase while keeping the unit as first basis vector
    while True:
        P = np.array([[rnd.randrange(F.q) for _ in range(d)] for _ in range(d)], dtype=np.int64)
        P[0] = Q.unit
        if rank(F, P) == d:
            break
    R = Q.change_basis(P)
    ok, M = iso_search_local(Q, R)
    assert ok
    assert_ring_isomorphism(Q, R, M)
    assert ring_fingerprint(Q) == ring_fingerprint(R)


def test_iso_search_negative_cases():
    assert iso_search_local(dual_numbers(F2), product_of_fields(F2, 2)) == (False, "exactly one ring is local")
    ok, why = iso_search_local(truncated(F2, 3), local_square_zero(F2))
    assert not ok and why == "embedding dimensions differ"
    # same dimensions and embedding dimension; squares vanish only in the first
    ok, _ = iso_search_local(exterior_like(F2), split_square(F2))
    assert not ok
    # hyperbolic versus anisotropic quadratic part over GF(3)
    ok, _ = iso_search_local(exterior_like(F3), split_square(F3))
    assert not ok
    with pytest.raises(SearchBoundExceeded):
        iso_search_local(truncated(F2, 9), truncated(F2, 9))


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["x^4", "ext", "split", "Z/T1 D1A1"]), st.integers(0, 2**32 - 1))
def test_fingerprint_is_basis_independent(which, seed):
    if which == "x^4":
        Q = truncated(F2, 4)
    elif which == "ext":
        Q = exterior_like(F3)
    elif which == "split":
        Q = split_square(F2)
    else:
        inst = instance("D1A1[k=3]")
        A = inst.algebra
        Q = quotient_ring(A, A.center, kuelshammer_ideals(A, inst.form, 1).perp[1])
    rnd = random.Random(seed)
    F, d = Q.field, Q.dim
    while True:
        P = np.array([[rnd.randrange(F.q) for _ in range(d)] for _ in range(d)], dtype=np.int64)
        if rank(F, P) == d:
            break
    assert ring_fingerprint(Q.change_basis(P)) == ring_fingerprint(Q)


def test_d2b_scalar_pair_quotients_are_isomorphic():
    k = 2
    rings = []
    for c in (0, 1):
        inst = instance(f"D2B[k={k},s=3,c={c}]")
        A = inst.algebra
        rings.append(quotient_ring(A, A.center, kuelshammer_ideals(A, inst.form, 1).perp[1]))
    ok, M = iso_search_local(*rings)
    assert ok
    assert_ring_isomorphism(rings[0], rings[1], M)


@pytest.mark.parametrize("make", [lambda: dual_numbers(F2), lambda: local_square_zero(F2), lambda: instance("PathA[n=2]").algebra,
                                  lambda: instance("Aq[q=2]", F3).algebra, lambda: truncated(F3, 3)])
def test_trivial_extension_tower_identities(make):
    A = make()
    te = trivial_extension_tower(A, depth=2)
    assert te.matches
    TA, form = trivial_extension(A)
    assert all(form_predicates(form, TA).values())
    assert TA.center == trivial_extension_center(A)
    # level zero is the whole centre of the extension
    assert te.tower.perp[0] == TA.center

