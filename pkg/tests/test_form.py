from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import all_vectors, dual_numbers, local_square_zero, matrix_units, product_of_fields, truncated
from kuelshammer import instantiate
from kuelshammer.errors import SingularGram, ValidationError
from kuelshammer.field import Field
from kuelshammer.form import (
    BilinearForm,
    NotSymmetricCertificate,
    brute_force_symmetric_form_space,
    find_symmetric_form,
    form_predicates,
    is_multiplicative,
    nakayama,
    socle_form,
    symmetric_form_space,
    twisted_center,
)
from kuelshammer.linalg import Subspace, is_invertible

F2, F3 = Field(2), Field(3)


def brute_twisted_center(A, nu):
    """Enumerate A and keep the a with b a = a nu(b) on every basis vector b."""
    F = A.field
    out = set()
    for a in all_vectors(F, A.dim):
        if all(
            np.array_equal(A.multiply(A.basis_vector(g), a), A.multiply(a, nu(A, A.basis_vector(g))))
            for g in range(A.dim)
        ):
            out.add(tuple(int(x) for x in a))
    return out


def check_nakayama_identity(f, A, nu):
    for i, j in itertools.product(range(A.dim), repeat=2):
        a, b = A.basis_vector(i), A.basis_vector(j)
        assert f.value(A, a, b) == f.value(A, b, nu(A, a))


def test_truncated_socle_form_is_antidiagonal():
    A = instantiate("Trunc[n=2]").algebra
    assert socle_form(A).gram.tolist() == [[0, 1], [1, 0]]
    A3 = instantiate("Trunc[n=3]", field=F3).algebra
    assert socle_form(A3).gram.tolist() == [[0, 0, 1], [0, 1, 0], [1, 0, 0]]


@pytest.mark.parametrize("q", [1, 2])
def test_quantum_plane_form_and_nakayama(q):
    A = instantiate(f"Aq[q={q}]", field=F3).algebra
    X, Y = A.labels.index("X"), A.labels.index("Y")
    f = socle_form(A)
    assert f.gram[X, Y] == 1
    assert f.gram[Y, X] == F3.inv(q)
    nu = nakayama(f, A)
    check_nakayama_identity(f, A, nu)
    Z = twisted_center(A, nu)
    assert Z.dim == (4 if q == 1 else 3)  # q = 1 is commutative
    assert {tuple(v) for v in _elements(Z)} == brute_twisted_center(A, nu)
    assert Z.dim == A.dim - A.commutator_space.dim


def _elements(sub: Subspace):
    F = sub.field
    for c in itertools.product(range(F.q), repeat=sub.dim):
        v = np.zeros(sub.ambient_dim, dtype=np.int64)
        for ci, r in zip(c, sub.basis):
            v = F.add(v, F.mul(r, ci))
        yield tuple(int(x) for x in v)


def test_quantum_plane_not_symmetric_for_q_not_one():
    A = instantiate("Aq[q=2]", field=F3).algebra
    res = find_symmetric_form(A)
    assert isinstance(res, NotSymmetricCertificate)
    # three trace functionals over GF(3): every nonzero combination was tried
    assert res.searched == 3 ** 3 - 1
    assert isinstance(find_symmetric_form(instantiate("Aq[q=1]", field=F3).algebra), BilinearForm)


def test_zero_form_is_degenerate():
    A = dual_numbers(F2)
    f = BilinearForm(np.zeros((2, 2), dtype=np.int64))
    assert form_predicates(f, A) == {"associative": True, "symmetric": True, "nondegenerate": False}
    with pytest.raises(SingularGram):
        nakayama(f, A)
    with pytest.raises(ValidationError):
        form_predicates(BilinearForm(np.zeros((3, 3), dtype=np.int64)), A)


def test_scaling_is_not_multiplicative():
    A = truncated(F3, 3)
    assert is_multiplicative(A, np.eye(3, dtype=np.int64))
    assert not is_multiplicative(A, 2 * np.eye(3, dtype=np.int64))  # moves the unit


@pytest.mark.parametrize("name,field", [("Trunc[n=4]", F2), ("D1A1[k=2]", F2), ("S[n=3]", F2), ("S[n=3]", F3), ("Semisimple[n=3]", F3)])
def test_symmetric_form_has_trivial_nakayama(name, field):
    inst = instantiate(name, field=field)
    A, f = inst.algebra, inst.form
    assert f is not None
    assert form_predicates(f, A) == {"associative": True, "symmetric": True, "nondegenerate": True}
    assert np.array_equal(nakayama(f, A).matrix, np.eye(A.dim, dtype=np.int64))


SMALL = [
    lambda: dual_numbers(F2),
    lambda: dual_numbers(F3),
    lambda: truncated(F2, 3),
    lambda: local_square_zero(F2),
    lambda: local_square_zero(F3),
    lambda: matrix_units(F2, 2),
    lambda: product_of_fields(F3, 2),
    lambda: instantiate("Aq[q=2]", field=F3).algebra,
    lambda: instantiate("PathA[n=2]").algebra,
]


@pytest.mark.parametrize("make", SMALL)
def test_symmetric_form_space_matches_linear_system(make):
    A = make()
    fast = symmetric_form_space(A)
    slow = brute_force_symmetric_form_space(A)
    assert Subspace.span(A.field, fast, A.dim * A.dim) == slow


@pytest.mark.parametrize("make", SMALL)
def test_symmetric_search_agrees_with_enumeration(make):
    # a nondegenerate symmetric associative form exists iff some element of the space is invertible
    A = make()
    F = A.field
    space = brute_force_symmetric_form_space(A)
    exists = any(is_invertible(F, np.array(g).reshape(A.dim, A.dim)) for g in _elements(space))
    assert isinstance(find_symmetric_form(A), BilinearForm) == exists


SELFINJECTIVE = ["Trunc[n=3]", "D1A1[k=2]", "SD2B1[k=1,t=2,c=0]", "PreprojA[n=2]", "PreprojA[n=3]", "Aq[q=2]", "Ln[n=2,j=0]", "C[n=4]"]


@pytest.mark.parametrize("name", SELFINJECTIVE)
def test_twisted_center_dimension_equals_cocenter(name):
    field = F3 if name.startswith("Aq") else F2
    inst = instantiate(name, field=field)
    A = inst.algebra
    f = inst.selfinjective_form or inst.form or socle_form(A)
    nu = nakayama(f, A)
    check_nakayama_identity(f, A, nu)
    assert twisted_center(A, nu).dim == A.dim - A.commutator_space.dim


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["Aq[q=2]", "PreprojA[n=2]"]), st.integers(0, 2**32 - 1))
def test_nakayama_moves_across_the_product(name, seed):
    inst = instantiate(name, field=F3)
    A = inst.algebra
    f = inst.selfinjective_form or socle_form(A)
    nu = nakayama(f, A)
    rng = np.random.default_rng(seed)
    x, e = F3.random(rng, A.dim), F3.random(rng, A.dim)
    one = A.unit
    # psi(v) = <1, v>
    assert f.value(A, one, A.multiply(x, nu(A, e))) == f.value(A, one, A.multiply(e, x))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_ln_carries_symmetric_witness(n):
    for j in range(n):
        inst = instantiate(f"Ln[n={n},j={j}]")
        assert inst.form is not None
        assert all(form_predicates(inst.form, inst.algebra).values())
