from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kuelshammer.errors import BoundTooSmall, NonAdmissible, ValidationError
from kuelshammer.families import instantiate
from kuelshammer.field import Field
from kuelshammer.form import form_predicates
from kuelshammer.linalg import Subspace
from kuelshammer.presentation import (
    CayleyTable,
    Quiver,
    Relation,
    cyclic_group,
    group_algebra,
    p_primary_decompose,
    p_regular_class_count,
    quotient_algebra,
    reynolds_class_sums,
    symmetric_group,
    trivial_extension,
)

from conftest import brute_span

F2, F3 = Field(2), Field(3)


def ln_basis_count(n: int) -> int:
    """Size of the seven path families spanning L_n, counted literally."""
    total = 0
    for i, j in itertools.product(range(n), repeat=2):
        ells_lo = range(j, n - 1) if i < j else range(i, n - 1)
        if i < j:
            total += 1  # a_i ... a_{j-1}
            total += len(ells_lo)  # a_i ... a_l abar_l ... abar_j
            total += len(ells_lo)  # abar ... eps a ... a_l abar_l ... abar_j
        else:
            total += 1  # abar_{i-1} ... abar_j, the trivial path when i = j
            total += len(ells_lo)
            total += len(ells_lo)
        total += 1  # abar_{i-1} ... abar_0 eps a_0 ... a_{j-1}
    return total


def test_ln_basis_count_oracle_small_values():
    assert ln_basis_count(2) == 10
    assert ln_basis_count(3) == 28


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_ln_dimension_matches_basis_families(n):
    A = instantiate(f"Ln[n={n}]").algebra
    assert A.dim == ln_basis_count(n)
    assert len(A.vertices) == n
    for j in range(n):
        assert instantiate(f"Ln[n={n},j={j}]").algebra.dim == ln_basis_count(n)


def test_path_algebra_of_a2():
    pres = quotient_algebra(Quiver(2, (("alpha", 0, 1),)), [], F2, 1)
    assert pres.algebra.dim == 3
    assert sorted(pres.algebra.labels) == ["alpha", "e0", "e1"]


@pytest.mark.parametrize("L", [2, 3, 5])
def test_dual_numbers_from_loop(L):
    pres = quotient_algebra(Quiver(1, (("x", 0, 0),)), [Relation.of((1, "x x"))], F3, L)
    A = pres.algebra
    assert A.dim == 2
    x = pres.element("x")
    assert not np.any(A.multiply(x, x))


def _words_avoiding(letters, forbidden, max_len, compose):
    out = []
    for n in range(max_len + 1):
        for w in itertools.product(letters, repeat=n):
            if not compose(w):
                continue
            if any(tuple(w[i:i + len(f)]) == f for f in forbidden for i in range(n - len(f) + 1)):
                continue
            out.append(w)
    return out


@settings(max_examples=40, deadline=None)
@given(st.sets(st.tuples(st.sampled_from("xy"), st.sampled_from("xy")), max_size=4))
def test_monomial_quotients_count_surviving_words(forbidden2):
    # two loops, some forbidden length-2 words, all length-4 words zero
    q = Quiver(1, (("x", 0, 0), ("y", 0, 0)))
    rels = [Relation.of((1, list(w))) for w in sorted(forbidden2)]
    rels += [Relation.of((1, list(w))) for w in itertools.product("xy", repeat=4)]
    A = quotient_algebra(q, rels, F2, 3).algebra
    words = _words_avoiding("xy", [tuple(w) for w in forbidden2], 3, lambda w: True)
    assert A.dim == len(words)


@settings(max_examples=30, deadline=None)
@given(st.sets(st.sampled_from([("a", "b"), ("b", "a"), ("a", "c"), ("c", "b"), ("c", "c"), ("a", "b", "a"), ("b", "a", "b")]), max_size=4))
def test_two_vertex_monomial_quotients(forbidden):
    # a: 0->1, b: 1->0, c: 1->1; every composable word of length 5 is killed
    ends = {"a": (0, 1), "b": (1, 0), "c": (1, 1)}
    q = Quiver(2, tuple((k, *v) for k, v in ends.items()))

    def composable(w):
        return all(ends[u][1] == ends[v][0] for u, v in zip(w, w[1:]))

    rels = [Relation.of((1, list(w))) for w in sorted(forbidden)]
    rels += [Relation.of((1, list(w))) for w in itertools.product("abc", repeat=5) if composable(w)]
    A = quotient_algebra(q, rels, F2, 4).algebra
    words = _words_avoiding("abc", [tuple(w) for w in forbidden], 4, composable)
    # length-0 words count once per vertex
    assert A.dim == len(words) - 1 + 2


def test_d1a1_dimension_by_word_enumeration():
    for k in range(1, 5):
        A = instantiate(f"D1A1[k={k}]").algebra
        # alternating words up to length 2k, with (XY)^k identified with (YX)^k
        words = _words_avoiding("XY", [("X", "X"), ("Y", "Y")], 2 * k, lambda w: True)
        classes = {w if len(w) < 2 * k else ("top",) for w in words}
        assert A.dim == len(classes) == 4 * k


@pytest.mark.parametrize("name", ["D1A1[k=2]", "SD2B2[k=3,t=3,c=1]", "Ln[n=3,j=1]", "Q3K[a=2,b=2,c=2]", "D3R[s=2,t=2,u=2,k=1]"])
def test_relations_vanish_in_quotient(name):
    inst = instantiate(name)
    pres, A = inst.presentation, inst.algebra
    F = A.field
    for rel in pres.relations:
        total = A.zero()
        for c, path in rel.terms:
            x = pres.element(list(path))
            total = F.add(total, F.mul(x, F.parse(c)))
        assert not np.any(total)


def test_bound_too_small_and_escalation():
    q = Quiver(1, (("x", 0, 0),))
    rels = [Relation.of((1, "x x x x x"))]
    with pytest.raises(BoundTooSmall):
        quotient_algebra(q, rels, F2, 2)
    assert quotient_algebra(q, rels, F2, 2, escalate=True).algebra.dim == 5


def test_invalid_relations():
    q = Quiver(2, (("a", 0, 1), ("b", 1, 0)))
    with pytest.raises(NonAdmissible):
        quotient_algebra(q, [Relation.of((1, "a"))], F2, 2)
    with pytest.raises(ValidationError):
        quotient_algebra(q, [Relation.of((1, "a a"))], F2, 2)
    with pytest.raises(ValidationError):
        quotient_algebra(q, [Relation.of((1, "a b"), (1, "b a"))], F2, 2)
    with pytest.raises(ValidationError):
        Quiver(2, (("a", 0, 2),))


def test_group_algebra_basics():
    triv = group_algebra(cyclic_group(1), F3)
    assert triv.dim == 1
    C2 = group_algebra(cyclic_group(2), F2)
    assert np.array_equal(C2.multiply(C2.basis_vector(1), C2.basis_vector(1)), C2.unit)
    g = symmetric_group(3)
    S3 = group_algebra(g, F2)
    assert S3.dim == 6
    brackets = [S3.commutator(S3.basis_vector(a), S3.basis_vector(b)) for a in range(6) for b in range(6)]
    span = brute_span(F2, brackets, 6)
    assert len(span) == 2 ** S3.commutator_space.dim
    assert S3.commutator_space.dim == 3  # six elements, three classes


def test_cayley_table_validation():
    with pytest.raises(ValidationError):
        CayleyTable(((0, 1), (1, 1)))
    with pytest.raises(ValidationError):
        CayleyTable.from_json({"order": 3, "table": [[0, 1], [1, 0]]})


def test_permutation_generators_are_closed():
    g = CayleyTable.from_permutations([(1, 0, 2), (0, 2, 1)])
    assert g.order == 6
    assert len(g.conjugacy_classes()) == 3
    assert CayleyTable.from_permutations([(1, 2, 3, 0)]).order == 4
    with pytest.raises(ValidationError):
        CayleyTable.from_permutations([(0, 0, 1)])


def test_p_primary_decomposition():
    C6 = cyclic_group(6)
    assert p_primary_decompose(C6, 1, 2) == (3, 4)
    assert p_primary_decompose(C6, 2, 2) == (0, 2)  # order 3, prime to 2
    assert p_primary_decompose(cyclic_group(4), 1, 2) == (1, 0)
    for x in range(6):
        a, b = p_primary_decompose(C6, x, 3)
        assert C6.mul(a, b) == x == C6.mul(b, a)


def test_p_regular_class_counts():
    S3 = symmetric_group(3)
    assert len(S3.conjugacy_classes()) == 3
    assert p_regular_class_count(S3, 2) == 2
    assert p_regular_class_count(S3, 3) == 2
    assert p_regular_class_count(S3, 5) == 3
    assert p_regular_class_count(cyclic_group(4), 3) == 4
    assert p_regular_class_count(cyclic_group(4), 2) == 1


def test_reynolds_class_sums():
    C2 = cyclic_group(2)
    assert reynolds_class_sums(C2, F2) == Subspace.span(F2, [[1, 1]])
    S3 = symmetric_group(3)
    assert reynolds_class_sums(S3, F2).dim == 2
    # p does not divide the order: the class sums span the centre
    A = group_algebra(S3, Field(5))
    assert reynolds_class_sums(S3, Field(5)) == A.center


def test_trivial_extension_of_field_and_a2():
    K = group_algebra(cyclic_group(1), F2)
    TK, _ = trivial_extension(K)
    assert TK.dim == 2 and TK.commutator_space.dim == 0 and TK.radical.dim == 1
    A = instantiate("PathA[n=2]").algebra
    TA, form = trivial_extension(A)
    assert TA.dim == 6
    assert all(form_predicates(form, TA).values())
    assert np.array_equal(TA.unit, np.concatenate([np.zeros(3, dtype=np.int64), A.unit]))


@pytest.mark.parametrize("name", ["PathA[n=2]", "PathA[n=3]", "Aq[q=1]"])
def test_trivial_extension_structure(name):
    A = instantiate(name).algebra
    TA, _ = trivial_extension(A)
    d = A.dim
    for i, j in itertools.product(range(2 * d), repeat=2):
        x, y = TA.basis_vector(i), TA.basis_vector(j)
        prod = TA.multiply(x, y)
        # projection to A is multiplicative
        assert np.array_equal(prod[d:], A.multiply(x[d:], y[d:]))
        if i < d and j < d:
            assert not np.any(prod)  # the dual part squares to zero
