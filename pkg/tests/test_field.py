from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kuelshammer.errors import FieldMismatch, ValidationError
from kuelshammer.field import Field, Scalar, arith, frobenius, inv_frobenius, is_irreducible

SMALL_FIELDS = [Field(2), Field(3), Field(5), Field.gf(4), Field.gf(8), Field.gf(9), Field.gf(27), Field.gf(16), Field.gf(81)]


def naive_mul(F: Field, a: int, b: int) -> int:
    """Schoolbook polynomial product reduced by the modulus."""
    x, y = F.coeffs(a), F.coeffs(b)
    prod = [0] * (len(x) + len(y))
    for i, u in enumerate(x):
        for j, v in enumerate(y):
            prod[i + j] = (prod[i + j] + u * v) % F.p
    mod = list(F.modulus)
    for deg in range(len(prod) - 1, F.e - 1, -1):
        c = prod[deg]
        if c:
            for t, m in enumerate(mod):
                prod[deg - F.e + t] = (prod[deg - F.e + t] - c * m) % F.p
    return F.encode(prod[: F.e])


@pytest.mark.parametrize("F", SMALL_FIELDS, ids=str)
def test_multiplication_matches_polynomial_arithmetic(F):
    for a, b in itertools.product(range(F.q), repeat=2):
        assert int(F.mul(a, b)) == naive_mul(F, a, b)


@pytest.mark.parametrize("F", SMALL_FIELDS, ids=str)
def test_field_axioms_exhaustive(F):
    el = F.elements()
    A, B = np.meshgrid(el, el)
    assert np.array_equal(F.add(A, B), F.add(B, A))
    assert np.array_equal(F.mul(A, B), F.mul(B, A))
    assert np.all(F.add(el, F.neg(el)) == 0)
    nz = el[1:]
    assert np.all(F.mul(nz, F.inv(nz)) == 1)
    # distributivity over all triples
    for c in el:
        assert np.array_equal(F.mul(c, F.add(A, B)), F.add(F.mul(c, A), F.mul(c, B)))


@pytest.mark.parametrize("F", SMALL_FIELDS, ids=str)
def test_frobenius_is_a_ring_automorphism(F):
    el = F.elements()
    A, B = np.meshgrid(el, el)
    fr = lambda v: F.frob(v, 1)  # noqa: E731
    assert np.array_equal(fr(F.mul(A, B)), F.mul(fr(A), fr(B)))
    assert np.array_equal(fr(F.add(A, B)), F.add(fr(A), fr(B)))
    assert sorted(fr(el).tolist()) == el.tolist()
    assert np.array_equal(fr(el), F.power(el, F.p))


@pytest.mark.parametrize("F", SMALL_FIELDS, ids=str)
def test_inverse_frobenius_roundtrip(F):
    for v in range(F.q):
        a = Scalar(F, v)
        assert frobenius(inv_frobenius(a), 1) == a
        assert inv_frobenius(frobenius(a, 1)) == a


def test_small_examples():
    F2, F3, F4 = Field(2), Field(3), Field.gf(4)
    assert int(F2.add(1, 1)) == 0
    w = F4.generator
    assert int(F4.mul(w, w)) == F4.parse("w+1")
    assert int(F3.div(2, 2)) == 1
    assert frobenius(Scalar(F4, w)) == Scalar(F4, F4.parse("w+1"))
    assert inv_frobenius(Scalar(F4, F4.parse("w+1"))) == Scalar(F4, w)
    assert inv_frobenius(Scalar(F2, 1)) == Scalar(F2, 1)
    for a in range(2):
        assert frobenius(Scalar(F2, a)) == Scalar(F2, a)
    for a in range(5):
        assert frobenius(Scalar(Field(5), a)) == Scalar(Field(5), a)


def test_gf9_inverse_frobenius_is_cube():
    F = Field(3, 2, (1, 0, 1))
    for v in range(9):
        assert inv_frobenius(Scalar(F, v)).value == int(F.power(np.int64(v), 3))


def test_default_gf4_modulus_is_x2_x_1():
    assert Field.gf(4).modulus == (1, 1, 1)


def test_parse_forms():
    F = Field.gf(4)
    w = F.generator
    assert F.parse("w^2") == int(F.mul(w, w))
    assert F.parse([0, 1]) == w
    assert F.parse(1) == 1
    assert F.parse("1 + w") == F.parse([1, 1])
    assert Field(3).parse(-1) == 2
    assert Field(5).parse("-2") == 3


def test_rejects_bad_fields():
    with pytest.raises(ValidationError):
        Field(4)
    with pytest.raises(ValidationError):
        Field(2, 2, (1, 0, 1))  # X^2 + 1 = (X + 1)^2
    with pytest.raises(ValidationError):
        Field(2, 2, (1, 1, 0))
    with pytest.raises(ValidationError):
        Field.gf(6)


def test_irreducibility_by_root_count():
    # degree <= 3 polynomials are irreducible exactly when they have no root
    for p in (2, 3):
        for mod in itertools.product(range(p), repeat=3):
            poly = (*mod, 1)
            has_root = any(sum(c * x ** i for i, c in enumerate(poly)) % p == 0 for x in range(p))
            assert is_irreducible(poly, p) == (not has_root)


def test_scalar_arith_and_mismatch():
    F = Field(5)
    a, b = Scalar(F, 3), Scalar(F, 4)
    assert arith(a, b, "add").value == 2
    assert arith(a, b, "mul").value == 2
    assert arith(a, b, "div").value == int(F.mul(3, F.inv(4)))
    assert (a ** -1) * a == Scalar(F, 1)
    with pytest.raises(FieldMismatch):
        a + Scalar(Field(7), 1)
    with pytest.raises(ValueError):
        arith(a, b, "pow")


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SMALL_FIELDS), st.data())
def test_power_laws(F, data):
    a = data.draw(st.integers(1, F.q - 1))
    m = data.draw(st.integers(0, 50))
    n = data.draw(st.integers(0, 50))
    lhs = F.mul(F.power(np.int64(a), m), F.power(np.int64(a), n))
    assert int(lhs) == int(F.power(np.int64(a), m + n))
    assert int(F.power(np.int64(a), F.q - 1)) == 1
