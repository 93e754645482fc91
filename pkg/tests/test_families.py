from __future__ import annotations

import numpy as np
import pytest

from kuelshammer import instantiate, list_families
from kuelshammer.errors import ParamOutOfRange, ValidationError
from kuelshammer.families import REGISTRY, eliminate_redundant_arrows, expand_grid, parse_name, sweep
from kuelshammer.field import Field
from kuelshammer.linalg import Subspace, rank
from kuelshammer.presentation import Quiver, Relation
from kuelshammer.report import compare_instances

F2, F3, F4 = Field(2), Field(3), Field.gf(4)


def test_parse_name():
    assert parse_name("SD2B1[k=2,t=3,c=1]") == ("SD2B1", {"k": "2", "t": "3", "c": "1"})
    assert parse_name(" Trunc [ n = 3 ] ") == ("Trunc", {"n": "3"})
    assert parse_name("Ln") == ("Ln", {})
    for bad in ("", "2B", "D2B[k]", "D2B[k=1,k=2]", "D2B[=1]"):
        with pytest.raises(ValidationError):
            parse_name(bad)


def test_unknown_family_and_parameter():
    with pytest.raises(ValidationError, match="unknown family"):
        instantiate("Nope[k=1]")
    with pytest.raises(ValidationError, match="no parameter"):
        instantiate("D1A1[k=1,z=2]")
    with pytest.raises(ValidationError, match="needs parameter"):
        instantiate("D1A1")
    with pytest.raises(ValidationError, match="integer"):
        instantiate("D1A1[k=two]")


@pytest.mark.parametrize("name,condition", [
    ("SD2B2[k=1,t=2,c=0]", "k + t >= 4"),
    ("D1A1[k=0]", "k >= 1"),
    ("Ln[n=3,j=3]", "0 <= j < n"),
    ("Q3K[a=2,b=2,c=1]", "(a, b, c) != (2, 2, 1)"),
    ("Aq[q=0]", "q != 0"),
])
def test_side_conditions_are_named(name, condition):
    with pytest.raises(ParamOutOfRange) as err:
        instantiate(name)
    assert condition in str(err.value)


def test_characteristic_guards():
    with pytest.raises(ParamOutOfRange, match="characteristic 2"):
        instantiate("D1A2[k=2,d=0]", field=F3)
    with pytest.raises(ParamOutOfRange, match="characteristic 2"):
        instantiate("Ln[n=3,j=0]", field=F3)
    # the undeformed algebra exists in every characteristic
    assert instantiate("Ln[n=3]", field=F3).algebra.dim == instantiate("Ln[n=3]").algebra.dim


def test_redundant_arrow_is_substituted():
    # b = x x makes b redundant; the other relation b b = 0 becomes x^4 = 0
    q = Quiver(1, (("x", 0, 0), ("b", 0, 0)))
    rels = [Relation.of((1, "b"), (1, "x x")), Relation.of((1, "b b"))]
    q2, rels2 = eliminate_redundant_arrows(q, rels, F2)
    assert [a[0] for a in q2.arrows] == ["x"]
    assert [[tuple(w) for _, w in r.terms] for r in rels2] == [[("x", "x", "x", "x")]]


def test_arrow_inside_its_own_relation_is_kept():
    q = Quiver(1, (("x", 0, 0),))
    rels = [Relation.of((1, "x"), (1, "x x"))]
    q2, rels2 = eliminate_redundant_arrows(q, rels, F2)
    assert q2 == q and len(rels2) == 1


def test_sd2b2_with_short_parameter_builds():
    inst = instantiate("SD2B2[k=2,t=2,c=0]")
    assert inst.algebra.dim == 9 * 2 + 2
    assert inst.symmetric


SAMPLES = {
    "D1A1": ["D1A1[k=1]", "D1A1[k=3]"],
    "D1A2": ["D1A2[k=2,d=1]"],
    "SD1A1": ["SD1A1[k=2]"],
    "SD1A2": ["SD1A2[k=2,c=1,d=0]"],
    "Q1A1": ["Q1A1[k=2]"],
    "Q1A2": ["Q1A2[k=2,c=0,d=1]"],
    "D2B": ["D2B[k=1,s=1,c=0]", "D2B[k=2,s=3,c=1]"],
    "SD2B1": ["SD2B1[k=2,t=3,c=1]"],
    "SD2B2": ["SD2B2[k=3,t=3,c=0]"],
    "Q2B1": ["Q2B1[k=1,s=3,a=1,c=0]"],
    "D3K": ["D3K[a=2,b=1,c=1]"],
    "SD3K": ["SD3K[a=2,b=1,c=1]"],
    "Q3K": ["Q3K[a=2,b=2,c=2]"],
    "D3R": ["D3R[s=2,t=2,u=2,k=1]"],
    "Q3A1": [("Q3A1[d=w]", F4)],
    "Ln": ["Ln[n=2,j=0]", "Ln[n=4,j=1]"],
    "Aq": [("Aq[q=2]", F3)],
    "Alambda": ["Alambda[l=1]"],
    "PreprojA": ["PreprojA[n=3]"],
    "Trunc": ["Trunc[n=5]"],
    "PathA": ["PathA[n=4]"],
    "Semisimple": ["Semisimple[n=2]"],
    "C": ["C[n=6]", ("C[n=5]", F3)],
    "S": ["S[n=4]"],
}


def test_every_family_has_a_sample():
    assert set(SAMPLES) == set(REGISTRY)
    assert {f["name"] for f in list_families()} == set(REGISTRY)


@pytest.mark.parametrize("entry", [e for v in SAMPLES.values() for e in v], ids=str)
def test_registry_samples_build(entry):
    name, field = entry if isinstance(entry, tuple) else (entry, F2)
    inst = instantiate(name, field=field)
    A = inst.algebra
    spec = inst.family
    if spec.dim_formula is not None:
        assert A.dim == spec.dim_formula(inst.params)
    if "symmetric" in spec.flags:
        assert inst.symmetric
        assert A.center.dim == A.dim - A.commutator_space.dim
    if "selfinjective" in spec.flags:
        assert inst.selfinjective_form is not None


def test_q3a1_needs_a_scalar_outside_gf2():
    with pytest.raises(ParamOutOfRange):
        instantiate("Q3A1[d=1]")


def test_alambda_at_one_is_d1a1_at_one():
    res = compare_instances(instantiate("Alambda[l=1]"), instantiate("D1A1[k=1]"))
    assert res["verdict"] == "isomorphic"


def ln_central(inst):
    """eps^2 + eps^(3+2j) + sum_i (-1)^(i+1) abar_i a_i."""
    F, pres = inst.field, inst.presentation
    n, j = inst.params["n"], inst.params["j"]
    c = pres.element(["eps", "eps"])
    if j is not None and 3 + 2 * j < 2 * n:
        c = F.add(c, pres.element(["eps"] * (3 + 2 * j)))
    for i in range(n - 1):
        c = F.add(c, F.mul(pres.element([f"abar{i}", f"a{i}"]), 1 if i % 2 else F.neg(1)))
    return c


LN = [(f"Ln[n={n},j={j}]", F2) for n in range(2, 6) for j in range(n)] + [(f"Ln[n={n}]", F3) for n in (2, 3, 4)]


@pytest.mark.parametrize("name,field", LN)
def test_ln_cocenter_and_central_element(name, field):
    inst = instantiate(name, field=field)
    A, pres = inst.algebra, inst.presentation
    F, n = A.field, inst.params["n"]
    assert A.dim - A.commutator_space.dim == 2 * n
    # idempotents and odd powers of eps span A/[A,A]
    gens = [A.basis_vector(v) for v in A.vertices] + [pres.element(["eps"] * k) for k in range(1, 2 * n, 2)]
    assert A.commutator_space.sum(Subspace.span(F, np.stack(gens), A.dim)).dim == A.dim
    c = ln_central(inst)
    assert A.center.contains_vector(c)
    powers = [A.power(c, k) for k in range(1, n)]
    assert rank(F, np.stack(powers)) == n - 1
    assert not np.any(A.power(c, n))


def test_expand_grid_order():
    assert expand_grid({}) == []
    assert expand_grid({"n": [2, 3], "j": [0, 1]}) == [
        {"n": 2, "j": 0}, {"n": 2, "j": 1}, {"n": 3, "j": 0}, {"n": 3, "j": 1},
    ]


def _dim(inst):
    return {"dim": inst.algebra.dim}


def test_sweep_records_errors_and_continues():
    rows = sweep("Ln", {"n": [2, 3], "j": [0, 2]}, F2, _dim)
    assert [r["params"] for r in rows] == [{"n": 2, "j": 0}, {"n": 2, "j": 2}, {"n": 3, "j": 0}, {"n": 3, "j": 2}]
    assert "error" in rows[1] and rows[1]["error"]["type"] == "ParamOutOfRange"
    assert rows[1]["error"]["exit_code"] == 2
    assert [r["result"]["dim"] for r in rows if "result" in r] == [instantiate(f"Ln[n={n},j={j}]").algebra.dim for n, j in [(2, 0), (3, 0), (3, 2)]]
    assert sweep("Ln", {}, F2, _dim) == []


def test_sweep_in_parallel_matches_serial():
    grid = {"k": [1, 2, 3]}
    assert sweep("D1A1", grid, F2, _dim, jobs=2) == sweep("D1A1", grid, F2, _dim)
