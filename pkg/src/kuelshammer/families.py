"""Registry of named algebra families, instantiated by parameters over a finite field.

Names follow ``Name[k=v,...]``, for example ``D1A1[k=2]``, ``SD2B1[k=2,t=3,c=1]``,
``Ln[n=4,j=1]`` or ``Aq[q=w]``. Integer parameters are plain integers;
scalar parameters are field elements written as polynomials in ``w``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field as dc_field
from typing import Callable

import numpy as np

from .algebra import Algebra
from .errors import (
    BoundTooSmall,
    DegenerateForm,
    InternalInvariantError,
    ParamOutOfRange,
    ValidationError,
)
from .field import Field
from .form import BilinearForm, find_symmetric_form, form_predicates, socle_form
from .presentation import (
    CayleyTable,
    PresentedAlgebra,
    Quiver,
    Relation,
    cyclic_group,
    group_algebra,
    quotient_algebra,
    symmetric_group,
)

SYMMETRIC = "symmetric"
SELFINJECTIVE = "selfinjective"
SPLIT_BASIC = "split-basic"
GROUP = "group-algebra"
UNTESTED = "untested"

# unflagged selfinjective algebras get a symmetric-form search when A/[A,A] is this small
OPPORTUNISTIC_SEARCH_DIM = 12


@dataclass(frozen=True)
class Param:
    name: str
    kind: str = "int"  # "int" or "scalar"
    default: object = None
    required: bool = True


@dataclass(frozen=True)
class FamilySpec:
    name: str
    notation: str
    params: tuple[Param, ...]
    conditions: tuple[tuple[str, Callable], ...]
    build: Callable
    length_bound: Callable | None = None
    flags: frozenset = frozenset()
    characteristic: int | None = None
    dim_formula: Callable | None = None
    dim_formula_text: str = ""

    def describe(self) -> dict:
        return {
            "name": self.name,
            "notation": self.notation,
            "params": [{"name": p.name, "kind": p.kind, "default": p.default} for p in self.params],
            "conditions": [text for text, _ in self.conditions],
            "characteristic": self.characteristic,
            "flags": sorted(self.flags),
            "dimension": self.dim_formula_text or None,
        }


@dataclass
class Instance:
    """An instantiated family member together with the data used to build it."""

    family: FamilySpec
    params: dict
    field: Field
    algebra: Algebra
    presentation: PresentedAlgebra | None = None
    group: CayleyTable | None = None
    form: BilinearForm | None = None  # symmetric associative nondegenerate witness
    selfinjective_form: BilinearForm | None = None
    notes: list = dc_field(default_factory=list)

    @property
    def name(self) -> str:
        return format_name(self.family.name, self.params, self.field)

    @property
    def symmetric(self) -> bool:
        return self.form is not None


# -- relation helpers ---------------------------------------------------------------


def _rep(word: str, k: int) -> str:
    return " ".join([word] * k)


def _cat(*parts: str) -> str:
    return " ".join(p for p in parts if p)


def _rel(F: Field, *terms) -> Relation:
    """Relation from (scalar, path) pairs; scalars are encoded field values."""
    out = []
    for c, path in terms:
        c = int(c)
        if not 0 <= c < F.q:
            raise InternalInvariantError(f"coefficient {c} is not an encoded element of {F}")
        if c:
            out.append((F.coeffs(c), path))
    return Relation.of(*out)


def eliminate_redundant_arrows(quiver: Quiver, rels: list[Relation], F: Field) -> tuple[Quiver, list[Relation]]:
    """Remove arrows that a relation expresses through longer paths.

    A relation ``c*a + (terms of length >= 2 avoiding a)`` makes the arrow
    ``a`` redundant; it is substituted everywhere and dropped, which keeps the
    presentation admissible (for instance SD(2B)_2 with t = 2).
    """
    arrows = list(quiver.arrows)
    rels = [[(int(F.parse(c)), tuple(w)) for c, w in r.terms] for r in rels]
    changed = True
    while changed:
        changed = False
        for idx, terms in enumerate(rels):
            short = [(c, w) for c, w in terms if len(w) == 1]
            if len(short) != 1:
                continue
            c, (a,) = short[0]
            rest = [(cc, w) for cc, w in terms if len(w) != 1]
            if any(len(w) < 2 or a in w for _, w in rest):
                continue
            # a = -(1/c) * rest
            scale = F.neg(F.inv(c))
            value = [(int(F.mul(scale, cc)), w) for cc, w in rest]
            rels = [_expand(r, a, value, F) for i, r in enumerate(rels) if i != idx]
            arrows = [x for x in arrows if x[0] != a]
            changed = True
            break
    q = Quiver(quiver.vertices, tuple(arrows))
    out = [Relation.of(*[(F.coeffs(c), list(w)) for c, w in terms]) for terms in rels if terms]
    return q, out


def _expand(terms, arrow: str, value, F: Field):
    """Substitute a linear combination of paths for every occurrence of ``arrow``."""
    acc: dict[tuple, int] = {}
    for c, word in terms:
        partial = [(int(c), ())]
        for a in word:
            options = value if a == arrow else [(1, (a,))]
            partial = [(int(F.mul(pc, oc)), pw + ow) for pc, pw in partial for oc, ow in options]
        for pc, pw in partial:
            acc[pw] = int(F.add(acc.get(pw, 0), pc))
    return [(c, w) for w, c in acc.items() if c]



def _path_algebra(q: Quiver, rels, F: Field, bound: int) -> PresentedAlgebra:
    return quotient_algebra(q, rels, F, bound)


def _one_loop_quiver() -> Quiver:
    return Quiver(1, (("X", 0, 0), ("Y", 0, 0)))


TWO_B = Quiver(2, (("alpha", 0, 0), ("beta", 0, 1), ("gamma", 1, 0), ("eta", 1, 1)))
THREE_K = Quiver(
    3,
    (("beta", 0, 2), ("gamma", 2, 0), ("kappa", 0, 1), ("lambda", 1, 0), ("delta", 2, 1), ("eta", 1, 2)),
)
THREE_R = Quiver(
    3,
    (("alpha", 0, 0), ("beta", 0, 1), ("delta", 1, 2), ("lambda", 2, 0), ("rho", 1, 1), ("xi", 2, 2)),
)
THREE_A = Quiver(3, (("beta", 0, 1), ("gamma", 1, 0), ("delta", 1, 2), ("eta", 2, 1)))


# -- local algebras with two loops --------------------------------------------------


def _d1a1(P, F):
    k = P["k"]
    return _one_loop_quiver(), [_rel(F, (1, "X X")), _rel(F, (1, "Y Y")), _rel(F, (1, _rep("X Y", k)), (F.neg(1), _rep("Y X", k)))]


def _d1a2(P, F):
    k, d = P["k"], P["d"]
    xy, yx = _rep("X Y", k), _rep("Y X", k)
    return _one_loop_quiver(), [
        _rel(F, (1, "X X"), (F.neg(1), xy)),
        _rel(F, (1, "Y Y"), (F.neg(d), xy)),
        _rel(F, (1, xy), (F.neg(1), yx)),
        _rel(F, (1, _cat(xy, "X"))),
        _rel(F, (1, _cat(yx, "Y"))),
    ]


def _sd1a1(P, F):
    k = P["k"]
    xy, yx = _rep("X Y", k), _rep("Y X", k)
    return _one_loop_quiver(), [
        _rel(F, (1, xy), (F.neg(1), yx)),
        _rel(F, (1, _cat(xy, "X"))),
        _rel(F, (1, "Y Y")),
        _rel(F, (1, "X X"), (F.neg(1), _cat(_rep("Y X", k - 1), "Y"))),
    ]


def _sd1a2(P, F):
    k, c, d = P["k"], P["c"], P["d"]
    xy, yx = _rep("X Y", k), _rep("Y X", k)
    return _one_loop_quiver(), [
        _rel(F, (1, xy), (F.neg(1), yx)),
        _rel(F, (1, _cat(xy, "X"))),
        _rel(F, (1, "Y Y"), (F.neg(d), xy)),
        _rel(F, (1, "X X"), (F.neg(1), _cat(_rep("Y X", k - 1), "Y")), (c, xy)),
    ]


def _q1a1(P, F):
    k = P["k"]
    xy, yx = _rep("X Y", k), _rep("Y X", k)
    return _one_loop_quiver(), [
        _rel(F, (1, xy), (F.neg(1), yx)),
        _rel(F, (1, _cat(xy, "X"))),
        _rel(F, (1, "Y Y"), (F.neg(1), _cat(_rep("X Y", k - 1), "X"))),
        _rel(F, (1, "X X"), (F.neg(1), _cat(_rep("Y X", k - 1), "Y"))),
    ]


def _q1a2(P, F):
    k, c, d = P["k"], P["c"], P["d"]
    xy, yx = _rep("X Y", k), _rep("Y X", k)
    return _one_loop_quiver(), [
        _rel(F, (1, "X X"), (F.neg(1), _cat(_rep("Y X", k - 1), "Y")), (F.neg(c), xy)),
        _rel(F, (1, "Y Y"), (F.neg(1), _cat(_rep("X Y", k - 1), "X")), (F.neg(d), xy)),
        _rel(F, (1, xy), (F.neg(1), yx)),
        _rel(F, (1, _cat(xy, "X"))),
        _rel(F, (1, _cat(yx, "Y"))),
    ]


def _quantum_plane(P, F):
    q = P["q"] if "q" in P else P["l"]
    return _one_loop_quiver(), [_rel(F, (1, "X X")), _rel(F, (1, "Y Y")), _rel(F, (1, "X Y"), (F.neg(q), "Y X"))]


# -- two simple modules -------------------------------------------------------------


def _d2b(P, F):
    k, s, c = P["k"], P["s"], P["c"]
    abg, bga, gab = _rep("alpha beta gamma", k), _rep("beta gamma alpha", k), _rep("gamma alpha beta", k)
    return TWO_B, [
        _rel(F, (1, "beta eta")),
        _rel(F, (1, "eta gamma")),
        _rel(F, (1, "gamma beta")),
        _rel(F, (1, "alpha alpha"), (F.neg(c), abg)),
        _rel(F, (1, abg), (F.neg(1), bga)),
        _rel(F, (1, _rep("eta", s)), (F.neg(1), gab)),
    ]


def _sd2b1(P, F):
    k, t, c = P["k"], P["t"], P["c"]
    abg, bga, gab = _rep("alpha beta gamma", k), _rep("beta gamma alpha", k), _rep("gamma alpha beta", k)
    return TWO_B, [
        _rel(F, (1, "gamma beta")),
        _rel(F, (1, "eta gamma")),
        _rel(F, (1, "beta eta")),
        _rel(F, (1, "alpha alpha"), (F.neg(1), _cat(_rep("beta gamma alpha", k - 1), "beta gamma")), (F.neg(c), abg)),
        _rel(F, (1, _rep("eta", t)), (F.neg(1), gab)),
        _rel(F, (1, abg), (F.neg(1), bga)),
    ]


def _sd2b2(P, F):
    k, t, c = P["k"], P["t"], P["c"]
    rels = [
        _rel(F, (1, "beta eta"), (F.neg(1), _cat(_rep("alpha beta gamma", k - 1), "alpha beta"))),
        _rel(F, (1, "eta gamma"), (F.neg(1), _cat(_rep("gamma alpha beta", k - 1), "gamma alpha"))),
        _rel(F, (1, "alpha alpha"), (F.neg(c), _rep("alpha beta gamma", k))),
        _rel(F, (1, "beta eta eta")),
        _rel(F, (1, "eta eta gamma")),
    ]
    return TWO_B, rels + [_rel(F, (1, "gamma beta"), (F.neg(1), _rep("eta", t - 1)))]


def _q2b1(P, F):
    k, s, a, c = P["k"], P["s"], P["a"], P["c"]
    return TWO_B, [
        _rel(F, (1, "gamma beta"), (F.neg(1), _rep("eta", s - 1))),
        _rel(F, (1, "beta eta"), (F.neg(1), _cat(_rep("alpha beta gamma", k - 1), "alpha beta"))),
        _rel(F, (1, "eta gamma"), (F.neg(1), _cat(_rep("gamma alpha beta", k - 1), "gamma alpha"))),
        _rel(
            F,
            (1, "alpha alpha"),
            (F.neg(a), _cat(_rep("beta gamma alpha", k - 1), "beta gamma")),
            (F.neg(c), _rep("beta gamma alpha", k)),
        ),
        _rel(F, (1, "alpha alpha beta")),
        _rel(F, (1, "gamma alpha alpha")),
    ]


# -- three simple modules -----------------------------------------------------------


def _d3k(P, F):
    a, b, c = P["a"], P["b"], P["c"]
    return THREE_K, [
        _rel(F, (1, "beta delta")),
        _rel(F, (1, "delta lambda")),
        _rel(F, (1, "lambda beta")),
        _rel(F, (1, "gamma kappa")),
        _rel(F, (1, "kappa eta")),
        _rel(F, (1, "eta gamma")),
        _rel(F, (1, _rep("beta gamma", a)), (F.neg(1), _rep("kappa lambda", b))),
        _rel(F, (1, _rep("lambda kappa", b)), (F.neg(1), _rep("eta delta", c))),
        _rel(F, (1, _rep("delta eta", c)), (F.neg(1), _rep("gamma beta", a))),
    ]


def _sd3k(P, F):
    a, b, c = P["a"], P["b"], P["c"]
    return THREE_K, [
        _rel(F, (1, "kappa eta")),
        _rel(F, (1, "eta gamma")),
        _rel(F, (1, "gamma kappa")),
        _rel(F, (1, "delta lambda"), (F.neg(1), _cat(_rep("gamma beta", a - 1), "gamma"))),
        _rel(F, (1, "beta delta"), (F.neg(1), _cat(_rep("kappa lambda", b - 1), "kappa"))),
        _rel(F, (1, "lambda beta"), (F.neg(1), _cat(_rep("eta delta", c - 1), "eta"))),
    ]


def _q3k(P, F):
    a, b, c = P["a"], P["b"], P["c"]
    return THREE_K, [
        _rel(F, (1, "beta delta"), (F.neg(1), _cat(_rep("kappa lambda", a - 1), "kappa"))),
        _rel(F, (1, "eta gamma"), (F.neg(1), _cat(_rep("lambda kappa", a - 1), "lambda"))),
        _rel(F, (1, "delta lambda"), (F.neg(1), _cat(_rep("gamma beta", b - 1), "gamma"))),
        _rel(F, (1, "kappa eta"), (F.neg(1), _cat(_rep("beta gamma", b - 1), "beta"))),
        _rel(F, (1, "lambda beta"), (F.neg(1), _cat(_rep("eta delta", c - 1), "eta"))),
        _rel(F, (1, "gamma kappa"), (F.neg(1), _cat(_rep("delta eta", c - 1), "delta"))),
        _rel(F, (1, "gamma beta delta")),
        _rel(F, (1, "delta eta gamma")),
        _rel(F, (1, "lambda kappa eta")),
    ]


def _d3r(P, F):
    k, s, t, u = P["k"], P["s"], P["t"], P["u"]
    return THREE_R, [
        _rel(F, (1, "alpha beta")),
        _rel(F, (1, "beta rho")),
        _rel(F, (1, "rho delta")),
        _rel(F, (1, "delta xi")),
        _rel(F, (1, "xi lambda")),
        _rel(F, (1, "lambda alpha")),
        _rel(F, (1, _rep("alpha", s)), (F.neg(1), _rep("beta delta lambda", k))),
        _rel(F, (1, _rep("rho", t)), (F.neg(1), _rep("delta lambda beta", k))),
        _rel(F, (1, _rep("xi", u)), (F.neg(1), _rep("lambda beta delta", k))),
    ]


def _q3a1(P, F):
    d = P["d"]
    return THREE_A, [
        _rel(F, (1, "beta delta eta"), (F.neg(1), "beta gamma beta")),
        _rel(F, (1, "delta eta gamma"), (F.neg(1), "gamma beta gamma")),
        _rel(F, (1, "eta gamma beta"), (F.neg(d), "eta delta eta")),
        _rel(F, (1, "gamma beta delta"), (F.neg(d), "delta eta delta")),
        _rel(F, (1, "beta delta eta delta")),
        _rel(F, (1, "eta gamma beta gamma")),
    ]


# -- preprojective type -------------------------------------------------------------


def _ln(P, F):
    n, j = P["n"], P["j"]
    arrows = [("eps", 0, 0)]
    for i in range(n - 1):
        arrows += [(f"a{i}", i, i + 1), (f"abar{i}", i + 1, i)]
    q = Quiver(n, tuple(arrows))
    rels = [_rel(F, (1, f"a{i} abar{i}"), (1, f"abar{i - 1} a{i - 1}")) for i in range(1, n - 1)]
    if n >= 2:
        rels.append(_rel(F, (1, f"abar{n - 2} a{n - 2}")))
    rels.append(_rel(F, (1, _rep("eps", 2 * n))))
    deform = [] if j is None else [(1, _rep("eps", 3 + 2 * j))]
    head = [(1, "a0 abar0")] if n >= 2 else []
    rels.append(_rel(F, (1, "eps eps"), *head, *deform))
    return q, rels


def _preprojective_a(P, F):
    n = P["n"]
    arrows = []
    for i in range(1, n):
        arrows += [(f"a{i}", i - 1, i), (f"abar{i}", i, i - 1)]
    q = Quiver(n, tuple(arrows))
    rels = [_rel(F, (1, "a1 abar1")), _rel(F, (1, f"abar{n - 1} a{n - 1}"))]
    rels += [_rel(F, (1, f"abar{i} a{i}"), (F.neg(1), f"a{i + 1} abar{i + 1}")) for i in range(1, n - 1)]
    return q, rels


def _truncated_polynomial(P, F):
    return Quiver(1, (("x", 0, 0),)), [_rel(F, (1, _rep("x", P["n"])))]


def _linear_path(P, F):
    n = P["n"]
    return Quiver(n, tuple((f"a{i}", i, i + 1) for i in range(n - 1))), []


def _semisimple(P, F):
    return Quiver(P["n"], ()), []


# -- groups -------------------------------------------------------------------------


def _cyclic(P, F):
    return cyclic_group(P["n"])


def _symmetric(P, F):
    return symmetric_group(P["n"])


def _cyclic_splits(P, F) -> bool:
    m = P["n"]
    while m % F.p == 0:
        m //= F.p
    return (F.q - 1) % m == 0


# -- registry ----------------------------------------------------------------------


def _ge(name, lo):
    return (f"{name} >= {lo}", lambda P, F: P[name] >= lo)


def _nonzero(name):
    return (f"{name} != 0", lambda P, F: P[name] != 0)


K = (Param("k"),)
LOCAL_BOUND = lambda P: 2 * P["k"]  # noqa: E731
FAMILY_2B_BOUND = lambda P: max(3 * P["k"], P.get("s") or P.get("t")) + 1  # noqa: E731
FAMILY_3K_BOUND = lambda P: 2 * max(P["a"], P["b"], P["c"]) + 1  # noqa: E731

_SYM = frozenset({SYMMETRIC, SELFINJECTIVE, SPLIT_BASIC})

REGISTRY: dict[str, FamilySpec] = {}


def _register(spec: FamilySpec) -> None:
    REGISTRY[spec.name] = spec


_register(FamilySpec("D1A1", "D(1A)_1^k", K, (_ge("k", 1),), _d1a1, LOCAL_BOUND, _SYM, None, lambda P: 4 * P["k"], "4k"))
_register(
    FamilySpec(
        "D1A2", "D(1A)_2^k(d)", (Param("k"), Param("d", "scalar")),
        (_ge("k", 2), ("d in {0, 1}", lambda P, F: P["d"] in (0, 1))),
        _d1a2, LOCAL_BOUND, _SYM, 2, lambda P: 4 * P["k"], "4k",
    )
)
_register(FamilySpec("SD1A1", "SD(1A)_1^k", K, (_ge("k", 2),), _sd1a1, LOCAL_BOUND, _SYM, None, lambda P: 4 * P["k"], "4k"))
_register(
    FamilySpec(
        "SD1A2", "SD(1A)_2^k(c,d)", (Param("k"), Param("c", "scalar"), Param("d", "scalar")),
        (_ge("k", 2), ("(c, d) != (0, 0)", lambda P, F: (P["c"], P["d"]) != (0, 0))),
        _sd1a2, LOCAL_BOUND, _SYM, 2, lambda P: 4 * P["k"], "4k",
    )
)
_register(FamilySpec("Q1A1", "Q(1A)_1^k", K, (_ge("k", 2),), _q1a1, LOCAL_BOUND, _SYM, None, lambda P: 4 * P["k"], "4k"))
_register(
    FamilySpec(
        "Q1A2", "Q(1A)_2^k(c,d)", (Param("k"), Param("c", "scalar"), Param("d", "scalar")),
        (_ge("k", 2), ("(c, d) != (0, 0)", lambda P, F: (P["c"], P["d"]) != (0, 0))),
        _q1a2, LOCAL_BOUND, _SYM, 2, lambda P: 4 * P["k"], "4k",
    )
)
_register(
    FamilySpec(
        "D2B", "D(2B)^{k,s}(c)", (Param("k"), Param("s"), Param("c", "scalar")),
        (_ge("k", 1), _ge("s", 1)),
        _d2b, FAMILY_2B_BOUND, _SYM, None, lambda P: 9 * P["k"] + P["s"], "9k + s",
    )
)
_register(
    FamilySpec(
        "SD2B1", "SD(2B)_1^{k,t}(c)", (Param("k"), Param("t"), Param("c", "scalar")),
        (_ge("k", 1), _ge("t", 2)),
        _sd2b1, FAMILY_2B_BOUND, _SYM, None, lambda P: 9 * P["k"] + P["t"], "9k + t",
    )
)
_register(
    FamilySpec(
        "SD2B2", "SD(2B)_2^{k,t}(c)", (Param("k"), Param("t"), Param("c", "scalar")),
        (_ge("k", 1), _ge("t", 2), ("k + t >= 4", lambda P, F: P["k"] + P["t"] >= 4)),
        _sd2b2, FAMILY_2B_BOUND, _SYM, None, lambda P: 9 * P["k"] + P["t"], "9k + t",
    )
)
_register(
    FamilySpec(
        "Q2B1", "Q(2B)_1^{k,s}(a,c)", (Param("k"), Param("s"), Param("a", "scalar"), Param("c", "scalar")),
        (_ge("k", 1), _ge("s", 3), _nonzero("a")),
        _q2b1, FAMILY_2B_BOUND, _SYM, None, lambda P: 9 * P["k"] + P["s"], "9k + s",
    )
)
_ABC = (Param("a"), Param("b"), Param("c"))
_ORDERED = ("a >= b >= c >= 1", lambda P, F: P["a"] >= P["b"] >= P["c"] >= 1)
_register(
    FamilySpec(
        "D3K", "D(3K)^{a,b,c}", _ABC, (_ORDERED,), _d3k, FAMILY_3K_BOUND, _SYM, None,
        lambda P: 4 * (P["a"] + P["b"] + P["c"]), "4(a + b + c)",
    )
)
_register(
    FamilySpec(
        "SD3K", "SD(3K)^{a,b,c}", _ABC, (_ORDERED, _ge("a", 2)), _sd3k, FAMILY_3K_BOUND, _SYM | {UNTESTED}, None,
    )
)
_register(
    FamilySpec(
        "Q3K", "Q(3K)^{a,b,c}", _ABC,
        (_ORDERED, _ge("b", 2), ("(a, b, c) != (2, 2, 1)", lambda P, F: (P["a"], P["b"], P["c"]) != (2, 2, 1))),
        _q3k, FAMILY_3K_BOUND, _SYM, None,
    )
)
_register(
    FamilySpec(
        "D3R", "D(3R)^{k,s,t,u}", (Param("k"), Param("s"), Param("t"), Param("u")),
        (("s >= t >= u >= k >= 1", lambda P, F: P["s"] >= P["t"] >= P["u"] >= P["k"] >= 1), _ge("t", 2)),
        _d3r, lambda P: max(P["s"], 3 * P["k"]) + 1, _SYM, None,
    )
)
_register(
    FamilySpec(
        "Q3A1", "Q(3A)_1^{2,2}(d)", (Param("d", "scalar"),),
        (("d not in {0, 1}", lambda P, F: P["d"] not in (0, 1)),),
        _q3a1, lambda P: 5, _SYM, None,
    )
)
_register(
    FamilySpec(
        "Ln", "L_n^{X^{2j}}", (Param("n"), Param("j", required=False)),
        (
            _ge("n", 2),
            ("0 <= j < n", lambda P, F: P["j"] is None or 0 <= P["j"] < P["n"]),
            ("characteristic 2 for the deformed algebras", lambda P, F: P["j"] is None or F.p == 2),
        ),
        _ln, lambda P: 2 * P["n"] + 1, _SYM, None,
    )
)
_register(
    FamilySpec(
        "Aq", "A_q", (Param("q", "scalar"),), (_nonzero("q"),), _quantum_plane, lambda P: 2,
        frozenset({SELFINJECTIVE, SPLIT_BASIC}), None, lambda P: 4, "4",
    )
)
_register(
    FamilySpec(
        "Alambda", "A(lambda)", (Param("l", "scalar"),), (_nonzero("l"),), _quantum_plane, lambda P: 2,
        frozenset({SELFINJECTIVE, SPLIT_BASIC, UNTESTED}), None, lambda P: 4, "4",
    )
)
_register(
    FamilySpec(
        "PreprojA", "preprojective A_n", (Param("n"),), (_ge("n", 2),), _preprojective_a, lambda P: P["n"],
        frozenset({SELFINJECTIVE, SPLIT_BASIC}), None, lambda P: P["n"] * (P["n"] + 1) * (P["n"] + 2) // 6,
        "n(n+1)(n+2)/6",
    )
)
_register(
    FamilySpec(
        "Trunc", "K[x]/(x^n)", (Param("n"),), (_ge("n", 2),), _truncated_polynomial, lambda P: max(P["n"], 1),
        _SYM, None, lambda P: P["n"], "n",
    )
)
_register(
    FamilySpec(
        "PathA", "path algebra of A_n", (Param("n"),), (_ge("n", 1),), _linear_path, lambda P: max(P["n"], 1),
        frozenset({SPLIT_BASIC}), None, lambda P: P["n"] * (P["n"] + 1) // 2, "n(n+1)/2",
    )
)
_register(
    FamilySpec(
        "Semisimple", "K^n", (Param("n"),), (_ge("n", 1),), _semisimple, lambda P: 1, _SYM, None,
        lambda P: P["n"], "n",
    )
)
_register(
    FamilySpec(
        "C", "K C_n", (Param("n"),), (_ge("n", 1),), _cyclic, None, frozenset({SYMMETRIC, SELFINJECTIVE, GROUP}), None,
        lambda P: P["n"], "n",
    )
)
_register(
    FamilySpec(
        "S", "K S_n", (Param("n"),), (_ge("n", 1), ("n <= 5", lambda P, F: P["n"] <= 5)), _symmetric, None,
        frozenset({SYMMETRIC, SELFINJECTIVE, GROUP}), None, lambda P: _factorial(P["n"]), "n!",
    )
)


def _factorial(n: int) -> int:
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def list_families() -> list[dict]:
    return [spec.describe() for spec in REGISTRY.values()]


# -- names -----------------------------------------------------------------------------

_NAME_RE = re.compile(r"^\s*([A-Za-z][A-Za-z0-9]*)\s*(?:\[(.*)\])?\s*$")


def parse_name(text: str) -> tuple[str, dict[str, str]]:
    """``"SD2B1[k=2,t=3,c=1]"`` -> ``("SD2B1", {"k": "2", "t": "3", "c": "1"})``."""
    m = _NAME_RE.match(text)
    if not m:
        raise ValidationError(f"cannot parse algebra name {text!r}; expected Name[k=v,...]")
    raw: dict[str, str] = {}
    body = m.group(2)
    if body and body.strip():
        for item in body.split(","):
            key, eq, value = item.partition("=")
            if not eq or not key.strip() or not value.strip():
                raise ValidationError(f"bad parameter {item!r} in {text!r}")
            if key.strip() in raw:
                raise ValidationError(f"parameter {key.strip()} given twice")
            raw[key.strip()] = value.strip()
    return m.group(1), raw


def format_name(family: str, params: dict, field: Field) -> str:
    spec = REGISTRY[family]
    parts = []
    for p in spec.params:
        v = params.get(p.name)
        if v is None:
            continue
        parts.append(f"{p.name}={field.format(v) if p.kind == 'scalar' else v}")
    return f"{family}[{','.join(parts)}]" if parts else family


def lookup(family: str) -> FamilySpec:
    try:
        return REGISTRY[family]
    except KeyError:
        raise ValidationError(f"unknown family {family!r}; known: {', '.join(REGISTRY)}") from None


def resolve_params(spec: FamilySpec, raw: dict, field: Field) -> dict:
    """Typed parameters with side conditions checked."""
    unknown = set(raw) - {p.name for p in spec.params}
    if unknown:
        raise ValidationError(f"{spec.name} has no parameter(s) {', '.join(sorted(unknown))}")
    if spec.characteristic is not None and field.p != spec.characteristic:
        raise ParamOutOfRange(f"{spec.name} requires characteristic {spec.characteristic}, got {field}")
    P = {}
    for p in spec.params:
        if p.name not in raw:
            if p.required:
                raise ValidationError(f"{spec.name} needs parameter {p.name}")
            P[p.name] = p.default
            continue
        value = raw[p.name]
        if p.kind == "int":
            try:
                P[p.name] = int(value)
            except (TypeError, ValueError):
                raise ValidationError(f"parameter {p.name} must be an integer, got {value!r}") from None
        else:
            P[p.name] = int(field.parse(value))
    for text, ok in spec.conditions:
        if not ok(P, field):
            raise ParamOutOfRange(f"{spec.name}: side condition {text} fails for {P}")
    return P


# -- instantiation ---------------------------------------------------------------------


def instantiate(name: str, params: dict | None = None, field: Field | None = None, bound: int | None = None) -> Instance:
    """Build a registry algebra and verify its expected properties.

    ``name`` may carry parameters (``"Ln[n=3,j=0]"``); ``params`` adds more.
    With ``bound`` the registry length bound is overridden and escalated on
    failure; otherwise a failed bound check is a registry bug.
    """
    field = field or Field(2)
    family, raw = parse_name(name)
    raw = {**raw, **{k: str(v) for k, v in (params or {}).items()}}
    spec = lookup(family)
    P = resolve_params(spec, raw, field)
    if GROUP in spec.flags:
        g = spec.build(P, field)
        A = group_algebra(g, field)
        inst = Instance(spec, P, field, A, group=g)
        if spec.name == "C" and not _cyclic_splits(P, field):
            inst.notes.append(f"{field} is not a splitting field")
    else:
        quiver, rels = eliminate_redundant_arrows(*spec.build(P, field), field)
        if bound is None:
            L = spec.length_bound(P)
            try:
                pres = quotient_algebra(quiver, rels, field, L)
            except BoundTooSmall as exc:
                raise InternalInvariantError(f"registry length bound {L} too small for {name}: {exc}") from exc
        else:
            pres = quotient_algebra(quiver, rels, field, bound, escalate=True)
        inst = Instance(spec, P, field, pres.algebra, presentation=pres)
    _verify_expected(inst)
    return inst


def _verify_expected(inst: Instance) -> None:
    spec, A = inst.family, inst.algebra
    if spec.dim_formula is not None and A.dim != spec.dim_formula(inst.params):
        raise InternalInvariantError(f"{inst.name}: dimension {A.dim}, expected {spec.dim_formula_text}")
    if inst.group is not None:
        # <g, h> = [g h = 1] is a symmetric associative nondegenerate form
        n = A.dim
        gram = np.zeros((n, n), dtype=np.int64)
        for i in range(n):
            gram[i, inst.group.inverse(i)] = 1
        inst.form = BilinearForm(gram)
        inst.selfinjective_form = inst.form
    elif SELFINJECTIVE in spec.flags:
        try:
            f = socle_form(A)
        except DegenerateForm as exc:
            raise InternalInvariantError(f"{inst.name}: {exc}") from exc
        inst.selfinjective_form = f
        if SYMMETRIC in spec.flags:
            if np.array_equal(f.gram, f.gram.T):
                inst.form = f
            else:
                found = find_symmetric_form(A)
                if not isinstance(found, BilinearForm):
                    raise InternalInvariantError(f"{inst.name}: no symmetric form found ({type(found).__name__})")
                inst.form = found
        elif A.dim - A.commutator_space.dim <= OPPORTUNISTIC_SEARCH_DIM:
            found = find_symmetric_form(A)
            if isinstance(found, BilinearForm):
                inst.form = found
                inst.notes.append("symmetric form found although the family is not flagged symmetric")
    if inst.form is not None:
        pred = form_predicates(inst.form, A)
        if not all(pred.values()):
            raise InternalInvariantError(f"{inst.name}: symmetric witness fails {pred}")
        if A.center.dim != A.dim - A.commutator_space.dim:
            raise InternalInvariantError(f"{inst.name}: dim Z(A) differs from dim A/[A,A]")


# -- sweeps ------------------------------------------------------------------------------


def expand_grid(grid: dict) -> list[dict]:
    """``{"n": [2, 3], "j": [0]}`` -> list of parameter dicts in row-major order."""
    if not grid:
        return []
    keys = list(grid)
    return [dict(zip(keys, vals)) for vals in itertools.product(*(grid[k] for k in keys))]


def sweep(family: str, grid, field: Field, invariants: Callable[[Instance], dict], jobs: int = 1) -> list[dict]:
    """One row per grid cell, in grid order; errors are recorded and the sweep continues.

    ``grid`` is a dict of value lists or an explicit list of parameter dicts.
    Cells whose parameters fail a side condition are recorded as errors.
    """
    cells = expand_grid(grid) if isinstance(grid, dict) else list(grid)
    args = [(family, cell, field, invariants) for cell in cells]
    if jobs > 1 and len(args) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_sweep_cell, args))
    return [_sweep_cell(a) for a in args]


def _sweep_cell(args) -> dict:
    family, cell, field, invariants = args
    row = {"params": {k: (v if isinstance(v, int) else str(v)) for k, v in cell.items()}}
    try:
        inst = instantiate(family, cell, field)
        row["name"] = inst.name
        row["result"] = invariants(inst)
    except Exception as exc:  # a failed cell must not stop the sweep
        row["error"] = {"type": type(exc).__name__, "message": str(exc), "exit_code": getattr(exc, "exit_code", 4)}
    return row
