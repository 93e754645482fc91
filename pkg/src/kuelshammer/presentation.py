"""Algebras from presentations: quivers with relations, groups, trivial extensions.

Quiver paths compose left to right: ``a b`` means first ``a`` then ``b``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from .algebra import Algebra
from .errors import BoundTooSmall, NonAdmissible, SoclePathFailure, ValidationError
from .field import Field
from .linalg import Subspace

MAX_BOUND = 64


@dataclass(frozen=True)
class Quiver:
    vertices: int
    arrows: tuple[tuple[str, int, int], ...]

    def __post_init__(self):
        arrows = tuple((str(a), int(s), int(t)) for a, s, t in self.arrows)
        object.__setattr__(self, "arrows", arrows)
        labels = [a for a, _, _ in arrows]
        if len(set(labels)) != len(labels):
            raise ValidationError("arrow labels must be unique")
        for a, s, t in arrows:
            if not (0 <= s < self.vertices and 0 <= t < self.vertices):
                raise ValidationError(f"arrow {a} has an endpoint out of range")

    def index(self, label: str) -> int:
        for i, (a, _, _) in enumerate(self.arrows):
            if a == label:
                return i
        raise ValidationError(f"unknown arrow {label!r}")

    def to_json(self) -> dict:
        return {"vertices": self.vertices, "arrows": [list(a) for a in self.arrows]}


@dataclass(frozen=True)
class Relation:
    """Linear combination of parallel paths; each term is (scalar, arrow labels)."""

    terms: tuple[tuple[object, tuple[str, ...]], ...]

    @classmethod
    def of(cls, *terms) -> "Relation":
        """``Relation.of((1, "x y"), (-1, ["y", "x"]))``; paths may be space separated strings."""
        out = []
        for c, path in terms:
            if isinstance(path, str):
                path = path.split()
            out.append((c, tuple(path)))
        return cls(tuple(out))


def _word(q: Quiver, path: Sequence[str]) -> tuple[int, ...]:
    return tuple(q.index(a) for a in path)


class _GF2Ops:
    """Sparse vectors over GF(2) as Python int bitsets."""

    zero = 0

    def from_terms(self, terms):
        v = 0
        for i, c in terms:
            if c & 1:
                v ^= 1 << i
        return v

    def terms(self, v):
        while v:
            low = v & -v
            yield low.bit_length() - 1, 1
            v ^= low

    def lead(self, v):
        return v.bit_length() - 1

    def lead_coeff(self, v):
        return 1

    def coeff(self, v, i):
        return (v >> i) & 1

    def axpy(self, v, c, w):
        return v ^ w

    def scale(self, v, c):
        return v

    def without(self, v, i):
        return v & ~(1 << i)

    def add_term(self, v, i, c):
        return v | (1 << i)


class _GenericOps:
    """Sparse vectors as ``{index: encoded scalar}`` dicts."""

    zero = None

    def __init__(self, F: Field):
        self.F = F
        q = F.q
        if F.e == 1:
            p = F.p
            self._mul = lambda a, b: (a * b) % p
            self._sub = lambda a, b: (a - b) % p
        else:
            mt = F._mul_table.tolist()
            at = F._add_table.tolist()
            nt = F._neg_table.tolist()
            self._mul = lambda a, b: mt[a][b]
            self._sub = lambda a, b: at[a][nt[b]]
        self._inv = [0] + [int(F.inv(a)) for a in range(1, q)]

    def from_terms(self, terms):
        v: dict[int, int] = {}
        for i, c in terms:
            c = int(c)
            if c:
                nv = self._sub(v.get(i, 0), self._sub(0, c))
                if nv:
                    v[i] = nv
                else:
                    v.pop(i, None)
        return v or None

    def terms(self, v):
        return iter(v.items()) if v else iter(())

    def lead(self, v):
        return max(v)

    def lead_coeff(self, v):
        return v[max(v)]

    def coeff(self, v, i):
        return v.get(i, 0) if v else 0

    def axpy(self, v, c, w):
        """v - c w"""
        out = dict(v) if v else {}
        for i, x in w.items():
            nv = self._sub(out.get(i, 0), self._mul(c, x))
            if nv:
                out[i] = nv
            else:
                out.pop(i, None)
        return out or None

    def scale(self, v, c):
        return {i: self._mul(c, x) for i, x in v.items()}

    def without(self, v, i):
        out = {k: x for k, x in v.items() if k != i}
        return out or None

    def add_term(self, v, i, c):
        out = dict(v) if v else {}
        out[i] = c
        return out


class _Echelon:
    """Semi-echelon basis keyed by leading (largest) index."""

    def __init__(self, ops):
        self.ops = ops
        self.rows: dict[int, object] = {}

    def insert(self, v):
        ops = self.ops
        while v:
            lead = ops.lead(v)
            row = self.rows.get(lead)
            if row is None:
                c = ops.lead_coeff(v)
                if c != 1:
                    v = ops.scale(v, ops._inv[c])
                self.rows[lead] = v
                return v
            v = ops.axpy(v, ops.coeff(v, lead), row)
        return None

    def normal_form(self, v):
        ops = self.ops
        result = ops.zero
        while v:
            lead = ops.lead(v)
            c = ops.coeff(v, lead)
            row = self.rows.get(lead)
            if row is None:
                result = ops.add_term(result, lead, c)
                v = ops.without(v, lead)
            else:
                v = ops.axpy(v, c, row)
        return result


@dataclass
class _PathSpace:
    quiver: Quiver
    bound: int
    blocks: dict = dc_field(default_factory=dict)  # (s, t) -> list of words, ascending shortlex
    index: dict = dc_field(default_factory=dict)  # (s, t) -> {word: idx}

    def __post_init__(self):
        q = self.quiver
        out_arrows = [[i for i, (_, s, _) in enumerate(q.arrows) if s == v] for v in range(q.vertices)]
        layer = [((), v, v) for v in range(q.vertices)]
        words = {(s, t): [] for s in range(q.vertices) for t in range(q.vertices)}
        for length in range(self.bound + 1):
            for w, s, t in layer:
                words[(s, t)].append(w)
            if length == self.bound:
                break
            nxt = []
            for w, s, t in layer:
                for a in out_arrows[t]:
                    nxt.append((w + (a,), s, q.arrows[a][2]))
            layer = nxt
        for key, ws in words.items():
            ws.sort(key=lambda w: (len(w), w))
            self.blocks[key] = ws
            self.index[key] = {w: i for i, w in enumerate(ws)}

    def endpoints(self, word: tuple[int, ...], vertex: int | None = None) -> tuple[int, int]:
        arrows = self.quiver.arrows
        if not word:
            return vertex, vertex
        return arrows[word[0]][1], arrows[word[-1]][2]


def _relation_vector(space: _PathSpace, q: Quiver, F: Field, rel: Relation, ops):
    ends = set()
    terms = []
    for c, path in rel.terms:
        if len(path) < 2:
            raise NonAdmissible(f"relation term {' '.join(path) or '1'} has length < 2")
        w = _word(q, path)
        for x, y in zip(w, w[1:]):
            if q.arrows[x][2] != q.arrows[y][1]:
                raise ValidationError(f"path {' '.join(path)} is not composable")
        ends.add(space.endpoints(w))
        terms.append((w, F.parse(c)))
    if len(ends) != 1:
        raise ValidationError("relation terms are not parallel")
    key = ends.pop()
    idx = space.index[key]
    return key, ops.from_terms((idx[w], c) for w, c in terms if len(w) <= space.bound)


def _close_ideal(space: _PathSpace, q: Quiver, F: Field, relations: Sequence[Relation], ops):
    nv = q.vertices
    ech = {key: _Echelon(ops) for key in space.blocks}
    incoming = [[i for i, (_, _, t) in enumerate(q.arrows) if t == v] for v in range(nv)]
    outgoing = [[i for i, (_, s, _) in enumerate(q.arrows) if s == v] for v in range(nv)]
    queue = []
    for rel in relations:
        key, vec = _relation_vector(space, q, F, rel, ops)
        if vec:
            stored = ech[key].insert(vec)
            if stored:
                queue.append((key, stored))
    bound = space.bound
    while queue:
        (s, t), vec = queue.pop()
        words = space.blocks[(s, t)]
        for a in incoming[s]:
            u = q.arrows[a][1]
            target = space.index[(u, t)]
            new = ops.from_terms(
                (target[(a,) + words[i]], c) for i, c in ops.terms(vec) if len(words[i]) < bound
            )
            if new:
                stored = ech[(u, t)].insert(new)
                if stored:
                    queue.append(((u, t), stored))
        for a in outgoing[t]:
            r = q.arrows[a][2]
            target = space.index[(s, r)]
            new = ops.from_terms(
                (target[words[i] + (a,)], c) for i, c in ops.terms(vec) if len(words[i]) < bound
            )
            if new:
                stored = ech[(s, r)].insert(new)
                if stored:
                    queue.append(((s, r), stored))
    return ech


@dataclass
class PresentedAlgebra:
    """Quotient algebra with the path data that produced it."""

    algebra: Algebra
    quiver: Quiver
    relations: tuple[Relation, ...]
    length_bound: int
    basis_words: list[tuple[int, tuple[int, ...]]]

    def element(self, path: str | Sequence[str], vertex: int | None = None) -> np.ndarray:
        """Coordinates of a path (space separated arrow labels, or ``e<v>``)."""
        return path_element(self, path, vertex)


def _word_label(q: Quiver, word: tuple[int, ...], vertex: int) -> str:
    if not word:
        return f"e{vertex}"
    return "*".join(q.arrows[a][0] for a in word)


def quotient_algebra(
    quiver: Quiver,
    relations: Sequence[Relation],
    field: Field,
    length_bound: int | None = None,
    escalate: bool = False,
) -> PresentedAlgebra:
    """``K Q / I`` computed inside the span of paths of length <= L + 1.

    All paths of length L + 1 must lie in the ideal; with ``escalate`` the
    bound grows by 2 until that holds (up to 64), otherwise
    :class:`BoundTooSmall` names an offending path.
    """
    L = 2 if length_bound is None else int(length_bound)
    if L < 1:
        raise ValidationError("length bound must be positive")
    relations = tuple(relations)
    while True:
        try:
            return _quotient_at(quiver, relations, field, L)
        except BoundTooSmall:
            if not escalate or L + 2 > MAX_BOUND:
                raise
            L += 2


def _quotient_at(quiver: Quiver, relations, F: Field, L: int) -> PresentedAlgebra:
    q = quiver
    M = L + 1
    ops = _GF2Ops() if (F.p == 2 and F.e == 1) else _GenericOps(F)
    space = _PathSpace(q, M)
    ech = _close_ideal(space, q, F, relations, ops)
    # verification: every path of length M lies in the ideal
    for key, words in space.blocks.items():
        for i, w in enumerate(words):
            if len(w) == M and ech[key].normal_form(ops.from_terms([(i, 1)])):
                raise BoundTooSmall(
                    f"path {_word_label(q, w, key[0])} of length {M} is not in the ideal; increase the length bound",
                    _word_label(q, w, key[0]),
                )
    basis = []  # (source, target, word)
    for key, words in space.blocks.items():
        for i, w in enumerate(words):
            if i not in ech[key].rows:
                basis.append((key[0], key[1], w))
    basis.sort(key=lambda b: (len(b[2]), b[2], b[0]))
    pos = {(s, t, w): n for n, (s, t, w) in enumerate(basis)}
    local = {}  # (s,t) -> {block idx: global idx}
    for (s, t, w), n in pos.items():
        local.setdefault((s, t), {})[space.index[(s, t)][w]] = n
    d = len(basis)

    def nf_global(key, vec):
        out = []
        nf = ech[key].normal_form(vec)
        for i, c in ops.terms(nf):
            out.append((local[key][i], c))
        return out

    entries = []
    for a, (s, t, u) in enumerate(basis):
        for b, (t2, r, w) in enumerate(basis):
            if t2 != t or len(u) + len(w) > M:
                continue
            prod = u + w
            key = (s, r)
            i = space.index[key][prod]
            for k, c in nf_global(key, ops.from_terms([(i, 1)])):
                entries.append((a, k, c, b))
    entries = [(a, b, k, c) for a, k, c, b in entries]
    unit = np.zeros(d, dtype=np.int64)
    vertices = [pos[(v, v, ())] for v in range(q.vertices)]
    unit[vertices] = 1
    arrows = [pos[(s, t, w)] for (s, t, w) in basis if len(w) == 1]
    labels = [_word_label(q, w, s) for (s, t, w) in basis]
    metadata = {
        "vertices": vertices,
        "arrows": arrows,
        "radical_basis": [n for n, (s, t, w) in enumerate(basis) if w],
        "generators": vertices + arrows,
        "length_bound": L,
        "basis_blocks": [[s, t] for (s, t, w) in basis],
        "cartan_convention": "C[i][j] = dim e_j A e_i",
    }
    A = Algebra(F, d, entries, unit, labels, metadata)
    words = [(s, w) for (s, t, w) in basis]
    pres = PresentedAlgebra(A, q, tuple(relations), L, words)
    for rel in relations:
        val = pres.algebra.zero()
        for c, path in rel.terms:
            val = F.add(val, F.mul(path_element(pres, list(path)), F.parse(c)))
        if np.any(val):
            raise ValidationError("a relation does not vanish in the quotient")
    return _arrange_socle(pres, space, ech, ops, nf_global)


def path_element(pres: PresentedAlgebra, path, vertex: int | None = None) -> np.ndarray:
    A, q = pres.algebra, pres.quiver
    if isinstance(path, str):
        if path.startswith("e") and path[1:].isdigit():
            return A.basis_vector(A.metadata["vertices"][int(path[1:])])
        path = path.replace("*", " ").split()
    word = _word(q, path)
    if not word:
        return A.basis_vector(A.metadata["vertices"][vertex])
    arrows = {w[0]: n for n, (s, w) in enumerate(pres.basis_words) if len(w) == 1}
    x = A.basis_vector(arrows[word[0]])
    for a in word[1:]:
        x = A.multiply(x, A.basis_vector(arrows[a]))
    return x


def _socle_blocks(A: Algebra, soc: Subspace) -> list[np.ndarray]:
    """Basis vectors of the pieces ``e_i soc e_j`` for the vertex idempotents."""
    F, d = A.field, A.dim
    out = []
    for i in A.metadata["vertices"]:
        for j in A.metadata["vertices"]:
            rows = F.matmul(F.matmul(soc.basis, A.left_matrix(A.basis_vector(i)).T), A.right_matrix(A.basis_vector(j)).T)
            out.extend(Subspace.span(F, rows, d).basis)
    return out


def _arrange_socle(pres: PresentedAlgebra, space, ech, ops, nf_global) -> PresentedAlgebra:
    """Make the basis contain a socle basis made of paths."""
    A = pres.algebra
    F, d = A.field, A.dim
    soc = A.socle
    in_soc = [i for i in range(d) if soc.contains_vector(A.basis_vector(i))]
    if Subspace.span(F, np.eye(d, dtype=np.int64)[in_soc], d).dim == soc.dim if in_soc else soc.dim == 0:
        A.metadata["socle_paths"] = in_soc
        return pres
    # search all paths, longest first, for independent socle elements
    chosen_vecs, chosen_words = [], []
    span = Subspace.zero(F, d)
    cands = []
    for key, words in space.blocks.items():
        for i, w in enumerate(words):
            if w and len(w) <= pres.length_bound:
                cands.append((len(w), w, key))
    cands.sort(key=lambda c: (-c[0], c[1]))
    for _, w, key in cands:
        vec = A.zero()
        for k, c in nf_global(key, ops.from_terms([(space.index[key][w], 1)])):
            vec[k] = c
        if not np.any(vec) or not soc.contains_vector(vec) or span.contains_vector(vec):
            continue
        span = span.sum(Subspace.span(F, vec[None, :], d))
        chosen_vecs.append(vec)
        chosen_words.append((key[0], w))
        if span.dim == soc.dim:
            break
    rows = list(chosen_vecs)
    words = list(chosen_words)
    labels_extra = {}
    # no path spans the rest of the socle: use combinations of basis paths
    for v in _socle_blocks(A, soc):
        if span.contains_vector(v):
            continue
        span = span.sum(Subspace.span(F, v[None, :], d))
        support = np.flatnonzero(v)
        labels_extra[len(rows)] = "+".join(
            (A.labels[i] if v[i] == 1 else f"{F.format(int(v[i]))}*{A.labels[i]}") for i in support
        )
        rows.append(v)
        words.append(pres.basis_words[int(support[-1])])
    if span.dim != soc.dim:
        raise SoclePathFailure("the socle could not be placed in the basis")
    for n in range(d):
        v = A.basis_vector(n)
        if not span.contains_vector(v):
            span = span.sum(Subspace.span(F, v[None, :], d))
            rows.append(v)
            words.append(pres.basis_words[n])
        if span.dim == d:
            break
    order = sorted(range(d), key=lambda n: (len(words[n][1]), words[n][1], words[n][0], n in labels_extra))
    q = pres.quiver
    labels = [labels_extra.get(n) or _word_label(q, words[n][1], words[n][0]) for n in order]
    rows = np.stack([rows[n] for n in order])
    words = [words[n] for n in order]
    meta = dict(A.metadata)
    meta["vertices"] = [words.index((v, ())) for v in range(q.vertices)]
    meta["arrows"] = [n for n, (s, w) in enumerate(words) if len(w) == 1]
    meta["radical_basis"] = [n for n, (s, w) in enumerate(words) if w]
    meta["generators"] = meta["vertices"] + meta["arrows"]
    meta["basis_blocks"] = None
    B = A.change_basis(rows, labels, meta)
    soc_b = B.socle
    meta["socle_paths"] = [n for n in range(d) if soc_b.contains_vector(B.basis_vector(n))]
    B.metadata["socle_paths"] = meta["socle_paths"]
    B.metadata.pop("basis_blocks", None)
    return PresentedAlgebra(B, q, pres.relations, pres.length_bound, words)


# -- groups ----------------------------------------------------------------------


@dataclass(frozen=True)
class CayleyTable:
    """Multiplication table of a finite group; element 0 is the identity."""

    table: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        t = tuple(tuple(int(x) for x in row) for row in self.table)
        object.__setattr__(self, "table", t)
        n = len(t)
        full = set(range(n))
        for row in t:
            if len(row) != n or set(row) != full:
                raise ValidationError("table is not a Latin square")
        for j in range(n):
            if {t[i][j] for i in range(n)} != full:
                raise ValidationError("table is not a Latin square")
        if any(t[0][i] != i or t[i][0] != i for i in range(n)):
            raise ValidationError("element 0 is not the identity")
        for a, b, c in itertools.product(range(n), repeat=3):
            if t[t[a][b]][c] != t[a][t[b][c]]:
                raise ValidationError("table is not associative")

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inverse(self, a: int) -> int:
        return self.table[a].index(0)

    def power(self, a: int, n: int) -> int:
        r = 0
        for _ in range(n % self.element_order(a)):
            r = self.table[r][a]
        return r

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.table[x][a]
            k += 1
        return k

    def conjugacy_classes(self) -> list[list[int]]:
        seen, classes = set(), []
        for g in range(self.order):
            if g in seen:
                continue
            cls = sorted({self.mul(self.mul(h, g), self.inverse(h)) for h in range(self.order)})
            seen.update(cls)
            classes.append(cls)
        return classes

    def to_json(self) -> dict:
        return {"order": self.order, "table": [list(r) for r in self.table]}

    @classmethod
    def from_json(cls, doc: dict) -> "CayleyTable":
        t = cls(tuple(tuple(r) for r in doc["table"]))
        if "order" in doc and int(doc["order"]) != t.order:
            raise ValidationError("order does not match the table")
        return t

    @classmethod
    def from_permutations(cls, perms: Sequence[Sequence[int]], limit: int = 5040) -> "CayleyTable":
        """The group generated by the given permutations of 0..m-1, identity first."""
        perms = [tuple(int(x) for x in p) for p in perms]
        if not perms:
            raise ValidationError("need at least one permutation")
        m = len(perms[0])
        for p in perms:
            if sorted(p) != list(range(m)):
                raise ValidationError(f"{list(p)} is not a permutation of 0..{m - 1}")
        ident = tuple(range(m))
        elems = [ident] + [p for p in dict.fromkeys(perms) if p != ident]
        seen = set(elems)
        i = 0
        while i < len(elems):
            for b in perms:
                c = tuple(elems[i][b[x]] for x in range(m))
                if c not in seen:
                    if len(elems) >= limit:
                        raise ValidationError(f"generated group has more than {limit} elements")
                    seen.add(c)
                    elems.append(c)
            i += 1
        idx = {p: k for k, p in enumerate(elems)}
        # (a*b)(x) = a(b(x))
        table = [[idx[tuple(a[b[x]] for x in range(m))] for b in elems] for a in elems]
        return cls(tuple(tuple(r) for r in table))


def cyclic_group(n: int) -> CayleyTable:
    return CayleyTable(tuple(tuple((i + j) % n for j in range(n)) for i in range(n)))


def symmetric_group(n: int) -> CayleyTable:
    return CayleyTable.from_permutations(sorted(itertools.permutations(range(n))))


def group_algebra(g: CayleyTable, field: Field) -> Algebra:
    n = g.order
    entries = [(i, j, g.mul(i, j), 1) for i in range(n) for j in range(n)]
    unit = np.zeros(n, dtype=np.int64)
    unit[0] = 1
    return Algebra(field, n, entries, unit, [f"g{i}" for i in range(n)], {"group_order": n})


def p_primary_decompose(g: CayleyTable, element: int, p: int) -> tuple[int, int]:
    """``(g_p, g_p')`` with g_p of p-power order, g_p' of order prime to p."""
    order = g.element_order(element)
    pa, m = 1, order
    while m % p == 0:
        m //= p
        pa *= p
    g_p = g.power(element, m * pow(m, -1, pa))
    g_pprime = g.power(element, pa * pow(pa, -1, m))
    return g_p, g_pprime


def p_regular_class_count(g: CayleyTable, p: int) -> int:
    return sum(1 for cls in g.conjugacy_classes() if math.gcd(g.element_order(cls[0]), p) == 1)


def reynolds_class_sums(g: CayleyTable, field: Field) -> Subspace:
    """Span of the sums over ``S_h``, the elements whose p'-part is conjugate to h's."""
    p = field.p
    n = g.order
    cls_of = {}
    for c, cls in enumerate(g.conjugacy_classes()):
        for x in cls:
            cls_of[x] = c
    pprime_class = [cls_of[p_primary_decompose(g, x, p)[1]] for x in range(n)]
    rows = []
    for h in range(n):
        v = np.zeros(n, dtype=np.int64)
        for x in range(n):
            if pprime_class[x] == pprime_class[h]:
                v[x] = 1
        rows.append(v)
    return Subspace.span(field, np.stack(rows), n)


# -- trivial extension -------------------------------------------------------------


def trivial_extension(A: Algebra):
    """``Hom_K(A, K) x A`` with ``(f,a)(g,b) = (a g + f b, a b)`` and its canonical form.

    Basis: dual basis ``f_0..f_{d-1}`` (indices 0..d-1), then the basis of A.
    The bimodule action is ``(a f b)(c) = f(b c a)``.
    """
    from .form import BilinearForm

    F, d = A.field, A.dim
    T = A.table
    n = 2 * d
    table = np.zeros((n, n, n), dtype=np.int64)
    table[d:, d:, d:] = T
    # b_i f_j = sum_l c_{l i j} f_l ; f_j b_i = sum_l c_{i l j} f_l
    for i in range(d):
        for j in range(d):
            table[d + i, j, :d] = T[:, i, j]
            table[j, d + i, :d] = T[i, :, j]
    unit = np.concatenate([np.zeros(d, dtype=np.int64), A.unit])
    labels = [f"{lab}^*" for lab in A.labels] + list(A.labels)
    TA = Algebra(F, n, table, unit, labels, {"trivial_extension_of_dim": d})
    gram = np.zeros((n, n), dtype=np.int64)
    gram[:d, d:] = np.eye(d, dtype=np.int64)
    gram[d:, :d] = np.eye(d, dtype=np.int64)
    return TA, BilinearForm(gram)
