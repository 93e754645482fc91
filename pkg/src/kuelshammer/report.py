"""Invariant reports for single algebras and verdicts for pairs."""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field

import numpy as np

from .algebra import Algebra
from .errors import SearchBoundExceeded
from .families import Instance
from .form import BilinearForm, form_predicates
from .stable import stable_invariants
from .tower import (
    fingerprint_difference,
    iso_search_local,
    kuelshammer_ideals,
    quotient_ring,
    reynolds_ideal,
    ring_fingerprint,
    t_spaces,
    trivial_extension_tower,
)


TRIVIAL_EXTENSION_MAX_DIM = 64


@dataclass
class Computed:
    """Everything a report or comparison needs, kept as objects."""

    name: str
    algebra: Algebra
    form: BilinearForm | None
    tower: object
    quotients: list = dc_field(default_factory=list)  # Z/T_n^perp for n >= 1
    stable: object = None
    document: dict = dc_field(default_factory=dict)


def _socle_form_summary(A: Algebra, inst: Instance | None) -> dict | None:
    f = inst.selfinjective_form if inst is not None else None
    if f is None:
        return None
    return form_predicates(f, A)


def compute(A: Algebra, name: str = "", form: BilinearForm | None = None, depth: int | None = None,
            inst: Instance | None = None) -> Computed:
    """Everything reported about ``A``, with its JSON document."""
    F = A.field
    doc: dict = {"name": name, "field": F.to_json()}
    rad = A.radical
    doc["dims"] = {
        "A": A.dim,
        "Z": A.center.dim,
        "commutator": A.commutator_space.dim,
        "rad": rad.dim,
        "soc": A.socle.dim,
    }
    if form is not None:
        tower = kuelshammer_ideals(A, form, depth)
    else:
        tower = t_spaces(A, depth)
    levels = len(tower.T) if depth is None else min(len(tower.T), depth + 1)
    comm = A.commutator_space.dim
    rows = []
    for n in range(levels):
        row = {"n": n, "dim_Tn": tower.T[n].dim, "dim_Tn_mod_commutator": tower.T[n].dim - comm}
        if tower.perp is not None:
            row["dim_Tn_perp"] = tower.perp[n].dim
            row["dim_Z_mod_Tn_perp"] = A.center.dim - tower.perp[n].dim
        rows.append(row)
    doc["tower"] = rows
    doc["stabilization"] = tower.stabilization
    doc["simple_count"] = A.dim - tower.TA.dim
    doc["reynolds_dim"] = reynolds_ideal(A).dim
    quotients, fps = [], []
    if tower.perp is not None:
        for n in range(1, levels):
            Q = quotient_ring(A, A.center, tower.perp[n])
            quotients.append(Q)
            fps.append({"n": n, "fingerprint": ring_fingerprint(Q)})
    doc["quotient_fingerprints"] = fps
    doc["symmetric_form"] = None if form is None else form_predicates(form, A)
    doc["socle_form"] = _socle_form_summary(A, inst)
    stable = None
    if A.has_presentation:
        stable = stable_invariants(A, symmetric=form is not None)
        doc["stable"] = stable.to_json()
    else:
        doc["stable"] = None
    if form is None and A.dim <= TRIVIAL_EXTENSION_MAX_DIM:
        te = trivial_extension_tower(A, max(levels - 1, 1))
        doc["trivial_extension"] = {
            "dim": te.extension.dim,
            "dim_Tn_perp": [s.dim for s in te.tower.perp],
            "dim_annihilator_of_Tn": [s.dim for s in te.annihilators],
            "matches_annihilator": te.matches,
        }
    if inst is not None:
        doc["family"] = {"name": inst.family.name, "flags": sorted(inst.family.flags), "notes": list(inst.notes)}
    return Computed(name, A, form, tower, quotients, stable, doc)


def report(inst: Instance, depth: int | None = None) -> dict:
    return compute(inst.algebra, inst.name, inst.form, depth, inst).document


def report_algebra(A: Algebra, name: str = "", form: BilinearForm | None = None, depth: int | None = None) -> dict:
    """Report for a bare algebra; a symmetric form is searched for when none is given."""
    if form is None:
        from .form import find_symmetric_form

        found = find_symmetric_form(A)
        form = found if isinstance(found, BilinearForm) else None
    return compute(A, name, form, depth).document


def to_json(doc: dict) -> str:
    """Canonical serialisation: sorted keys, fixed separators, trailing newline."""
    return json.dumps(_plain(doc), sort_keys=True, indent=2) + "\n"


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def render_table(doc: dict) -> str:
    """Human-readable rendering of a report."""
    p, e = doc["field"]["p"], doc["field"]["e"]
    lines = [f"{doc.get('name') or 'algebra'} over GF({p if e == 1 else f'{p}^{e}'})"]
    d = doc["dims"]
    lines.append("  " + "  ".join(f"{k}={v}" for k, v in d.items()))
    lines.append(f"  simple modules (dim A/TA) = {doc['simple_count']}, Reynolds ideal dim = {doc['reynolds_dim']}")
    has_perp = any("dim_Tn_perp" in r for r in doc["tower"])
    header = "  n  dim T_n  dim T_n/[A,A]" + ("  dim T_n^perp  dim Z/T_n^perp" if has_perp else "")
    lines.append(header)
    for r in doc["tower"]:
        line = f"  {r['n']:<2} {r['dim_Tn']:>8} {r['dim_Tn_mod_commutator']:>14}"
        if has_perp:
            line += f" {r['dim_Tn_perp']:>14} {r['dim_Z_mod_Tn_perp']:>15}"
        lines.append(line)
    for fp in doc["quotient_fingerprints"]:
        f = fp["fingerprint"]
        lines.append(f"  Z/T_{fp['n']}^perp: " + ", ".join(f"{k}={f[k]}" for k in f))
    if doc.get("stable"):
        lines.append("  stable: " + ", ".join(f"{k}={v}" for k, v in doc["stable"].items()))
    if doc.get("trivial_extension"):
        te = doc["trivial_extension"]
        lines.append(f"  trivial extension: T_n^perp dims {te['dim_Tn_perp']}, matches Ann(T_n A) x 0: {te['matches_annihilator']}")
    return "\n".join(lines) + "\n"


# -- comparison ----------------------------------------------------------------------


def _same_structure(A: Algebra, B: Algebra) -> bool:
    return A.field == B.field and A.dim == B.dim and np.array_equal(A.table, B.table) and np.array_equal(A.unit, B.unit)


def compare(a: Computed, b: Computed, search_level: int = 1) -> dict:
    """Verdict for two algebras over the same field.

    Invariants are checked in a fixed order: dimensions, tower dimensions,
    quotient fingerprints level by level, stable invariants. The first
    difference decides. Otherwise the rings ``Z/T_n^perp`` at ``search_level``
    go to the exact isomorphism search when small enough.
    """
    a.algebra.field.check_same(b.algebra.field)
    out: dict = {"left": a.name, "right": b.name}
    if _same_structure(a.algebra, b.algebra):
        out.update(verdict="isomorphic", witness="identity", agreeing=["structure constants"])
        return out
    agreeing = []

    def differ(name, x, y) -> bool:
        if x != y:
            out.update(verdict="distinguished", invariant=name, values=[_plain(x), _plain(y)])
            return True
        agreeing.append(name)
        return False

    if differ("dims", a.document["dims"], b.document["dims"]):
        return out
    for key in ("dim_Tn", "dim_Tn_perp"):
        xs = [r.get(key) for r in a.document["tower"]]
        ys = [r.get(key) for r in b.document["tower"]]
        if differ(f"tower.{key}", xs, ys):
            return out
    if differ("stabilization", a.document["stabilization"], b.document["stabilization"]):
        return out
    for fa, fb in zip(a.document["quotient_fingerprints"], b.document["quotient_fingerprints"]):
        d = fingerprint_difference(fa["fingerprint"], fb["fingerprint"])
        name = f"quotient_fingerprint[n={fa['n']}]"
        if d is not None:
            k, comp = d
            out.update(
                verdict="distinguished",
                invariant=f"{name}.{comp}",
                component=k,
                values=[_plain(fa["fingerprint"][comp]), _plain(fb["fingerprint"][comp])],
            )
            return out
        agreeing.append(name)
    if differ("stable", a.document.get("stable"), b.document.get("stable")):
        return out
    out.update(verdict="not-distinguished", agreeing=agreeing)
    idx = search_level - 1
    if 0 <= idx < min(len(a.quotients), len(b.quotients)):
        Qa, Qb = a.quotients[idx], b.quotients[idx]
        entry = {"n": search_level}
        try:
            found, detail = iso_search_local(Qa, Qb)
        except SearchBoundExceeded as exc:
            entry.update(result="inconclusive", reason=str(exc))
        else:
            if found:
                entry.update(result="isomorphic", map=_plain(detail))
            else:
                # the rings are invariants, so a proven non-isomorphism separates the algebras
                out.update(verdict="distinguished", invariant=f"quotient_ring[n={search_level}]", values=None)
                entry.update(result="not-isomorphic", reason=detail)
        out["quotient_search"] = entry
    return out


def compare_instances(x: Instance, y: Instance, depth: int | None = None) -> dict:
    return compare(compute(x.algebra, x.name, x.form, depth, x), compute(y.algebra, y.name, y.form, depth, y))

