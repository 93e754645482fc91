"""Command line front end.

Inputs are registry names (``Ln[n=3,j=0]``), paths to JSON files, or inline
JSON. These JSON shapes are understood::

    {"field": {...}, "dim": d, "unit": [...], "structure": [[i, j, k, c], ...]}
    {"quiver": {"vertices": n, "arrows": [["a", 0, 1], ...]},
     "relations": [[[1, "a b"], [1, "c"]], ...], "bound": 4}
    {"group": {"table": [[...], ...]}}   or   {"group": {"permutations": [[...], ...]}}
    {"family": "Ln[n=3,j=0]"}

An optional "form" (a Gram matrix) supplies the symmetric form; without it
one is searched for.

Exit codes: 0 ok, 1 usage, 2 validation, 3 resource bound, 4 internal invariant.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from .algebra import Algebra
from .errors import InternalInvariantError, KuelshammerError, ValidationError
from .families import Instance, instantiate, list_families, parse_name, sweep
from .field import Field
from .form import BilinearForm, find_symmetric_form
from .presentation import CayleyTable, Quiver, Relation, group_algebra, quotient_algebra
from .report import compare, compute, render_table, to_json

EXIT_OK, EXIT_USAGE = 0, 1


class UsageError(Exception):
    pass


def parse_field(text: str | None) -> Field | None:
    """``p=2``, ``p=2,e=2`` or ``p=2,e=2,mod=1,1,1`` (modulus coefficients low degree first)."""
    if text is None:
        return None
    keys: dict[str, list[str]] = {}
    current = None
    for tok in (t.strip() for t in text.split(",")):
        if not tok:
            continue
        if "=" in tok:
            current, _, val = tok.partition("=")
            current = current.strip()
            if current not in ("p", "e", "mod"):
                raise UsageError(f"unknown field key {current!r}")
            keys[current] = [val.strip()]
        elif current == "mod":
            keys["mod"].append(tok)
        else:
            raise UsageError(f"cannot parse field {text!r}")
    if "p" not in keys:
        raise UsageError("field needs p=<prime>")
    try:
        p = int(keys["p"][0])
        e = int(keys.get("e", ["1"])[0])
        mod = tuple(int(c) for c in keys.get("mod", []))
    except ValueError:
        raise UsageError(f"cannot parse field {text!r}") from None
    return Field(p, e, mod)


# -- inputs --------------------------------------------------------------------------


class Loaded:
    """An algebra with whatever forms came with it."""

    def __init__(self, algebra: Algebra, name: str, form=None, instance: Instance | None = None):
        self.algebra = algebra
        self.name = name
        self.form = form
        self.instance = instance


def _read_source(text: str):
    """Inline JSON, a JSON file, or None for a registry name."""
    s = text.strip()
    if s.startswith("{"):
        try:
            return json.loads(s)
        except json.JSONDecodeError as exc:
            raise UsageError(f"inline JSON does not parse: {exc}") from None
    if os.path.exists(text):
        with open(text) as fh:
            try:
                return json.load(fh)
            except json.JSONDecodeError as exc:
                raise ValidationError(f"{text}: not valid JSON ({exc})") from None
    return None


def _field_for(doc: dict, flag: Field | None) -> Field:
    if "field" in doc:
        F = Field.from_json(doc["field"])
        if flag is not None and flag != F:
            raise ValidationError(f"--field {flag} disagrees with the input field {F}")
        return F
    return flag or Field(2)


def load(text: str, field: Field | None = None, bound: int | None = None) -> Loaded:
    doc = _read_source(text)
    if doc is None:
        try:
            parse_name(text)
        except ValidationError:
            raise UsageError(f"{text!r} is neither a file, inline JSON, nor a registry name") from None
        inst = instantiate(text, field=field or Field(2), bound=bound)
        return Loaded(inst.algebra, inst.name, inst.form, inst)
    if not isinstance(doc, dict):
        raise ValidationError("input JSON must be an object")
    if "family" in doc:
        return load(doc["family"], field or (Field.from_json(doc["field"]) if "field" in doc else None), bound)
    F = _field_for(doc, field)
    name = doc.get("name", "")
    if "structure" in doc:
        A = Algebra.from_json({**doc, "field": F.to_json()})
    elif "quiver" in doc:
        q = Quiver(int(doc["quiver"]["vertices"]), tuple(tuple(a) for a in doc["quiver"]["arrows"]))
        rels = [Relation.of(*[(F.parse(c), path) for c, path in rel]) for rel in doc.get("relations", [])]
        L = bound if bound is not None else doc.get("bound")
        A = quotient_algebra(q, rels, F, L, escalate=bound is not None or L is None).algebra
    elif "group" in doc:
        g = doc["group"]
        table = CayleyTable.from_permutations(g["permutations"]) if "permutations" in g else CayleyTable.from_json(g)
        A = group_algebra(table, F)
        n = table.order
        gram = [[int(table.mul(i, j) == 0) for j in range(n)] for i in range(n)]
        return Loaded(A, name or f"group of order {n}", BilinearForm(np.array(gram, dtype=np.int64)))
    else:
        raise ValidationError("input JSON needs one of: structure, quiver, group, family")
    form = None
    if "form" in doc:
        form = BilinearForm(np.array([[F.parse(c) for c in row] for row in doc["form"]], dtype=np.int64))
    else:
        found = find_symmetric_form(A)
        form = found if isinstance(found, BilinearForm) else None
    return Loaded(A, name, form)


# -- commands ------------------------------------------------------------------------


def _emit(doc, out: str, table_text: str | None = None) -> None:
    if out == "table" and table_text is not None:
        sys.stdout.write(table_text)
    else:
        sys.stdout.write(to_json(doc))


def cmd_build(args) -> int:
    x = load(args.input, args.field, args.bound)
    doc = x.algebra.to_json()
    if x.name:
        doc["name"] = x.name
    table = None
    if args.out == "table":
        A = x.algebra
        table = f"{x.name or 'algebra'}: dim {A.dim} over {A.field}, {len(A.structure_entries())} nonzero structure constants\n"
        if A.labels:
            table += "  basis: " + " ".join(A.labels) + "\n"
    _emit(doc, args.out, table)
    return EXIT_OK


def _compute(x: Loaded, depth):
    return compute(x.algebra, x.name, x.form, depth, x.instance)


def cmd_report(args) -> int:
    x = load(args.input, args.field, args.bound)
    doc = _compute(x, args.depth).document
    _emit(doc, args.out, render_table(doc))
    return EXIT_OK


def cmd_compare(args) -> int:
    a = load(args.left, args.field, args.bound)
    b = load(args.right, args.field, args.bound)
    verdict = compare(_compute(a, args.depth), _compute(b, args.depth))
    text = f"{verdict['left']} vs {verdict['right']}: {verdict['verdict']}"
    if verdict["verdict"] == "distinguished":
        text += f" by {verdict['invariant']}"
        if verdict.get("values") is not None:
            text += f" {verdict['values'][0]} vs {verdict['values'][1]}"
    elif verdict["verdict"] == "not-distinguished":
        text += f"; agreeing: {', '.join(verdict['agreeing'])}"
    if "quotient_search" in verdict:
        text += f"\n  Z/T_1^perp search: {verdict['quotient_search']['result']}"
    _emit(verdict, args.out, text + "\n")
    return EXIT_OK


def _grid(text: str) -> dict:
    """``n=2..5;j=0,1`` -> {"n": [2, 3, 4, 5], "j": [0, 1]}; scalars stay strings."""
    grid = {}
    for part in text.split(";"):
        if not part.strip():
            continue
        key, _, vals = part.partition("=")
        if not vals:
            raise UsageError(f"grid entry {part!r} needs key=values")
        out = []
        for v in vals.split(","):
            v = v.strip()
            if ".." in v:
                lo, _, hi = v.partition("..")
                try:
                    out += list(range(int(lo), int(hi) + 1))
                except ValueError:
                    raise UsageError(f"bad range {v!r}") from None
            elif v:
                out.append(int(v) if v.lstrip("-").isdigit() else v)
        grid[key.strip()] = out
    return grid


class SweepInvariants:
    """Per-cell summary; a class rather than a closure so worker processes can pickle it."""

    def __init__(self, depth):
        self.depth = depth

    def __call__(self, inst: Instance) -> dict:
        doc = compute(inst.algebra, inst.name, inst.form, self.depth, inst).document
        return {k: doc[k] for k in ("dims", "tower", "stabilization", "stable")}


def cmd_sweep(args) -> int:
    grid = _grid(args.grid) if args.grid else {}
    rows = sweep(args.family, grid, args.field or Field(2), SweepInvariants(args.depth), jobs=args.jobs)
    if args.out == "table":
        lines = []
        for r in rows:
            if "error" in r:
                lines.append(f"{r['params']}: {r['error']['type']}: {r['error']['message']}")
            else:
                dims = [t["dim_Tn"] for t in r["result"]["tower"]]
                lines.append(f"{r['name']}: dims {r['result']['dims']} T_n {dims}")
        _emit(rows, "table", "\n".join(lines) + "\n")
    else:
        _emit(rows, "json")
    return EXIT_OK


def cmd_families(args) -> int:
    fams = list_families()
    if args.out == "table":
        text = "".join(f"{f['name']:<12} {f['notation']:<22} params: {', '.join(p['name'] for p in f['params'])}; {'; '.join(f['conditions'])}\n" for f in fams)
        _emit(fams, "table", text)
    else:
        _emit(fams, "json")
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .acceptance import TOTAL_BUDGET, run, select

    if not select(args.filter):
        raise UsageError(f"no criterion matches {args.filter!r}")
    start = time.perf_counter()
    results = run(args.filter, seed=args.seed, report=print)
    total = time.perf_counter() - start
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed in {total:.1f}s")
    if args.filter is None and total > TOTAL_BUDGET:
        print(f"total time exceeds {TOTAL_BUDGET:.0f}s")
        return 1 if not failed else 2
    return 0 if not failed else 2


# -- parser --------------------------------------------------------------------------


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", help='ground field, e.g. "p=2" or "p=2,e=2,mod=1,1,1"')
    common.add_argument("--depth", type=_positive, default=None, help="tower depth (default: until stable)")
    common.add_argument("--bound", type=_positive, default=None, help="override the path length bound")
    common.add_argument("--out", choices=("json", "table"), default="json")
    common.add_argument("--jobs", type=_positive, default=1)
    common.add_argument("--seed", type=int, default=None)

    parser = _Parser(prog="kuelshammer", description="Kuelshammer ideals of finite dimensional algebras over finite fields.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = sub.add_parser("build", parents=[common], help="build an algebra and print its structure constants")
    p.add_argument("input")
    p.set_defaults(func=cmd_build)
    p = sub.add_parser("report", parents=[common], help="tower dimensions with quotient fingerprints and stable invariants")
    p.add_argument("input")
    p.set_defaults(func=cmd_report)
    p = sub.add_parser("compare", parents=[common], help="try to tell two algebras apart")
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(func=cmd_compare)
    p = sub.add_parser("sweep", parents=[common], help="report over a parameter grid of one family")
    p.add_argument("family")
    p.add_argument("--grid", default="", help='e.g. "n=2..5;j=0,1"')
    p.set_defaults(func=cmd_sweep)
    p = sub.add_parser("families", parents=[common], help="list the registry")
    p.set_defaults(func=cmd_families)
    p = sub.add_parser("selftest", parents=[common], help="run the acceptance suite")
    p.add_argument("--filter", default=None, help="criterion numbers or key fragments, comma separated")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.field = parse_field(args.field)
        if args.seed is None:
            from .acceptance import DEFAULT_SEED

            args.seed = DEFAULT_SEED
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except KuelshammerError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except Exception as exc:  # anything unexpected is an internal failure
        err = InternalInvariantError(f"{type(exc).__name__}: {exc}")
        print(f"internal error: {err}", file=sys.stderr)
        return err.exit_code


if __name__ == "__main__":
    sys.exit(main())
