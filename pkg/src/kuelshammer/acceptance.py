"""The built-in acceptance suite behind ``kuelshammer selftest``.

Each criterion returns a list of failure messages; an empty list is a pass.
Instances are built once and shared, and the property criterion sweeps over
everything the other criteria instantiated.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field as dc_field
from typing import Callable

import numpy as np

from .errors import KuelshammerError
from .families import Instance, instantiate
from .field import Field
from .form import NotSymmetricCertificate, find_symmetric_form, form_predicates, nakayama, socle_form, twisted_center
from .linalg import Subspace, semilinear_power
from .presentation import p_regular_class_count
from .report import compare, compute
from .stable import cartan_rank, dim_projective_center, hh0_stable
from .tower import (
    CommutatorQuotient,
    kuelshammer_ideals,
    quotient_ring,
    reynolds_ideal,
    reynolds_routes,
    t_spaces,
    trivial_extension_center,
    trivial_extension_tower,
    zeta_map,
)

DEFAULT_SEED = 20240601
MU_SAMPLES = 200

GF2 = Field(2)

SCALAR_PAIRS = (
    ("D2B[k=2,s=3,c=0]", "D2B[k=2,s=3,c=1]"),
    ("SD2B1[k=2,t=3,c=0]", "SD2B1[k=2,t=3,c=1]"),
    ("SD2B2[k=3,t=3,c=0]", "SD2B2[k=3,t=3,c=1]"),
)
GROUPS = (("C[n=2]", 2), ("S[n=3]", 2), ("S[n=3]", 3), ("C[n=4]", 2))


def ln_formula(n: int, j: int, i: int) -> int:
    """Closed form for ``dim T_i(L_n) - dim [A,A]`` with ``p(X) = X^(2j)`` in characteristic 2."""
    step = 2 ** (i + 1)
    return n - max(math.ceil((2 * n - (step - 2) * j - (step - 1)) / step), 0)


def ln_grid() -> list[tuple[int, int]]:
    return [(n, j) for n in range(2, 6) for j in range(n)]


class Workspace:
    """Shared instance and tower cache for one selftest run."""

    def __init__(self, seed: int = DEFAULT_SEED):
        self.seed = seed
        self.instances: dict[str, Instance] = {}
        self.towers: dict[str, object] = {}

    def get(self, name: str, field: Field = GF2) -> Instance:
        key = f"{name}@{field}"
        if key not in self.instances:
            self.instances[key] = instantiate(name, field=field)
        return self.instances[key]

    def tower(self, inst: Instance, depth: int = 3):
        key = f"{inst.name}@{inst.field}"
        if key not in self.towers or self.towers[key].depth() < depth:
            if inst.form is not None:
                self.towers[key] = kuelshammer_ideals(inst.algebra, inst.form, depth)
            else:
                self.towers[key] = t_spaces(inst.algebra, depth)
        return self.towers[key]

    def basic_instances(self) -> list[Instance]:
        """The quiver algebras of the first two criteria."""
        out = [self.get(f"Ln[n={n},j={j}]") for n, j in ln_grid()]
        for a, b in SCALAR_PAIRS:
            out += [self.get(a), self.get(b)]
        return out

    def group_instances(self) -> list[Instance]:
        return [self.get(name, Field(p)) for name, p in GROUPS]


# -- criteria -----------------------------------------------------------------------


def check_ln_formula(ws: Workspace) -> list[str]:
    bad = []
    for n, j in ln_grid():
        inst = ws.get(f"Ln[n={n},j={j}]")
        tower = ws.tower(inst, 3)
        comm = inst.algebra.commutator_space.dim
        for i in (1, 2, 3):
            got, want = tower.T[i].dim - comm, ln_formula(n, j, i)
            if got != want:
                bad.append(f"n={n} j={j} i={i}: dim T_i/[A,A] = {got}, formula {want}")
    return bad


def check_scalar_separation(ws: Workspace) -> list[str]:
    bad = []
    for a, b in SCALAR_PAIRS:
        x, y = ws.get(a), ws.get(b)
        cx = compute(x.algebra, x.name, x.form, None, x)
        cy = compute(y.algebra, y.name, y.form, None, y)
        verdict = compare(cx, cy)
        if verdict["verdict"] != "distinguished":
            bad.append(f"{a} vs {b}: verdict {verdict['verdict']}, agreeing {verdict.get('agreeing')}")
        qx = x.algebra.center.dim - cx.tower.perp[1].dim
        qy = y.algebra.center.dim - cy.tower.perp[1].dim
        if qx != qy:
            bad.append(f"{a} vs {b}: dim Z/T_1^perp differs ({qx} vs {qy})")
    return bad


def check_simple_count(ws: Workspace) -> list[str]:
    bad = []
    for inst in ws.basic_instances():
        A = inst.algebra
        simples = A.dim - ws.tower(inst, 1).TA.dim
        if simples != len(A.vertices):
            bad.append(f"{inst.name}: dim A/TA = {simples}, vertices {len(A.vertices)}")
    for inst in ws.group_instances():
        want = p_regular_class_count(inst.group, inst.field.p)
        simples = inst.algebra.dim - ws.tower(inst, 1).TA.dim
        if simples != want:
            bad.append(f"{inst.name} over {inst.field}: dim A/TA = {simples}, p-regular classes {want}")
    expected = {("S[n=3]", 2): 2, ("S[n=3]", 3): 2, ("C[n=4]", 2): 1}
    for (name, p), want in expected.items():
        got = p_regular_class_count(ws.get(name, Field(p)).group, p)
        if got != want:
            bad.append(f"{name} over GF({p}): {got} p-regular classes, expected {want}")
    return bad


def check_reynolds(ws: Workspace) -> list[str]:
    bad = []
    for inst in ws.group_instances():
        routes = reynolds_routes(inst.algebra, inst.group)
        first = routes["section_sums"]
        for key, sub in routes.items():
            if sub != first:
                bad.append(f"{inst.name} over {inst.field}: {key} (dim {sub.dim}) differs from section sums (dim {first.dim})")
    return bad


def _symmetric_instances(ws: Workspace) -> list[Instance]:
    return [i for i in ws.basic_instances() + ws.group_instances() if i.form is not None]


def check_symmetric_identities(ws: Workspace) -> list[str]:
    bad = []
    for inst in _symmetric_instances(ws):
        A, gram = inst.algebra, inst.form.gram
        if A.commutator_space.orthogonal(gram) != A.center:
            bad.append(f"{inst.name}: [A,A]^perp differs from Z(A)")
        if A.radical.orthogonal(gram) != A.socle:
            bad.append(f"{inst.name}: rad^perp differs from soc(A)")
        if A.center.dim != A.dim - A.commutator_space.dim:
            bad.append(f"{inst.name}: dim Z = {A.center.dim}, dim A/[A,A] = {A.dim - A.commutator_space.dim}")
    return bad


def check_zeta_route(ws: Workspace) -> list[str]:
    bad = []
    for inst in _symmetric_instances(ws):
        A = inst.algebra
        tower = ws.tower(inst, 1)
        zeta = zeta_map(A, inst.form)
        Z = A.center
        for n in range(tower.stabilization + 1):
            orth = tower.T[n].orthogonal(inst.form.gram).intersect(Z)
            img = semilinear_power(zeta, n).image()
            via_zeta = Subspace.span(A.field, A.field.matmul(img.basis, Z.basis), A.dim) if img.dim else Subspace.zero(A.field, A.dim)
            if orth != via_zeta:
                bad.append(f"{inst.name} n={n}: orthogonal route dim {orth.dim}, zeta route dim {via_zeta.dim}")
    return bad


def check_trivial_extension(ws: Workspace) -> list[str]:
    bad = []
    A = ws.get("PathA[n=2]").algebra
    te = trivial_extension_tower(A, 2)
    if te.extension.dim != 6:
        bad.append(f"T(A) has dimension {te.extension.dim}, expected 6")
    pred = form_predicates(te.form, te.extension)
    if not all(pred.values()):
        bad.append(f"form on T(A) fails {pred}")
    for n in (1, 2):
        if te.tower.perp[n] != te.annihilators[n]:
            bad.append(f"n={n}: T_n(TA)^perp (dim {te.tower.perp[n].dim}) differs from Ann(T_n A) x 0 (dim {te.annihilators[n].dim})")
    if te.extension.center != trivial_extension_center(A):
        bad.append("Z(TA) differs from Ann([A,A]) x Z(A)")
    return bad


def check_quantum_plane(ws: Workspace) -> list[str]:
    bad = []
    F = Field.gf(4)
    inst = ws.get("Aq[q=w]", F)
    A, pres = inst.algebra, inst.presentation
    q = F.parse("w")
    X, Y = pres.element("X"), pres.element("Y")
    nu = nakayama(socle_form(A), A)
    Znu = twisted_center(A, nu)
    if A.center.dim != 2:
        bad.append(f"dim Z = {A.center.dim}, expected 2")
    if Znu.dim != 3:
        bad.append(f"dim Z_nu = {Znu.dim}, expected 3")
    if not np.array_equal(F.matmul(nu.matrix, X), F.mul(X, q)):
        bad.append("nu(X) differs from qX")
    if not np.array_equal(F.matmul(nu.matrix, Y), F.mul(Y, F.inv(q))):
        bad.append("nu(Y) differs from q^-1 Y")
    radZ = A.center.intersect(A.radical)
    for r in radZ.basis:
        for z in Znu.basis:
            if np.any(A.multiply(r, z)):
                bad.append("rad(Z) Z_nu is nonzero")
    found = find_symmetric_form(A)
    if not isinstance(found, NotSymmetricCertificate):
        bad.append(f"find_symmetric_form returned {type(found).__name__}")
    return bad


def check_ln_forms(ws: Workspace) -> list[str]:
    bad = []
    for n in (3, 4):
        for j in range(n):
            inst = ws.get(f"Ln[n={n},j={j}]")
            A, pres = inst.algebra, inst.presentation
            f = socle_form(A)
            a0 = pres.element("a0")
            for m in range(2 * n):
                x = pres.element("abar0 " + " ".join(["eps"] * m)) if m else pres.element("abar0")
                left, right = int(f.value(A, x, a0)), int(f.value(A, a0, x))
                if left != int(m == 2 * n - 3):
                    bad.append(f"n={n} j={j} m={m}: <abar0 eps^m, a0> = {left}")
                if right != int(m in (2 * n - 3, 2 * n - 4 - 2 * j)):
                    bad.append(f"n={n} j={j} m={m}: <a0, abar0 eps^m> = {right}")
            if np.array_equal(f.gram, f.gram.T):
                bad.append(f"n={n} j={j}: socle form is symmetric")
            found = find_symmetric_form(A)
            if not hasattr(found, "gram"):
                bad.append(f"n={n} j={j}: no symmetric witness ({type(found).__name__})")
            elif not all(form_predicates(found, A).values()):
                bad.append(f"n={n} j={j}: witness fails {form_predicates(found, A)}")
    return bad


def check_stable_identity(ws: Workspace) -> list[str]:
    bad = []
    extra = [ws.get("Trunc[n=2]", GF2), ws.get("Trunc[n=2]", Field(3))]
    for inst in ws.basic_instances() + extra:
        A = inst.algebra
        cq = CommutatorQuotient.of(A)
        hh0, r = hh0_stable(A, cq).dim, cartan_rank(A)
        if hh0 + r != cq.dim:
            bad.append(f"{inst.name} over {inst.field}: {hh0} + {r} != {cq.dim}")
        if inst.form is not None:
            z_pr = dim_projective_center(A)
            if z_pr != r:
                bad.append(f"{inst.name}: dim Z^pr = {z_pr}, Cartan rank {r}")
            if z_pr > reynolds_ideal(A).dim:
                bad.append(f"{inst.name}: dim Z^pr = {z_pr} exceeds dim R(A) = {reynolds_ideal(A).dim}")
    return bad


def _random_vector(F: Field, d: int, rng: random.Random) -> np.ndarray:
    return np.array([rng.randrange(F.q) for _ in range(d)], dtype=np.int64)


def check_properties(ws: Workspace) -> list[str]:
    bad = []
    if not ws.instances:
        ws.basic_instances()
    rng = random.Random(ws.seed)
    for inst in list(ws.instances.values()):
        A, F = inst.algebra, inst.field
        p, C = F.p, A.commutator_space
        comm_rows = C.basis
        for _ in range(MU_SAMPLES):
            a = _random_vector(F, A.dim, rng)
            b = _random_vector(F, A.dim, rng)
            c = F.matmul(_random_vector(F, C.dim, rng), comm_rows) if C.dim else A.zero()
            ap = A.power(a, p)
            # mu respects cosets and is p-semilinear
            if not C.contains_vector(F.sub(A.power(F.add(a, c), p), ap)):
                bad.append(f"{inst.name}: (a + c)^p - a^p not in [A,A]")
                break
            if not C.contains_vector(F.sub(A.power(F.add(a, b), p), F.add(ap, A.power(b, p)))):
                bad.append(f"{inst.name}: (a + b)^p - a^p - b^p not in [A,A]")
                break
            if not C.contains_vector(A.power(A.commutator(a, b), p)):
                bad.append(f"{inst.name}: (ab - ba)^p not in [A,A]")
                break
            s = rng.randrange(F.q)
            if not C.contains_vector(F.sub(A.power(F.mul(a, s), p), F.mul(ap, F.power(np.int64(s), p)))):
                bad.append(f"{inst.name}: (s a)^p - s^p a^p not in [A,A]")
                break
        tower = ws.tower(inst, 1)
        if any(not hi.contains(lo) for lo, hi in zip(tower.T, tower.T[1:])):
            bad.append(f"{inst.name}: T_n is not ascending")
        if tower.TA != A.radical.sum(C):
            bad.append(f"{inst.name}: TA differs from rad + [A,A]")
        if tower.perp is not None:
            Z = A.center
            if any(not hi.contains(lo) for hi, lo in zip(tower.perp, tower.perp[1:])):
                bad.append(f"{inst.name}: T_n^perp is not descending")
            for n, I in enumerate(tower.perp):
                if I.dim and any(not I.contains(I.map(A.left_matrix(z))) for z in Z.basis):
                    bad.append(f"{inst.name}: T_{n}^perp is not an ideal of Z(A)")
            for n in range(1, len(tower.perp)):
                quotient_ring(A, Z, tower.perp[n])  # raises unless a commutative ring
    return bad


# -- runner --------------------------------------------------------------------------


@dataclass(frozen=True)
class Criterion:
    number: int
    key: str
    title: str
    check: Callable[[Workspace], list]
    budget: float  # seconds


CRITERIA = (
    Criterion(1, "ln-formula", "L_n dimension formula", check_ln_formula, 60),
    Criterion(2, "scalar-separation", "scalar separation of tame families", check_scalar_separation, 30),
    Criterion(3, "simple-count", "simple modules from dim A/TA", check_simple_count, 5),
    Criterion(4, "reynolds", "Reynolds ideal three ways", check_reynolds, 5),
    Criterion(5, "symmetric-identities", "[A,A]^perp = Z and rad^perp = soc", check_symmetric_identities, 60),
    Criterion(6, "zeta-route", "zeta images against orthogonals", check_zeta_route, 60),
    Criterion(7, "trivial-extension", "trivial extension of the A_2 path algebra", check_trivial_extension, 30),
    Criterion(8, "quantum-plane", "quantum exterior algebra over GF(4)", check_quantum_plane, 30),
    Criterion(9, "ln-forms", "L_n socle form table and symmetric witness", check_ln_forms, 60),
    Criterion(10, "stable-identity", "HH_0^st plus Cartan rank", check_stable_identity, 60),
    Criterion(11, "properties", "mu, chain and ideal properties", check_properties, 120),
)

TOTAL_BUDGET = 300.0


@dataclass
class CriterionResult:
    criterion: Criterion
    failures: list = dc_field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def line(self) -> str:
        c = self.criterion
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {c.number:>2} {c.key:<22} {self.seconds:7.2f}s  {c.title}"


def select(filter_text: str | None = None) -> list[Criterion]:
    """Criteria whose number or key contains one of the comma separated filters."""
    if not filter_text:
        return list(CRITERIA)
    wanted = [w.strip() for w in filter_text.split(",") if w.strip()]
    return [c for c in CRITERIA if any(w == str(c.number) or w in c.key for w in wanted)]


def run_criterion(c: Criterion, ws: Workspace) -> CriterionResult:
    start = time.perf_counter()
    try:
        failures = list(c.check(ws))
    except KuelshammerError as exc:
        failures = [f"{type(exc).__name__}: {exc}"]
    seconds = time.perf_counter() - start
    if seconds > c.budget:
        failures.append(f"took {seconds:.1f}s, budget {c.budget:.0f}s")
    return CriterionResult(c, failures, seconds)


def run(filter_text: str | None = None, seed: int = DEFAULT_SEED, report: Callable[[str], None] | None = None):
    """Run the selected criteria in order and return their results."""
    ws = Workspace(seed)
    results = []
    for c in select(filter_text):
        res = run_criterion(c, ws)
        results.append(res)
        if report:
            report(res.line())
            for msg in res.failures[:10]:
                report(f"       {msg}")
            if len(res.failures) > 10:
                report(f"       ... {len(res.failures) - 10} more")
    return results
