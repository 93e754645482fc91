"""Finite-dimensional unital associative algebras given by structure constants."""

from __future__ import annotations

import math
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse

from .errors import NoPresentation, NotIdeal, RadicalFailure, ValidationError
from .field import Field
from .linalg import Subspace, identity, image, kernel, rank


class Algebra:
    """Algebra with basis ``b_0..b_{d-1}`` and products ``b_i b_j = sum_k c_ijk b_k``.

    The structure constants are held as sparse coordinate arrays; dense
    left/right multiplication data is materialised on first use.

    ``metadata`` keys understood by the library:

    * ``vertices``: basis indices of the vertex idempotents of a basic
      presentation (orthogonal, summing to 1);
    * ``arrows``: basis indices of the arrows;
    * ``radical_basis``: basis indices spanning the arrow ideal;
    * ``socle_paths``: basis indices spanning the socle;
    * ``generators``: basis indices generating the algebra with 1.
    """

    def __init__(
        self,
        field: Field,
        dim: int,
        structure,
        unit,
        labels: Sequence[str] | None = None,
        metadata: dict | None = None,
        validate: bool = True,
    ):
        self.field = field
        self.dim = int(dim)
        self.labels = list(labels) if labels is not None else [f"b{i}" for i in range(self.dim)]
        if len(self.labels) != self.dim:
            raise ValidationError("label count does not match dimension")
        self.metadata = dict(metadata or {})
        self.unit = np.asarray(unit, dtype=np.int64)
        if self.unit.shape != (self.dim,):
            raise ValidationError("unit has the wrong length")
        if isinstance(structure, np.ndarray) and structure.ndim == 3:
            self._table_init = np.asarray(structure, dtype=np.int64)
            nz = np.nonzero(self._table_init)
            self._coo = (*[a.astype(np.int64) for a in nz], self._table_init[nz])
        else:
            self._table_init = None
            self._coo = self._normalise(structure)
        if validate:
            self.validate()

    def _normalise(self, entries) -> tuple[np.ndarray, ...]:
        F, d = self.field, self.dim
        arr = [(int(i), int(j), int(k), _encoded(F, c)) for i, j, k, c in entries]
        if not arr:
            z = np.zeros(0, dtype=np.int64)
            return z, z, z, z
        a = np.asarray(arr, dtype=np.int64)
        if a[:, :3].min() < 0 or a[:, :3].max() >= d:
            raise ValidationError("structure constant index out of range")
        flat = (a[:, 0] * d + a[:, 1]) * d + a[:, 2]
        uniq, inv = np.unique(flat, return_inverse=True)
        vals = F.accumulate(a[:, 3], inv, len(uniq))
        keep = vals != 0
        uniq, vals = uniq[keep], vals[keep]
        return uniq // (d * d), (uniq // d) % d, uniq % d, vals

    # -- dense data ------------------------------------------------------------

    @cached_property
    def table(self) -> np.ndarray:
        """Dense ``T[i, j, k] = c_ijk``."""
        if self._table_init is not None:
            t = self._table_init
        else:
            d = self.dim
            t = np.zeros((d, d, d), dtype=np.int64)
            i, j, k, c = self._coo
            t[i, j, k] = c
        t.setflags(write=False)
        return t

    def structure_entries(self) -> list[tuple[int, int, int, int]]:
        i, j, k, c = self._coo
        return [(int(a), int(b), int(e), int(v)) for a, b, e, v in zip(i, j, k, c)]

    def basis_vector(self, i: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[i] = 1
        return v

    def zero(self) -> np.ndarray:
        return np.zeros(self.dim, dtype=np.int64)

    # -- multiplication ----------------------------------------------------------

    def _combine(self, coeffs, mats: np.ndarray) -> np.ndarray:
        """``sum_i coeffs[i] * mats[i]`` over the nonzero coefficients only."""
        d = self.dim
        x = np.asarray(coeffs, dtype=np.int64)
        nz = np.flatnonzero(x)
        if nz.size == 0:
            return np.zeros((d, d), dtype=np.int64)
        if nz.size == 1 and x[nz[0]] == 1:
            return np.array(mats[nz[0]])
        return self.field.matmul(x[nz][None, :], mats[nz].reshape(nz.size, d * d)).reshape(d, d)

    def left_matrix(self, x) -> np.ndarray:
        """Matrix of ``y -> x y``."""
        return self._combine(x, self.left_basis_matrices)

    def right_matrix(self, y) -> np.ndarray:
        """Matrix of ``x -> x y``."""
        return self._combine(y, self.right_basis_matrices)

    @cached_property
    def left_basis_matrices(self) -> np.ndarray:
        m = np.ascontiguousarray(self.table.transpose(0, 2, 1))
        m.setflags(write=False)
        return m

    @cached_property
    def right_basis_matrices(self) -> np.ndarray:
        m = np.ascontiguousarray(self.table.transpose(1, 2, 0))
        m.setflags(write=False)
        return m

    def multiply(self, a, b) -> np.ndarray:
        F = self.field
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        ia, jb = np.flatnonzero(a), np.flatnonzero(b)
        if ia.size == 0 or jb.size == 0:
            return self.zero()
        outer = F.mul(a[ia][:, None], b[jb][None, :]).reshape(1, -1)
        return F.matmul(outer, self.table[np.ix_(ia, jb)].reshape(-1, self.dim))[0]

    def multiply_rows(self, rows, y) -> np.ndarray:
        """Each row of ``rows`` multiplied on the right by ``y``."""
        return self.field.matmul(np.asarray(rows, dtype=np.int64), self.right_matrix(y).T)

    def power(self, x, n: int) -> np.ndarray:
        result = self.unit.copy()
        base = np.asarray(x, dtype=np.int64)
        while n:
            if n & 1:
                result = self.multiply(result, base)
            n >>= 1
            if n:
                base = self.multiply(base, base)
        return result

    def commutator(self, a, b) -> np.ndarray:
        return self.field.sub(self.multiply(a, b), self.multiply(b, a))

    # -- validation --------------------------------------------------------------

    @property
    def generators(self) -> list[int]:
        g = self.metadata.get("generators")
        return list(range(self.dim)) if g is None else list(g)

    def validate(self) -> None:
        F, d = self.field, self.dim
        if d == 0:
            return
        eye = identity(d)
        if not (np.array_equal(self.left_matrix(self.unit), eye) and np.array_equal(self.right_matrix(self.unit), eye)):
            raise ValidationError("unit does not act as the identity")
        gens = self.generators
        if "generators" in self.metadata:
            span = Subspace.span(F, self.unit[None, :], d)
            while True:
                grown = span.sum(Subspace.span(F, np.vstack([span.map(self.right_basis_matrices[g]).basis for g in gens] + [span.basis]), d))
                if grown.dim == span.dim:
                    break
                span = grown
            if span.dim != d:
                raise ValidationError("declared generators do not generate the algebra")
        # (b_a b_b) g == b_a (b_b g) for every generator g implies associativity
        if F.e == 1:
            bad = self._associativity_sparse(gens)
        else:
            bad = self._associativity_dense(gens)
        if bad is not None:
            a, b, g = bad
            raise ValidationError(
                f"associativity fails on ({self.labels[a]}, {self.labels[b]}, {self.labels[g]})"
            )
        self._validate_idempotents()

    def _associativity_sparse(self, gens):
        """First (a, b, g) with (b_a b_b) g != b_a (b_b g), using exact sparse integer products."""
        F, d = self.field, self.dim
        i, j, k, c = self._coo
        s_ab_k = sparse.csr_matrix((c, (i * d + j, k)), shape=(d * d, d))
        s_ak_m = sparse.csr_matrix((c, (i * d + k, j)), shape=(d * d, d))
        for g in gens:
            sel = j == g
            # R_g[k, m] = coefficient of b_k in b_m g
            r_g = sparse.csr_matrix((c[sel], (k[sel], i[sel])), shape=(d, d))
            lhs = (s_ab_k @ r_g.T).tocoo()  # rows (a, b), cols k
            rhs = (s_ak_m @ r_g).tocoo()  # rows (a, k), cols b
            a_r, k_r = np.divmod(rhs.row, d)
            rhs_ab = sparse.coo_matrix((rhs.data, (a_r * d + rhs.col, k_r)), shape=(d * d, d))
            diff = (lhs.tocsr() - rhs_ab.tocsr()).tocoo()
            nz = diff.data % F.p != 0
            if np.any(nz):
                row = int(diff.row[nz][0])
                return row // d, row % d, g
        return None

    def _associativity_dense(self, gens):
        F, d = self.field, self.dim
        T = self.table
        T_akm = np.ascontiguousarray(T.transpose(0, 2, 1)).reshape(d * d, d)
        rgs = [self.right_basis_matrices[g] for g in gens]
        lhs_all = F.matmul_many(T.reshape(d * d, d), (rg.T for rg in rgs))
        rhs_all = F.matmul_many(T_akm, rgs)
        for g, lhs, rhs in zip(gens, lhs_all, rhs_all):
            rhs = rhs.reshape(d, d, d).transpose(0, 2, 1).reshape(d * d, d)
            if not np.array_equal(lhs, rhs):
                row = int(np.flatnonzero(np.any(lhs != rhs, axis=1))[0])
                return row // d, row % d, g
        return None

    def _validate_idempotents(self) -> None:
        verts = self.metadata.get("vertices")
        if not verts:
            return
        F = self.field
        total = self.zero()
        for a in verts:
            ea = self.basis_vector(a)
            total = F.add(total, ea)
            for b in verts:
                prod = self.multiply(ea, self.basis_vector(b))
                want = ea if a == b else self.zero()
                if not np.array_equal(prod, want):
                    raise ValidationError("vertex idempotents are not orthogonal idempotents")
        if not np.array_equal(total, self.unit):
            raise ValidationError("vertex idempotents do not sum to 1")

    # -- subspaces -------------------------------------------------------------

    def _bracket_matrices(self, gens: Iterable[int]) -> list[np.ndarray]:
        F = self.field
        return [F.sub(self.left_basis_matrices[g], self.right_basis_matrices[g]) for g in gens]

    @cached_property
    def commutator_space(self) -> Subspace:
        """``[A, A]``; brackets with generators suffice since [xy,b] = [x,yb] + [y,bx]."""
        if self.dim == 0:
            return Subspace.zero(self.field, 0)
        return image(self.field, np.hstack(self._bracket_matrices(self.generators)))

    @cached_property
    def center(self) -> Subspace:
        if self.dim == 0:
            return Subspace.zero(self.field, 0)
        return kernel(self.field, np.vstack(self._bracket_matrices(self.generators)))

    def twisted_center(self, nu: np.ndarray) -> Subspace:
        """``{a : b a = a nu(b)}`` for an automorphism given by its matrix."""
        F = self.field
        rows = [
            F.sub(self.left_basis_matrices[g], self.right_matrix(nu[:, g]))
            for g in self.generators
        ]
        return kernel(F, np.vstack(rows))

    def is_commutative(self) -> bool:
        return self.commutator_space.dim == 0

    @property
    def has_presentation(self) -> bool:
        return "vertices" in self.metadata and "radical_basis" in self.metadata

    @cached_property
    def radical(self) -> Subspace:
        F, d = self.field, self.dim
        if self.has_presentation:
            rows = np.zeros((len(self.metadata["radical_basis"]), d), dtype=np.int64)
            for r, i in enumerate(self.metadata["radical_basis"]):
                rows[r, i] = 1
            rad = Subspace.span(F, rows, d)
            self._check_radical(rad, semisimple_quotient=False)
            return rad
        rad = radical_trace_algorithm(self)
        self._check_radical(rad, semisimple_quotient=True)
        return rad

    def _radical_generators(self) -> np.ndarray:
        if self.has_presentation and "arrows" in self.metadata:
            return np.stack([self.basis_vector(a) for a in self.metadata["arrows"]]) if self.metadata["arrows"] else np.zeros((0, self.dim), dtype=np.int64)
        return self.radical.basis

    def _check_radical(self, rad: Subspace, semisimple_quotient: bool) -> None:
        F, d = self.field, self.dim
        for g in range(d):
            if rad.dim and not (rad.contains(rad.map(self.left_basis_matrices[g])) and rad.contains(rad.map(self.right_basis_matrices[g]))):
                raise RadicalFailure("radical candidate is not an ideal")
        power = rad
        for _ in range(d + 1):
            if power.dim == 0:
                break
            power = self._times_rad(power, rad.basis)
        if power.dim:
            raise RadicalFailure("radical candidate is not nilpotent")
        if semisimple_quotient and rad.dim < d:
            quotient = self.subquotient(Subspace.full(F, d), rad, validate=False)
            if radical_trace_algorithm(quotient).dim:
                raise RadicalFailure("quotient by the radical candidate is not semisimple")

    def _times_rad(self, space: Subspace, rad_gens: np.ndarray) -> Subspace:
        F, d = self.field, self.dim
        rows = [space.map(self.left_matrix(r)).basis for r in rad_gens]
        return Subspace.span(F, np.vstack(rows) if rows else np.zeros((0, d), dtype=np.int64), d)

    def radical_powers(self) -> list[Subspace]:
        """``[rad^1, rad^2, ...]`` up to and including the first zero power."""
        gens = self._radical_generators()
        out = [self.radical]
        while out[-1].dim:
            out.append(self._times_rad(out[-1], gens))
        return out

    @cached_property
    def socle(self) -> Subspace:
        """Two-sided annihilator of the radical."""
        F, d = self.field, self.dim
        gens = self._radical_generators()
        if len(gens) == 0:
            return Subspace.full(F, d)
        rows = [self.right_matrix(r) for r in gens] + [self.left_matrix(r) for r in gens]
        return kernel(F, np.vstack(rows))

    def annihilator_in(self, space: Subspace, target: Subspace) -> Subspace:
        """``{x in space : x t = t x = 0 for t in target}``."""
        F = self.field
        if target.dim == 0:
            return space
        rows = [self.right_matrix(t) for t in target.basis] + [self.left_matrix(t) for t in target.basis]
        return space.intersect(kernel(F, np.vstack(rows)))

    # -- idempotents and Cartan data -------------------------------------------

    @property
    def vertices(self) -> list[int]:
        if "vertices" not in self.metadata:
            raise NoPresentation("algebra has no vertex idempotents")
        return list(self.metadata["vertices"])

    def corner_dim(self, i: int, j: int) -> int:
        """``dim e_i A e_j`` for vertex positions i, j."""
        vs = self.vertices
        m = self.field.matmul(self.left_basis_matrices[vs[i]], self.right_basis_matrices[vs[j]])
        return rank(self.field, m)

    def cartan_matrix(self) -> np.ndarray:
        """Integer matrix with ``C[i][j] = dim e_j A e_i``."""
        n = len(self.vertices)
        return np.array([[self.corner_dim(j, i) for j in range(n)] for i in range(n)], dtype=np.int64)

    # -- derived algebras --------------------------------------------------------

    def subquotient(self, sub: Subspace, ideal: Subspace, validate: bool = True, labels=None) -> "Algebra":
        """The algebra ``sub / ideal`` for a unital subalgebra and an ideal of it."""
        F = self.field
        if not sub.contains(ideal):
            raise NotIdeal("ideal is not contained in the subalgebra")
        m = sub.dim
        ideal_c = Subspace.span(F, sub.coords(ideal.basis), m) if ideal.dim else Subspace.zero(F, m)
        reps = ideal_c.complement_indices()
        n = len(reps)
        rep_vecs = sub.basis[reps]
        table = np.zeros((n, n, n), dtype=np.int64)
        for a in range(n):
            prods = self.field.matmul(rep_vecs, self.left_matrix(rep_vecs[a]).T)
            if not sub.contains_vector(prods):
                raise NotIdeal("subspace is not closed under multiplication")
            c = ideal_c.reduce(sub.coords(prods))
            table[a] = c[:, reps]
        if ideal.dim:
            for v in ideal.basis:
                for b in sub.basis:
                    for prod in (self.multiply(v, b), self.multiply(b, v)):
                        if not ideal.contains_vector(prod):
                            raise NotIdeal("subspace is not an ideal")
        if not sub.contains_vector(self.unit):
            raise NotIdeal("subalgebra does not contain the unit")
        unit = ideal_c.reduce(sub.coords(self.unit))[reps] if n else np.zeros(0, dtype=np.int64)
        lab = labels or [f"q{i}" for i in range(n)]
        return Algebra(F, n, table, unit, lab, {"degenerate": n == 0}, validate=validate)

    def change_basis(self, new_basis, labels=None, metadata=None, validate: bool = False) -> "Algebra":
        """Same algebra in the basis given by the rows of ``new_basis``."""
        from .linalg import inverse

        F, d = self.field, self.dim
        P = np.asarray(new_basis, dtype=np.int64)
        Pinv = inverse(F, P)
        X = F.matmul(P, self.table.reshape(d, d * d)).reshape(d, d, d)  # [a, j, k]
        Y = F.matmul(P, np.ascontiguousarray(X.transpose(1, 0, 2)).reshape(d, d * d))  # [b, (a, k)]
        Y = Y.reshape(d, d, d).transpose(1, 0, 2).reshape(d * d, d)
        table = F.matmul(Y, Pinv).reshape(d, d, d)
        unit = F.matmul(self.unit[None, :], Pinv)[0]
        B = Algebra(F, d, table, unit, labels or self.labels, metadata or {}, validate=validate)
        if not validate:
            B._validate_idempotents()
        return B

    def regular_matrices_over_prime_field(self) -> np.ndarray:
        """Left regular representation of each GF(p)-basis element as de x de matrices."""
        F, d = self.field, self.dim
        e = F.e
        if e == 1:
            return np.stack([self.left_basis_matrices[i] for i in range(d)])
        out = []
        for i in range(d):
            for t in range(e):
                scalar = F.p ** t
                L = F.mul(self.left_basis_matrices[i], scalar)
                out.append(_expand_over_prime(F, L))
        return np.stack(out)

    # -- serialisation -----------------------------------------------------------

    def to_json(self) -> dict:
        F = self.field
        return {
            "field": F.to_json(),
            "dim": self.dim,
            "labels": self.labels,
            "unit": [F.coeffs(v) if F.e > 1 else int(v) for v in self.unit],
            "structure": [[i, j, k, F.coeffs(c) if F.e > 1 else c] for i, j, k, c in self.structure_entries()],
            "metadata": _jsonable(self.metadata),
        }

    @classmethod
    def from_json(cls, doc: dict) -> "Algebra":
        F = Field.from_json(doc["field"])
        unit = [F.parse(v) for v in doc["unit"]]
        entries = [(i, j, k, F.parse(c)) for i, j, k, c in doc["structure"]]
        return cls(F, doc["dim"], entries, unit, doc.get("labels"), doc.get("metadata"))

    def __repr__(self):
        return f"Algebra(dim={self.dim}, {self.field})"


def _encoded(F: Field, c) -> int:
    """Structure constants given as ints are already in the field encoding."""
    if isinstance(c, (int, np.integer)):
        if not 0 <= int(c) < F.q:
            raise ValidationError(f"encoded scalar {c} out of range for {F}")
        return int(c)
    return F.parse(c)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    return obj


def _expand_over_prime(F: Field, m: np.ndarray) -> np.ndarray:
    """GF(p^e) matrix as a GF(p) matrix on digit coordinates."""
    e = F.e
    rows, cols = m.shape
    out = np.zeros((rows * e, cols * e), dtype=np.int64)
    for t in range(e):
        # image of the digit vector with a single 1 at position t is X^t
        col_digits = F.to_digits(F.mul(m, F.p ** t))
        for s in range(e):
            out[s::e, t::e] = col_digits[:, :, s]
    return out


def _lift_power_trace(m: np.ndarray, exponent: int, modulus: int) -> int:
    """Trace of ``m^exponent`` over the integers modulo ``modulus``."""
    result = np.eye(m.shape[0], dtype=np.int64)
    base = m % modulus
    n = exponent
    while n:
        if n & 1:
            result = (result @ base) % modulus
        n >>= 1
        if n:
            base = (base @ base) % modulus
    return int(np.trace(result)) % modulus


def radical_trace_algorithm(A: Algebra) -> Subspace:
    """Jacobson radical via iterated p-power trace functionals.

    Works over the prime field with the left regular representation: with
    ``I_{-1} = A`` and ``l = floor(log_p n)``, ``I_i`` is the set of
    ``x in I_{i-1}`` with ``g_i(x y) = 0`` for all y, where
    ``g_i(a) = Tr(lift(a)^(p^i)) / p^i mod p``.  Then ``rad A = I_l``.
    """
    F, d = A.field, A.dim
    p, e = F.p, F.e
    n = d * e
    if n == 0:
        return Subspace.zero(F, d)
    regs = A.regular_matrices_over_prime_field()  # n matrices, n x n each
    prime = Field(p)
    levels = int(math.floor(math.log(n, p) + 1e-9)) if n > 1 else 0
    ideal = Subspace.full(prime, n)
    for i in range(levels + 1):
        if ideal.dim == 0:
            break
        modulus = p ** (i + 1)
        # x_k * y_j expressed as a GF(p) regular matrix: sum_l (x_k)_l * (reg_l @ reg_j)? use products directly
        values = np.zeros((ideal.dim, n), dtype=np.int64)
        for a, x in enumerate(ideal.basis):
            Lx = np.tensordot(x, regs, axes=(0, 0)) % p
            for j in range(n):
                prod = (Lx @ regs[j]) % p
                values[a, j] = (_lift_power_trace(prod, p ** i, modulus) // p ** i) % p
        sol = kernel(prime, values.T)
        ideal = Subspace.span(prime, prime.matmul(sol.basis, ideal.basis), n) if sol.dim else Subspace.zero(prime, n)
    if e == 1:
        return Subspace.span(F, ideal.basis, d) if ideal.dim else Subspace.zero(F, d)
    if ideal.dim == 0:
        return Subspace.zero(F, d)
    vecs = F.from_digits(ideal.basis.reshape(ideal.dim, d, e))
    return Subspace.span(F, vecs, d)


def algebra_from_matrices(field: Field, mats: Sequence[np.ndarray], labels=None) -> Algebra:
    """Algebra spanned by square matrices closed under products (e.g. matrix units)."""
    F = field
    flat = np.stack([np.asarray(m, dtype=np.int64).ravel() for m in mats])
    space = Subspace.span(F, flat)
    if space.dim != len(mats):
        raise ValidationError("matrices are linearly dependent")
    # coordinates of a vector in terms of the given matrices
    piv = list(space.pivots)
    basis_inv_src = flat[:, piv]
    from .linalg import inverse

    inv = inverse(F, basis_inv_src)
    d = len(mats)
    size = mats[0].shape[0]
    table = np.zeros((d, d, d), dtype=np.int64)
    for i in range(d):
        for j in range(d):
            prod = F.matmul(mats[i], mats[j]).ravel()
            if not space.contains_vector(prod):
                raise ValidationError("matrices not closed under multiplication")
            table[i, j] = F.matmul(prod[piv][None, :], inv)[0]
    unit_flat = identity(size).ravel()
    unit = F.matmul(unit_flat[piv][None, :], inv)[0]
    return Algebra(F, d, table, unit, labels)
