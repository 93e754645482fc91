"""Exact arithmetic in GF(p^e).

Elements are encoded as integers ``0 <= v < q``: the residue
``c_0 + c_1 X + ... + c_{e-1} X^{e-1}`` modulo the field's modulus is stored
as ``sum(c_i * p**i)``.  All array-level operations act elementwise on numpy
integer arrays in this encoding, which keeps matrices plain ``int64`` arrays.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import DegenerateInput, FieldMismatch, ValidationError

DEFAULT_MODULI = {
    4: (1, 1, 1),
    8: (1, 1, 0, 1),
    9: (1, 0, 1),
    16: (1, 1, 0, 0, 1),
    25: (3, 0, 1),
    27: (1, 2, 0, 1),
}

_TABLE_LIMIT = 1 << 12


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _poly_trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mod(num: Sequence[int], den: Sequence[int], p: int) -> list[int]:
    """Remainder of ``num`` by monic ``den`` over GF(p), low-to-high."""
    r = [x % p for x in num]
    d = len(den) - 1
    for i in range(len(r) - 1, d - 1, -1):
        c = r[i]
        if c:
            for j in range(d + 1):
                r[i - d + j] = (r[i - d + j] - c * den[j]) % p
    return _poly_trim(r[:d])


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= e/2."""
    e = len(modulus) - 1
    for deg in range(1, e // 2 + 1):
        for low in itertools.product(range(p), repeat=deg):
            if not _poly_mod(modulus, list(low) + [1], p):
                return False
    return True


def first_irreducible(p: int, e: int) -> tuple[int, ...]:
    """Lexicographically first monic irreducible of degree e (low coefficients vary fastest)."""
    for tail in itertools.product(range(p), repeat=e):
        mod = (*reversed(tail), 1)
        if mod[0] and is_irreducible(mod, p):
            return mod
    raise ValidationError(f"no irreducible of degree {e} over GF({p})")  # unreachable for prime p


@dataclass(frozen=True)
class Field:
    """The finite field GF(p^e) given by a monic irreducible modulus."""

    p: int
    e: int = 1
    modulus: tuple[int, ...] = dc_field(default=())

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValidationError(f"characteristic {self.p} is not prime")
        if self.e < 1:
            raise ValidationError("extension degree must be >= 1")
        mod = tuple(int(c) % self.p for c in self.modulus)
        if not mod:
            if self.e == 1:
                mod = (0, 1)
            elif self.p ** self.e in DEFAULT_MODULI and len(DEFAULT_MODULI[self.p ** self.e]) == self.e + 1:
                mod = DEFAULT_MODULI[self.p ** self.e]
            elif self.p ** self.e <= _TABLE_LIMIT:
                mod = first_irreducible(self.p, self.e)
            else:
                raise ValidationError(f"no default modulus for GF({self.p}^{self.e})")
        if len(mod) != self.e + 1 or mod[-1] != 1:
            raise ValidationError("modulus must be monic of degree e")
        if self.e == 1 and mod != (0, 1):
            raise ValidationError("prime fields use the modulus X")
        if self.e > 1 and not is_irreducible(mod, self.p):
            raise ValidationError(f"modulus {list(mod)} is reducible over GF({self.p})")
        if self.e > 1 and self.p ** self.e > _TABLE_LIMIT:
            raise ValidationError("extension fields are limited to 4096 elements")
        object.__setattr__(self, "modulus", mod)

    # -- construction helpers -------------------------------------------------

    @classmethod
    def gf(cls, q: int) -> "Field":
        for p in range(2, q + 1):
            if q % p == 0:
                break
        e, r = 0, q
        while r % p == 0:
            r //= p
            e += 1
        if r != 1:
            raise ValidationError(f"{q} is not a prime power")
        return cls(p, e)

    @classmethod
    def from_json(cls, doc: dict) -> "Field":
        return cls(int(doc["p"]), int(doc.get("e", 1)), tuple(doc.get("modulus", ())))

    def to_json(self) -> dict:
        return {"p": self.p, "e": self.e, "modulus": list(self.modulus)}

    def __str__(self):
        return f"GF({self.p})" if self.e == 1 else f"GF({self.p}^{self.e})"

    @property
    def q(self) -> int:
        return self.p ** self.e

    @property
    def is_prime(self) -> bool:
        return self.e == 1

    # -- encoding -------------------------------------------------------------

    def encode(self, coeffs: Iterable[int] | int) -> int:
        """Encode a coefficient list (low-to-high) or an integer."""
        if isinstance(coeffs, (int, np.integer)):
            coeffs = [int(coeffs)]
        c = [int(x) % self.p for x in coeffs]
        if len(c) > self.e:
            c = _poly_mod(c, self.modulus, self.p)
        return sum(x * self.p ** i for i, x in enumerate(c))

    def coeffs(self, v: int) -> list[int]:
        v = int(v)
        return [(v // self.p ** i) % self.p for i in range(self.e)]

    @property
    def generator(self) -> int:
        """The class of X (for e = 1 the element 1)."""
        return self.p if self.e > 1 else 1 % self.p

    def format(self, v: int) -> str:
        if self.e == 1:
            return str(int(v))
        terms = []
        for i, c in enumerate(self.coeffs(v)):
            if c:
                mono = "1" if i == 0 else ("w" if i == 1 else f"w^{i}")
                terms.append(mono if c == 1 and i else f"{c}" if i == 0 else f"{c}*{mono}")
        return "+".join(reversed(terms)) or "0"

    # -- tables ---------------------------------------------------------------

    def _poly_mul_encoded(self, a: int, b: int) -> int:
        ca, cb = self.coeffs(a), self.coeffs(b)
        prod = [0] * (2 * self.e - 1)
        for i, x in enumerate(ca):
            for j, y in enumerate(cb):
                prod[i + j] += x * y
        return self.encode(prod)

    @cached_property
    def _digits_weights(self) -> np.ndarray:
        return self.p ** np.arange(self.e, dtype=np.int64)

    @cached_property
    def _mul_table(self) -> np.ndarray:
        q = self.q
        t = np.zeros((q, q), dtype=np.int64)
        for a in range(1, q):
            for b in range(a, q):
                t[a, b] = t[b, a] = self._poly_mul_encoded(a, b)
        return t

    @cached_property
    def _add_table(self) -> np.ndarray:
        d = self.to_digits(np.arange(self.q))
        return self.from_digits((d[:, None, :] + d[None, :, :]) % self.p)

    @cached_property
    def _neg_table(self) -> np.ndarray:
        return self.from_digits((-self.to_digits(np.arange(self.q))) % self.p)

    @cached_property
    def _inv_table(self) -> np.ndarray:
        q = self.q
        inv = np.zeros(q, dtype=np.int64)
        if self.e == 1:
            for a in range(1, q):
                inv[a] = pow(a, q - 2, q)
            return inv
        t = self._mul_table
        for a in range(1, q):
            inv[a] = int(np.nonzero(t[a] == 1)[0][0])
        return inv

    @cached_property
    def _frob_table(self) -> np.ndarray:
        if self.e == 1:
            return np.arange(self.q, dtype=np.int64)
        t = self._mul_table
        out = np.arange(self.q, dtype=np.int64)
        acc = np.ones(self.q, dtype=np.int64)
        for _ in range(self.p):
            acc = t[acc, out]
        return acc

    @cached_property
    def _xpow_reductions(self) -> np.ndarray:
        """Digits of X^k mod modulus for k < 2e - 1."""
        rows = []
        for k in range(2 * self.e - 1):
            mono = [0] * k + [1]
            rows.append(_poly_mod(mono, self.modulus, self.p) if k >= self.e else mono)
        out = np.zeros((len(rows), self.e), dtype=np.int64)
        for k, r in enumerate(rows):
            out[k, : len(r)] = r
        return out

    # -- elementwise array arithmetic ----------------------------------------

    def to_digits(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        return (a[..., None] // self._digits_weights) % self.p

    def from_digits(self, d) -> np.ndarray:
        return np.asarray(d, dtype=np.int64) @ self._digits_weights

    def add(self, a, b):
        if self.e == 1:
            return (np.asarray(a, dtype=np.int64) + b) % self.p
        return self._add_table[a, b]

    def neg(self, a):
        if self.e == 1:
            return (-np.asarray(a, dtype=np.int64)) % self.p
        return self._neg_table[a]

    def sub(self, a, b):
        if self.e == 1:
            return (np.asarray(a, dtype=np.int64) - b) % self.p
        return self._add_table[a, self._neg_table[b]]

    def mul(self, a, b):
        if self.e == 1:
            return (np.asarray(a, dtype=np.int64) * b) % self.p
        return self._mul_table[a, b]

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise DegenerateInput("division by zero")
        if self.e == 1 and self.p > _TABLE_LIMIT:
            return np.vectorize(lambda x: pow(int(x), self.p - 2, self.p), otypes=[np.int64])(a)
        return self._inv_table[a]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def power(self, a, n: int):
        """Elementwise a**n for n >= 0."""
        base = np.asarray(a, dtype=np.int64)
        result = np.full(base.shape, 1, dtype=np.int64)
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def frob(self, a, k: int = 1):
        """Elementwise a**(p**k); k is taken modulo e, so negative k inverts."""
        k %= self.e
        a = np.asarray(a, dtype=np.int64)
        if self.e == 1 or k == 0:
            return a.copy()
        t = self._frob_table
        for _ in range(k):
            a = t[a]
        return a

    # -- reductions and products ---------------------------------------------

    def sum(self, a, axis=None):
        a = np.asarray(a, dtype=np.int64)
        if self.e == 1:
            return np.sum(a, axis=axis) % self.p
        if axis is None:
            return self.from_digits(self.to_digits(a).reshape(-1, self.e).sum(axis=0) % self.p)
        axis = axis % a.ndim
        return self.from_digits(self.to_digits(a).sum(axis=axis) % self.p)

    def accumulate(self, values, index, length: int) -> np.ndarray:
        """Scatter-add ``values`` into a zero vector of ``length`` at ``index``."""
        values = np.asarray(values, dtype=np.int64)
        if self.e == 1:
            out = np.zeros(length, dtype=np.int64)
            np.add.at(out, index, values)
            return out % self.p
        out = np.zeros((length, self.e), dtype=np.int64)
        np.add.at(out, index, self.to_digits(values))
        return self.from_digits(out % self.p)

    def matmul(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.e == 1:
            if max(a.shape[-1], 1) * (self.p - 1) ** 2 < _FLOAT_EXACT:
                return _float_matmul(a, b) % self.p
            if max(a.shape[-1], 1) * (self.p - 1) ** 2 < (1 << 62):
                return (a @ b) % self.p
            return np.asarray(np.asarray(a, dtype=object) @ np.asarray(b, dtype=object) % self.p, dtype=np.int64)
        da = self.to_digits(a)
        db = self.to_digits(b)
        red = self._xpow_reductions
        acc = None
        for i in range(self.e):
            for j in range(self.e):
                prod = _float_matmul(da[..., i], db[..., j]) % self.p
                term = prod[..., None] * red[i + j]
                acc = term if acc is None else acc + term
        return self.from_digits(acc % self.p)

    def matmul_many(self, a, bs):
        """Yield ``a @ b`` for each b, converting the shared left factor once."""
        a = np.asarray(a, dtype=np.int64)
        if self.e == 1 and max(a.shape[-1], 1) * (self.p - 1) ** 2 < _FLOAT_EXACT:
            af = a.astype(np.float64)
            for b in bs:
                yield (af @ np.asarray(b, dtype=np.float64)).astype(np.int64) % self.p
        else:
            for b in bs:
                yield self.matmul(a, b)

    def dot(self, u, v) -> int:
        return int(self.matmul(np.asarray(u)[None, :], np.asarray(v)[:, None])[0, 0])

    def random(self, rng: np.random.Generator, shape) -> np.ndarray:
        return rng.integers(0, self.q, size=shape, dtype=np.int64)

    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)

    def check_same(self, other: "Field") -> None:
        if self != other:
            raise FieldMismatch(f"{self} versus {other}")

    def parse(self, text) -> int:
        """Parse a scalar: an integer, a coefficient list, or a polynomial in ``w``."""
        if isinstance(text, (int, np.integer)):
            return self.encode(int(text))
        if isinstance(text, (list, tuple)):
            return self.encode([int(c) for c in text])
        s = str(text).replace(" ", "").replace("**", "^")
        if not s:
            raise ValidationError("empty scalar")
        if s.startswith("["):
            return self.encode([int(c) for c in s.strip("[]").split(",") if c])
        total = 0
        for sign, term in _split_terms(s):
            coef, exp = 1, 0
            if "w" in term:
                head, _, tail = term.partition("w")
                head = head.rstrip("*")
                coef = int(head) if head else 1
                exp = int(tail.lstrip("^")) if tail else 1
            else:
                coef = int(term)
            x = self.power(np.int64(self.generator if exp else 1), exp) if self.e > 1 else 1
            val = self.mul(int(x), self.encode(coef))
            total = int(self.add(total, val if sign > 0 else self.neg(val)))
        return total


_FLOAT_EXACT = 1 << 52


def _float_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Integer matrix product through BLAS; exact while sums stay below 2**53."""
    return (a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64)


def _split_terms(s: str):
    out, sign, cur = [], 1, ""
    for ch in s:
        if ch in "+-" and cur and not cur.endswith("^"):
            out.append((sign, cur))
            sign, cur = (1 if ch == "+" else -1), ""
        elif ch in "+-" and not cur:
            sign = 1 if ch == "+" else -1
        else:
            cur += ch
    if cur:
        out.append((sign, cur))
    return out


@dataclass(frozen=True)
class Scalar:
    """A single field element bound to its field."""

    field: Field
    value: int

    def __post_init__(self):
        object.__setattr__(self, "value", int(self.value) % self.field.q if self.field.e == 1 else int(self.value))
        if not 0 <= self.value < self.field.q:
            raise ValidationError("scalar out of range")

    @classmethod
    def of(cls, field: Field, coeffs) -> "Scalar":
        return cls(field, field.parse(coeffs))

    def _other(self, other) -> int:
        if isinstance(other, Scalar):
            self.field.check_same(other.field)
            return other.value
        return self.field.encode(int(other))

    def __add__(self, other):
        return Scalar(self.field, int(self.field.add(self.value, self._other(other))))

    __radd__ = __add__

    def __sub__(self, other):
        return Scalar(self.field, int(self.field.sub(self.value, self._other(other))))

    def __mul__(self, other):
        return Scalar(self.field, int(self.field.mul(self.value, self._other(other))))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return Scalar(self.field, int(self.field.div(self.value, self._other(other))))

    def __neg__(self):
        return Scalar(self.field, int(self.field.neg(self.value)))

    def __pow__(self, n: int):
        if n < 0:
            return Scalar(self.field, int(self.field.inv(self.value))) ** (-n)
        return Scalar(self.field, int(self.field.power(np.int64(self.value), n)))

    def __bool__(self):
        return self.value != 0

    def frobenius(self, k: int = 1) -> "Scalar":
        return frobenius(self, k)

    def inv_frobenius(self) -> "Scalar":
        return inv_frobenius(self)

    def coeffs(self) -> list[int]:
        return self.field.coeffs(self.value)

    def __repr__(self):
        return f"Scalar({self.field}, {self.field.format(self.value)})"


def arith(a: Scalar, b: Scalar, op: str) -> Scalar:
    """Binary field operation named by ``op``: add, sub, mul or div."""
    ops = {"add": Scalar.__add__, "sub": Scalar.__sub__, "mul": Scalar.__mul__, "div": Scalar.__truediv__}
    if op not in ops:
        raise ValueError(f"unknown operation {op!r}")
    return ops[op](a, b)


def frobenius(a: Scalar, k: int = 1) -> Scalar:
    if k < 0:
        raise ValueError("iteration count must be non-negative")
    return Scalar(a.field, int(a.field.frob(np.int64(a.value), k)))


def inv_frobenius(a: Scalar) -> Scalar:
    """The unique p-th root; GF(p^e) is perfect."""
    return Scalar(a.field, int(a.field.frob(np.int64(a.value), a.field.e - 1)))
