"""Exact arithmetic in F_q, q = p**e.

An element is stored as an integer ``rep`` in ``[0, q)`` whose base-p digits
are the coefficients of the element as a polynomial in a root ``t`` of the
defining modulus:  rep = d_0 + d_1 p + ... + d_{e-1} p^{e-1}  <->  sum d_j t^j.
For e = 1 this is just the residue mod p.

Addition is digitwise mod p, so the additive group of F_q is (Z/p)^e with the
integer encoding above.  Multiplication goes through a precomputed q x q table.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Sequence

MAX_P = 13
MAX_E = 2

# Monic irreducibles, ascending coefficients, degree e.
DEFAULT_MODULI = {
    (2, 2): (1, 1, 1),  # t^2 + t + 1
    (3, 2): (2, 2, 1),  # t^2 + 2t + 2
}


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _fp_mod(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    """Remainder of a by b over F_p (b nonzero, both ascending)."""
    r = _trim(list(a))
    b = _trim(list(b))
    inv = pow(b[-1], p - 2, p)
    while len(r) >= len(b):
        c = r[-1] * inv % p
        shift = len(r) - len(b)
        for i, bi in enumerate(b):
            r[shift + i] = (r[shift + i] - c * bi) % p
        _trim(r)
    return r


def is_irreducible_fp(poly: Sequence[int], p: int) -> bool:
    """Exhaustive trial division by every monic polynomial of degree <= deg/2."""
    poly = _trim(list(poly))
    n = len(poly) - 1
    if n < 1:
        return False
    for d in range(1, n // 2 + 1):
        for low in range(p**d):
            cand = [(low // p**i) % p for i in range(d)] + [1]
            if not _fp_mod(poly, cand, p):
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The coefficient field F_q with q = p**e.

    ``modulus`` is the ascending coefficient tuple of a monic degree-e
    irreducible over F_p, empty when e = 1.
    """

    p: int
    e: int = 1
    modulus: tuple[int, ...] = ()
    q: int = field(init=False, compare=False)

    def __post_init__(self):
        p, e = self.p, self.e
        if not is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if e < 1:
            raise FieldError(f"extension degree must be >= 1, got {e}")
        if p > MAX_P or e > MAX_E:
            raise FieldError(f"unsupported field p={p}, e={e} (limits p<={MAX_P}, e<={MAX_E})")
        mod = tuple(int(c) for c in self.modulus)
        if e == 1:
            if mod:
                raise FieldError("prime fields take no modulus")
        else:
            if not mod:
                if (p, e) not in DEFAULT_MODULI:
                    raise FieldError(f"no default modulus for p={p}, e={e}; supply one")
                mod = DEFAULT_MODULI[(p, e)]
            if len(mod) != e + 1 or any(not 0 <= c < p for c in mod):
                raise FieldError(f"modulus {mod} is not a degree-{e} polynomial over F_{p}")
            if mod[-1] != 1:
                inv = pow(mod[-1], p - 2, p)
                mod = tuple(c * inv % p for c in mod)
            if not is_irreducible_fp(mod, p):
                raise FieldError(f"modulus {mod} is reducible over F_{p}")
        object.__setattr__(self, "modulus", mod)
        object.__setattr__(self, "q", p**e)

    @classmethod
    def from_q(cls, q: int, modulus: Sequence[int] = ()) -> "FieldSpec":
        for p in range(2, q + 1):
            if q % p == 0:
                break
        else:
            raise FieldError(f"q={q} is not a prime power")
        e, rest = 0, q
        while rest % p == 0:
            rest //= p
            e += 1
        if rest != 1 or not is_prime(p):
            raise FieldError(f"q={q} is not a prime power")
        return cls(p, e, tuple(modulus))

    def __repr__(self):
        if self.e == 1:
            return f"FieldSpec(p={self.p})"
        return f"FieldSpec(p={self.p}, e={self.e}, modulus={self.modulus})"

    # -- element arithmetic on reps ---------------------------------------

    def digits(self, a: int) -> list[int]:
        p = self.p
        return [(a // p**j) % p for j in range(self.e)]

    def from_digits(self, d: Sequence[int]) -> int:
        p = self.p
        return sum((x % p) * p**j for j, x in enumerate(d))

    def add(self, a: int, b: int) -> int:
        return _ADD[self][a][b]

    def neg(self, a: int) -> int:
        return _NEG[self][a]

    def sub(self, a: int, b: int) -> int:
        return _ADD[self][a][_NEG[self][b]]

    def mul(self, a: int, b: int) -> int:
        return _MUL[self][a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in F_q")
        return _INV[self][a]

    @property
    def add_table(self) -> list[list[int]]:
        return _ADD[self]

    @property
    def mul_table(self) -> list[list[int]]:
        return _MUL[self]

    @property
    def neg_table(self) -> list[int]:
        return _NEG[self]

    def element(self, rep: int) -> "FieldElement":
        return FieldElement(self, rep)


class _TableCache(dict):
    """Per-field lazily built tables; FieldSpec itself stays a plain frozen value."""

    def __init__(self, builder):
        super().__init__()
        self._builder = builder

    def __missing__(self, spec):
        value = self[spec] = self._builder(spec)
        return value


def _build_add(spec: FieldSpec):
    q = spec.q
    dig = [spec.digits(a) for a in range(q)]
    return [[spec.from_digits([x + y for x, y in zip(dig[a], dig[b])]) for b in range(q)]
            for a in range(q)]


def _build_neg(spec: FieldSpec):
    return [spec.from_digits([-x for x in spec.digits(a)]) for a in range(spec.q)]


def _mul_digits(spec: FieldSpec, a: int, b: int) -> int:
    p, e = spec.p, spec.e
    da, db = spec.digits(a), spec.digits(b)
    prod = [0] * (2 * e - 1)
    for i, x in enumerate(da):
        for j, y in enumerate(db):
            prod[i + j] = (prod[i + j] + x * y) % p
    if e > 1:
        prod = _fp_mod(prod, spec.modulus, p)
    return spec.from_digits(prod)


def _build_mul(spec: FieldSpec):
    q = spec.q
    return [[_mul_digits(spec, a, b) for b in range(q)] for a in range(q)]


def _build_inv(spec: FieldSpec):
    mul = _MUL[spec]
    inv = [0] * spec.q
    for a in range(1, spec.q):
        inv[a] = next(b for b in range(1, spec.q) if mul[a][b] == 1)
    return inv


_ADD = _TableCache(_build_add)
_NEG = _TableCache(_build_neg)
_MUL = _TableCache(_build_mul)
_INV = _TableCache(_build_inv)


@functools.total_ordering
class FieldElement:
    """A single element of F_q; convenience wrapper over an integer rep."""

    __slots__ = ("field", "rep")

    def __init__(self, field: FieldSpec, rep: int):
        if not 0 <= rep < field.q:
            raise FieldError(f"rep {rep} outside [0, {field.q})")
        self.field = field
        self.rep = rep

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldError("elements of different fields")
            return other.rep
        if isinstance(other, int):
            return other % self.field.p
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.add(self.rep, b))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.rep))

    def __sub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.sub(self.rep, b))

    def __mul__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.mul(self.rep, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.mul(self.rep, self.field.inv(b)))

    def __pow__(self, n: int):
        if n < 0:
            return FieldElement(self.field, self.field.inv(self.rep)) ** (-n)
        out, base = 1, self.rep
        while n:
            if n & 1:
                out = self.field.mul(out, base)
            base = self.field.mul(base, base)
            n >>= 1
        return FieldElement(self.field, out)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.rep == other.rep
        if isinstance(other, int):
            return self.rep == other
        return NotImplemented

    def __lt__(self, other):
        return self.rep < self._other(other)

    def __hash__(self):
        return hash((self.field, self.rep))

    def __int__(self):
        return self.rep

    def __repr__(self):
        return f"FieldElement({self.rep} in F_{self.field.q})"
