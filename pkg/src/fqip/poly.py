"""Dense univariate polynomials over F_q and the truncated universe codec.

``Poly.coeffs[i]`` is the rep of the coefficient of X^i; there are no trailing
zeros, so the zero polynomial has ``coeffs == ()``.  Its degree is ``None``:
comparisons against it fail loudly instead of silently using -1.

The universe {f : deg f < D} is indexed by reading the coefficient reps as
base-q digits, idx = sum rep(c_i) q^i.  Because a rep is itself the base-p
digit vector of the coefficient, idx is also the base-p number formed by all
e*D coefficient digits, and polynomial addition is digitwise addition mod p
of indices (XOR when p = 2).
"""

from __future__ import annotations

from typing import Iterable, Iterator

import numpy as np

from .field import FieldSpec

DEFAULT_UNIVERSE_CAP = 2**22


class PolyError(ValueError):
    pass


class UniverseError(PolyError):
    pass


class Poly:
    __slots__ = ("field", "coeffs", "_hash")

    def __init__(self, field: FieldSpec, coeffs: Iterable[int] = ()):
        c = [int(x) for x in coeffs]
        q = field.q
        for x in c:
            if not 0 <= x < q:
                raise PolyError(f"coefficient rep {x} outside [0, {q})")
        while c and c[-1] == 0:
            c.pop()
        self.field = field
        self.coeffs = tuple(c)
        self._hash = None

    @classmethod
    def _raw(cls, field, coeffs: list[int]) -> "Poly":
        # coeffs already reduced; strips trailing zeros
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        obj = cls.__new__(cls)
        obj.field = field
        obj.coeffs = tuple(coeffs)
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, field: FieldSpec) -> "Poly":
        return cls(field)

    @classmethod
    def one(cls, field: FieldSpec) -> "Poly":
        return cls(field, (1,))

    @classmethod
    def monomial(cls, field: FieldSpec, n: int, c: int = 1) -> "Poly":
        return cls(field, [0] * n + [c])

    @property
    def deg(self) -> int | None:
        """Degree, or None for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else None

    def is_zero(self) -> bool:
        return not self.coeffs

    def lead(self) -> int:
        if not self.coeffs:
            raise PolyError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def _check(self, other: "Poly"):
        if not isinstance(other, Poly):
            return False
        if other.field != self.field:
            raise PolyError("polynomials over different fields")
        return True

    def __add__(self, other: "Poly") -> "Poly":
        if not self._check(other):
            return NotImplemented
        add = self.field.add_table
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, y in enumerate(b):
            out[i] = add[out[i]][y]
        return Poly._raw(self.field, out)

    def __neg__(self) -> "Poly":
        neg = self.field.neg_table
        return Poly._raw(self.field, [neg[x] for x in self.coeffs])

    def __sub__(self, other: "Poly") -> "Poly":
        if not self._check(other):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if isinstance(other, int):
            return self.scale(other)
        if not self._check(other):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly.zero(self.field)
        add, mul = self.field.add_table, self.field.mul_table
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            row = mul[x]
            for j, y in enumerate(b):
                out[i + j] = add[out[i + j]][row[y]]
        return Poly._raw(self.field, out)

    def scale(self, c: int) -> "Poly":
        row = self.field.mul_table[c]
        return Poly._raw(self.field, [row[x] for x in self.coeffs])

    def shift(self, n: int) -> "Poly":
        """Multiply by X^n."""
        if not self.coeffs:
            return self
        return Poly._raw(self.field, [0] * n + list(self.coeffs))

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise PolyError("negative power")
        out, base = Poly.one(self.field), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __divmod__(self, other: "Poly"):
        return poly_divmod(self, other)

    def __floordiv__(self, other: "Poly") -> "Poly":
        return poly_divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return poly_divmod(self, other)[1]

    def truncate(self, m: int) -> "Poly":
        """Remainder mod X^m."""
        return Poly._raw(self.field, list(self.coeffs[:m]))

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, self.coeffs))
        return self._hash

    def __repr__(self):
        return f"Poly({format_poly(self)!r}, q={self.field.q})"

    def __str__(self):
        return pretty_poly(self)


def poly_divmod(g: Poly, f: Poly) -> tuple[Poly, Poly]:
    """Return (h, r) with g = f*h + r and r = 0 or deg r < deg f."""
    if f.is_zero():
        raise ZeroDivisionError("zero divisor")
    field = g.field
    if f.field != field:
        raise PolyError("polynomials over different fields")
    add, mul, neg = field.add_table, field.mul_table, field.neg_table
    r = list(g.coeffs)
    fc = f.coeffs
    df = len(fc) - 1
    inv_lead = field.inv(fc[-1])
    if len(r) <= df:
        return Poly.zero(field), g
    h = [0] * (len(r) - df)
    for top in range(len(r) - 1, df - 1, -1):
        c = r[top]
        if c == 0:
            continue
        k = mul[c][inv_lead]
        h[top - df] = k
        nk = neg[k]
        row = mul[nk]
        base = top - df
        for i, y in enumerate(fc):
            r[base + i] = add[r[base + i]][row[y]]
    return Poly._raw(field, h), Poly._raw(field, r[:df])


# -- text codecs -------------------------------------------------------------


def format_poly(f: Poly) -> str:
    """Machine codec: comma-separated coefficient reps, ascending degree; "0" for zero."""
    return ",".join(str(c) for c in f.coeffs) if f.coeffs else "0"


def parse_poly(text: str, field: FieldSpec) -> Poly:
    text = text.strip()
    if not text:
        raise PolyError("empty polynomial literal")
    try:
        coeffs = [int(tok) for tok in text.split(",")]
    except ValueError:
        bad = next(t for t in text.split(",") if not t.strip().lstrip("-").isdigit())
        raise PolyError(f"malformed polynomial token {bad!r} in {text!r}") from None
    for c in coeffs:
        if not 0 <= c < field.q:
            raise PolyError(f"coefficient token {c} outside [0, {field.q}) in {text!r}")
    return Poly(field, coeffs)


def pretty_poly(f: Poly, var: str = "X") -> str:
    """Human rendering, e.g. 1+X^2 or 2X+X^3.  Not a machine format."""
    if not f.coeffs:
        return "0"
    parts = []
    for i, c in enumerate(f.coeffs):
        if c == 0:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if not mono:
            parts.append(str(c))
        elif c == 1:
            parts.append(mono)
        else:
            parts.append(f"{c}{mono}" if f.field.e == 1 else f"[{c}]{mono}")
    return "+".join(parts)


# -- truncated universe ------------------------------------------------------


def universe_size(field: FieldSpec, D: int, cap: int = DEFAULT_UNIVERSE_CAP) -> int:
    if D < 0:
        raise UniverseError(f"degree bound must be >= 0, got {D}")
    n = field.q**D
    if n > cap:
        raise UniverseError(f"universe q^D = {field.q}^{D} = {n} exceeds cap {cap}")
    return n


def canonical_index(f: Poly, D: int | None = None) -> int:
    """idx = sum rep(c_i) q^i; with D given, checks deg f < D."""
    if D is not None and len(f.coeffs) > D:
        raise UniverseError(f"deg {f.deg} polynomial outside universe deg < {D}")
    q = f.field.q
    idx = 0
    for c in reversed(f.coeffs):
        idx = idx * q + c
    return idx


def from_index(idx: int, field: FieldSpec, D: int | None = None) -> Poly:
    q = field.q
    if idx < 0 or (D is not None and idx >= q**D):
        raise UniverseError(f"index {idx} outside universe of size q^D")
    coeffs = []
    while idx:
        idx, c = divmod(idx, q)
        coeffs.append(c)
    return Poly._raw(field, coeffs)


def enumerate_polys(field: FieldSpec, D: int, cap: int = DEFAULT_UNIVERSE_CAP) -> Iterator[Poly]:
    """All q^D polynomials of degree < D, in canonical index order."""
    n = universe_size(field, D, cap)
    for idx in range(n):
        yield from_index(idx, field)


def index_add(a, b, p: int, ndigits: int | None = None):
    """Index of the sum of two polynomials given by their indices.

    Works on Python ints (any length) and on numpy integer arrays; in the array
    case ``ndigits`` (= e*D) must be given.
    """
    if p == 2:
        return a ^ b
    if ndigits is None:
        res, pw = 0, 1
        while a or b:
            a, da = divmod(a, p)
            b, db = divmod(b, p)
            res += ((da + db) % p) * pw
            pw *= p
        return res
    res = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
    pw = 1
    for _ in range(ndigits):
        res = res + (((a // pw) % p + (b // pw) % p) % p) * pw
        pw *= p
    return res


def index_neg(a, p: int, ndigits: int | None = None):
    if p == 2:
        return a
    if ndigits is None:
        res, pw = 0, 1
        while a:
            a, da = divmod(a, p)
            res += ((p - da) % p) * pw
            pw *= p
        return res
    res = np.zeros(np.shape(a), dtype=np.int64)
    pw = 1
    for _ in range(ndigits):
        res = res + ((p - (a // pw) % p) % p) * pw
        pw *= p
    return res


def index_sub(a, b, p: int, ndigits: int | None = None):
    return index_add(a, index_neg(b, p, ndigits), p, ndigits)


def degree_of_index(idx: int, q: int) -> int | None:
    """deg of the polynomial with this index; None for index 0."""
    if idx == 0:
        return None
    d = 0
    while idx >= q:
        idx //= q
        d += 1
    return d
