"""Sparse k-variate polynomials over F_q.

Terms map exponent tuples (length ``nvars``) to nonzero coefficient reps.
Text codec: whitespace-separated ``coef@e1,e2,...,ek`` terms, "0" for zero.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from .field import FieldSpec
from .poly import Poly, PolyError


class MultiPoly:
    __slots__ = ("field", "nvars", "_terms", "_hash")

    def __init__(self, field: FieldSpec, nvars: int, terms: Mapping[tuple, int] | Iterable = ()):
        if nvars < 1:
            raise PolyError("MultiPoly needs at least one variable")
        items = terms.items() if isinstance(terms, Mapping) else terms
        add = field.add_table
        acc: dict[tuple, int] = {}
        for exp, c in items:
            exp = tuple(int(x) for x in exp)
            if len(exp) != nvars or any(x < 0 for x in exp):
                raise PolyError(f"exponent {exp} invalid for {nvars} variables")
            if not 0 <= c < field.q:
                raise PolyError(f"coefficient rep {c} outside [0, {field.q})")
            acc[exp] = add[acc.get(exp, 0)][c]
        self.field = field
        self.nvars = nvars
        self._terms = {e: c for e, c in acc.items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, field, nvars, terms: dict) -> "MultiPoly":
        obj = cls.__new__(cls)
        obj.field = field
        obj.nvars = nvars
        obj._terms = {e: c for e, c in terms.items() if c}
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, field, nvars) -> "MultiPoly":
        return cls._raw(field, nvars, {})

    @classmethod
    def constant(cls, field, nvars, c: int) -> "MultiPoly":
        return cls._raw(field, nvars, {(0,) * nvars: c})

    @classmethod
    def from_univariate(cls, f: Poly, var: int, nvars: int) -> "MultiPoly":
        """Embed f as a polynomial in X_var (0-based)."""
        if not 0 <= var < nvars:
            raise PolyError(f"variable index {var} outside 0..{nvars - 1}")
        terms = {}
        for i, c in enumerate(f.coeffs):
            if c:
                exp = [0] * nvars
                exp[var] = i
                terms[tuple(exp)] = c
        return cls._raw(f.field, nvars, terms)

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def deg_in(self, var: int) -> int | None:
        """Degree in X_var; None for the zero polynomial."""
        if not self._terms:
            return None
        return max(e[var] for e in self._terms)

    def variables(self) -> set[int]:
        return {i for e in self._terms for i, x in enumerate(e) if x}

    def _check(self, other) -> bool:
        if not isinstance(other, MultiPoly):
            return False
        if other.field != self.field or other.nvars != self.nvars:
            raise PolyError("incompatible polynomial rings")
        return True

    def __add__(self, other):
        if not self._check(other):
            return NotImplemented
        add = self.field.add_table
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = add[out.get(e, 0)][c]
        return MultiPoly._raw(self.field, self.nvars, out)

    def __neg__(self):
        neg = self.field.neg_table
        return MultiPoly._raw(self.field, self.nvars, {e: neg[c] for e, c in self._terms.items()})

    def __sub__(self, other):
        if not self._check(other):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            row = self.field.mul_table[other]
            return MultiPoly._raw(self.field, self.nvars, {e: row[c] for e, c in self._terms.items()})
        if not self._check(other):
            return NotImplemented
        add, mul = self.field.add_table, self.field.mul_table
        out: dict[tuple, int] = {}
        for e1, c1 in self._terms.items():
            row = mul[c1]
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = add[out.get(e, 0)][row[c2]]
        return MultiPoly._raw(self.field, self.nvars, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return (self.field == other.field and self.nvars == other.nvars
                and self._terms == other._terms)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, self.nvars, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        return f"MultiPoly({format_multipoly(self)!r}, q={self.field.q}, nvars={self.nvars})"

    def __str__(self):
        return pretty_multipoly(self)


def format_multipoly(g: MultiPoly) -> str:
    if g.is_zero():
        return "0"
    return " ".join(f"{c}@{','.join(map(str, e))}" for e, c in sorted(g.items()))


def parse_multipoly(text: str, field: FieldSpec, nvars: int) -> MultiPoly:
    """Parse the term codec.  A literal without '@' is read as a univariate
    coefficient list when nvars == 1."""
    text = text.strip()
    if not text:
        raise PolyError("empty polynomial literal")
    if text == "0":
        return MultiPoly.zero(field, nvars)
    if "@" not in text:
        if nvars != 1:
            raise PolyError(f"term literal expected (coef@e1,...,e{nvars}), got {text!r}")
        from .poly import parse_poly
        return MultiPoly.from_univariate(parse_poly(text, field), 0, 1)
    terms = []
    for tok in text.replace(";", " ").split():
        coef, sep, exps = tok.partition("@")
        try:
            c = int(coef)
            exp = tuple(int(x) for x in exps.split(","))
        except ValueError:
            raise PolyError(f"malformed term token {tok!r}") from None
        if not sep or len(exp) != nvars:
            raise PolyError(f"malformed term token {tok!r} for {nvars} variables")
        if not 0 <= c < field.q:
            raise PolyError(f"coefficient in token {tok!r} outside [0, {field.q})")
        terms.append((exp, c))
    return MultiPoly(field, nvars, terms)


def pretty_multipoly(g: MultiPoly) -> str:
    if g.is_zero():
        return "0"
    parts = []
    for e, c in sorted(g.items(), key=lambda t: (sum(t[0]), t[0])):
        mono = "*".join(
            (f"X{i + 1}" if x == 1 else f"X{i + 1}^{x}") for i, x in enumerate(e) if x)
        if not mono:
            parts.append(str(c))
        elif c == 1:
            parts.append(mono)
        else:
            parts.append(f"{c}{mono}")
    return "+".join(parts)
