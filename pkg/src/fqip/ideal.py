"""Ideals <f_1(X_1), ..., f_k(X_k)> with univariate generators in distinct
variables, and finite sums that land in them.

Membership by reduction is exact.  Each generator involves only its own
variable, so dividing by f_i touches only the X_i-degree of a term and leaves
every other variable's degree alone.  Reducing the variables one at a time
therefore ends with deg_{X_i}(r) < deg f_i for all i, and the remainder is a
normal form: the monomials X^a with a_i < deg f_i for all i form an F_q-basis
of the quotient ring (tensor product of the univariate quotients).  So the
reduction is confluent and g is in the ideal iff its remainder is 0.

Finite sums in the ideal come from pigeonhole on remainders.  There are
R = q^(prod deg f_i) possible remainders, and p terms with equal remainders
sum to a multiple of p of that remainder, which is 0.  Any (p-1)*R + 1
distinct terms therefore contain such a class.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod
from typing import Iterable, Sequence

from .field import FieldSpec
from .multipoly import MultiPoly, format_multipoly
from .poly import Poly, poly_divmod


class IdealError(ValueError):
    pass


class WitnessNotFound(IdealError):
    def __init__(self, message: str, census: dict, scanned: int):
        super().__init__(message)
        self.census = census
        self.scanned = scanned


@dataclass(frozen=True)
class IdealGens:
    """Generators f_i(X_{var_i}); ``gens`` is a tuple of (var, Poly) pairs with
    0-based distinct variable indices, ``k`` the number of ring variables."""

    gens: tuple
    k: int

    def __post_init__(self):
        gens = tuple(sorted(((int(v), f) for v, f in self.gens), key=lambda t: t[0]))
        if not gens:
            raise IdealError("at least one generator required")
        seen = set()
        for v, f in gens:
            if not 0 <= v < self.k:
                raise IdealError(f"generator variable X{v + 1} outside a {self.k}-variable ring")
            if v in seen:
                raise IdealError(f"two generators in variable X{v + 1}")
            seen.add(v)
            if f.is_zero():
                raise IdealError(f"generator for X{v + 1} is the zero polynomial")
        if len({f.field for _, f in gens}) != 1:
            raise IdealError("generators over different fields")
        if sum(1 for _, f in gens if f.deg == 0) > 1:
            raise IdealError("at most one constant generator allowed")
        object.__setattr__(self, "gens", gens)

    @property
    def field(self) -> FieldSpec:
        return self.gens[0][1].field

    @property
    def variables(self) -> tuple[int, ...]:
        return tuple(v for v, _ in self.gens)

    def generator(self, var: int) -> Poly:
        for v, f in self.gens:
            if v == var:
                return f
        raise KeyError(var)

    def remainder_space_size(self) -> int:
        """q^(prod deg f_i): number of possible remainders."""
        return self.field.q ** prod(f.deg for _, f in self.gens)

    def pigeonhole_bound(self) -> int:
        return (self.field.p - 1) * self.remainder_space_size() + 1

    def as_multipolys(self) -> list[MultiPoly]:
        return [MultiPoly.from_univariate(f, v, self.k) for v, f in self.gens]


@dataclass(frozen=True)
class Reduction:
    quotients: tuple  # MultiPoly per generator, same order as gens.gens
    remainder: MultiPoly


def _check_ring(g: MultiPoly, gens: IdealGens):
    if g.field != gens.field:
        raise IdealError("polynomial and generators over different fields")
    if g.nvars != gens.k:
        raise IdealError(f"polynomial has {g.nvars} variables, ideal ring has {gens.k}")
    stray = g.variables() - set(gens.variables)
    if stray:
        raise IdealError(
            "polynomial uses variables without a generator: "
            + ", ".join(f"X{v + 1}" for v in sorted(stray)))


def reduce(g: MultiPoly, gens: IdealGens) -> Reduction:
    """Divide g by each generator in ascending variable order.

    Returns quotients h_i and remainder r with g = sum f_i h_i + r and
    deg_{X_i} r < deg f_i.
    """
    _check_ring(g, gens)
    field_, k = g.field, g.nvars
    current = g
    quotients = []
    for var, f in gens.gens:
        # group terms by the exponent vector with X_var removed, divide each
        # coefficient polynomial in X_var by f
        groups: dict[tuple, dict[int, int]] = {}
        for exp, c in current.items():
            rest = exp[:var] + (0,) + exp[var + 1:]
            groups.setdefault(rest, {})[exp[var]] = c
        h_terms, r_terms = {}, {}
        for rest, col in groups.items():
            n = max(col) + 1
            coeffs = [col.get(i, 0) for i in range(n)]
            h, r = poly_divmod(Poly(field_, coeffs), f)
            for i, c in enumerate(h.coeffs):
                if c:
                    h_terms[rest[:var] + (i,) + rest[var + 1:]] = c
            for i, c in enumerate(r.coeffs):
                if c:
                    r_terms[rest[:var] + (i,) + rest[var + 1:]] = c
        quotients.append(MultiPoly._raw(field_, k, h_terms))
        current = MultiPoly._raw(field_, k, r_terms)
    return Reduction(tuple(quotients), current)


def ideal_member(g: MultiPoly, gens: IdealGens) -> bool:
    return reduce(g, gens).remainder.is_zero()


@dataclass(frozen=True)
class Witness:
    """A finite set of 1-based positions whose terms sum into the ideal."""

    indices: tuple[int, ...]
    sum: MultiPoly
    kind: str  # "singleton" or "p-fold"
    scanned: int = field(default=0, compare=False)

    def to_json(self, pretty: bool = False) -> dict:
        return {
            "indices": list(self.indices),
            "sum": str(self.sum) if pretty else format_multipoly(self.sum),
            "class": self.kind,
        }


def ip_witness(seq: Iterable[MultiPoly], gens: IdealGens, scan_cap: int | None = None) -> Witness:
    """First finite sum of distinct sequence terms lying in the ideal.

    Scans ``seq`` in order, bucketing terms by remainder.  A term with remainder
    0 is returned alone; otherwise the first remainder class to collect p
    members is returned.  ``scan_cap`` defaults to the pigeonhole bound
    (p-1)*R + 1, which suffices for any injective sequence.
    """
    if scan_cap is None:
        scan_cap = gens.pigeonhole_bound()
    p = gens.field.p
    seen: set[MultiPoly] = set()
    buckets: dict[MultiPoly, list[int]] = {}
    terms: dict[int, MultiPoly] = {}
    n = 0
    for g in seq:
        if n >= scan_cap:
            break
        n += 1
        if g in seen:
            raise IdealError(f"sequence term {n} repeats an earlier term")
        seen.add(g)
        r = reduce(g, gens).remainder
        if r.is_zero():
            return Witness((n,), g, "singleton", n)
        bucket = buckets.setdefault(r, [])
        bucket.append(n)
        terms[n] = g
        if len(bucket) == p:
            total = MultiPoly.zero(g.field, g.nvars)
            for i in bucket:
                total = total + terms[i]
            if not ideal_member(total, gens):  # p * r = 0 guarantees this
                raise AssertionError("equal-remainder class failed to sum into the ideal")
            return Witness(tuple(bucket), total, "p-fold", n)
    census = {format_multipoly(r): len(v) for r, v in buckets.items()}
    reason = "scan cap reached" if n >= scan_cap else "sequence exhausted"
    raise WitnessNotFound(
        f"{reason} after {n} terms without a witness (bound {gens.pigeonhole_bound()})",
        census, n)


def sum_subsystem(seq: Sequence[MultiPoly], gens: IdealGens, depth: int) -> list[Witness]:
    """Iterate ip_witness on disjoint tails of ``seq``.

    Block j starts right after the last index used by block j-1.  Every block
    sum lies in the ideal, and so does every finite sum of block sums.
    Indices in the returned witnesses are positions in the full sequence.
    """
    out = []
    start = 0
    for _ in range(depth):
        w = ip_witness(seq[start:], gens)
        shifted = tuple(i + start for i in w.indices)
        out.append(Witness(shifted, w.sum, w.kind, w.scanned))
        start = shifted[-1]
    return out
