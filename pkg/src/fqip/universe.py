"""The truncated universe {f : deg f < D} as index arrays, and membership tables on it."""

from __future__ import annotations

import functools
from typing import Iterable

import numpy as np

from .field import FieldSpec
from .poly import (DEFAULT_UNIVERSE_CAP, Poly, UniverseError, canonical_index, from_index,
                   index_add, index_neg, universe_size)


class Universe:
    """Index arithmetic for polynomials of degree < D over ``field``."""

    def __init__(self, field: FieldSpec, D: int, cap: int = DEFAULT_UNIVERSE_CAP):
        self.field = field
        self.D = D
        self.q = field.q
        self.p = field.p
        self.size = universe_size(field, D, cap)
        self.ndigits = field.e * D

    def __eq__(self, other):
        return isinstance(other, Universe) and (self.field, self.D) == (other.field, other.D)

    def __hash__(self):
        return hash((self.field, self.D))

    def __repr__(self):
        return f"Universe(q={self.q}, D={self.D})"

    @functools.cached_property
    def arange(self) -> np.ndarray:
        a = np.arange(self.size, dtype=np.int64)
        a.flags.writeable = False
        return a

    def block(self, m: int) -> int:
        """Number of polynomials of degree < m (q^m); m = 0 gives {0}."""
        return self.q ** m

    def add(self, a, b):
        return index_add(a, b, self.p, self.ndigits if isinstance(a, np.ndarray) or isinstance(b, np.ndarray) else None)

    def neg(self, a):
        return index_neg(a, self.p, self.ndigits if isinstance(a, np.ndarray) else None)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def translate_table(self, g: int) -> np.ndarray:
        """idx -> idx(f + g) for every f in the universe."""
        return self.add(self.arange, g)

    def index(self, f: Poly) -> int:
        if f.field != self.field:
            raise UniverseError("polynomial over a different field")
        return canonical_index(f, self.D)

    def poly(self, idx: int) -> Poly:
        return from_index(int(idx), self.field, self.D)

    def polys(self, indices: Iterable[int]) -> list[Poly]:
        return [self.poly(i) for i in indices]

    def describe(self) -> dict:
        return {"p": self.field.p, "e": self.field.e, "q": self.q, "D": self.D,
                "modulus": list(self.field.modulus)}


@functools.lru_cache(maxsize=64)
def get_universe(field: FieldSpec, D: int, cap: int = DEFAULT_UNIVERSE_CAP) -> Universe:
    return Universe(field, D, cap)


class TruncatedSet:
    """A subset of the truncated universe, stored as a boolean table by index."""

    __slots__ = ("universe", "members")

    def __init__(self, universe: Universe, members):
        arr = np.asarray(members, dtype=bool)
        if arr.shape != (universe.size,):
            raise UniverseError(
                f"membership table of length {arr.shape} for universe of size {universe.size}")
        arr = arr.copy()
        arr.flags.writeable = False
        self.universe = universe
        self.members = arr

    # -- constructors ---------------------------------------------------

    @classmethod
    def empty(cls, universe: Universe) -> "TruncatedSet":
        return cls(universe, np.zeros(universe.size, dtype=bool))

    @classmethod
    def full(cls, universe: Universe) -> "TruncatedSet":
        return cls(universe, np.ones(universe.size, dtype=bool))

    @classmethod
    def from_indices(cls, universe: Universe, indices: Iterable[int]) -> "TruncatedSet":
        arr = np.zeros(universe.size, dtype=bool)
        idx = np.fromiter((int(i) for i in indices), dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= universe.size):
            bad = int(idx[(idx < 0) | (idx >= universe.size)][0])
            raise UniverseError(f"index {bad} outside universe of size {universe.size}")
        arr[idx] = True
        return cls(universe, arr)

    @classmethod
    def from_polys(cls, universe: Universe, polys: Iterable[Poly]) -> "TruncatedSet":
        return cls.from_indices(universe, (universe.index(f) for f in polys))

    @classmethod
    def ideal(cls, universe: Universe, m: int) -> "TruncatedSet":
        """<X^m> intersected with the universe: indices divisible by q^m."""
        return cls(universe, universe.arange % universe.block(m) == 0)

    @classmethod
    def coset_union(cls, universe: Universe, m: int, residues: Iterable[int]) -> "TruncatedSet":
        """Union of r + <X^m> over residue indices r (each < q^m)."""
        b = universe.block(m)
        res = np.zeros(b, dtype=bool)
        for r in residues:
            if not 0 <= r < b:
                raise UniverseError(f"residue index {r} not of degree < {m}")
            res[r] = True
        return cls(universe, res[universe.arange % b])

    # -- queries ----------------------------------------------------------

    @property
    def field(self) -> FieldSpec:
        return self.universe.field

    @property
    def D(self) -> int:
        return self.universe.D

    def __len__(self):
        return int(self.members.sum())

    def indices(self) -> list[int]:
        return [int(i) for i in np.flatnonzero(self.members)]

    def polys(self) -> list[Poly]:
        return self.universe.polys(self.indices())

    def __contains__(self, item) -> bool:
        if isinstance(item, Poly):
            if item.deg is not None and item.deg >= self.D:
                return False
            item = self.universe.index(item)
        return 0 <= item < self.universe.size and bool(self.members[item])

    def _same(self, other: "TruncatedSet"):
        if not isinstance(other, TruncatedSet):
            return False
        if other.universe != self.universe:
            raise UniverseError("sets over different universes")
        return True

    def __or__(self, other):
        if not self._same(other):
            return NotImplemented
        return TruncatedSet(self.universe, self.members | other.members)

    def __and__(self, other):
        if not self._same(other):
            return NotImplemented
        return TruncatedSet(self.universe, self.members & other.members)

    def __sub__(self, other):
        if not self._same(other):
            return NotImplemented
        return TruncatedSet(self.universe, self.members & ~other.members)

    def __invert__(self):
        return TruncatedSet(self.universe, ~self.members)

    def complement(self) -> "TruncatedSet":
        return ~self

    def issubset(self, other: "TruncatedSet") -> bool:
        self._same(other)
        return not bool((self.members & ~other.members).any())

    __le__ = issubset

    def translate(self, g) -> "TruncatedSet":
        """g + A."""
        u = self.universe
        gi = u.index(g) if isinstance(g, Poly) else int(g)
        # x in g + A  iff  x - g in A
        return TruncatedSet(u, self.members[u.add(u.arange, u.neg(gi))])

    def __eq__(self, other):
        if not isinstance(other, TruncatedSet):
            return NotImplemented
        return self.universe == other.universe and bool(np.array_equal(self.members, other.members))

    def __hash__(self):
        return hash((self.universe, self.members.tobytes()))

    def __repr__(self):
        return f"TruncatedSet(q={self.universe.q}, D={self.D}, size={len(self)})"

    def describe(self) -> dict:
        return {"universe": self.universe.describe(), "size": len(self), "indices": self.indices()}
