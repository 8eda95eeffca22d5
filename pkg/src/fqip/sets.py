"""Combinatorics on the truncated universe of F_q[x].

Every checker here decides a *truncated* property (degree < D, bounded
depth or translate degree).  True IP / syndetic / central status of an
infinite set is never certified; the reports carry their parameters so a
depth-k or degree-m verdict is not read as more than it is.

IP*-proxy.  In (F_q[x], +) a set is IP* exactly when it contains some ideal
<X^m> up to finitely many terms.  "If" holds because <X^m> is IP* (pigeonhole
on residues mod X^m).  "Only if" holds because an IP* set is syndetic, hence
a finite union of cosets f_i + <X^m>, and being IP forces one residue f_i to
be zero: p terms of an FS sequence that share a residue sum to a term with
residue p*f_i = 0.  ``ipstar_proxy`` tests the first condition directly and
``ip_obstruction`` runs the pigeonhole argument to exhibit a finite sum
escaping a zero-free coset union.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import networkx as nx
import numpy as np

from .field import FieldSpec
from .poly import Poly, canonical_index, format_poly
from .universe import TruncatedSet, Universe, get_universe

EXACT_COVER_CANDIDATES = 2**12
EXACT_COVER_NODES = 200_000
MAX_FS_GENERATORS = 20
MAX_IP_DEPTH = 4


class SetError(ValueError):
    pass


# ---------------------------------------------------------------------------
# value types


@dataclass(frozen=True)
class CosetStructure:
    """Union of cosets r + <X^m> over ``residues`` (polynomials of degree < m),
    minus ``exceptions_removed``, plus ``exceptions_added``."""

    m: int
    residues: tuple = ()
    exceptions_removed: tuple = ()
    exceptions_added: tuple = ()

    def __post_init__(self):
        if self.m < 0:
            raise SetError("coset modulus degree must be >= 0")
        res = tuple(sorted(set(self.residues), key=canonical_index))
        for r in res:
            if r.deg is not None and r.deg >= self.m:
                raise SetError(f"residue {format_poly(r)} has degree >= {self.m}")
        object.__setattr__(self, "residues", res)
        rem = tuple(sorted(set(self.exceptions_removed), key=canonical_index))
        add = tuple(sorted(set(self.exceptions_added), key=canonical_index))
        for f in rem:
            if f.truncate(self.m) not in res:
                raise SetError(f"removed exception {format_poly(f)} is not in the coset union")
        for f in add:
            if f.truncate(self.m) in res:
                raise SetError(f"added exception {format_poly(f)} already lies in the coset union")
        object.__setattr__(self, "exceptions_removed", rem)
        object.__setattr__(self, "exceptions_added", add)

    def has_zero_residue(self) -> bool:
        return any(r.is_zero() for r in self.residues)

    def __contains__(self, f: Poly) -> bool:
        if f in self.exceptions_added:
            return True
        return f.truncate(self.m) in self.residues and f not in self.exceptions_removed

    def to_set(self, universe: Universe) -> TruncatedSet:
        s = TruncatedSet.coset_union(universe, self.m, (canonical_index(r) for r in self.residues))
        arr = s.members.copy()
        for f in self.exceptions_removed:
            if f.deg is None or f.deg < universe.D:
                arr[universe.index(f)] = False
        for f in self.exceptions_added:
            if f.deg is None or f.deg < universe.D:
                arr[universe.index(f)] = True
        return TruncatedSet(universe, arr)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "residues": [format_poly(r) for r in self.residues],
            "exceptions_removed": [format_poly(f) for f in self.exceptions_removed],
            "exceptions_added": [format_poly(f) for f in self.exceptions_added],
        }


@dataclass(frozen=True)
class NatSet:
    """A subset of {0, ..., bound-1} of the naturals."""

    members: frozenset
    bound: int

    def __post_init__(self):
        mem = frozenset(int(n) for n in self.members)
        if any(not 0 <= n < self.bound for n in mem):
            raise SetError(f"NatSet members must lie in [0, {self.bound})")
        object.__setattr__(self, "members", mem)

    @classmethod
    def from_predicate(cls, pred, bound: int) -> "NatSet":
        return cls(frozenset(n for n in range(bound) if pred(n)), bound)

    @classmethod
    def evens(cls, bound: int) -> "NatSet":
        return cls.from_predicate(lambda n: n % 2 == 0, bound)

    @classmethod
    def everything(cls, bound: int) -> "NatSet":
        return cls(frozenset(range(bound)), bound)

    @classmethod
    def finite_sums(cls, gens: Sequence[int], bound: int) -> "NatSet":
        """FS(gens) in (N, +), truncated below ``bound``."""
        sums: set[int] = set()
        for g in gens:
            sums |= {g} | {s + g for s in sums}
        return cls(frozenset(s for s in sums if s < bound), bound)

    def __contains__(self, n: int) -> bool:
        return n in self.members

    def sorted(self) -> list[int]:
        return sorted(self.members)


@dataclass(frozen=True)
class FSResult:
    set: TruncatedSet
    overflow: int


@dataclass(frozen=True)
class SyndeticResult:
    """Cover T (translates of degree < m_max) or None when no cover exists."""

    cover: tuple | None
    m_max: int
    minimal: bool = False
    semigroup: str = "additive"

    @property
    def syndetic(self) -> bool:
        return self.cover is not None

    def to_json(self) -> dict:
        return {
            "syndetic": self.syndetic,
            "cover": None if self.cover is None else [format_poly(t) for t in self.cover],
            "cover_size": None if self.cover is None else len(self.cover),
            "minimal": self.minimal,
            "m_max": self.m_max,
            "semigroup": self.semigroup,
        }


@dataclass(frozen=True)
class ThickResult:
    thick: bool
    e: int
    witness: Poly | None  # g with g + {deg < e} inside A
    failing_block: int | None  # degree bound of the failing configuration

    def to_json(self) -> dict:
        return {
            "thick": self.thick,
            "e": self.e,
            "witness": None if self.witness is None else format_poly(self.witness),
            "failing_configuration": None if self.failing_block is None
            else f"all polynomials of degree < {self.failing_block}",
        }


@dataclass(frozen=True)
class PiecewiseResult:
    """Outcome of the piecewise-syndetic necessary condition for centrality."""

    holds: bool
    m: int
    e: int
    block: Poly | None  # base g of a coset g + {deg < e} covered by translates of A
    cover: tuple | None

    def to_json(self) -> dict:
        return {
            "central_necessary": self.holds,
            "proxy": "piecewise syndetic at truncation (necessary condition only)",
            "m": self.m,
            "e": self.e,
            "block": None if self.block is None else format_poly(self.block),
            "cover": None if self.cover is None else [format_poly(t) for t in self.cover],
        }


@dataclass(frozen=True)
class IPSearchResult:
    generators: tuple | None
    depth: int
    nodes: int

    @property
    def found(self) -> bool:
        return self.generators is not None

    def to_json(self) -> dict:
        return {
            "ip_at_depth": self.found,
            "depth": self.depth,
            "generators": None if self.generators is None
            else [format_poly(g) for g in self.generators],
            "nodes": self.nodes,
            "note": "IP at finite depth is a necessary approximation of IP",
        }


@dataclass(frozen=True)
class Obstruction:
    indices: tuple
    sum: Poly

    def to_json(self) -> dict:
        return {"indices": list(self.indices), "sum": format_poly(self.sum)}


@dataclass(frozen=True)
class RamseyResult:
    color: str  # "in" or "out"
    positions: tuple  # 0-based positions into the input sequence
    subsequence: tuple

    def to_json(self) -> dict:
        return {"color": self.color, "positions": list(self.positions),
                "subsequence": [format_poly(f) for f in self.subsequence],
                "length": len(self.positions)}


class RamseyError(SetError):
    def __init__(self, message, best: RamseyResult):
        super().__init__(message)
        self.best = best


class ObstructionError(SetError):
    pass


# ---------------------------------------------------------------------------
# finite sums and differences


def fs_set(gens: Sequence[Poly], semigroup: str, field: FieldSpec, D: int) -> FSResult:
    """All nonempty subset sums (or products) of ``gens`` with degree < D.

    Results of degree >= D are not stored; ``overflow`` counts the subsets
    producing them.
    """
    if not gens:
        raise SetError("fs_set needs at least one generator")
    if len(gens) > MAX_FS_GENERATORS:
        raise SetError(f"at most {MAX_FS_GENERATORS} generators supported")
    if semigroup not in ("additive", "multiplicative"):
        raise SetError(f"unknown semigroup {semigroup!r}")
    universe = get_universe(field, D)
    if semigroup == "multiplicative" and any(g.is_zero() for g in gens):
        raise SetError("zero polynomial is not in the multiplicative semigroup")
    op = (lambda a, b: a + b) if semigroup == "additive" else (lambda a, b: a * b)
    results: list[Poly] = []
    for g in gens:
        results += [g] + [op(s, g) for s in results]
    inside = [f for f in results if f.deg is None or f.deg < D]
    return FSResult(TruncatedSet.from_polys(universe, inside), len(results) - len(inside))


def delta_set(seq: Sequence[Poly], field: FieldSpec, D: int) -> TruncatedSet:
    """{x_n - x_m : m < n} in the additive group."""
    if len(seq) < 2:
        raise SetError("difference set needs at least two terms")
    universe = get_universe(field, D)
    idx = [universe.index(f) for f in seq]
    out = set()
    for n in range(len(idx)):
        for m in range(n):
            out.add(universe.sub(idx[n], idx[m]))
    return TruncatedSet.from_indices(universe, out)


# ---------------------------------------------------------------------------
# syndetic / thick


def _min_hitting_set(sets: np.ndarray, node_budget: int = EXACT_COVER_NODES):
    """Greedy then branch-and-bound minimum hitting set.

    ``sets`` is a (n_sets, n_candidates) boolean matrix with nonempty rows.
    Returns (sorted candidate columns, proven_minimal).
    """
    if sets.shape[0] == 0:
        return [0], True
    unhit = np.ones(sets.shape[0], dtype=bool)
    greedy = []
    while unhit.any():
        t = int(np.argmax(sets[unhit].sum(axis=0)))  # ties go to the smallest column
        greedy.append(t)
        unhit &= ~sets[:, t]
    best = sorted(greedy)
    if len(best) <= 1:
        return best, True

    # inclusion-minimal rows only; hitting those hits everything
    rows = sorted({int.from_bytes(np.packbits(r, bitorder="little").tobytes(), "little")
                   for r in sets}, key=lambda b: (b.bit_count(), b))
    minimal: list[int] = []
    for b in rows:
        if not any(m & b == m for m in minimal):
            minimal.append(b)
    full = (1 << len(minimal)) - 1
    col_hits: dict[int, int] = {}

    def hits_of(col: int) -> int:
        if col not in col_hits:
            col_hits[col] = sum(1 << i for i, b in enumerate(minimal) if (b >> col) & 1)
        return col_hits[col]

    nodes = 0
    exhausted = False

    def search(chosen: list[int], hit: int):
        nonlocal best, nodes, exhausted
        nodes += 1
        if nodes > node_budget:
            exhausted = True
            return
        if hit == full:
            if len(chosen) < len(best):
                best = sorted(chosen)
            return
        if len(chosen) + 1 >= len(best):
            return
        # branch on the unhit row with the fewest candidates
        target = min((b for i, b in enumerate(minimal) if not (hit >> i) & 1),
                     key=lambda b: b.bit_count())
        while target:
            low = target & -target
            col = low.bit_length() - 1
            search(chosen + [col], hit | hits_of(col))
            if exhausted:
                return
            target ^= low

    search([], 0)
    return best, not exhausted


def _translate_sets(universe: Universe, members: np.ndarray, m: int) -> np.ndarray | None:
    """Rows S_x = {t in deg < m : x + t in A} for every x, deduplicated.

    None if some x has no such t (no cover exists).
    """
    b = universe.block(m)
    rows = members.reshape(-1, b)  # row = coset of {deg < m}, column = low part
    if not rows.any(axis=1).all():
        return None
    distinct = np.unique(rows, axis=0)
    sub = get_universe(universe.field, m)
    shifts = []
    for u in range(b):
        # x = base + u: t works iff u + t in row
        cols = np.asarray(sub.add(sub.arange, u), dtype=np.int64).reshape(b)
        shifts.append(distinct[:, cols])
    return np.unique(np.concatenate(shifts, axis=0), axis=0)


def is_syndetic(A: TruncatedSet, m_max: int) -> SyndeticResult:
    """Search T within degree < m_max with union of (-t + A) = universe.

    A cover exists iff every coset of {deg < m_max} meets A.  The greedy cover
    is improved by exact search when there are at most 2^12 candidate
    translates; ``minimal`` records whether optimality was proven.
    """
    u = A.universe
    if not 0 <= m_max <= u.D:
        raise SetError(f"m_max must lie in [0, D={u.D}]")
    sets = _translate_sets(u, A.members, m_max)
    if sets is None:
        return SyndeticResult(None, m_max)
    b = u.block(m_max)
    if b <= EXACT_COVER_CANDIDATES:
        cols, minimal = _min_hitting_set(sets)
    else:
        cols, minimal = list(range(b)), False
    sub = get_universe(u.field, m_max)
    return SyndeticResult(tuple(sub.poly(c) for c in cols), m_max, minimal)


def is_syndetic_mult(A: TruncatedSet, m_max: int) -> SyndeticResult:
    """Syndeticity in (F_q[x] minus 0, *) at truncation.

    Looks for nonzero T of degree < m_max with: every nonzero x of degree
    <= D - m_max has some t in T with x*t in A.  Only those x are checked, so
    that every product stays inside the universe.
    """
    u = A.universe
    if not 1 <= m_max <= u.D:
        raise SetError(f"multiplicative m_max must lie in [1, D={u.D}]")
    cands = [u.poly(i) for i in range(1, u.block(m_max))]
    xs = [u.poly(i) for i in range(1, u.block(u.D - m_max + 1))]
    mat = np.zeros((len(xs), len(cands)), dtype=bool)
    for i, x in enumerate(xs):
        for j, t in enumerate(cands):
            mat[i, j] = A.members[u.index(x * t)]
    if not mat.any(axis=1).all():
        return SyndeticResult(None, m_max, semigroup="multiplicative")
    mat = np.unique(mat, axis=0)
    cols, minimal = _min_hitting_set(mat)
    return SyndeticResult(tuple(cands[c] for c in cols), m_max, minimal, "multiplicative")


def is_thick(A: TruncatedSet, e: int) -> ThickResult:
    """Thick at level e: some translate g + {deg < e} lies inside A.

    Containing a translate of the whole block {deg < e} is equivalent to
    containing a translate of every configuration E inside it.
    """
    u = A.universe
    if not 0 <= e <= u.D - 1:
        raise SetError(f"configuration degree bound must lie in [0, D-1={u.D - 1}]")
    rows = A.members.reshape(-1, u.block(e))
    full = np.flatnonzero(rows.all(axis=1))
    if full.size:
        return ThickResult(True, e, u.poly(int(full[0]) * u.block(e)), None)
    return ThickResult(False, e, None, e)


def central_necessary(A: TruncatedSet, m: int, e: int) -> PiecewiseResult:
    """Piecewise-syndetic check used as a necessary condition for central sets.

    Holds iff finitely many translates of A by degree < m cover a whole block
    g + {deg < e}.  Central sets are piecewise syndetic; the converse fails,
    so a True here is evidence only.
    """
    u = A.universe
    if not 0 <= m <= e <= u.D - 1:
        raise SetError(f"need 0 <= m <= e <= D-1, got m={m}, e={e}, D={u.D}")
    bm, be = u.block(m), u.block(e)
    hits = A.members.reshape(-1, bm).any(axis=1)  # H_m-cosets meeting A
    per_block = hits.reshape(-1, be // bm).all(axis=1)
    good = np.flatnonzero(per_block)
    if not good.size:
        return PiecewiseResult(False, m, e, None, None)
    g = int(good[0]) * be
    block_members = A.members[g:g + be]
    sub = get_universe(u.field, e)
    sets = _translate_sets(sub, block_members, m)
    # translates that wrap across the block boundary never occur: adding
    # degree < m keeps x inside its {deg < e} coset
    cols, _ = _min_hitting_set(sets)
    cov = get_universe(u.field, m)
    return PiecewiseResult(True, m, e, u.poly(g), tuple(cov.poly(c) for c in cols))


# ---------------------------------------------------------------------------
# IP*-proxy and the IP obstruction


def ipstar_proxy(A: TruncatedSet, max_exceptions: int = 0, m_max: int | None = None) -> CosetStructure | None:
    """Least m with |(<X^m> in universe) minus A| <= max_exceptions.

    m ranges over 0..D-1 (capped by m_max): at m = D the truncated ideal is
    just {0} and says nothing.  A certificate must keep at least one nonzero
    member of the ideal, otherwise a large exception budget makes it vacuous.
    """
    u = A.universe
    top = u.D - 1 if m_max is None else min(m_max, u.D - 1)
    for m in range(top + 1):
        ideal_members = A.members[:: u.block(m)]
        missing = np.flatnonzero(~ideal_members)
        if missing.size <= max_exceptions and ideal_members[1:].any():
            removed = tuple(u.poly(int(i) * u.block(m)) for i in missing)
            return CosetStructure(m, (Poly.zero(u.field),), removed)
    return None


def coset_structure(A: TruncatedSet, m: int, max_missing: int = 0) -> CosetStructure:
    """Describe A as a union of cosets of <X^m> plus/minus exceptions.

    A residue r is kept when at most ``max_missing`` members of r + <X^m> are
    absent from A; everything else in A is listed as an added exception.
    """
    u = A.universe
    if not 0 <= m <= u.D:
        raise SetError(f"m must lie in [0, D={u.D}]")
    b = u.block(m)
    cols = A.members.reshape(-1, b)  # column r = coset r + <X^m>
    keep = [r for r in range(b) if (~cols[:, r]).sum() <= max_missing]
    keep_mask = np.zeros(b, dtype=bool)
    keep_mask[keep] = True
    in_union = keep_mask[u.arange % b]
    removed = np.flatnonzero(in_union & ~A.members)
    added = np.flatnonzero(~in_union & A.members)
    sub = get_universe(u.field, m)
    return CosetStructure(m, tuple(sub.poly(r) for r in keep),
                          tuple(u.poly(int(i)) for i in removed),
                          tuple(u.poly(int(i)) for i in added))


def ip_obstruction(A: CosetStructure, candidate_seq: Sequence[Poly]) -> Obstruction:
    """Finite sum of sequence terms that leaves a zero-free coset union.

    p terms with the same residue mod X^m sum to residue p*r = 0, i.e. into
    <X^m>, which A misses.  (p-1)*|residues| + 1 distinct terms always
    suffice; shorter sequences work when some residue repeats p times early.
    """
    if A.has_zero_residue():
        raise ObstructionError("coset union contains the zero residue; no obstruction exists")
    if any(f.truncate(A.m).is_zero() for f in A.exceptions_added):
        raise ObstructionError("added exceptions meet <X^m>; pigeonhole sum may stay inside A")
    if not A.residues:
        raise ObstructionError("empty coset union")
    field_ = A.residues[0].field
    p = field_.p
    need = (p - 1) * len(A.residues) + 1
    seen = set()
    for n, f in enumerate(candidate_seq, 1):
        if f in seen:
            raise ObstructionError(f"term {n} repeats an earlier term")
        seen.add(f)
        if f not in A:
            raise ObstructionError(f"term {n} ({format_poly(f)}) is not in A")
    buckets: dict[Poly, list[int]] = {}
    for n, f in enumerate(candidate_seq, 1):
        bucket = buckets.setdefault(f.truncate(A.m), [])
        bucket.append(n)
        if len(bucket) == p:
            total = Poly.zero(field_)
            for i in bucket:
                total = total + candidate_seq[i - 1]
            if total in A:  # residue 0 and no added exception in <X^m>
                raise AssertionError("pigeonhole sum stayed inside a zero-free coset union")
            return Obstruction(tuple(bucket), total)
    raise ObstructionError(
        f"sequence of {len(candidate_seq)} terms too short: no residue repeats {p} times "
        f"(always found within {need} terms)")


def is_ip_truncated(A: TruncatedSet, depth: int) -> IPSearchResult:
    """Depth-k IP search: nonzero g_1, ..., g_k of strictly increasing degree
    with all 2^k - 1 nonempty subset sums in A.

    Depth-first in canonical index order.  With B_0 = A and
    B_j = B_{j-1} & (B_{j-1} - g_j), the next generator must lie in B_j, so
    one table gather per node prunes every pending subset sum at once.
    """
    if not 1 <= depth <= MAX_IP_DEPTH:
        raise SetError(f"depth must lie in [1, {MAX_IP_DEPTH}]")
    u = A.universe
    if depth > u.D:
        return IPSearchResult(None, depth, 0)
    nodes = 0
    N = u.size
    arange = u.arange

    def next_lower(g: int) -> int:
        # smallest index of degree > deg g
        b = 1
        while b <= g:
            b *= u.q
        return b

    def search(B: np.ndarray, lower: int, chosen: list[int]):
        nonlocal nodes
        level = len(chosen)
        cands = np.flatnonzero(B[lower:]) + lower
        if level == depth - 1:
            nodes += 1
            return chosen + [int(cands[0])] if cands.size else None
        if level == depth - 2:
            # vectorised last two levels
            for g in cands:
                nodes += 1
                g = int(g)
                lo = next_lower(g)
                if lo >= N:
                    break
                Bn = B[lo:] & B[u.add(arange[lo:], g)]
                hit = np.flatnonzero(Bn)
                if hit.size:
                    return chosen + [g, int(hit[0]) + lo]
            return None
        for g in cands:
            nodes += 1
            g = int(g)
            lo = next_lower(g)
            if lo >= N:
                break
            Bn = B & B[u.add(arange, g)]
            found = search(Bn, lo, chosen + [g])
            if found:
                return found
        return None

    found = search(A.members, 1, [])
    gens = None if found is None else tuple(u.poly(i) for i in found)
    return IPSearchResult(gens, depth, nodes)


# ---------------------------------------------------------------------------
# Ramsey refinement of difference sets


def _max_clique(n: int, edges: list[tuple[int, int]]) -> list[int]:
    g = nx.Graph()
    g.add_nodes_from(range(n))
    g.add_edges_from(edges)
    clique, _ = nx.max_weight_clique(g, weight=None)
    return sorted(clique)


def ramsey_refine(seq: Sequence[Poly], S: TruncatedSet, target_len: int) -> RamseyResult:
    """Longest subsequence whose differences (later minus earlier) are all in S
    or all outside S, by exact maximum clique in each colour class."""
    if not seq:
        raise SetError("empty sequence")
    u = S.universe
    idx = [u.index(f) for f in seq]
    if target_len <= 1:
        return RamseyResult("in", (0,), (seq[0],))
    n = len(seq)
    inside, outside = [], []
    for j in range(n):
        for i in range(j):
            (inside if S.members[u.sub(idx[j], idx[i])] else outside).append((i, j))
    best_in = _max_clique(n, inside)
    best_out = _max_clique(n, outside)
    color, pos = ("in", best_in) if len(best_in) >= len(best_out) else ("out", best_out)
    result = RamseyResult(color, tuple(pos), tuple(seq[i] for i in pos))
    if len(pos) < target_len:
        raise RamseyError(
            f"no monochromatic subsequence of length {target_len}; best is {len(pos)}", result)
    return result


# ---------------------------------------------------------------------------
# deg pullback


def deg_pullback(C: NatSet, field: FieldSpec, D: int) -> TruncatedSet:
    """{f != 0 : deg f in C} inside the universe deg < D."""
    u = get_universe(field, D)
    arr = np.zeros(u.size, dtype=bool)
    for d in C.members:
        if d < D:
            arr[u.block(d):u.block(d + 1)] = True
    return TruncatedSet(u, arr)


def degree_image(A: TruncatedSet) -> set[int]:
    """{deg f : f in A, f != 0}."""
    u = A.universe
    return {d for d in range(u.D) if A.members[u.block(d):u.block(d + 1)].any()}
