"""Finite measure-preserving actions of (F_q[x], +) and (F_q[x] minus 0, *).

Conventions
-----------
``T_f B`` denotes the preimage {x : T_f x in B}, so
mu(A & T_f B) = sum of w(x) over x in A with T_f x in B.  All measures are
``fractions.Fraction``; state weights are held as integer numerators over a
common denominator so sums stay exact.

System kinds
------------
translation(m)
    States F_q[x]/<X^m>, uniform; T_f x = x + (f mod X^m).
bernoulli(alphabet, c), explicit
    States are the functions w: {deg < c} -> alphabet with product measure.
    (T_f w)(g) = w(g + (f mod X^c)).  This is a genuine action that factors
    through F_q[x]/<X^c>.  For f of degree < c there is no wrap-around
    (g + f stays in the window), and it agrees with the full Bernoulli shift
    on cylinders supported in the window.
bernoulli, cylinder calculus (``BernoulliShift``)
    The full shift on alphabet^(F_q[x]), with events restricted to cylinders
    on finitely many coordinates.  Measures of intersections of shifted
    cylinders are exact sums over joint assignments of the coordinates
    involved.  Used above the explicit state cap.
pullback(base_perm, base_weights)
    A multiplicative action T_f = T^(deg f) built from one invertible,
    weight-preserving base map T on finitely many states.  Undefined at f = 0.

Mixing verdicts are truncated proxies of the definitions: the deviation set
G_eps = {f : |mu(A & T_f B) - mu(A)mu(B)| < eps} is tested for being
cofinite (strong mixing), IP* (mild mixing), and syndetic plus piecewise
syndetic (necessary for central*, weak mixing).  C*-mixing implies weak
mixing, IP*-mixing implies mild mixing and C_f-mixing implies strong mixing;
a verdict computed at degree < D is evidence for these properties, never a
proof.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

import numpy as np

from .field import FieldSpec
from .poly import Poly, UniverseError, canonical_index, format_poly, index_add
from .sets import central_necessary, ipstar_proxy, is_syndetic, is_syndetic_mult
from .universe import TruncatedSet, get_universe

DEFAULT_STATE_CAP = 2**16
MAX_WEIGHT_DENOM = 2**62


class MDSError(ValueError):
    """Invalid system construction or action request."""


_RATIONAL = re.compile(r"([+-]?\d+)(?:/(\d+))?")


def frac_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_fraction(text) -> Fraction:
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        raise MDSError("floating-point weights are not accepted; use 'a/b' strings")
    m = _RATIONAL.fullmatch(str(text).strip())
    if m is None or int(m.group(2) or 1) == 0:
        raise MDSError(f"malformed rational {text!r} (expected 'a/b' or an integer)")
    return Fraction(int(m.group(1)), int(m.group(2) or 1))


# ---------------------------------------------------------------------------
# events


@dataclass(frozen=True)
class EventSet:
    """A set of states of a finite system, as a boolean mask."""

    mask: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.mask, dtype=bool).copy()
        m.flags.writeable = False
        object.__setattr__(self, "mask", m)

    @classmethod
    def from_states(cls, n: int, states: Iterable[int]) -> "EventSet":
        m = np.zeros(n, dtype=bool)
        for s in states:
            if not 0 <= s < n:
                raise MDSError(f"state {s} outside 0..{n - 1}")
            m[s] = True
        return cls(m)

    @classmethod
    def everything(cls, n: int) -> "EventSet":
        return cls(np.ones(n, dtype=bool))

    def states(self) -> list[int]:
        return [int(i) for i in np.flatnonzero(self.mask)]

    def __and__(self, other):
        return EventSet(self.mask & other.mask)

    def __or__(self, other):
        return EventSet(self.mask | other.mask)

    def __invert__(self):
        return EventSet(~self.mask)

    def __eq__(self, other):
        return isinstance(other, EventSet) and np.array_equal(self.mask, other.mask)

    def __hash__(self):
        return hash(self.mask.tobytes())


@dataclass(frozen=True)
class Cylinder:
    """{w : (w(c_1), ..., w(c_k)) in patterns} for coordinates given by
    canonical polynomial indices."""

    coords: tuple
    patterns: frozenset

    def __post_init__(self):
        coords = tuple(int(c) for c in self.coords)
        if len(set(coords)) != len(coords):
            raise MDSError("cylinder coordinates must be distinct")
        pats = frozenset(tuple(int(s) for s in p) for p in self.patterns)
        if any(len(p) != len(coords) for p in pats):
            raise MDSError("pattern length differs from number of coordinates")
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "patterns", pats)

    @classmethod
    def single(cls, coord: int, symbols: Iterable[int]) -> "Cylinder":
        return cls((coord,), frozenset((s,) for s in symbols))


# ---------------------------------------------------------------------------
# systems


class FiniteMDS:
    """A finite probability space with an action given by permutations."""

    def __init__(self, kind: str, field: FieldSpec, weights: Sequence[Fraction], params: dict,
                 action_kind: str, **data):
        self.kind = kind
        self.field = field
        self.params = params
        self.action_kind = action_kind
        w = [Fraction(x) for x in weights]
        if any(x < 0 for x in w):
            raise MDSError("negative state weight")
        if sum(w) != 1:
            raise MDSError(f"state weights sum to {sum(w)}, not 1")
        den = lcm(*(x.denominator for x in w))
        if den > MAX_WEIGHT_DENOM // max(len(w), 1):
            raise MDSError("weight denominators too large for exact integer sums")
        self.n = len(w)
        self.denom = den
        num = np.array([x.numerator * (den // x.denominator) for x in w], dtype=np.int64)
        num.flags.writeable = False
        self.weight_num = num
        self._data = data
        self._cache: dict = {}

    def __repr__(self):
        return f"FiniteMDS(kind={self.kind!r}, states={self.n}, params={self.params})"

    @property
    def weights(self) -> list[Fraction]:
        return [Fraction(int(x), self.denom) for x in self.weight_num]

    def measure(self, A: EventSet) -> Fraction:
        return Fraction(int(self.weight_num[A.mask].sum()), self.denom)

    def event(self, spec) -> EventSet:
        if isinstance(spec, EventSet):
            if spec.mask.shape != (self.n,):
                raise MDSError("event over a different state space")
            return spec
        if isinstance(spec, Cylinder):
            return self._cylinder_event(spec)
        return EventSet.from_states(self.n, spec)

    def _cylinder_event(self, cyl: Cylinder) -> EventSet:
        if self.kind != "bernoulli":
            raise MDSError("cylinder events need a Bernoulli system")
        digits = self._data["digits"]
        window = digits.shape[1]
        if any(c >= window for c in cyl.coords):
            raise MDSError(f"cylinder coordinate outside window of {window} coordinates")
        sub = digits[:, list(cyl.coords)]
        mask = np.zeros(self.n, dtype=bool)
        for pat in cyl.patterns:
            mask |= (sub == np.array(pat)).all(axis=1)
        return EventSet(mask)

    def _key(self, f: Poly):
        if f.field != self.field:
            raise MDSError("acting polynomial over a different field")
        if self.kind == "translation":
            return canonical_index(f) % self.field.q ** self.params["m"]
        if self.kind == "bernoulli":
            return canonical_index(f) % self.field.q ** self.params["coord_degree"]
        if f.is_zero():
            raise MDSError("pullback action is undefined at f = 0")
        return f.deg

    def perm(self, f: Poly) -> np.ndarray:
        """State map x -> T_f x."""
        key = self._key(f)
        if key in self._cache:
            return self._cache[key]
        if self.kind == "translation":
            sub = get_universe(self.field, self.params["m"])
            out = sub.add(sub.arange, key)
        elif self.kind == "bernoulli":
            digits = self._data["digits"]
            sub = get_universe(self.field, self.params["coord_degree"])
            # (T_f w)(g) = w(g + f)
            shifted = digits[:, sub.add(sub.arange, key)]
            out = shifted @ self._data["powers"]
        else:
            base = self._data["base"]
            out = np.arange(self.n)
            for _ in range(key):
                out = base[out]
        out = np.asarray(out, dtype=np.int64)
        out.flags.writeable = False
        self._cache[key] = out
        return out

    def pushforward(self, f: Poly) -> list[Fraction]:
        """Weights of T_f^{-1}{s} for each state s."""
        perm = self.perm(f)
        out = np.zeros(self.n, dtype=np.int64)
        np.add.at(out, perm, self.weight_num)
        return [Fraction(int(x), self.denom) for x in out]

    def intersection_measure(self, A: EventSet, shifts: Sequence[tuple[Poly | None, EventSet]]) -> Fraction:
        """mu(A & T_{g_1} B_1 & ...), with g = None meaning the identity."""
        mask = A.mask.copy()
        for g, B in shifts:
            mask &= B.mask if g is None else B.mask[self.perm(g)]
        return Fraction(int(self.weight_num[mask].sum()), self.denom)


class BernoulliShift:
    """Full Bernoulli shift over F_q[x] evaluated on cylinder events."""

    kind = "bernoulli-cylinder"
    action_kind = "additive"

    def __init__(self, field: FieldSpec, alphabet: Sequence[Fraction], params: dict):
        a = [Fraction(x) for x in alphabet]
        if len(a) < 2 or any(x < 0 for x in a) or sum(a) != 1:
            raise MDSError("alphabet weights must be >= 2 nonnegative rationals summing to 1")
        self.field = field
        self.alphabet = a
        self.params = params

    def __repr__(self):
        return f"BernoulliShift(alphabet={len(self.alphabet)}, q={self.field.q})"

    def event(self, spec) -> Cylinder:
        if not isinstance(spec, Cylinder):
            raise MDSError("the cylinder-calculus system only accepts cylinder events")
        if any(s >= len(self.alphabet) for p in spec.patterns for s in p):
            raise MDSError("pattern symbol outside the alphabet")
        return spec

    def measure(self, A: Cylinder) -> Fraction:
        return self._joint([(A.coords, A.patterns)])

    def _shifted(self, cyl: Cylinder, f: Poly | None) -> tuple:
        if f is None:
            return cyl.coords, cyl.patterns
        if f.field != self.field:
            raise MDSError("acting polynomial over a different field")
        fi = canonical_index(f)
        p = self.field.p
        # T_f^{-1}B constrains w at g + f for g in supp B
        return tuple(index_add(c, fi, p) for c in cyl.coords), cyl.patterns

    def _joint(self, constraints: list[tuple]) -> Fraction:
        # partial assignments: frozenset of (coord, symbol) -> multiplicity 1
        partial = {frozenset()}
        for coords, patterns in constraints:
            nxt = set()
            for asg in partial:
                d = dict(asg)
                for pat in patterns:
                    ok = True
                    new = dict(d)
                    for c, s in zip(coords, pat):
                        if new.get(c, s) != s:
                            ok = False
                            break
                        new[c] = s
                    if ok:
                        nxt.add(frozenset(new.items()))
            partial = nxt
            if not partial:
                return Fraction(0)
        total = Fraction(0)
        for asg in partial:
            w = Fraction(1)
            for _, s in asg:
                w *= self.alphabet[s]
            total += w
        return total

    def intersection_measure(self, A: Cylinder, shifts: Sequence[tuple[Poly | None, Cylinder]]) -> Fraction:
        cons = [(A.coords, A.patterns)] + [self._shifted(B, g) for g, B in shifts]
        return self._joint(cons)


def _bernoulli_explicit(field, alphabet, c, state_cap):
    w = field.q ** c
    k = len(alphabet)
    n = k ** w
    if n > state_cap:
        return None
    states = np.arange(n, dtype=np.int64)
    powers = k ** np.arange(w, dtype=np.int64)
    digits = (states[:, None] // powers[None, :]) % k
    den = lcm(*(a.denominator for a in alphabet))
    nums = [a.numerator * (den // a.denominator) for a in alphabet]
    weights = []
    for row in digits:
        num = 1
        for s in row:
            num *= nums[s]
        weights.append(Fraction(num, den ** w))
    return digits, powers, weights


def build_system(kind: str, params: dict, field: FieldSpec, state_cap: int = DEFAULT_STATE_CAP):
    """Construct a system; see the module docstring for kinds and conventions."""
    params = dict(params)
    if kind == "translation":
        m = int(params.get("m", -1))
        if m < 0:
            raise MDSError("translation needs params.m >= 0")
        n = field.q ** m
        if n > state_cap:
            raise MDSError(f"translation system has {n} states, cap {state_cap}")
        return FiniteMDS("translation", field, [Fraction(1, n)] * n, {"m": m}, "additive")
    if kind in ("bernoulli", "bernoulli-cylinder"):
        alphabet = [parse_fraction(a) for a in params.get("alphabet", ["1/2", "1/2"])]
        if len(alphabet) < 2 or sum(alphabet) != 1 or any(a < 0 for a in alphabet):
            raise MDSError("alphabet weights must be >= 2 nonnegative rationals summing to 1")
        c = int(params.get("coord_degree", 0))
        canon = {"alphabet": [frac_str(a) for a in alphabet], "coord_degree": c}
        if kind == "bernoulli":
            built = _bernoulli_explicit(field, alphabet, c, state_cap)
            if built is not None:
                digits, powers, weights = built
                return FiniteMDS("bernoulli", field, weights, canon, "additive",
                                 digits=digits, powers=powers)
        return BernoulliShift(field, alphabet, canon)
    if kind == "pullback":
        base = [int(x) for x in params.get("base_perm", [])]
        n = len(base)
        if n == 0 or sorted(base) != list(range(n)):
            raise MDSError("base_perm must be a permutation of 0..n-1")
        if n > state_cap:
            raise MDSError(f"pullback system has {n} states, cap {state_cap}")
        raw = params.get("base_weights")
        weights = [Fraction(1, n)] * n if raw is None else [parse_fraction(x) for x in raw]
        if len(weights) != n:
            raise MDSError("base_weights length differs from base_perm")
        for s in range(n):
            if weights[base[s]] != weights[s]:
                raise MDSError(f"base map does not preserve weight at state {s}")
        canon = {"base_perm": base, "base_weights": [frac_str(w) for w in weights]}
        return FiniteMDS("pullback", field, weights, canon, "multiplicative",
                         base=np.array(base, dtype=np.int64))
    raise MDSError(f"unknown system kind {kind!r}")


def load_system_spec(data: dict, field: FieldSpec | None = None):
    """Build from the JSON system-spec layout {kind, q, params, caps}."""
    from .field import FieldSpec as FS
    if field is None:
        if "p" in data:
            field = FS(int(data["p"]), int(data.get("e", 1)), tuple(data.get("modulus", ())))
        elif "q" in data:
            field = FS.from_q(int(data["q"]), tuple(data.get("modulus", ())))
        else:
            raise MDSError("system spec needs q or p")
    caps = data.get("caps", {}) or {}
    return build_system(data.get("kind", ""), data.get("params", {}) or {}, field,
                        int(caps.get("states", DEFAULT_STATE_CAP)))


# ---------------------------------------------------------------------------
# correlations


def _check_acting(sys, f: Poly, D: int | None):
    if D is not None and f.deg is not None and f.deg >= D:
        raise UniverseError(f"acting polynomial of degree {f.deg} outside universe deg < {D}")
    if sys.action_kind == "multiplicative" and f.is_zero():
        raise MDSError("multiplicative action is undefined at f = 0")


def correlation(sys, A, B, f: Poly, D: int | None = None) -> Fraction:
    """mu(A & T_f B) exactly."""
    _check_acting(sys, f, D)
    A, B = sys.event(A), sys.event(B)
    return sys.intersection_measure(A, [(f, B)])


@dataclass
class CorrelationReport:
    values: dict  # acting f index -> Fraction
    product: Fraction
    epsilon: Fraction
    good_set: TruncatedSet
    acting: TruncatedSet
    overflow: list = field(default_factory=list)

    @property
    def exceptional_set(self) -> TruncatedSet:
        return self.acting - self.good_set

    def to_json(self) -> dict:
        return {
            "values": [[i, v.numerator, v.denominator] for i, v in sorted(self.values.items())],
            "product": frac_str(self.product),
            "epsilon": frac_str(self.epsilon),
            "good_set": self.good_set.indices(),
            "overflow": list(self.overflow),
        }


def acting_set(sys, D: int) -> TruncatedSet:
    u = get_universe(sys.field, D)
    s = TruncatedSet.full(u)
    if sys.action_kind == "multiplicative":
        s = s - TruncatedSet.from_indices(u, [0])
    return s


def correlation_set(sys, A, B, epsilon, D: int) -> CorrelationReport:
    """Deviation set G_eps over the truncated acting set, with every value."""
    eps = parse_fraction(epsilon)
    if eps <= 0:
        raise MDSError("epsilon must be positive")
    A, B = sys.event(A), sys.event(B)
    product = sys.measure(A) * sys.measure(B)
    acting = acting_set(sys, D)
    u = acting.universe
    values = {}
    good = np.zeros(u.size, dtype=bool)
    for i in acting.indices():
        v = sys.intersection_measure(A, [(u.poly(i), B)])
        values[i] = v
        good[i] = abs(v - product) < eps
    return CorrelationReport(values, product, eps, TruncatedSet(u, good), acting)


@dataclass
class MixingReport:
    correlation: CorrelationReport
    cofinite: dict
    ipstar: dict
    syndetic: dict

    def verdicts(self) -> dict:
        return {"cofinite": self.cofinite, "ipstar": self.ipstar, "syndetic": self.syndetic}

    def to_json(self) -> dict:
        out = self.correlation.to_json()
        out["verdicts"] = self.verdicts()
        return out


def classify_mixing(sys, A, B, epsilon, D: int, *, cofinite_band: int | None = None,
                    max_exceptions: int = 0, syndetic_m: int | None = None,
                    central_m: int | None = None, central_e: int | None = None) -> MixingReport:
    """Truncated strong / mild / weak mixing evidence for the pair (A, B).

    (a) cofinite: the complement of G_eps inside the acting set lies in the
        band {deg < cofinite_band} (default D - 2);
    (b) IP*-proxy: ipstar_proxy on G_eps (additive actions only);
    (c) syndetic cover of G_eps plus the piecewise-syndetic necessary
        condition for central sets.
    """
    rep = correlation_set(sys, A, B, epsilon, D)
    u = rep.good_set.universe
    band = max(D - 2, 0) if cofinite_band is None else cofinite_band
    comp = rep.exceptional_set.indices()
    cofinite = {
        "holds": all(i < u.block(band) for i in comp),
        "band_degree": band,
        "complement": [format_poly(u.poly(i)) for i in comp],
        "complement_size": len(comp),
    }
    if sys.action_kind == "additive":
        cs = ipstar_proxy(rep.good_set, max_exceptions)
        ipstar = {"holds": cs is not None, "max_exceptions": max_exceptions,
                  "structure": None if cs is None else cs.to_json()}
    else:
        ipstar = {"holds": None, "max_exceptions": max_exceptions, "structure": None,
                  "note": "ideal-containment proxy applies to additive actions only"}
    sm = syndetic_m if syndetic_m is not None else max(D // 2, 1 if sys.action_kind == "multiplicative" else 0)
    if sys.action_kind == "additive":
        syn = is_syndetic(rep.good_set, sm)
        cm = sm if central_m is None else central_m
        ce = D - 1 if central_e is None else central_e
        pw = central_necessary(rep.good_set, min(cm, ce), ce).to_json() if D >= 1 else None
    else:
        syn = is_syndetic_mult(rep.good_set, sm)
        pw = None
    syndetic = dict(syn.to_json())
    syndetic["holds"] = syn.syndetic
    syndetic["central_necessary"] = pw
    return MixingReport(rep, cofinite, ipstar, syndetic)


# ---------------------------------------------------------------------------
# Khintchine-type recurrence sets


@dataclass
class KhintchineReport:
    values: dict
    threshold: Fraction
    set: TruncatedSet
    overflow: list
    syndetic: dict
    exponent: int

    def to_json(self) -> dict:
        return {
            "values": [[i, v.numerator, v.denominator] for i, v in sorted(self.values.items())],
            "threshold": frac_str(self.threshold),
            "exponent": self.exponent,
            "set": self.set.indices(),
            "overflow": list(self.overflow),
            "syndetic": self.syndetic,
        }


def khintchine_set(sys, A, epsilon, D: int, *, coeffs: Sequence[Poly] | None = None,
                   powers: int | None = None, syndetic_m: int | None = None) -> KhintchineReport:
    """{f : mu(T_{c_0 f}A & ... & T_{c_k f}A) > mu(A)^(k+1) - eps}, or in powers
    mode {f : mu(A & T_f A & T_{f^2} A & ... & T_{f^k} A) > mu(A)^(k+1) - eps}.

    Any f with some c_i f (resp. f^j) of degree >= D is left out of the set
    and listed in ``overflow``.
    """
    eps = parse_fraction(epsilon)
    if eps <= 0:
        raise MDSError("epsilon must be positive")
    A = sys.event(A)
    if sys.action_kind == "additive":
        if not coeffs:
            raise MDSError("coefficient list must be nonempty")
        if powers is not None:
            raise MDSError("powers mode needs a multiplicative action")
        exponent = len(coeffs)
    else:
        if coeffs:
            raise MDSError("coefficient mode needs an additive action")
        if powers is None or powers < 1:
            raise MDSError("powers mode needs k >= 1")
        exponent = powers + 1
    threshold = sys.measure(A) ** exponent - eps
    acting = acting_set(sys, D)
    u = acting.universe
    members = np.zeros(u.size, dtype=bool)
    values, overflow = {}, []
    for i in acting.indices():
        f = u.poly(i)
        shifts = [c * f for c in coeffs] if coeffs else [f ** j for j in range(0, powers + 1)]
        if any(g.deg is not None and g.deg >= D for g in shifts):
            overflow.append(i)
            continue
        # f^0 = 1 acts as T^0, the identity; 0*f likewise
        v = sys.intersection_measure(_full_event(sys), [(g, A) for g in shifts])
        values[i] = v
        members[i] = v > threshold
    result = TruncatedSet(u, members)
    if sys.action_kind == "additive":
        sm = max(D // 2, 0) if syndetic_m is None else syndetic_m
        syn = is_syndetic(result, sm)
    else:
        sm = max(D // 2, 1) if syndetic_m is None else syndetic_m
        syn = is_syndetic_mult(result, sm)
    syndetic = dict(syn.to_json())
    syndetic["note"] = "overflow f are treated as non-members"
    return KhintchineReport(values, threshold, result, overflow, syndetic, exponent)


def _full_event(sys):
    if isinstance(sys, BernoulliShift):
        return Cylinder((), frozenset({()}))
    return EventSet.everything(sys.n)


# ---------------------------------------------------------------------------
# structural checks


def check_measure_preserving(sys: FiniteMDS, D: int) -> bool:
    w = sys.weights
    for f in acting_set(sys, D).polys():
        if sys.pushforward(f) != w:
            return False
    return True


def check_additive_law(sys: FiniteMDS, D: int) -> bool:
    """T_f o T_g = T_{f+g} for every f, g of degree < D."""
    polys = acting_set(sys, D).polys()
    for f in polys:
        pf = sys.perm(f)
        for g in polys:
            if not np.array_equal(pf[sys.perm(g)], sys.perm(f + g)):
                return False
    return True
