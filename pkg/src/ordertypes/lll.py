"""Collision-free pair functions and a predicate synthesised from them.

A pair function ``f`` maps ordered pairs of distinct indices in ``range(n)``
to ``range(k)``. A collision is a pair of labeled triples on distinct
3-subsets with equal values on all six ordered pairs. Collision-free
functions give predicates that are locally consistent on every point set
they are attached to.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import (
    DuplicateExhaustion,
    InvalidInput,
    ResampleBudgetExceeded,
    SizeLimitExceeded,
)
from .geometry import PointSet, same_order_type
from .predicates import PredicateTable, labeled_pairs

DEFAULT_MAX_RESAMPLES = 100_000
EQUIVALENCE_LIMIT = 9


@dataclass(frozen=True, eq=False)
class PairFunction:
    n: int
    k: int
    values: np.ndarray  # (n, n) int64, -1 on the diagonal

    def __post_init__(self):
        v = np.array(self.values, dtype=np.int64)
        if v.shape != (self.n, self.n):
            raise InvalidInput(f"values must have shape ({self.n}, {self.n})")
        off = ~np.eye(self.n, dtype=bool)
        if np.any(v[off] < 0) or np.any(v[off] >= self.k):
            raise InvalidInput("pair values must lie in [k]")
        np.fill_diagonal(v, -1)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __call__(self, i: int, j: int) -> int:
        if i == j:
            raise InvalidInput("a pair needs two distinct indices")
        return int(self.values[i, j])

    def __eq__(self, other):
        return isinstance(other, PairFunction) and self.k == other.k and np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash((self.n, self.k, self.values.tobytes()))

    def relabel(self, perm: Sequence[int]) -> "PairFunction":
        """``g(i, j) = f(perm[i], perm[j])``."""
        p = np.asarray(perm, dtype=np.int64)
        return PairFunction(self.n, self.k, self.values[np.ix_(p, p)])

    @classmethod
    def constant(cls, n: int, k: int, value: int = 0) -> "PairFunction":
        return cls(n, k, np.full((n, n), value, dtype=np.int64))


@dataclass(frozen=True)
class CollisionEvent:
    triple_a: tuple
    triple_b: tuple
    type: int

    @classmethod
    def of(cls, a, b) -> "CollisionEvent":
        shared = len(set(a) & set(b))
        if shared == 3 or len(set(a)) != 3 or len(set(b)) != 3:
            raise InvalidInput("events need two distinct 3-subsets")
        return cls(tuple(a), tuple(b), 1 if shared <= 1 else 2)

    def variables(self) -> list:
        """The (up to 12) ordered pairs the event depends on, sorted."""
        return sorted(set(labeled_pairs(self.triple_a)) | set(labeled_pairs(self.triple_b)))

    def occurs(self, f: PairFunction) -> bool:
        v = f.values
        return all(v[p] == v[q] for p, q in zip(labeled_pairs(self.triple_a), labeled_pairs(self.triple_b)))


def _keys(v, t):
    return tuple(v[i][j] for i, j in labeled_pairs(t))


def has_collision(f: PairFunction) -> Optional[CollisionEvent]:
    """Least collision ``(A, B)`` with ``A`` sorted, ``set(A) < set(B)`` and
    ``B`` labeled to match, ordered by ``(A, B)``; ``None`` if collision-free.
    """
    n = f.n
    if n < 3:
        return None
    v = f.values.tolist()
    by_key: dict = {}
    for A in itertools.combinations(range(n), 3):
        by_key.setdefault(_keys(v, A), []).append(A)
    best = None
    for B in itertools.permutations(range(n), 3):
        sb = tuple(sorted(B))
        for A in by_key.get(_keys(v, B), ()):
            if A < sb and (best is None or (A, B) < best):
                best = (A, B)
    return None if best is None else CollisionEvent.of(*best)


def count_events(n: int) -> tuple:
    """Exact ``(|E1|, |E2|)``: events are unordered pairs of distinct
    3-subsets together with one of the 6 matchings between them.
    """
    t = math.comb(n, 3)
    e2 = t * 3 * (n - 3) // 2 * 6
    return math.comb(t, 2) * 6 - e2, e2


@dataclass(frozen=True)
class LLLParameters:
    n: int
    k: int

    @property
    def p_type1(self) -> Fraction:
        return Fraction(1, self.k**6)

    @property
    def p_type2_bound(self) -> Fraction:
        return Fraction(1, self.k**4)

    @property
    def d1(self) -> int:
        return 72 * self.n**4

    @property
    def d2(self) -> int:
        return 72 * self.n**2

    @property
    def x1(self) -> Fraction:
        return Fraction(1, self.d1)

    @property
    def x2(self) -> Fraction:
        return Fraction(1, self.d2)

    @property
    def e1_bound(self) -> int:
        return self.n**6

    @property
    def e2_bound(self) -> int:
        return 18 * self.n**4


# ------------------------------------------------------------- threshold


def e_squared_bounds(terms: int) -> tuple:
    """Rational ``lo < e^2 < hi`` from the partial sum of ``sum 1/j!``.

    The tail after ``terms`` terms is below ``2/terms!``.
    """
    s = sum(Fraction(1, math.factorial(j)) for j in range(terms))
    tail = Fraction(2, math.factorial(terms))
    return s * s, (s + tail) ** 2


def _at_least(lhs: int, factor: int) -> bool:
    """Decide ``lhs >= factor * e^2`` exactly (never equal: e^2 is irrational)."""
    terms = 8
    while True:
        lo, hi = e_squared_bounds(terms)
        if lhs >= factor * hi:
            return True
        if lhs < factor * lo:
            return False
        terms *= 2


def lll_threshold(n: int) -> int:
    """Least ``k`` with ``k >= e^(1/3) 288^(1/6) n^(2/3)`` and
    ``k >= e^(1/2) 288^(1/4) n^(1/2)``, i.e. ``k^6 >= 288 e^2 n^4`` and
    ``k^4 >= 288 e^2 n^2``, decided with certified rational bounds on ``e^2``.
    """
    if n < 4:
        raise InvalidInput("lll_threshold needs n >= 4")
    # floating estimate as a starting point, then exact steps
    k = max(1, int(min(math.e ** (1 / 3) * 288 ** (1 / 6) * n ** (2 / 3), math.e**0.5 * 288**0.25 * n**0.5)) - 2)
    while not (_at_least(k**6, 288 * n**4) and _at_least(k**4, 288 * n**2)):
        k += 1
    return k


# ---------------------------------------------------------- Moser-Tardos


def _rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, int) and not 0 <= seed < 2**64:
        raise InvalidInput("seeds are unsigned 64-bit integers")
    return np.random.default_rng(seed)


@dataclass
class SampleResult:
    function: PairFunction
    resamples: int


def moser_tardos(n: int, k: int, seed=0, max_resamples: int = DEFAULT_MAX_RESAMPLES) -> SampleResult:
    """Draw all values uniformly; while some event occurs, redraw the
    variables of the least occurring event.
    """
    if n < 1 or k < 1:
        raise InvalidInput("n and k must be positive")
    rng = _rng(seed)
    v = rng.integers(0, k, size=(n, n), dtype=np.int64)
    np.fill_diagonal(v, -1)
    resamples = 0
    while True:
        f = PairFunction(n, k, v)
        ev = has_collision(f)
        if ev is None:
            return SampleResult(f, resamples)
        if resamples >= max_resamples:
            raise ResampleBudgetExceeded(f"still colliding after {max_resamples} resamples (n={n}, k={k})")
        resamples += 1
        v = v.copy()
        for (i, j), val in zip(ev.variables(), rng.integers(0, k, size=len(ev.variables()))):
            v[i, j] = val


def moser_tardos_sample(n: int, k: int, seed=0, max_resamples: int = DEFAULT_MAX_RESAMPLES) -> PairFunction:
    return moser_tardos(n, k, seed, max_resamples).function


def empirical_event_frequency(k: int, event: CollisionEvent, samples: int = 100_000, seed=0) -> float:
    """Fraction of uniform random functions on the event's variables for which it occurs."""
    rng = _rng(seed)
    var = event.variables()
    col = {p: c for c, p in enumerate(var)}
    draws = rng.integers(0, k, size=(samples, len(var)))
    a = [col[p] for p in labeled_pairs(event.triple_a)]
    b = [col[p] for p in labeled_pairs(event.triple_b)]
    hit = np.all(draws[:, a] == draws[:, b], axis=1)
    return float(hit.mean())


# ------------------------------------------------------- equivalence


def _profiles(v: np.ndarray) -> list:
    n = v.shape[0]
    off = ~np.eye(n, dtype=bool)
    return [(tuple(sorted(v[i][off[i]])), tuple(sorted(v[:, i][off[:, i]]))) for i in range(n)]


def _isomorphisms(f1: PairFunction, f2: PairFunction):
    """All ``pi`` with ``f1(i, j) = f2(pi(i), pi(j))``, lexicographically."""
    n = f1.n
    if n > EQUIVALENCE_LIMIT:
        raise SizeLimitExceeded(f"equivalence search limited to n <= {EQUIVALENCE_LIMIT}")
    if f2.n != n:
        return
    v1, v2 = f1.values, f2.values
    p1, p2 = _profiles(v1), _profiles(v2)
    if sorted(p1) != sorted(p2):
        return
    cands = [[j for j in range(n) if p2[j] == p1[i]] for i in range(n)]
    pi = [-1] * n
    used = [False] * n

    def extend(i):
        if i == n:
            yield tuple(pi)
            return
        for c in cands[i]:
            if used[c]:
                continue
            if all(v1[a, i] == v2[pi[a], c] and v1[i, a] == v2[c, pi[a]] for a in range(i)):
                pi[i] = c
                used[c] = True
                yield from extend(i + 1)
                used[c] = False
        pi[i] = -1

    yield from extend(0)


def are_equivalent(f1: PairFunction, f2: PairFunction) -> Optional[tuple]:
    if f1.n != f2.n or f1.k != f2.k:
        raise InvalidInput("functions must share n and k")
    return next(_isomorphisms(f1, f2), None)


def is_rigid(f: PairFunction) -> bool:
    ident = tuple(range(f.n))
    return all(pi == ident for pi in _isomorphisms(f, f))


# ------------------------------------------------------------ synthesis


@dataclass
class SynthesizedPredicate:
    """One function per order-type class, attached to the class representative
    (the least catalog member by coordinates) in its x-order labeling.
    """

    n: int
    k: int
    representatives: list
    functions: list
    samples_drawn: int = 0
    classes: list = field(default_factory=list)  # catalog index -> class id

    def mapping(self) -> dict:
        return dict(enumerate(self.functions))

    def class_of(self, P: PointSet) -> tuple:
        """``(class id, bijection)`` with ``bijection[i]`` the representative
        index matched to ``P[i]``.
        """
        for cid, R in enumerate(self.representatives):
            g = same_order_type(P, R)
            if g is not None:
                return cid, g
        raise InvalidInput("point set's order type is not in the catalog")

    def table(self, P: PointSet) -> PredicateTable:
        cid, g = self.class_of(P)
        f = self.functions[cid]
        gi = np.asarray(g, dtype=np.int64)
        codes = f.values[np.ix_(gi, gi)].copy()
        return PredicateTable(tuple(range(self.k)), codes)

    __call__ = table


def dedupe_catalog(catalog: Sequence[PointSet]):
    """``(representatives, class ids)``; each class keyed by its least member."""
    reps: list = []
    members: list = []
    ids = []
    for P in catalog:
        for cid, R in enumerate(reps):
            if same_order_type(P, R) is not None:
                ids.append(cid)
                members[cid].append(P)
                break
        else:
            ids.append(len(reps))
            reps.append(P)
            members.append([P])
    reps = [min(ms, key=lambda Q: Q.coords()) for ms in members]
    return reps, ids


def synthesize_predicate(
    catalog: Sequence[PointSet],
    k: int,
    seed=0,
    max_samples: int = 1000,
    max_resamples: int = DEFAULT_MAX_RESAMPLES,
) -> SynthesizedPredicate:
    """Collision-free, rigid, pairwise non-equivalent functions, one per class."""
    catalog = list(catalog)
    if not catalog:
        raise InvalidInput("empty catalog")
    n = len(catalog[0])
    if any(len(P) != n for P in catalog):
        raise InvalidInput("catalog sets must all have the same size")
    reps, ids = dedupe_catalog(catalog)
    rng = _rng(seed)
    chosen: list = []
    drawn = 0
    while len(chosen) < len(reps):
        if drawn >= max_samples:
            raise DuplicateExhaustion(
                f"found {len(chosen)} of {len(reps)} non-equivalent functions in {max_samples} samples"
            )
        drawn += 1
        f = moser_tardos(n, k, rng, max_resamples).function
        if not is_rigid(f):
            continue
        if any(are_equivalent(f, g) is not None for g in chosen):
            continue
        chosen.append(f)
    return SynthesizedPredicate(n, k, reps, chosen, drawn, ids)
