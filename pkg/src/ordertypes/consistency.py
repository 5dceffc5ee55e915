"""Partially oriented graphs of binary predicates and the searches built on them.

A table ``T`` on ``n`` points becomes a partially oriented complete graph
(edge ``u -> v`` when ``T(u, v)`` precedes ``T(v, u)`` in the codomain order,
unoriented when equal) plus an edge coloring by the unordered value pair.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import _kernels
from .errors import (
    InvalidInput,
    NotNonconvexQuad,
    PreconditionViolated,
    SearchBudgetExceeded,
    SizeLimitExceeded,
    SizeMismatch,
    WrongWitnessShape,
)
from .geometry import PointSet, decompose, extreme_points, validate
from .predicates import PredicateTable, labeled_pairs

DEFAULT_SEARCH_BUDGET = 2_000_000

# Frozen output of find_five_point_witness(): hull (0,0), (3,0), (4,5) around
# the interior pair (1,1), (2,1); splits as ((1 (2 (3 4))) 5).
FIVE_POINT_WITNESS = ((0, 0), (1, 1), (2, 1), (3, 0), (4, 5))


@dataclass(frozen=True)
class PartiallyOrientedGraph:
    """Complete graph on ``range(n)``; ``state[(i, j)]`` for ``i < j`` is
    ``+1`` for ``i -> j``, ``-1`` for ``j -> i`` and ``0`` if unoriented.
    """

    n: int
    state: tuple

    def _index(self, u, v):
        i, j = (u, v) if u < v else (v, u)
        return i * self.n - i * (i + 1) // 2 + (j - i - 1)

    def direction(self, u: int, v: int) -> int:
        """``+1`` if ``u -> v``, ``-1`` if ``v -> u``, ``0`` if unoriented."""
        s = self.state[self._index(u, v)]
        return s if u < v else -s

    def points_to(self, u: int, v: int) -> bool:
        return self.direction(u, v) == 1

    def is_oriented(self, u: int, v: int) -> bool:
        return self.direction(u, v) != 0

    def induced(self, vertices: Sequence[int]) -> "PartiallyOrientedGraph":
        vs = list(vertices)
        state = []
        for a, b in itertools.combinations(range(len(vs)), 2):
            state.append(self.direction(vs[a], vs[b]))
        return PartiallyOrientedGraph(len(vs), tuple(state))

    @classmethod
    def from_arcs(cls, n: int, arcs) -> "PartiallyOrientedGraph":
        """Graph with the given ``(u, v)`` arcs; all other edges unoriented."""
        state = {}
        for u, v in arcs:
            state[(min(u, v), max(u, v))] = 1 if u < v else -1
        return cls(n, tuple(state.get(p, 0) for p in itertools.combinations(range(n), 2)))


@dataclass(frozen=True)
class EdgeClassColoring:
    """Unordered value pair (as codomain codes, sorted) on every edge."""

    n: int
    K: int
    classes: tuple

    def color(self, u: int, v: int) -> tuple:
        i, j = (u, v) if u < v else (v, u)
        return self.classes[i * self.n - i * (i + 1) // 2 + (j - i - 1)]


def build_graph(P: PointSet, T: PredicateTable):
    if T.n != len(P):
        raise SizeMismatch(f"table has n={T.n} but the point set has {len(P)} points")
    n = T.n
    k = T.k
    state, classes = [], []
    for i, j in itertools.combinations(range(n), 2):
        a, b = int(T.codes[i, j]), int(T.codes[j, i])
        state.append(0 if a == b else (1 if a < b else -1))
        classes.append((min(a, b), max(a, b)))
    return PartiallyOrientedGraph(n, tuple(state)), EdgeClassColoring(n, k * (k + 1) // 2, tuple(classes))


def table_from_graph(graph: PartiallyOrientedGraph, coloring: EdgeClassColoring, codomain) -> PredicateTable:
    n = graph.n
    codes = np.full((n, n), -1, dtype=np.int64)
    for i, j in itertools.combinations(range(n), 2):
        lo, hi = coloring.color(i, j)
        d = graph.direction(i, j)
        if d == 0:
            if lo != hi:
                raise InvalidInput(f"unoriented edge {i}-{j} with a two-valued class")
            codes[i, j] = codes[j, i] = lo
        elif d == 1:
            codes[i, j], codes[j, i] = lo, hi
        else:
            codes[i, j], codes[j, i] = hi, lo
    return PredicateTable(codomain, codes)


# ------------------------------------------------ inconsistency patterns


def _is_cycle(g, t):
    a, b, c = t
    return g.points_to(a, b) and g.points_to(b, c) and g.points_to(c, a)


def lemma6_check(P: PointSet, graph, coloring, triple_a, triple_b) -> Optional[str]:
    """Which inconsistency pattern (``"i"``, ``"ii"`` or ``"iii"``) the two
    labeled triples exhibit, or ``None``.

    Both triples must lie in one edge class and have opposite orientations.
    """
    A, B = tuple(triple_a), tuple(triple_b)
    if set(A) == set(B) or len(set(A)) != 3 or len(set(B)) != 3:
        raise PreconditionViolated("need two distinct 3-subsets")
    edges = [coloring.color(u, v) for t in (A, B) for u, v in itertools.combinations(t, 2)]
    if len(set(edges)) != 1:
        raise PreconditionViolated("triangles do not share a single edge class")
    if P.orient(*A) == P.orient(*B):
        raise PreconditionViolated("triples have the same orientation")
    idx = list(itertools.combinations(range(3), 2))
    da = [graph.direction(A[s], A[t]) for s, t in idx]
    db = [graph.direction(B[s], B[t]) for s, t in idx]
    if da != db:
        return None
    if not any(da):
        return "i"
    if _is_cycle(graph, A) or _is_cycle(graph, (A[0], A[2], A[1])):
        return "ii"
    return "iii"


def _nonconvex_quad(Q: PointSet):
    if len(Q) != 4:
        raise NotNonconvexQuad(f"need 4 points, got {len(Q)}")
    hull = extreme_points(Q)
    if len(hull) != 3:
        raise NotNonconvexQuad("the four points are in convex position")
    (inner,) = set(range(4)) - hull
    return sorted(hull), inner


def lemma7_allowed(Q: PointSet, H: PartiallyOrientedGraph) -> bool:
    """Fully oriented, hull triangle a directed 3-cycle, interior point a
    source or a sink.
    """
    hull, inner = _nonconvex_quad(Q)
    if H.n != 4:
        raise InvalidInput("H must have four vertices")
    if any(s == 0 for s in H.state):
        return False
    a, b, c = hull
    if not (_is_cycle(H, (a, b, c)) or _is_cycle(H, (a, c, b))):
        return False
    out = [H.points_to(inner, h) for h in hull]
    return all(out) or not any(out)


@dataclass
class QuadEnumeration:
    allowed: int
    orientations: int
    tables: int
    consistent_single_class: int
    induced: set
    allowed_states: set

    @property
    def sound(self) -> bool:
        return self.induced <= self.allowed_states

    @property
    def complete(self) -> bool:
        return self.allowed_states <= self.induced


def lemma7_enumeration(Q: PointSet, backend=None) -> QuadEnumeration:
    """All 2^6 orientations and all 2^12 two-valued tables on a nonconvex quad."""
    _nonconvex_quad(Q)
    pairs = list(itertools.combinations(range(4), 2))
    states = [tuple(1 if b else -1 for b in bits) for bits in itertools.product((1, 0), repeat=6)]
    allowed_states = {s for s in states if lemma7_allowed(Q, PartiallyOrientedGraph(4, s))}
    # every 0/1 table: bit order follows the ordered pairs (i, j), i != j
    ordered = [(i, j) for i in range(4) for j in range(4) if i != j]
    idx = np.arange(1 << len(ordered), dtype=np.int64)
    tables = np.full((idx.size, 4, 4), -1, dtype=np.int64)
    for e, (i, j) in enumerate(ordered):
        tables[:, i, j] = (idx >> (len(ordered) - 1 - e)) & 1
    single = np.ones(idx.size, dtype=bool)
    cls0 = np.minimum(tables[:, 0, 1], tables[:, 1, 0]) * 2 + np.maximum(tables[:, 0, 1], tables[:, 1, 0])
    for i, j in pairs[1:]:
        cls = np.minimum(tables[:, i, j], tables[:, j, i]) * 2 + np.maximum(tables[:, i, j], tables[:, j, i])
        single &= cls == cls0
    ok = _kernels.consistency_mask(tables, Q.orientations, backend=backend) & single
    induced = set()
    for r in np.flatnonzero(ok):
        t = tables[r]
        induced.add(tuple(0 if t[i, j] == t[j, i] else (1 if t[i, j] < t[j, i] else -1) for i, j in pairs))
    return QuadEnumeration(
        allowed=len(allowed_states),
        orientations=len(states),
        tables=int(idx.size),
        consistent_single_class=int(ok.sum()),
        induced=induced,
        allowed_states=allowed_states,
    )


# --------------------------------------------------------- 5-point witness


def witness_labeling(R: PointSet) -> Optional[tuple]:
    """Indices ``(r1, ..., r5)`` realising the separation pattern, if any.

    ``r3, r4`` are the interior points, the line ``r3 r4`` separates ``r5``
    from ``r1, r2`` and the line ``r1 r3`` separates ``r5`` from ``r2, r4``.
    """
    if len(R) != 5:
        return None
    hull = extreme_points(R)
    if len(hull) != 3:
        return None
    inner = sorted(set(range(5)) - hull)
    O = R.orientations
    for r3, r4 in itertools.permutations(inner):
        for r5 in sorted(hull):
            rest = sorted(hull - {r5})
            if not O[r3, r4, r5] != O[r3, r4, rest[0]] == O[r3, r4, rest[1]]:
                continue
            for r1, r2 in itertools.permutations(rest):
                if O[r1, r3, r5] != O[r1, r3, r2] == O[r1, r3, r4]:
                    return (r1, r2, r3, r4, r5)
    return None


def is_witness_shape(R: PointSet) -> bool:
    return witness_labeling(R) is not None and decompose(R) is not None


def find_five_point_witness(grid: int = 7) -> PointSet:
    """Grid search over ``x = 0..4`` and small integer ``y``."""
    for ys in itertools.product(range(grid), repeat=5):
        try:
            R = validate(list(zip(range(5), ys)))
        except InvalidInput:
            continue
        if is_witness_shape(R):
            return R
    raise InvalidInput(f"no witness on a {grid}-high grid")


def five_point_witness() -> PointSet:
    return validate(FIVE_POINT_WITNESS)


@dataclass
class RefutationReport:
    k: int
    enumerated: int
    consistent: int
    consistent_tables: list = field(default_factory=list)

    def lines(self) -> list:
        return [f"k={self.k}", f"enumerated={self.enumerated}", f"consistent={self.consistent}"]


def refute_monochromatic(R: PointSet, k: int, strict: bool = True, backend=None) -> RefutationReport:
    """Count the single-class tables on ``R`` that are locally consistent.

    One representative per class kind is enough because consistency only
    depends on which values coincide: the constant table stands for every
    class ``{z, z}`` and the 2^10 orientations with values ``{0, 1}`` stand for
    every class ``{z1, z2}``, ``z1 < z2``. With ``strict`` the input must have
    the witness shape; pass ``strict=False`` for control runs.
    """
    if len(R) != 5:
        raise WrongWitnessShape(f"need 5 points, got {len(R)}")
    if strict and not is_witness_shape(R):
        raise WrongWitnessShape("point set lacks the decomposable 3-hull witness structure")
    if k < 1:
        raise InvalidInput("k must be positive")
    n = 5
    batches = [np.zeros((1, n, n), dtype=np.int64)]
    if k >= 2:
        m = n * (n - 1) // 2
        batches.append(_kernels.orientation_tables(n, np.arange(1 << m)))
    tables = np.concatenate(batches)
    for t in tables:
        np.fill_diagonal(t, -1)
    ok = _kernels.consistency_mask(tables, R.orientations, backend=backend)
    found = [tables[i] for i in np.flatnonzero(ok)]
    return RefutationReport(k, int(tables.shape[0]), int(ok.sum()), found)


# ---------------------------------------------------------------- search


class _PairSearch:
    """Backtracking over unordered pairs; each decision fixes ``T(i, j)`` and
    ``T(j, i)`` together. Triple constraints are checked as soon as all three
    pairs of a triple are decided.
    """

    def __init__(self, P: PointSet, choices, budget, same_class=False):
        self.P = P
        self.n = n = len(P)
        self.O = P.orientations
        self.pairs = list(itertools.combinations(range(n), 2))
        self.choices = choices
        self.budget = budget
        self.same_class = same_class
        self.codes = [[-1] * n for _ in range(n)]
        self.registry: dict = {}
        self.nodes = 0
        step = {p: s for s, p in enumerate(self.pairs)}
        self.completes = [[] for _ in self.pairs]
        for t in itertools.combinations(range(n), 3):
            last = max(step[(t[0], t[1])], step[(t[0], t[2])], step[(t[1], t[2])])
            self.completes[last].append(t)

    def _add(self, t, added):
        codes, O = self.codes, self.O
        for perm in itertools.permutations(t):
            key = tuple(codes[i][j] for i, j in labeled_pairs(perm))
            o = int(O[perm])
            entries = self.registry.setdefault(key, [])
            for other, oo in entries:
                if other != t and oo != o:
                    return False
            entries.append((t, o))
            added.append(key)
        return True

    def _undo(self, added):
        for key in reversed(added):
            entries = self.registry[key]
            entries.pop()
            if not entries:
                del self.registry[key]

    def run(self):
        if self._extend(0, None):
            n = self.n
            return np.array([[self.codes[i][j] for j in range(n)] for i in range(n)], dtype=np.int64)
        return None

    def _extend(self, s, cls):
        if s == len(self.pairs):
            return True
        i, j = self.pairs[s]
        for a, b in self.choices:
            if self.same_class and cls is not None and (min(a, b), max(a, b)) != cls:
                continue
            self.nodes += 1
            if self.nodes > self.budget:
                raise SearchBudgetExceeded(f"search exceeded {self.budget} nodes")
            self.codes[i][j], self.codes[j][i] = a, b
            added: list = []
            ok = all(self._add(t, added) for t in self.completes[s])
            if ok and self._extend(s + 1, cls if cls is not None else (min(a, b), max(a, b))):
                return True
            self._undo(added)
        self.codes[i][j] = self.codes[j][i] = -1
        return False


def search_predicate(
    P: PointSet,
    k: int,
    budget: int = DEFAULT_SEARCH_BUDGET,
    single_class: bool = False,
) -> Optional[PredicateTable]:
    """First locally consistent table on ``P`` with codomain ``0..k-1``.

    Pairs are decided in lexicographic order, each with value pairs
    ``(T(i,j), T(j,i))`` in lexicographic order. ``single_class`` restricts the
    search to tables whose edge coloring uses one class. ``None`` is a
    definitive answer; running out of budget raises.
    """
    if k < 1:
        raise InvalidInput("k must be positive")
    choices = [(a, b) for a in range(k) for b in range(k)]
    codes = _PairSearch(P, choices, budget, same_class=single_class).run()
    return None if codes is None else PredicateTable(tuple(range(k)), codes)


def antisymmetric_search(P: PointSet, budget: int = DEFAULT_SEARCH_BUDGET) -> Optional[PredicateTable]:
    """First locally consistent tournament (``T(a,b) = -T(b,a)`` over ``{-1, 1}``)."""
    codes = _PairSearch(P, [(0, 1), (1, 0)], budget).run()
    return None if codes is None else PredicateTable((-1, 1), codes)


def count_consistent_tournaments(P: PointSet, limit: int = 7, backend=None) -> int:
    """Exhaustive count over all 2^C(n,2) tournaments on ``P``."""
    n = len(P)
    if n > limit:
        raise SizeLimitExceeded(f"tournament enumeration limited to n <= {limit}")
    m = n * (n - 1) // 2
    total = 0
    step = 1 << 15
    for s in range(0, 1 << m, step):
        bits = np.arange(s, min(1 << m, s + step), dtype=np.int64)
        tables = _kernels.orientation_tables(n, bits)
        total += int(_kernels.consistency_mask(tables, P.orientations, backend=backend).sum())
    return total
