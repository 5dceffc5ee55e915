"""Binary point-set predicates.

A :class:`PredicateTable` is the restriction of a binary predicate to one point
set: a label for every ordered pair of distinct indices. This module builds
the two concrete predicates (the dual-arrangement encoding ``psi`` and the
wheel-set predicate ``phi``), decodes ``psi`` back to an order type, and
checks local consistency and encoding properties.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .errors import (
    DecodeFailure,
    InvalidInput,
    NotABijection,
    NotAWheelSet,
    SizeLimitExceeded,
    SizeMismatch,
)
from .geometry import OrderTypeTable, PointSet, extreme_points

DEFAULT_ISOMORPHISM_LIMIT = 8


class PredicateTable:
    """Labels ``T(i, j)`` for all ordered pairs ``i != j`` of ``range(n)``.

    Values are stored as codes into ``codomain``; the codomain list order is
    the total order used when comparing ``T(u, v)`` with ``T(v, u)``.
    """

    def __init__(self, codomain: Sequence, codes):
        self.codomain = tuple(codomain)
        if len(set(self.codomain)) != len(self.codomain):
            raise InvalidInput("codomain labels must be distinct")
        codes = np.array(codes, dtype=np.int64)
        if codes.ndim != 2 or codes.shape[0] != codes.shape[1]:
            raise InvalidInput("predicate table must be square")
        n = codes.shape[0]
        off = ~np.eye(n, dtype=bool)
        if n and (codes[off].min(initial=0) < 0 or codes[off].max(initial=0) >= len(self.codomain)):
            raise InvalidInput("predicate value outside the codomain")
        np.fill_diagonal(codes, -1)
        codes.setflags(write=False)
        self.codes = codes

    @classmethod
    def from_function(cls, n: int, codomain: Sequence, func: Callable) -> "PredicateTable":
        index = {z: c for c, z in enumerate(codomain)}
        codes = np.full((n, n), -1, dtype=np.int64)
        for i in range(n):
            for j in range(n):
                if i != j:
                    codes[i, j] = index[func(i, j)]
        return cls(codomain, codes)

    @classmethod
    def from_values(cls, n: int, codomain: Sequence, values: dict) -> "PredicateTable":
        missing = [(i, j) for i in range(n) for j in range(n) if i != j and (i, j) not in values]
        if missing:
            raise InvalidInput(f"predicate table is missing pair {missing[0]}")
        return cls.from_function(n, codomain, lambda i, j: values[i, j])

    @property
    def n(self) -> int:
        return self.codes.shape[0]

    @property
    def k(self) -> int:
        return len(self.codomain)

    def __getitem__(self, ij):
        i, j = ij
        if i == j:
            raise KeyError(ij)
        return self.codomain[self.codes[i, j]]

    def values(self) -> dict:
        return {(i, j): self[i, j] for i in range(self.n) for j in range(self.n) if i != j}

    def relabel(self, perm: Sequence[int]) -> "PredicateTable":
        """Same predicate with index ``i`` renamed ``perm[i]``."""
        inv = np.argsort(np.asarray(perm))
        return PredicateTable(self.codomain, self.codes[np.ix_(inv, inv)])

    def __eq__(self, other):
        if not isinstance(other, PredicateTable):
            return NotImplemented
        return self.codomain == other.codomain and np.array_equal(self.codes, other.codes)

    def __hash__(self):
        return hash((self.codomain, self.codes.tobytes()))

    def __repr__(self):
        return f"PredicateTable(n={self.n}, codomain={self.codomain})"


# ------------------------------------------------------------------ psi


@dataclass(frozen=True)
class DualArrangement:
    """Lines ``y = x(p) * t - y(p)`` for the points of a set.

    ``rank[p]`` is the 1-based index of the dual line of point ``p`` when
    lines are sorted by decreasing slope. ``crossings[i - 1]`` lists the
    partners of line ``i`` (line indices) from left to right.
    """

    slopes: tuple
    intercepts: tuple
    rank: tuple
    crossings: tuple


def dual_arrangement(P: PointSet) -> DualArrangement:
    n = len(P)
    slopes = tuple(p.x for p in P)
    intercepts = tuple(-p.y for p in P)
    # x-sorted input: the rightmost point has the steepest dual line
    rank = tuple(n - i for i in range(n))
    point_of = {rank[p]: p for p in range(n)}
    crossings = []
    for line in range(1, n + 1):
        p = point_of[line]
        partners = []
        for other in range(1, n + 1):
            if other == line:
                continue
            q = point_of[other]
            # a_p t - y_p = a_q t - y_q
            t = Fraction(P[p].y - P[q].y) / (P[p].x - P[q].x)
            partners.append((t, other))
        partners.sort()
        for (t1, _), (t2, _) in zip(partners, partners[1:]):
            if t1 == t2:
                raise InvalidInput("dual arrangement is not simple")
        crossings.append(tuple(o for _, o in partners))
    return DualArrangement(slopes, intercepts, rank, tuple(crossings))


def psi_matrix(P: PointSet) -> np.ndarray:
    """Row ``i - 1`` holds, for each crossing along line ``i`` from left to
    right, 1 if the partner line has a larger index.
    """
    if len(P) < 2:
        raise InvalidInput("psi needs at least two points")
    arr = dual_arrangement(P)
    n = len(P)
    out = np.zeros((n, n - 1), dtype=np.int64)
    for i, partners in enumerate(arr.crossings, start=1):
        for j, other in enumerate(partners):
            out[i - 1, j] = 1 if other > i else 0
    return out


def psi_encode(P: PointSet) -> PredicateTable:
    n = len(P)
    mat = psi_matrix(P)
    rank = dual_arrangement(P).rank

    def value(p, q):
        rp, rq = rank[p], rank[q]
        j = rq if rp > rq else rq - 1
        return int(mat[rp - 1, j - 1])

    return PredicateTable.from_function(n, (0, 1), value)


def _bits(T: PredicateTable) -> np.ndarray:
    try:
        as_int = [int(z) for z in T.codomain]
    except (TypeError, ValueError) as exc:
        raise InvalidInput("psi tables must use the labels 0 and 1") from exc
    if not set(as_int) <= {0, 1}:
        raise InvalidInput("psi tables must use the labels 0 and 1")
    lut = np.array(as_int, dtype=np.int64)
    bits = lut[np.where(T.codes < 0, 0, T.codes)]
    np.fill_diagonal(bits, 0)
    return bits


def iota_recover(T: PredicateTable) -> tuple:
    """1-based dual-line rank of every index: ``n`` minus its row sum."""
    n = T.n
    bits = _bits(T)
    ranks = tuple(int(n - bits[p].sum()) for p in range(n))
    if sorted(ranks) != list(range(1, n + 1)):
        raise NotABijection(f"recovered ranks {ranks} are not a permutation of 1..{n}")
    return ranks


def _wiring_sequences(flags: dict, n: int) -> dict:
    """Left-to-right crossing partners of each line, from the up/down flags."""
    order = list(range(n, 0, -1))  # top to bottom at the far left
    ptr = {i: 0 for i in range(1, n + 1)}
    seq: dict = {i: [] for i in range(1, n + 1)}
    remaining = n * (n - 1) // 2
    while remaining:
        for t in range(n - 1):
            upper, lower = order[t], order[t + 1]
            if lower > upper:
                continue  # already crossed
            if ptr[lower] >= n - 1 or ptr[upper] >= n - 1:
                continue
            if flags[lower][ptr[lower]] == 1 and flags[upper][ptr[upper]] == 0:
                order[t], order[t + 1] = lower, upper
                seq[lower].append(upper)
                seq[upper].append(lower)
                ptr[lower] += 1
                ptr[upper] += 1
                remaining -= 1
                break
        else:
            raise DecodeFailure("wiring sweep deadlocked; table is not a valid psi table")
    if any(p != n - 1 for p in ptr.values()):
        raise DecodeFailure("crossing counts are inconsistent with the flags")
    return seq


def psi_decode(T: PredicateTable) -> OrderTypeTable:
    """Orientation of every index triple of ``T`` recovered from psi values."""
    n = T.n
    rank = iota_recover(T)
    if n < 3:
        return OrderTypeTable(n, ())
    bits = _bits(T)
    flags = {r: [None] * (n - 1) for r in range(1, n + 1)}
    for p in range(n):
        for q in range(n):
            if p == q:
                continue
            rp, rq = rank[p], rank[q]
            j = rq if rp > rq else rq - 1
            flags[rp][j - 1] = int(bits[p, q])
    seq = _wiring_sequences(flags, n)
    pos = {line: {other: t for t, other in enumerate(partners)} for line, partners in seq.items()}
    signs = []
    for a, b, c in itertools.combinations(range(n), 3):
        # leftmost point has the largest line index
        u, v, w = sorted((a, b, c), key=lambda p: -rank[p])
        lu, lv, lw = rank[u], rank[v], rank[w]
        sign = 1 if pos[lv][lu] < pos[lv][lw] else -1
        label_order = (a, b, c)
        perm = [label_order.index(x) for x in (u, v, w)]
        inversions = sum(1 for s in range(3) for t in range(s + 1, 3) if perm[s] > perm[t])
        signs.append(sign if inversions % 2 == 0 else -sign)
    return OrderTypeTable(n, tuple(signs))


# ------------------------------------------------------------------ phi


def wheel_center(P: PointSet) -> int:
    """The interior point of a wheel set, or its leftmost point if convex."""
    hull = extreme_points(P)
    inner = sorted(set(range(len(P))) - hull)
    if len(inner) > 1:
        raise NotAWheelSet(f"{len(inner)} interior points")
    return inner[0] if inner else 0


def phi_encode(P: PointSet) -> PredicateTable:
    w = wheel_center(P)
    O = P.orientations

    def value(p, q):
        if p == w:
            return -1
        if q == w:
            return 1
        return int(O[p, q, w])

    return PredicateTable.from_function(len(P), (-1, 1), value)


# -------------------------------------------------------- consistency


@dataclass(frozen=True)
class ConsistencyViolation:
    """Two labeled triples on distinct subsets with equal pair values but
    opposite orientations.
    """

    triple_a: tuple
    triple_b: tuple
    values: tuple
    orientation_a: int
    orientation_b: int


def labeled_pairs(t) -> tuple:
    a1, a2, a3 = t
    return ((a1, a2), (a1, a3), (a2, a1), (a2, a3), (a3, a1), (a3, a2))


def triple_key(codes: np.ndarray, t) -> tuple:
    return tuple(int(codes[i, j]) for i, j in labeled_pairs(t))


def is_locally_consistent(P: PointSet, T: PredicateTable) -> Optional[ConsistencyViolation]:
    """``None`` if ``T`` is locally consistent on ``P``, else the first violation.

    Scan order: sorted triple A, then triple B > A, then the labelings of B in
    lexicographic order. Runs in O(n^3) by hashing the six pair values of
    every labeled triple.
    """
    if T.n != len(P):
        raise SizeMismatch(f"table has n={T.n} but the point set has {len(P)} points")
    O = P.orientations
    codes = T.codes
    triples = list(itertools.combinations(range(len(P)), 3))
    buckets: dict = {}
    for tid, B in enumerate(triples):
        for perm in itertools.permutations(B):
            buckets.setdefault(triple_key(codes, perm), []).append((tid, perm, int(O[perm])))
    for tid, A in enumerate(triples):
        key = triple_key(codes, A)
        oa = int(O[A])
        for tb, perm, ob in buckets[key]:
            if tb > tid and ob != oa:
                vals = tuple(T.codomain[c] for c in key)
                return ConsistencyViolation(A, perm, vals, oa, ob)
    return None


def consistent_batch(P: PointSet, tables: np.ndarray, backend=None) -> np.ndarray:
    """Vectorised consistency over a ``(batch, n, n)`` array of value codes."""
    from ._kernels import consistency_mask

    return consistency_mask(tables, P.orientations, backend=backend)


# -------------------------------------------------------- isomorphisms


def _row_profiles(T: PredicateTable) -> list:
    prof = []
    for i in range(T.n):
        out = sorted(repr(T[i, j]) for j in range(T.n) if j != i)
        inn = sorted(repr(T[j, i]) for j in range(T.n) if j != i)
        prof.append((tuple(out), tuple(inn)))
    return prof


def gamma_isomorphisms(T1: PredicateTable, T2: PredicateTable, limit: Optional[int] = DEFAULT_ISOMORPHISM_LIMIT) -> list:
    """All bijections ``f`` with ``T1(i, j) == T2(f(i), f(j))`` for every pair."""
    n = T1.n
    if n != T2.n:
        raise SizeMismatch(f"tables have sizes {T1.n} and {T2.n}")
    if limit is not None and n > limit:
        raise SizeLimitExceeded(f"gamma_isomorphisms limited to n <= {limit}, got {n}")
    # compare by label, not by code: the two codomains may be ordered differently
    trans = {c: T2.codomain.index(z) if z in T2.codomain else -2 for c, z in enumerate(T1.codomain)}
    A = np.vectorize(lambda c: trans.get(int(c), -1))(T1.codes) if n else T1.codes
    B = T2.codes
    p1, p2 = _row_profiles(T1), _row_profiles(T2)
    if sorted(p1) != sorted(p2):
        return []
    cands = [[j for j in range(n) if p2[j] == p1[i]] for i in range(n)]
    found = []
    f = [-1] * n
    used = [False] * n

    def extend(i):
        if i == n:
            found.append(tuple(f))
            return
        for c in cands[i]:
            if used[c]:
                continue
            if all(A[a, i] == B[f[a], c] and A[i, a] == B[c, f[a]] for a in range(i)):
                f[i] = c
                used[c] = True
                extend(i + 1)
                used[c] = False
        f[i] = -1

    extend(0)
    return found


# ------------------------------------------------------------ encoding


@dataclass
class EncodingReport:
    pairs_checked: int = 0
    isomorphisms_checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


ENCODERS = {"psi": psi_encode, "phi": phi_encode}


def verify_encoding(corpus: Sequence[PointSet], encoder: Union[str, Callable] = "psi") -> EncodingReport:
    """Check that every predicate isomorphism between two corpus members
    preserves all triple orientations.

    Each failure is ``(index_p, index_q, f, triple)``.
    """
    enc = ENCODERS[encoder] if isinstance(encoder, str) else encoder
    tables = [enc(P) for P in corpus]
    report = EncodingReport()
    for a, P in enumerate(corpus):
        for b, Q in enumerate(corpus):
            if len(P) != len(Q):
                continue
            report.pairs_checked += 1
            OP, OQ = P.orientations, Q.orientations
            for f in gamma_isomorphisms(tables[a], tables[b]):
                report.isomorphisms_checked += 1
                for t in itertools.combinations(range(len(P)), 3):
                    if OP[t] != OQ[f[t[0]], f[t[1]], f[t[2]]]:
                        report.failures.append((a, b, f, t))
                        break
    return report
