"""Constructions and verifiers for ordered arrow relations.

``P ->x (Q_1, ..., Q_k)^p`` means: every k-coloring of the p-subsets of ``P``
has a color ``i`` and a subset with the signature of ``Q_i`` whose p-subsets
all get color ``i``. Colors are ``0..k-1`` in code and in files.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from . import _kernels
from .errors import (
    BadIndex,
    BudgetExceeded,
    EnumerationBudgetExceeded,
    InvalidInput,
    NotDecomposable,
    SearchBudgetExceeded,
    SizeLimitExceeded,
)
from .geometry import (
    Leaf,
    Node,
    Point,
    PointSet,
    cross,
    decompose,
    is_splitting,
    same_order_type,
    top_split,
    validate,
)

DEFAULT_ENUMERATION_LIMIT = 1 << 24
DEFAULT_SUBSET_LIMIT = 1_000_000
DEFAULT_SEARCH_NODES = 5_000_000
MODES = ("signature", "ordertype")


@dataclass(frozen=True)
class BuildBudget:
    """``max_points`` caps every intermediate set; ``max_depth`` caps the
    number of nontrivial factors in one product fold.
    """

    max_points: int = 100_000
    max_depth: int = 6

    def __post_init__(self):
        if self.max_points < 1 or self.max_depth < 1:
            raise InvalidInput("budget values must be positive")


@dataclass(frozen=True)
class PointColoring:
    n: int
    k: int
    colors: tuple

    def __post_init__(self):
        if len(self.colors) != self.n or any(not 0 <= c < self.k for c in self.colors):
            raise InvalidInput("point coloring must assign a color in [k] to every point")

    def color(self, i: int) -> int:
        return self.colors[i]


@dataclass(frozen=True)
class PairColoring:
    """Colors of the unordered pairs ``i < j`` in lexicographic order."""

    n: int
    k: int
    colors: tuple

    def __post_init__(self):
        if len(self.colors) != self.n * (self.n - 1) // 2:
            raise InvalidInput("pair coloring must color all C(n,2) pairs")
        if any(not 0 <= c < self.k for c in self.colors):
            raise InvalidInput("pair colors must lie in [k]")

    def color(self, i: int, j: int) -> int:
        if i == j:
            raise InvalidInput("a pair needs two distinct indices")
        if i > j:
            i, j = j, i
        return self.colors[pair_index(self.n, i, j)]

    def as_dict(self) -> dict:
        return dict(zip(itertools.combinations(range(self.n), 2), self.colors))

    @classmethod
    def from_dict(cls, n: int, k: int, colors: dict) -> "PairColoring":
        try:
            return cls(n, k, tuple(colors[p] for p in itertools.combinations(range(n), 2)))
        except KeyError as exc:
            raise InvalidInput(f"pair {exc.args[0]} has no color") from exc


def pair_index(n: int, i: int, j: int) -> int:
    return i * n - i * (i + 1) // 2 + (j - i - 1)


# ------------------------------------------------------------ constructions


def _translate(P: PointSet, dx, dy) -> list:
    return [Point(p.x + dx, p.y + dy) for p in P.points]


def _box_triples_ok(A: Sequence[Point], eps: Fraction) -> bool:
    """No line meeting two of the boxes ``a +- eps`` meets a third.

    The cross product is affine in each argument, so it keeps a strict sign
    over three boxes iff it does on all 64 corner combinations.
    """
    offs = [(sx * eps, sy * eps) for sx in (-1, 1) for sy in (-1, 1)]
    for a, b, c in itertools.combinations(A, 3):
        sign = cross(a, b, c) > 0
        for (ax, ay), (bx, by), (cx, cy) in itertools.product(offs, repeat=3):
            d = (b.x + bx - a.x - ax) * (c.y + cy - a.y - ay) - (b.y + by - a.y - ay) * (c.x + cx - a.x - ax)
            if d == 0 or (d > 0) != sign:
                return False
    return True


def _initial_eps(A: Sequence[Point]) -> Fraction:
    xgap = min(A[i + 1].x - A[i].x for i in range(len(A) - 1))
    bound2 = (xgap / 4) ** 2
    for a, b, c in itertools.permutations(A, 3):
        if a.x < b.x:
            d = cross(a, b, c)
            ab2 = (b.x - a.x) ** 2 + (b.y - a.y) ** 2
            bound2 = min(bound2, d * d / ab2 / 16)
    eps = Fraction(1)
    while eps * eps > bound2:
        eps /= 2
    while (2 * eps) ** 2 <= bound2:
        eps *= 2
    return eps


def product(A: PointSet, B: PointSet, budget: Optional[BuildBudget] = None) -> PointSet:
    """``A o B``: a scaled copy of ``B`` inside a small box around every point of ``A``.

    Boxes have disjoint x-projections in the order of ``A`` and no line meets
    three of them, which is certified exactly before the points are placed.
    Copy ``i`` occupies indices ``i*|B| .. (i+1)*|B| - 1``.
    """
    if len(A) == 0 or len(B) == 0:
        raise InvalidInput("product needs nonempty sets")
    budget = budget or BuildBudget()
    size = len(A) * len(B)
    if size > budget.max_points:
        raise BudgetExceeded(f"product would have {len(A)}*{len(B)}={size} points > {budget.max_points}")
    if len(B) == 1:
        return A
    if len(A) == 1:
        return B
    bx = [p.x for p in B.points]
    by = [p.y for p in B.points]
    cx, cy = (min(bx) + max(bx)) / 2, (min(by) + max(by)) / 2
    radius = max(max(bx) - min(bx), max(by) - min(by))  # unit copy fits in [-1/2, 1/2]^2
    unit = [((p.x - cx) / radius, (p.y - cy) / radius) for p in B.points]
    eps = _initial_eps(A.points)
    while not _box_triples_ok(A.points, eps):
        eps /= 2
    m = len(A)
    for attempt in itertools.count():
        # vertical jitter t*i/(2m) between copies breaks accidental
        # collinearities of two points of one copy with a point of another
        t = Fraction(0) if attempt == 0 else Fraction(1, attempt)
        pts = []
        for i, a in enumerate(A.points):
            jy = t * i / (2 * m)
            pts.extend(Point(a.x + eps * ux, a.y + eps * (uy + jy)) for ux, uy in unit)
        try:
            return validate(pts)
        except InvalidInput:
            if attempt and attempt % 8 == 0:
                eps /= 2


def _nontrivial(Qs) -> int:
    return sum(1 for Q in Qs if len(Q) > 1)


def sequence_product(Qs: Sequence[PointSet], budget: Optional[BuildBudget] = None, fold: str = "right") -> PointSet:
    """``Q_1 o ... o Q_k``; satisfies ``->x (Q_1, ..., Q_k)^1``.

    The default right fold places a copy of ``Q_2 o ... o Q_k`` around every
    point of ``Q_1``, which keeps the exact box certification on small sets.
    """
    Qs = list(Qs)
    if not Qs:
        raise InvalidInput("sequence_product needs at least one set")
    budget = budget or BuildBudget()
    if _nontrivial(Qs) > budget.max_depth:
        raise BudgetExceeded(
            f"product of {_nontrivial(Qs)} nontrivial factors exceeds max_depth={budget.max_depth}"
        )
    size = math.prod(len(Q) for Q in Qs)
    if size > budget.max_points:
        raise BudgetExceeded(f"product size {size} exceeds max_points={budget.max_points}")
    if fold == "right":
        acc = Qs[-1]
        for Q in reversed(Qs[:-1]):
            acc = product(Q, acc, budget)
    elif fold == "left":
        acc = Qs[0]
        for Q in Qs[1:]:
            acc = product(acc, Q, budget)
    else:
        raise InvalidInput(f"unknown fold {fold!r}")
    return acc


def _bbox(points):
    xs = [p.x for p in points]
    ys = [p.y for p in points]
    return min(xs), max(xs), min(ys), max(ys)


def _max_abs_slope(P: PointSet) -> Fraction:
    pts = P.points
    best = Fraction(0)
    for i in range(len(pts) - 1):
        # the steepest segment of an x-sorted set joins two x-neighbours
        s = abs((pts[i + 1].y - pts[i].y) / (pts[i + 1].x - pts[i].x))
        best = max(best, s)
    return best


def stack_splitting(S1: PointSet, S2: PointSet):
    """Translate ``S2`` right and up until ``S1`` is deep below it.

    Returns ``(P, cut)`` with ``P[:cut]`` the image of ``S1``. Lines through
    two points of either set have slope at most ``M`` in absolute value, so a
    vertical gap larger than ``M * W`` over the total width ``W`` suffices.
    """
    if len(S1) == 0 or len(S2) == 0:
        raise InvalidInput("stack_splitting needs nonempty sets")
    x1lo, x1hi, y1lo, y1hi = _bbox(S1.points)
    x2lo, x2hi, y2lo, y2hi = _bbox(S2.points)
    dx = x1hi - x2lo + 1
    width = (x2hi + dx) - x1lo
    slope = max(_max_abs_slope(S1), _max_abs_slope(S2))
    gap = slope * width + 1
    while True:
        dy = y1hi + gap - y2lo
        P = validate(list(S1.points) + _translate(S2, dx, dy))
        if is_splitting(P, len(S1)):
            return P, len(S1)
        gap *= 2  # not reached with the bound above; kept as a guard


def _pigeonhole_set(size: int) -> PointSet:
    # any point set of this size works; a cup keeps coordinates small
    return validate([(i, i * i) for i in range(size)])


def ordered_one_arrow(S: PointSet, k: int, budget: Optional[BuildBudget] = None, compact: bool = False) -> PointSet:
    """A set ``R`` with ``R ->x (S)^1_k``.

    With ``compact`` and ``|S| <= 2`` the signature of any ``|S|``-subset
    matches ``S``, so ``k(|S|-1)+1`` points suffice by pigeonhole.
    """
    budget = budget or BuildBudget()
    if compact and len(S) <= 2:
        size = k * (len(S) - 1) + 1
        if size > budget.max_points:
            raise BudgetExceeded(f"pigeonhole set of {size} points exceeds max_points={budget.max_points}")
        return _pigeonhole_set(size) if len(S) == 2 else S
    return sequence_product([S] * k, budget)


def bipartite_amplifier(S1: PointSet, S2: PointSet, k: int, budget: Optional[BuildBudget] = None, compact: bool = False):
    """``R = R1 u R2`` with ``R1 ->x (S1)^1_k`` and ``R2 ->x (S2)^1_{k^|R1|}``.

    Returns ``(R, cut)``. For every k-coloring of ``R1 x R2`` some copies of
    ``S1`` in ``R1`` and ``S2`` in ``R2`` span a monochromatic product.
    """
    if k < 1:
        raise InvalidInput("k must be positive")
    budget = budget or BuildBudget()
    R1 = ordered_one_arrow(S1, k, budget, compact)
    colors2 = k ** len(R1)
    if len(S2) > 1 and not compact and colors2 > budget.max_depth:
        raise BudgetExceeded(
            f"R2 needs k^|R1| = {k}^{len(R1)} = {colors2} copies of S2; max_depth={budget.max_depth}"
        )
    if compact and len(S2) <= 2:
        R2 = ordered_one_arrow(S2, colors2, budget, compact=True)
    elif len(S2) == 1:
        R2 = S2
    else:
        R2 = sequence_product([S2] * colors2, budget)
    if len(R1) + len(R2) > budget.max_points:
        raise BudgetExceeded(f"amplifier output has {len(R1) + len(R2)} points > {budget.max_points}")
    return stack_splitting(R1, R2)


def disjoint_union(parts: Sequence[PointSet]) -> PointSet:
    """Side-by-side copies in general position, each keeping its signature.

    The first attempt just translates; later attempts draw rational vertical
    offsets and gaps from a fixed seed, so the result is deterministic. A
    schedule like ``lift * f(i)`` can keep a triple collinear for every lift.
    """
    parts = [P for P in parts if len(P)]
    if not parts:
        raise InvalidInput("nothing to unite")
    for attempt in itertools.count():
        rng = np.random.default_rng(attempt)
        pts: list = []
        right = None
        for i, P in enumerate(parts):
            lo, _, _, _ = _bbox(P.points)
            if attempt == 0:
                gap, lift = Fraction(1), Fraction(0)
            else:
                gap = 1 + Fraction(int(rng.integers(0, 1000)), 1000)
                lift = Fraction(int(rng.integers(-10**6, 10**6)), 1000)
            dx = 0 if right is None else right + gap - lo
            moved = _translate(P, dx, lift)
            pts.extend(moved)
            right = max(p.x for p in moved)
        try:
            return validate(pts)
        except InvalidInput:
            continue


def _single_point() -> PointSet:
    return validate([(0, 0)])


def ramsey_build(Qs: Sequence[PointSet], budget: Optional[BuildBudget] = None, compact: bool = False) -> PointSet:
    """A set ``P`` with ``P ->x (Q_1, ..., Q_k)^2`` by induction on ``sum |Q_i|``."""
    Qs = list(Qs)
    if not Qs:
        raise InvalidInput("need at least one target set")
    budget = budget or BuildBudget()
    trees = []
    for i, Q in enumerate(Qs):
        tree = decompose(Q)
        if tree is None:
            raise NotDecomposable(i)
        trees.append(tree)
    return _build(Qs, trees, budget, compact)


def _build(Qs, trees, budget, compact):
    k = len(Qs)
    if k == 1:
        return Qs[0]
    if any(len(Q) == 1 for Q in Qs):
        return _single_point()
    T, U = [], []
    for i, (Q, tree) in enumerate(zip(Qs, trees)):
        cut = top_split(tree)
        Q1 = Q.subset(range(cut))
        Q2 = Q.subset(range(cut, len(Q)))
        T.append(_build(Qs[:i] + [Q1] + Qs[i + 1 :], trees[:i] + [tree.left] + trees[i + 1 :], budget, compact))
        U.append(_build(Qs[:i] + [Q2] + Qs[i + 1 :], trees[:i] + [_shift(tree.right, -cut)] + trees[i + 1 :], budget, compact))
    S1 = disjoint_union(T)
    S2 = disjoint_union(U)
    P, _ = bipartite_amplifier(S1, S2, k, budget, compact)
    return P


def _shift(tree, delta):
    if isinstance(tree, Leaf):
        return Leaf(tree.index + delta)
    return Node(_shift(tree.left, delta), _shift(tree.right, delta))


# ---------------------------------------------------------------- verifiers


def _check_mode(mode: str):
    if mode not in MODES:
        raise InvalidInput(f"mode must be one of {MODES}")


def copies(P: PointSet, Q: PointSet, mode: str = "signature", limit: int = DEFAULT_SUBSET_LIMIT) -> list:
    """All index subsets of ``P`` (lexicographic) equal to ``Q`` under ``mode``."""
    _check_mode(mode)
    m = len(Q)
    if m > len(P):
        return []
    total = math.comb(len(P), m)
    if total > limit:
        raise SizeLimitExceeded(f"C({len(P)},{m}) = {total} subsets exceed the limit {limit}")
    if m <= 2 and mode == "signature":
        return [list(s) for s in itertools.combinations(range(len(P)), m)]
    subsets = [list(s) for s in itertools.combinations(range(len(P)), m)]
    if mode == "signature":
        O, target = P.orientations, Q.orientations
        return [s for s in subsets if np.array_equal(O[np.ix_(s, s, s)], target)]
    return [s for s in subsets if same_order_type(P.subset(s), Q) is not None]


def _check_enum_budget(k, n_items, limit):
    if k**n_items > limit:
        raise EnumerationBudgetExceeded(f"{k}^{n_items} colorings exceed the enumeration limit {limit}")


def verify_point_arrow(
    P: PointSet,
    Qs: Sequence[PointSet],
    k: Optional[int] = None,
    mode: str = "signature",
    limit: int = DEFAULT_ENUMERATION_LIMIT,
    backend=None,
) -> bool:
    """Exhaustive check of ``P ->x (Q_1, ..., Q_k)^1``."""
    Qs = list(Qs)
    k = len(Qs) if k is None else k
    if k != len(Qs):
        raise InvalidInput(f"k={k} but {len(Qs)} target sets given")
    return point_arrow_counterexample(P, Qs, mode, limit, backend) is None


def point_arrow_counterexample(P, Qs, mode="signature", limit=DEFAULT_ENUMERATION_LIMIT, backend=None):
    """Lexicographically least point coloring with no good copy, or ``None``."""
    k = len(Qs)
    _check_enum_budget(k, len(P), limit)
    cands, colors = [], []
    for i, Q in enumerate(Qs):
        for s in copies(P, Q, mode):
            cands.append(s)
            colors.append(i)
    idx = _kernels.first_uncovered(len(P), k, cands, colors, backend=backend)
    if idx < 0:
        return None
    return PointColoring(len(P), k, tuple(_kernels.decode_coloring(idx, len(P), k)))


@dataclass
class ArrowReport:
    holds: Optional[bool]
    strategy: str
    colorings_checked: int
    counterexample: Optional[PairColoring] = None
    message: str = ""

    def lines(self) -> list:
        out = [f"holds={'unknown' if self.holds is None else str(self.holds).lower()}", f"strategy={self.strategy}"]
        out.append(f"checked={self.colorings_checked}")
        if self.counterexample is not None:
            out.append("counterexample=" + ",".join(map(str, self.counterexample.colors)))
        if self.message:
            out.append(f"note={self.message}")
        return out


def _pair_candidates(P, targets, mode):
    """(pair-index lists, required colors) for every copy of every target."""
    n = len(P)
    cands, colors = [], []
    for i, Q in enumerate(targets):
        req = i if len(targets) > 1 else -1
        for s in copies(P, Q, mode):
            cands.append([pair_index(n, a, b) for a, b in itertools.combinations(s, 2)])
            colors.append(req)
    return cands, colors


def avoiding_coloring(n_items: int, k: int, cands, colors, max_nodes: int = DEFAULT_SEARCH_NODES):
    """Backtracking search for the lexicographically least coloring of
    ``n_items`` items that leaves every candidate non-monochromatic (or, with a
    required color, not monochromatic in that color). ``None`` if none exists.
    """
    if any(len(c) == 0 for c in cands):
        return None
    by_last = [[] for _ in range(n_items)]
    for c, req in zip(cands, colors):
        by_last[max(c)].append((c, req))
    col = [0] * n_items
    nodes = 0

    def bad(step):
        for c, req in by_last[step]:
            first = col[c[0]]
            if req >= 0 and first != req:
                continue
            if all(col[t] == first for t in c):
                return True
        return False

    def extend(step):
        nonlocal nodes
        if step == n_items:
            return True
        for v in range(k):
            nodes += 1
            if nodes > max_nodes:
                raise SearchBudgetExceeded(f"coloring search exceeded {max_nodes} nodes")
            col[step] = v
            if not bad(step) and extend(step + 1):
                return True
        return False

    return list(col) if extend(0) else None


def verify_pair_arrow(
    P: PointSet,
    Q: Union[PointSet, Sequence[PointSet]],
    k: int,
    mode: str = "signature",
    strategy: str = "exhaustive",
    seed: int = 0,
    trials: int = 1000,
    limit: int = DEFAULT_ENUMERATION_LIMIT,
    max_nodes: int = DEFAULT_SEARCH_NODES,
    backend=None,
) -> ArrowReport:
    """Check ``P -> (Q)^2_k``; a list of ``k`` sets checks the off-diagonal
    ``P ->x (Q_1, ..., Q_k)^2``.

    ``exhaustive`` enumerates all ``k^C(n,2)`` colorings and refuses above
    ``limit``. ``search`` is a complete backtracking search for a bad
    coloring, so its answer is also definitive. ``sampled`` draws ``trials``
    uniform colorings and can only refute.
    """
    if k < 1:
        raise InvalidInput("k must be positive")
    targets = [Q] if isinstance(Q, PointSet) else list(Q)
    if len(targets) > 1 and len(targets) != k:
        raise InvalidInput(f"{len(targets)} target sets for k={k}")
    n = len(P)
    m = n * (n - 1) // 2
    cands, colors = _pair_candidates(P, targets, mode)
    # single-point targets have no pairs and are present in every coloring
    if any(len(T) == 1 and len(P) >= 1 for T in targets):
        return ArrowReport(True, strategy, 0, message="single-point target")
    if strategy == "exhaustive":
        _check_enum_budget(k, m, limit)
        idx = _kernels.first_uncovered(m, k, cands, colors, backend=backend)
        if idx < 0:
            return ArrowReport(True, strategy, k**m)
        cex = PairColoring(n, k, tuple(_kernels.decode_coloring(idx, m, k)))
        return ArrowReport(False, strategy, idx + 1, cex)
    if strategy == "search":
        col = avoiding_coloring(m, k, cands, colors, max_nodes)
        if col is None:
            return ArrowReport(True, strategy, 0, message="complete search found no avoiding coloring")
        return ArrowReport(False, strategy, 0, PairColoring(n, k, tuple(col)))
    if strategy == "sampled":
        rng = np.random.default_rng(seed)
        items, lens, req = _kernels.pack_candidates(cands, colors)
        for t in range(trials):
            col = rng.integers(0, k, size=m)
            if not _covered(col, items, lens, req):
                return ArrowReport(False, strategy, t + 1, PairColoring(n, k, tuple(int(c) for c in col)))
        return ArrowReport(None, strategy, trials, message=f"no counterexample in {trials} trials")
    raise InvalidInput(f"unknown strategy {strategy!r}")


def _covered(col, items, lens, req) -> bool:
    if items.shape[0] == 0:
        return False
    vals = col[items]
    width = np.arange(items.shape[1])[None, :] < lens[:, None]
    mono = np.all((vals == vals[:, :1]) | ~width, axis=1)
    mono &= (req < 0) | (vals[:, 0] == req)
    return bool(mono.any())


def lemma5_counterexample(
    R: PointSet,
    cut: int,
    S1: PointSet,
    S2: PointSet,
    k: int,
    strategy: str = "exhaustive",
    limit: int = DEFAULT_ENUMERATION_LIMIT,
    backend=None,
):
    """A k-coloring of ``R1 x R2`` (row-major over ``R1`` then ``R2``) for which
    no copies ``S1' <= R1``, ``S2' <= R2`` span a monochromatic product, or ``None``.
    """
    R1 = R.subset(range(cut))
    R2 = R.subset(range(cut, len(R)))
    n2 = len(R2)
    items = len(R1) * n2
    cands = []
    for a in copies(R1, S1):
        for b in copies(R2, S2):
            cands.append([i * n2 + j for i in a for j in b])
    colors = [-1] * len(cands)
    if strategy == "exhaustive":
        _check_enum_budget(k, items, limit)
        idx = _kernels.first_uncovered(items, k, cands, colors, backend=backend)
        return None if idx < 0 else _kernels.decode_coloring(idx, items, k)
    if strategy == "search":
        return avoiding_coloring(items, k, cands, colors)
    raise InvalidInput(f"unknown strategy {strategy!r}")


# ------------------------------------------------------ adversary colorings


def adversary_coloring(P: PointSet, p: int, i: int) -> dict:
    """Color each x-sorted p-subset by the orientation of its entries
    ``i, i+1, i+2`` (1-based ``i``): ``0`` for clockwise, ``1`` for counterclockwise.
    """
    if not 3 <= p <= len(P):
        raise BadIndex(f"need 3 <= p <= |P|, got p={p}, |P|={len(P)}")
    if not 1 <= i <= p - 2:
        raise BadIndex(f"need 1 <= i <= p-2, got i={i}")
    O = P.orientations
    out = {}
    for s in itertools.combinations(range(len(P)), p):
        out[s] = 1 if O[s[i - 1], s[i], s[i + 1]] > 0 else 0
    return out


def monochromatic_subsets(P: PointSet, coloring: dict, p: int, min_size: int) -> list:
    """All subsets of size ``>= min_size`` whose p-subsets share one color."""
    out = []
    n = len(P)
    for size in range(max(min_size, p), n + 1):
        for s in itertools.combinations(range(n), size):
            cols = {coloring[t] for t in itertools.combinations(s, p)}
            if len(cols) == 1:
                out.append(s)
    return out


def monochromatic_copy_search(
    P: PointSet,
    c: PairColoring,
    Q: PointSet,
    mode: str = "signature",
    limit: int = DEFAULT_SUBSET_LIMIT,
) -> Optional[tuple]:
    """First subset (lexicographic) equal to ``Q`` under ``mode`` whose pairs share one color."""
    if c.n != len(P):
        raise InvalidInput("coloring size does not match the point set")
    if len(Q) > len(P):
        return None
    for s in copies(P, Q, mode, limit):
        cols = {c.color(a, b) for a, b in itertools.combinations(s, 2)}
        if len(cols) <= 1:
            return tuple(s)
    return None
