"""Exact planar primitives: orientation, point sets, order types, splittings.

All coordinates are :class:`fractions.Fraction`; no decision ever goes through
floating point. Indices into a :class:`PointSet` are 0-based positions in
increasing x-order.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, NamedTuple, Optional, Sequence, Union

import numpy as np

from .errors import (
    BadCut,
    BadLineOrder,
    CollinearTriple,
    DuplicatePoint,
    DuplicateX,
    InvalidInput,
    InvalidUnion,
    SizeLimitExceeded,
)

DEFAULT_ORDER_TYPE_LIMIT = 9

# int64 fast path is exact while |coordinate| stays below this bound
_INT64_SAFE = 1 << 29


class Orientation(enum.IntEnum):
    CW = -1
    CCW = 1

    def __neg__(self):
        return Orientation(-int(self))


class Point(NamedTuple):
    x: Fraction
    y: Fraction


def as_point(p) -> Point:
    if isinstance(p, Point):
        return p
    x, y = p
    return Point(Fraction(x), Fraction(y))


def cross(a: Point, b: Point, c: Point) -> Fraction:
    """Twice the signed area of triangle abc."""
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)


def orient(a, b, c) -> Orientation:
    a, b, c = as_point(a), as_point(b), as_point(c)
    if a == b or b == c or a == c:
        raise DuplicatePoint(f"repeated point among {a}, {b}, {c}")
    d = cross(a, b, c)
    if d == 0:
        raise CollinearTriple(a, b, c)
    return Orientation.CCW if d > 0 else Orientation.CW


def is_above(w, u, v) -> bool:
    """True iff ``w`` lies above the line through ``u`` and ``v`` (x(u) < x(v))."""
    u, v = as_point(u), as_point(v)
    if u.x >= v.x:
        raise BadLineOrder(f"line points must satisfy x(u) < x(v), got {u.x} >= {v.x}")
    return orient(u, v, w) is Orientation.CCW


def is_below(w, u, v) -> bool:
    return not is_above(w, u, v)


def _perm_parity(perm) -> int:
    sign = 1
    perm = list(perm)
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


_PERMS3 = tuple(itertools.permutations(range(3)))
_PARITY3 = tuple(_perm_parity(p) for p in _PERMS3)


def integer_coords(points: Sequence[Point]) -> tuple[list[int], list[int]]:
    """Scale all coordinates by the lcm of their denominators."""
    if not points:
        return [], []
    scale = math.lcm(*(c.denominator for p in points for c in p))
    xs = [int(p.x * scale) for p in points]
    ys = [int(p.y * scale) for p in points]
    return xs, ys


def orientation_array(points: Sequence[Point]) -> np.ndarray:
    """Full antisymmetric ``n x n x n`` int8 array of orientation signs.

    Entries with a repeated index are 0. Raises on collinear triples.
    """
    n = len(points)
    out = np.zeros((n, n, n), dtype=np.int8)
    if n < 3:
        return out
    xs, ys = integer_coords(points)
    combos = np.array(list(itertools.combinations(range(n), 3)), dtype=np.int64)
    if max(max(map(abs, xs)), max(map(abs, ys))) < _INT64_SAFE:
        X = np.array(xs, dtype=np.int64)
        Y = np.array(ys, dtype=np.int64)
        i, j, k = combos[:, 0], combos[:, 1], combos[:, 2]
        d = (X[j] - X[i]) * (Y[k] - Y[i]) - (Y[j] - Y[i]) * (X[k] - X[i])
        signs = np.sign(d).astype(np.int8)
    else:
        vals = []
        for i, j, k in combos.tolist():
            d = (xs[j] - xs[i]) * (ys[k] - ys[i]) - (ys[j] - ys[i]) * (xs[k] - xs[i])
            vals.append((d > 0) - (d < 0))
        signs = np.array(vals, dtype=np.int8)
    zero = np.flatnonzero(signs == 0)
    if zero.size:
        raise CollinearTriple(*combos[zero[0]].tolist())
    for perm, parity in zip(_PERMS3, _PARITY3):
        out[combos[:, perm[0]], combos[:, perm[1]], combos[:, perm[2]]] = signs * parity
    return out


@dataclass(frozen=True)
class OrderTypeTable:
    """Orientation of every sorted index triple ``i < j < k``, in lexicographic order."""

    n: int
    signs: tuple

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "OrderTypeTable":
        n = arr.shape[0]
        return cls(n, tuple(int(arr[t]) for t in itertools.combinations(range(n), 3)))

    def as_dict(self) -> dict:
        return dict(zip(itertools.combinations(range(self.n), 3), self.signs))

    def as_array(self) -> np.ndarray:
        out = np.zeros((self.n, self.n, self.n), dtype=np.int8)
        for t, s in zip(itertools.combinations(range(self.n), 3), self.signs):
            for perm, parity in zip(_PERMS3, _PARITY3):
                out[t[perm[0]], t[perm[1]], t[perm[2]]] = s * parity
        return out

    def orient(self, i: int, j: int, k: int) -> int:
        t = (i, j, k)
        order = sorted(range(3), key=t.__getitem__)
        s = sorted(t)
        if s[0] == s[1] or s[1] == s[2]:
            return 0
        n = self.n
        a, b, c = s
        # rank of (a, b, c) among combinations(range(n), 3)
        rank = 0
        for x in range(a):
            rank += math.comb(n - 1 - x, 2)
        for y in range(a + 1, b):
            rank += n - 1 - y
        rank += c - b - 1
        return self.signs[rank] * _perm_parity(order)

    def relabel(self, perm: Sequence[int]) -> "OrderTypeTable":
        """Table of the same configuration with old index ``i`` renamed ``perm[i]``."""
        arr = self.as_array()
        inv = np.argsort(np.asarray(perm))
        return OrderTypeTable.from_array(arr[np.ix_(inv, inv, inv)])


@dataclass(frozen=True)
class PointSet:
    """Points in general position, sorted by strictly increasing x.

    Build instances with :func:`validate`; the constructor trusts its input.
    """

    points: tuple

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, i):
        return self.points[i]

    @property
    def n(self) -> int:
        return len(self.points)

    @cached_property
    def orientations(self) -> np.ndarray:
        return orientation_array(self.points)

    def orient(self, i: int, j: int, k: int) -> int:
        return int(self.orientations[i, j, k])

    def order_type(self) -> OrderTypeTable:
        return OrderTypeTable.from_array(self.orientations)

    def subset(self, indices: Iterable[int]) -> "PointSet":
        return PointSet(tuple(self.points[i] for i in sorted(indices)))

    def coords(self) -> list[tuple[Fraction, Fraction]]:
        return [(p.x, p.y) for p in self.points]


def _first_collinear(points: Sequence[Point]) -> Optional[tuple[int, int, int]]:
    # with distinct x every direction has a finite slope; three points are
    # collinear iff two of them share a slope seen from the third
    n = len(points)
    for i in range(n):
        seen: dict = {}
        for j in range(i + 1, n):
            s = (points[j].y - points[i].y) / (points[j].x - points[i].x)
            if s in seen:
                return (i, seen[s], j)
            seen[s] = j
    return None


def validate(points: Iterable) -> PointSet:
    """Sort by x and check distinct x-coordinates and general position."""
    pts = sorted((as_point(p) for p in points), key=lambda p: (p.x, p.y))
    for i in range(len(pts) - 1):
        if pts[i].x == pts[i + 1].x:
            if pts[i] == pts[i + 1]:
                raise DuplicatePoint(f"point {pts[i]} appears twice")
            raise DuplicateX(i, i + 1)
    bad = _first_collinear(pts)
    if bad is not None:
        raise CollinearTriple(*bad)
    return PointSet(tuple(pts))


def _hull_chain(points: Sequence[Point], xs, ys, sign: int) -> list[int]:
    chain: list[int] = []
    for idx in range(len(points)):
        while len(chain) >= 2:
            a, b = chain[-2], chain[-1]
            d = (xs[b] - xs[a]) * (ys[idx] - ys[a]) - (ys[b] - ys[a]) * (xs[idx] - xs[a])
            if d * sign >= 0:
                chain.pop()
            else:
                break
        chain.append(idx)
    return chain


def extreme_points(P: PointSet) -> frozenset:
    """Indices of the convex-hull vertices."""
    n = len(P)
    if n == 0:
        raise InvalidInput("extreme_points needs a nonempty point set")
    if n <= 2:
        return frozenset(range(n))
    xs, ys = integer_coords(P.points)
    upper = _hull_chain(P.points, xs, ys, 1)
    lower = _hull_chain(P.points, xs, ys, -1)
    return frozenset(upper) | frozenset(lower)


def interior_points(P: PointSet) -> frozenset:
    return frozenset(range(len(P))) - extreme_points(P)


def is_convex_position(P: PointSet) -> bool:
    return len(extreme_points(P)) == len(P)


def is_wheel_set(P: PointSet) -> bool:
    return len(extreme_points(P)) >= len(P) - 1


def same_signature(P: PointSet, Q: PointSet) -> bool:
    if len(P) != len(Q):
        return False
    return bool(np.array_equal(P.orientations, Q.orientations))


def is_cup_or_cap(P: PointSet) -> bool:
    signs = set(P.order_type().signs)
    return len(signs) <= 1


def _point_invariants(P: PointSet) -> list[tuple]:
    O = P.orientations
    hull = extreme_points(P) if len(P) else frozenset()
    inv = []
    for i in range(len(P)):
        # for each j: how many k lie to the left of the directed line i -> j
        counts = sorted(int((O[i, j] == 1).sum()) for j in range(len(P)) if j != i)
        inv.append((i in hull, tuple(counts)))
    return inv


def same_order_type(P: PointSet, Q: PointSet, limit: Optional[int] = DEFAULT_ORDER_TYPE_LIMIT):
    """An orientation-preserving bijection ``f`` (as a tuple, ``f[i]`` is the
    image of ``P[i]``), or ``None``.
    """
    n = len(P)
    if n != len(Q):
        return None
    if limit is not None and n > limit:
        raise SizeLimitExceeded(f"same_order_type limited to n <= {limit}, got {n}")
    if n == 0:
        return ()
    invP, invQ = _point_invariants(P), _point_invariants(Q)
    if sorted(invP) != sorted(invQ):
        return None
    OP, OQ = P.orientations, Q.orientations
    cands = [[j for j in range(n) if invQ[j] == invP[i]] for i in range(n)]
    f = [-1] * n
    used = [False] * n

    def extend(i):
        if i == n:
            return True
        for c in cands[i]:
            if used[c]:
                continue
            ok = True
            for a in range(i):
                fa = f[a]
                for b in range(a + 1, i):
                    if OP[a, b, i] != OQ[fa, f[b], c]:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                continue
            f[i] = c
            used[c] = True
            if extend(i + 1):
                return True
            used[c] = False
        f[i] = -1
        return False

    return tuple(f) if extend(0) else None


def _as_pointset(S) -> PointSet:
    return S if isinstance(S, PointSet) else validate(S)


def deep_below(A, B) -> bool:
    """Every point of ``B`` is above every line spanned by ``A`` and every
    point of ``A`` is below every line spanned by ``B``.
    """
    A = list(_as_pointset(A).points)
    B = list(_as_pointset(B).points)
    if not A or not B:
        raise InvalidInput("deep_below needs nonempty sets")
    try:
        U = validate(A + B)
    except InvalidInput as exc:
        raise InvalidUnion(str(exc)) from exc
    xs, ys = integer_coords(U.points)
    pos = {p: i for i, p in enumerate(U.points)}
    ia = [pos[p] for p in A]
    ib = [pos[p] for p in B]

    def side(a, b, c):
        return (xs[b] - xs[a]) * (ys[c] - ys[a]) - (ys[b] - ys[a]) * (xs[c] - xs[a])

    for a1, a2 in itertools.combinations(ia, 2):
        for b in ib:
            if side(a1, a2, b) <= 0:
                return False
    for b1, b2 in itertools.combinations(ib, 2):
        for a in ia:
            if side(b1, b2, a) >= 0:
                return False
    return True


def _interval_deep_below(O: np.ndarray, lo: int, cut: int, hi: int) -> bool:
    """Prefix ``[lo, cut)`` deep below suffix ``[cut, hi)`` inside one point set."""
    a = cut - lo
    if a >= 2:
        block = O[lo:cut, lo:cut, cut:hi]
        iu = np.triu_indices(a, 1)
        if not np.all(block[iu[0], iu[1], :] == 1):
            return False
    b = hi - cut
    if b >= 2:
        block = O[cut:hi, cut:hi, lo:cut]
        iu = np.triu_indices(b, 1)
        if not np.all(block[iu[0], iu[1], :] == -1):
            return False
    return True


def is_splitting(P: PointSet, cut: int) -> bool:
    """Is the x-prefix of length ``cut`` deep below the remaining suffix?"""
    if not 1 <= cut < len(P):
        raise BadCut(f"cut must satisfy 1 <= cut < {len(P)}, got {cut}")
    return _interval_deep_below(P.orientations, 0, cut, len(P))


@dataclass(frozen=True)
class Leaf:
    index: int

    def leaves(self) -> list[int]:
        return [self.index]


@dataclass(frozen=True)
class Node:
    left: "SplitTree"
    right: "SplitTree"

    def leaves(self) -> list[int]:
        return self.left.leaves() + self.right.leaves()


SplitTree = Union[Leaf, Node]


def decompose(P: PointSet) -> Optional[SplitTree]:
    """Recursive splitting witness, or ``None`` if ``P`` is not decomposable.

    Only prefix cuts are tried: ``x(P1) < x(P2)`` forces every splitting of an
    x-sorted set to be one. Cuts are explored left to right, so the returned
    tree is the lexicographically first witness.
    """
    n = len(P)
    if n == 0:
        return None
    O = P.orientations
    memo: dict = {}

    def solve(lo, hi):
        key = (lo, hi)
        if key in memo:
            return memo[key]
        if hi - lo == 1:
            res = Leaf(lo)
        else:
            res = None
            for cut in range(lo + 1, hi):
                if not _interval_deep_below(O, lo, cut, hi):
                    continue
                left = solve(lo, cut)
                if left is None:
                    continue
                right = solve(cut, hi)
                if right is None:
                    continue
                res = Node(left, right)
                break
        memo[key] = res
        return res

    return solve(0, n)


def verify_tree(P: PointSet, tree: SplitTree) -> bool:
    """Re-check a splitting witness node by node."""
    if tree.leaves() != list(range(len(P))):
        return False
    O = P.orientations

    def check(t):
        if isinstance(t, Leaf):
            return True
        left, right = t.left.leaves(), t.right.leaves()
        lo, cut, hi = left[0], right[0], right[-1] + 1
        if left != list(range(lo, cut)) or right != list(range(cut, hi)):
            return False
        return _interval_deep_below(O, lo, cut, hi) and check(t.left) and check(t.right)

    return check(tree)


def top_split(tree: SplitTree) -> int:
    """Size of the left part of the root splitting."""
    if isinstance(tree, Leaf):
        raise InvalidInput("a leaf has no splitting")
    return len(tree.left.leaves())


def format_tree(tree: SplitTree) -> str:
    """Nested parentheses over 1-based indices, e.g. ``((1 2)(3 (4 5)))``."""
    if isinstance(tree, Leaf):
        return str(tree.index + 1)
    left, right = format_tree(tree.left), format_tree(tree.right)
    sep = "" if left.endswith(")") and right.startswith("(") else " "
    return f"({left}{sep}{right})"


def parse_tree(text: str) -> SplitTree:
    tokens = []
    num = ""
    for ch in text:
        if ch.isdigit():
            num += ch
            continue
        if num:
            tokens.append(num)
            num = ""
        if ch in "()":
            tokens.append(ch)
        elif not ch.isspace():
            raise InvalidInput(f"unexpected character {ch!r} in split tree")
    if num:
        tokens.append(num)
    pos = 0

    def parse():
        nonlocal pos
        if pos >= len(tokens):
            raise InvalidInput("truncated split tree")
        tok = tokens[pos]
        pos += 1
        if tok == "(":
            left = parse()
            right = parse()
            if pos >= len(tokens) or tokens[pos] != ")":
                raise InvalidInput("split tree nodes must have exactly two children")
            pos += 1
            return Node(left, right)
        if tok == ")":
            raise InvalidInput("unexpected ')' in split tree")
        return Leaf(int(tok) - 1)

    tree = parse()
    if pos != len(tokens):
        raise InvalidInput("trailing tokens after split tree")
    return tree
