"""Shared fixtures and small, deliberately naive oracles.

The oracles recompute things from the definitions with plain Fractions and
loops so that they share no code with the package.
"""

import itertools
from fractions import Fraction

import pytest
from hypothesis import assume, strategies as st

from ordertypes.errors import InvalidInput
from ordertypes.geometry import validate


def det_sign(a, b, c):
    ax, ay = map(Fraction, a)
    bx, by = map(Fraction, b)
    cx, cy = map(Fraction, c)
    d = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    return (d > 0) - (d < 0)


def oracle_orient(P, i, j, k):
    return det_sign(P[i], P[j], P[k])


def oracle_deep_below(P, A, B):
    """Plain sidedness test on index sets (A, B each x-sorted)."""
    for a1, a2 in itertools.combinations(sorted(A), 2):
        for b in B:
            if oracle_orient(P, a1, a2, b) != 1:
                return False
    for b1, b2 in itertools.combinations(sorted(B), 2):
        for a in A:
            if oracle_orient(P, b1, b2, a) != -1:
                return False
    return True


def oracle_decomposable(P):
    """Exhaustive recursion over every bipartition with x(A) < x(B)."""
    memo = {}

    def rec(S):
        if len(S) == 1:
            return True
        if S in memo:
            return memo[S]
        items = sorted(S)
        ok = False
        for r in range(1, len(items)):
            for A in itertools.combinations(items, r):
                B = S - frozenset(A)
                if max(P[a].x for a in A) >= min(P[b].x for b in B):
                    continue
                if oracle_deep_below(P, A, B) and rec(frozenset(A)) and rec(B):
                    ok = True
                    break
            if ok:
                break
        memo[S] = ok
        return ok

    return rec(frozenset(range(len(P))))


def oracle_psi(P):
    """Psi straight from the dual-line definition, as a dict over index pairs."""
    n = len(P)
    pts = [(Fraction(p.x), Fraction(p.y)) for p in P]
    order = sorted(range(n), key=lambda i: -pts[i][0])  # decreasing slope
    rank = {p: r + 1 for r, p in enumerate(order)}
    rows = {}
    for p in range(n):
        crossings = []
        for q in range(n):
            if q != p:
                t = (pts[p][1] - pts[q][1]) / (pts[p][0] - pts[q][0])
                crossings.append((t, rank[q]))
        crossings.sort()
        rows[rank[p]] = [1 if r > rank[p] else 0 for _, r in crossings]
    out = {}
    for p, q in itertools.permutations(range(n), 2):
        rp, rq = rank[p], rank[q]
        col = rq if rp > rq else rq - 1
        out[(p, q)] = rows[rp][col - 1]
    return out, rank


def oracle_consistent(P, values):
    """O(n^6) scan of all pairs of labeled triples on distinct 3-subsets."""
    n = len(P)
    labeled = list(itertools.permutations(range(n), 3))
    for A in labeled:
        ka = tuple(values[(A[s], A[t])] for s, t in itertools.permutations(range(3), 2))
        for B in labeled:
            if set(A) == set(B):
                continue
            kb = tuple(values[(B[s], B[t])] for s, t in itertools.permutations(range(3), 2))
            if ka == kb and oracle_orient(P, *A) != oracle_orient(P, *B):
                return False
    return True


def try_validate(pts):
    try:
        return validate(pts)
    except InvalidInput:
        return None


@st.composite
def point_sets(draw, min_size=3, max_size=8, span=30):
    n = draw(st.integers(min_size, max_size))
    xs = draw(st.lists(st.integers(-span, span), min_size=n, max_size=n, unique=True))
    ys = draw(st.lists(st.integers(-span, span), min_size=n, max_size=n))
    P = try_validate(list(zip(xs, ys)))
    assume(P is not None)
    return P


@pytest.fixture
def nonconvex_quad():
    return validate([(0, 0), (2, 1), (3, 4), (4, 0)])


@pytest.fixture
def cup4():
    return validate([(0, 0), (1, 1), (2, 4), (3, 9)])


@pytest.fixture
def convex_pentagon():
    return validate([(0, 0), (1, -2), (3, -3), (5, -2), (6, 0)])


def oracle_convex(P, idx):
    """No chosen point lies inside a triangle of three other chosen points."""
    idx = list(idx)
    for p in idx:
        others = [q for q in idx if q != p]
        for a, b, c in itertools.combinations(others, 3):
            s = {oracle_orient(P, a, b, p), oracle_orient(P, b, c, p), oracle_orient(P, c, a, p)}
            if len(s) == 1:
                return False
    return True


# acceptance results, printed in the terminal summary
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, line = ACCEPTANCE[num]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {num:2d}: {line}")
