import itertools

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import oracle_consistent, oracle_orient, point_sets
from ordertypes.consistency import (
    FIVE_POINT_WITNESS,
    EdgeClassColoring,
    PartiallyOrientedGraph,
    antisymmetric_search,
    build_graph,
    count_consistent_tournaments,
    find_five_point_witness,
    five_point_witness,
    is_witness_shape,
    lemma6_check,
    lemma7_allowed,
    lemma7_enumeration,
    refute_monochromatic,
    search_predicate,
    table_from_graph,
    witness_labeling,
)
from ordertypes.corpus import CorpusSpec, generate
from ordertypes.errors import (
    NotNonconvexQuad,
    PreconditionViolated,
    SearchBudgetExceeded,
    SizeLimitExceeded,
    SizeMismatch,
    WrongWitnessShape,
)
from ordertypes.geometry import decompose, format_tree, validate
from ordertypes.predicates import PredicateTable, is_locally_consistent, psi_encode


def values_of(t):
    n = t.shape[0]
    return {(i, j): int(t[i, j]) for i, j in itertools.permutations(range(n), 2)}


def test_graph_round_trip():
    P = validate([(0, 0), (1, 3), (2, 1), (4, 0)])
    T = psi_encode(P)
    g, col = build_graph(P, T)
    assert table_from_graph(g, col, T.codomain) == T
    with pytest.raises(SizeMismatch):
        build_graph(validate([(0, 0), (1, 1), (2, 0)]), T)


def test_graph_accessors():
    g = PartiallyOrientedGraph.from_arcs(4, [(0, 1), (3, 2)])
    assert g.points_to(0, 1) and not g.points_to(1, 0)
    assert g.direction(2, 3) == -1 and g.points_to(3, 2)
    assert not g.is_oriented(0, 2)
    h = g.induced([1, 2, 3])
    assert h.n == 3 and h.direction(1, 2) == -1 and h.direction(0, 1) == 0


# five points on a cup: every increasing triple is counter-clockwise
CUP5 = validate([(x, x * x) for x in range(5)])
ONE_CLASS = EdgeClassColoring(5, 1, tuple((0, 1) for _ in range(10)))


def test_inconsistency_patterns():
    A, B = (0, 1, 2), (2, 4, 3)
    assert oracle_orient(CUP5, *A) != oracle_orient(CUP5, *B)
    flat = PartiallyOrientedGraph(5, (0,) * 10)
    assert lemma6_check(CUP5, flat, EdgeClassColoring(5, 1, ((0, 0),) * 10), A, B) == "i"
    cyc = PartiallyOrientedGraph.from_arcs(5, [(0, 1), (1, 2), (2, 0), (2, 4), (4, 3), (3, 2)])
    assert lemma6_check(CUP5, cyc, ONE_CLASS, A, B) == "ii"
    trans = PartiallyOrientedGraph.from_arcs(5, [(0, 1), (0, 2), (1, 2), (2, 4), (2, 3), (4, 3)])
    assert lemma6_check(CUP5, trans, ONE_CLASS, A, B) == "iii"
    other = PartiallyOrientedGraph.from_arcs(5, [(0, 1), (0, 2), (1, 2), (2, 4), (2, 3), (3, 4)])
    assert lemma6_check(CUP5, other, ONE_CLASS, A, B) is None


def test_pattern_preconditions():
    g = PartiallyOrientedGraph(5, (0,) * 10)
    with pytest.raises(PreconditionViolated):
        lemma6_check(CUP5, g, ONE_CLASS, (0, 1, 2), (1, 2, 0))
    with pytest.raises(PreconditionViolated):
        lemma6_check(CUP5, g, ONE_CLASS, (0, 1, 2), (2, 3, 4))
    mixed = EdgeClassColoring(5, 2, ((0, 0),) + ((0, 1),) * 9)
    with pytest.raises(PreconditionViolated):
        lemma6_check(CUP5, g, mixed, (0, 1, 2), (2, 4, 3))


def test_patterns_cover_single_class_violations():
    # every single-class inconsistency on a small set shows one of the patterns
    P = validate([(0, 0), (1, 3), (2, 1), (4, 0)])
    rng = np.random.default_rng(2)
    for _ in range(200):
        t = rng.integers(0, 2, size=(4, 4))
        for i, j in itertools.combinations(range(4), 2):
            if rng.random() < 0.5:
                t[i, j] = 1 - t[j, i]
        np.fill_diagonal(t, -1)
        T = PredicateTable((0, 1), t)
        g, col = build_graph(P, T)
        if len(set(col.classes)) != 1:
            continue
        v = is_locally_consistent(P, T)
        if v is not None:
            assert lemma6_check(P, g, col, v.triple_a, v.triple_b) in ("i", "ii", "iii")


def brute_allowed(Q):
    """Fully oriented, hull a 3-cycle, inner point all-out or all-in."""
    def inside(p):
        a, b, c = [x for x in range(4) if x != p]
        return all(
            oracle_orient(Q, u, v, p) == oracle_orient(Q, u, v, w)
            for u, v, w in ((a, b, c), (b, c, a), (c, a, b))
        )

    inner = next(p for p in range(4) if inside(p))
    hull = [x for x in range(4) if x != inner]
    out = set()
    for bits in itertools.product((1, -1), repeat=6):
        d = dict(zip(itertools.combinations(range(4), 2), bits))
        to = lambda u, v: d[(u, v)] == 1 if u < v else d[(v, u)] == -1
        a, b, c = hull
        cyclic = (to(a, b) and to(b, c) and to(c, a)) or (to(a, c) and to(c, b) and to(b, a))
        outs = [to(inner, h) for h in hull]
        if cyclic and (all(outs) or not any(outs)):
            out.add(bits)
    return out


def test_quad_enumeration_against_brute_force(nonconvex_quad):
    Q = nonconvex_quad
    allowed = brute_allowed(Q)
    assert len(allowed) == 4
    induced = set()
    for idx in range(1 << 12):
        t = np.full((4, 4), -1)
        for e, (i, j) in enumerate(itertools.permutations(range(4), 2)):
            t[i, j] = (idx >> (11 - e)) & 1
        classes = {(min(t[i, j], t[j, i]), max(t[i, j], t[j, i])) for i, j in itertools.combinations(range(4), 2)}
        if len(classes) == 1 and oracle_consistent(Q, values_of(t)):
            induced.add(tuple(0 if t[i, j] == t[j, i] else (1 if t[i, j] < t[j, i] else -1)
                              for i, j in itertools.combinations(range(4), 2)))
    rep = lemma7_enumeration(Q)
    assert rep.allowed == 4 and rep.orientations == 64 and rep.tables == 4096
    assert rep.allowed_states == allowed
    assert rep.induced == induced
    assert rep.sound and rep.complete
    for s in allowed:
        assert lemma7_allowed(Q, PartiallyOrientedGraph(4, s))


def test_quad_enumeration_rejects_convex(cup4):
    with pytest.raises(NotNonconvexQuad):
        lemma7_enumeration(cup4)
    with pytest.raises(NotNonconvexQuad):
        lemma7_allowed(CUP5, PartiallyOrientedGraph(4, (1,) * 6))


def test_frozen_witness_is_found_by_search():
    R = find_five_point_witness()
    assert tuple((int(p.x), int(p.y)) for p in R) == FIVE_POINT_WITNESS
    assert R == five_point_witness()
    assert witness_labeling(R) == (0, 3, 1, 2, 4)
    assert format_tree(decompose(R)) == "((1 (2 (3 4))) 5)"
    assert is_witness_shape(R)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_refutation(k):
    rep = refute_monochromatic(five_point_witness(), k)
    assert rep.consistent == 0
    assert rep.enumerated == (1 if k == 1 else 1025)


def test_refutation_against_oracle():
    # the kernel answer re-derived one table at a time
    from ordertypes._kernels import orientation_tables

    R = five_point_witness()
    tables = orientation_tables(5, np.arange(1 << 10))
    assert not any(oracle_consistent(R, values_of(t)) for t in tables[::7])


def test_refutation_control(convex_pentagon):
    with pytest.raises(WrongWitnessShape):
        refute_monochromatic(convex_pentagon, 2)
    rep = refute_monochromatic(convex_pentagon, 2, strict=False)
    assert rep.consistent > 0
    for t in rep.consistent_tables[:20]:
        assert oracle_consistent(convex_pentagon, values_of(t))
    with pytest.raises(WrongWitnessShape):
        refute_monochromatic(CUP5.subset(range(4)), 2)


def test_single_class_search_agrees_with_refutation():
    R = five_point_witness()
    assert search_predicate(R, 2, single_class=True) is None
    T = search_predicate(R, 2)
    assert T is not None and is_locally_consistent(R, T) is None


def test_search_budget():
    sets = generate(CorpusSpec(1, 7, 7, "random-grid", seed=4))
    with pytest.raises(SearchBudgetExceeded):
        search_predicate(sets[0], 3, budget=5)


@settings(max_examples=25, deadline=None)
@given(point_sets(3, 6))
def test_search_predicate_is_consistent(P):
    T = search_predicate(P, 2)
    assert T is not None
    assert oracle_consistent(P, T.values())


@settings(max_examples=25, deadline=None)
@given(point_sets(4, 6))
def test_tournament_search_is_complete(P):
    T = antisymmetric_search(P)
    count = count_consistent_tournaments(P)
    assert (T is None) == (count == 0)
    if T is not None:
        assert oracle_consistent(P, T.values())
        for i, j in itertools.permutations(range(len(P)), 2):
            assert T[i, j] == -T[j, i]


def test_tournaments_on_witness_and_wheels():
    assert count_consistent_tournaments(five_point_witness()) == 0
    assert antisymmetric_search(five_point_witness()) is None
    for W in generate(CorpusSpec(5, 4, 6, "wheel", seed=1)):
        assert count_consistent_tournaments(W) > 0
    with pytest.raises(SizeLimitExceeded):
        count_consistent_tournaments(validate([(x, x * x) for x in range(8)]))
