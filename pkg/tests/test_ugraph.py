import itertools

import numpy as np
import pytest

from graphlaws.errors import CapExceeded, IncompatibleIntersection, NotDecomposable
from graphlaws.oracles import count_chordal, is_chordal_by_elimination, maximal_cliques_by_scan
from graphlaws.subsets import full, members, submasks
from graphlaws.ugraph import (
    UGraph,
    covering_pairs,
    decomposable_neighbors,
    decomposition_reason,
    enumerate_decomposable,
    enumerate_graphs,
    graph_product,
    has_running_intersection,
    is_chordal,
    is_collapsible,
    is_decomposition,
    junction_tree,
)

from conftest import S, graph

PATH3 = graph(3, (0, 1), (1, 2))
TRIANGLE = UGraph.complete(3)


def test_graph_validates_symmetry_and_loops():
    with pytest.raises(Exception):
        UGraph(2, (0b10, 0), 0b11)
    with pytest.raises(Exception):
        UGraph(2, (0b01, 0), 0b11)


def test_chordality_examples():
    assert is_chordal(TRIANGLE)
    assert not is_chordal(graph(4, (0, 1), (1, 2), (2, 3), (3, 0)))


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_chordal_counts_match_elimination_oracle(n):
    mine = sum(1 for g in enumerate_graphs(n) if is_chordal(g))
    assert mine == count_chordal(n) == [1, 2, 8, 61, 822][n - 1]


def test_mcs_agrees_with_elimination_graph_by_graph():
    for g in enumerate_graphs(5):
        assert is_chordal(g) == is_chordal_by_elimination(5, g.edges())


def test_junction_tree_examples():
    jt = junction_tree(PATH3)
    assert jt.cliques == (S(0, 1), S(1, 2))
    assert jt.separators == ((S(1), 1),)
    jt = junction_tree(TRIANGLE)
    assert jt.cliques == (S(0, 1, 2),) and jt.separators == ()
    jt = junction_tree(UGraph.empty(3))
    assert jt.cliques == (S(0), S(1), S(2))
    assert jt.separators == ((0, 2),)


def test_junction_tree_rejects_non_chordal():
    with pytest.raises(NotDecomposable):
        junction_tree(graph(4, (0, 1), (1, 2), (2, 3), (3, 0)))


def test_junction_tree_cliques_are_maximal_complete_sets_and_run_intersection():
    for n in range(1, 6):
        for g in enumerate_decomposable(n):
            jt = junction_tree(g)
            assert set(jt.cliques) == maximal_cliques_by_scan(n, g.edges())
            assert has_running_intersection(list(jt.cliques))
            comps = len(g.components())
            assert sum(nu for _, nu in jt.separators) == len(jt.cliques) - 1
            assert jt.multiplicity(0) == comps - 1


def test_junction_tree_invariant_under_tie_break_orders(rng):
    for g in enumerate_decomposable(6):
        if rng.random() > 0.05:
            continue
        base = junction_tree(g)
        for _ in range(3):
            other = junction_tree(g, priority=list(rng.permutation(6)))
            assert set(other.cliques) == set(base.cliques)
            assert sorted(other.separators) == sorted(base.separators)


def test_decomposition_examples():
    assert is_decomposition(PATH3, S(0, 1), S(1, 2))
    assert not is_decomposition(TRIANGLE, S(0, 1), S(1, 2))
    assert is_decomposition(graph(3, (0, 1)), S(0, 1), S(1, 2))
    assert decomposition_reason(PATH3, S(0), S(1)) == "NotCovering"
    assert decomposition_reason(graph(3, (0, 2)), S(0, 1), S(1, 2)) == "NotSeparated"
    assert decomposition_reason(graph(4, (0, 1), (1, 2), (2, 3)), S(0, 1, 2), S(0, 2, 3)) == "IntersectionIncomplete"


def test_graph_product_examples():
    h = UGraph.from_edges(3, [(0, 1)], S(0, 1))
    j = UGraph.from_edges(3, [(1, 2)], S(1, 2))
    assert graph_product(h, j) == PATH3
    assert graph_product(TRIANGLE, TRIANGLE) == TRIANGLE
    h = UGraph.from_edges(4, [(0, 1), (0, 2), (1, 2)], S(0, 1, 2))
    j = UGraph.from_edges(4, [(2, 3)], S(2, 3))
    g = graph_product(h, j)
    assert sorted(g.edges()) == [(0, 1), (0, 2), (1, 2), (2, 3)]
    assert is_chordal(g) and is_decomposition(g, h.vertices, j.vertices)
    assert g.induced(h.vertices) == h and g.induced(j.vertices) == j


def test_graph_product_incomplete_intersection():
    h = UGraph.empty(3, S(0, 1))
    j = UGraph.from_edges(3, [(0, 1), (1, 2)], S(0, 1, 2))
    with pytest.raises(IncompatibleIntersection):
        graph_product(h, j)


def test_product_reconstructs_every_decomposed_graph():
    for n in range(1, 6):
        for g in enumerate_decomposable(n):
            for a, b in covering_pairs(full(n)):
                if is_decomposition(g, a, b):
                    assert graph_product(g.induced(a), g.induced(b)) == g


def test_collapsibility():
    assert is_collapsible(PATH3, full(3))
    assert not is_collapsible(PATH3, S(0, 2))
    for n in range(1, 5):
        for g in enumerate_decomposable(n):
            for a, b in covering_pairs(full(n)):
                if is_decomposition(g, a, b):
                    assert is_collapsible(g, a) and is_collapsible(g, b)


def test_decomposition_restricts_to_induced_subgraph():
    for n in range(1, 5):
        v = full(n)
        for g in enumerate_decomposable(n):
            for a, b in covering_pairs(v):
                if not is_decomposition(g, a, b):
                    continue
                ga = g.induced(a)
                for s in submasks(a):
                    for t in submasks(a):
                        if s | t != a or (a & b) & ~t:
                            continue
                        assert is_decomposition(ga, s, t) == is_decomposition(g, s, t | b)


def test_enumeration_order_and_cap():
    graphs = list(enumerate_decomposable(4))
    masks = [g.edge_mask() for g in graphs]
    assert masks == sorted(masks) and len(set(masks)) == 61
    assert len(list(enumerate_decomposable(2))) == 2
    with pytest.raises(CapExceeded):
        next(enumerate_decomposable(8))


def test_neighbours():
    assert len(decomposable_neighbors(UGraph.empty(3))) == 3
    assert len(decomposable_neighbors(TRIANGLE)) == 3
    square_minus_one = graph(4, (0, 1), (1, 2), (2, 3))
    assert (0, 3) not in [e for e, _ in decomposable_neighbors(square_minus_one)]


def test_neighbour_graph_symmetric_and_connected():
    for n in (3, 4, 5):
        graphs = list(enumerate_decomposable(n))
        adj = {g: {h for _, h in decomposable_neighbors(g)} for g in graphs}
        assert all(g in adj[h] for g in graphs for h in adj[g])
        seen = {graphs[0]}
        stack = [graphs[0]]
        while stack:
            for h in adj[stack.pop()]:
                if h not in seen:
                    seen.add(h)
                    stack.append(h)
        assert len(seen) == len(graphs)


def test_induced_subgraph_keeps_labels():
    g = graph(4, (0, 1), (1, 2), (2, 3))
    sub = g.induced(S(1, 2, 3))
    assert sub.vertices == S(1, 2, 3)
    assert sorted(sub.edges()) == [(1, 2), (2, 3)]
    assert members(sub.vertices) == [1, 2, 3]


def test_covering_pairs_proper_skips_nested_and_duplicates():
    pairs = list(covering_pairs(full(3), proper=True))
    assert all(a < b and a & ~b and b & ~a for a, b in pairs)
    assert len(pairs) == len(set(pairs))
    assert (S(0, 1), S(1, 2)) in pairs
    assert sum(1 for _ in itertools.islice(covering_pairs(full(3)), 100)) > len(pairs)
