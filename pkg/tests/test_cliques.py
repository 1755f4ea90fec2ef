from math import comb

import pytest

from graphlaws.cliques import (
    clique_vector,
    clique_vector_mobius,
    complete_subsets,
    completeness_vector,
    delta_t,
    dense_delta_t,
)
from graphlaws.errors import NotDecomposable, NotDecomposableAfterToggle
from graphlaws.oracles import complete_sets_by_scan
from graphlaws.subsets import SubsetVector, full, members, mobius_superset_inverse, size
from graphlaws.ugraph import UGraph, covering_pairs, decomposable_neighbors, enumerate_decomposable, is_decomposition

from conftest import S, graph, vec

PATH3 = graph(3, (0, 1), (1, 2))


def test_completeness_examples():
    assert set(completeness_vector(PATH3).keys()) == {0, S(0), S(1), S(2), S(0, 1), S(1, 2)}
    assert len(completeness_vector(UGraph.complete(4))) == 16
    assert set(completeness_vector(UGraph.empty(3)).keys()) == {0, S(0), S(1), S(2)}


def test_complete_subsets_match_scan():
    for g in enumerate_decomposable(5):
        assert sorted(complete_subsets(g)) == complete_sets_by_scan(5, g.edges())


def test_clique_vector_examples():
    assert clique_vector(PATH3) == vec(3, {(0, 1): 1, (1, 2): 1, (1,): -1})
    assert clique_vector(UGraph.complete(3)) == vec(3, {(0, 1, 2): 1})
    assert clique_vector(UGraph.empty(3)) == vec(3, {(0,): 1, (1,): 1, (2,): 1, (): -2})


def test_moebius_of_path_completeness_is_clique_vector():
    assert mobius_superset_inverse(completeness_vector(PATH3), 3) == clique_vector(PATH3)


def test_clique_vector_rejects_cycle():
    with pytest.raises(NotDecomposable):
        clique_vector(graph(4, (0, 1), (1, 2), (2, 3), (3, 0)))


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_two_routes_agree(n):
    for g in enumerate_decomposable(n):
        assert clique_vector(g, check=False) == clique_vector_mobius(g)


def test_sum_identities_up_to_six():
    for n in range(1, 7):
        for g in enumerate_decomposable(n):
            t = clique_vector(g, check=False)
            assert t.total() == 1
            for v in range(n):
                assert sum(x for a, x in t.items() if a >> v & 1) == 1
            assert sum(size(a) * x for a, x in t.items()) == n
            assert sum(comb(size(a), 2) * x for a, x in t.items()) == g.num_edges


def test_decomposition_splits_clique_vector():
    for n in range(1, 6):
        for g in enumerate_decomposable(n):
            for a, b in covering_pairs(full(n)):
                if is_decomposition(g, a, b):
                    split = clique_vector(g.induced(a)) + clique_vector(g.induced(b)) \
                        - clique_vector(g.induced(a & b))
                    assert split == clique_vector(g)


def test_clique_vector_is_injective():
    for n in range(1, 6):
        graphs = list(enumerate_decomposable(n))
        assert len({clique_vector(g) for g in graphs}) == len(graphs)


def test_delta_examples():
    assert delta_t(UGraph.empty(2), (0, 1)) == vec(2, {(0, 1): 1, (0,): -1, (1,): -1, (): 1})
    assert delta_t(PATH3, (0, 2)) == vec(3, {(0, 1, 2): 1, (0, 1): -1, (1, 2): -1, (1,): 1})


def test_delta_rejects_non_decomposable_result():
    path4 = graph(4, (0, 1), (1, 2), (2, 3))
    with pytest.raises(NotDecomposableAfterToggle):
        delta_t(path4, (0, 3))


def test_sparse_delta_matches_dense_everywhere():
    for n in range(2, 6):
        for g in enumerate_decomposable(n):
            for e, _ in decomposable_neighbors(g):
                d = delta_t(g, e)
                assert len(d) <= 4
                assert d == dense_delta_t(g, e)
