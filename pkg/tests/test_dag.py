import itertools

import pytest

from graphlaws.cliques import clique_vector
from graphlaws.dag import (
    Dag,
    ancestral_insert,
    covered_edges,
    d_clique_vector,
    d_completeness_by_parents,
    d_completeness_vector,
    d_separated,
    dag_from_remainders,
    dagoid_complete_on,
    dagoid_members,
    dagoid_of,
    enumerate_dags,
    induced_subdagoid,
    is_ancestral_in_dagoid,
    markov_equivalent,
    ordered_remainder_graph,
    remainder_dagoid,
    reverse_covered_edge,
    skeleton_and_immoralities,
    standard_imset,
)
from graphlaws.errors import CyclicInput, IncompatibleOrder, NotAncestral, NotAncestralInDagoid, NotCovered
from graphlaws.oracles import all_dags_by_filter, d_separated_by_paths, dsep_signature, partition_dags
from graphlaws.subsets import SubsetVector, full, members, submasks
from graphlaws.ugraph import UGraph

from conftest import S, dag, graph, vec

CHAIN = dag(3, (0, 1), (1, 2))
REVERSED = dag(3, (2, 1), (1, 0))
FORK = dag(3, (1, 0), (1, 2))
COLLIDER = dag(3, (0, 1), (2, 1))
VSTRUCT = dag(3, (0, 2), (1, 2))


def test_cycle_rejected():
    with pytest.raises(CyclicInput):
        dag(3, (0, 1), (1, 2), (2, 0))


def test_skeleton_and_immoralities_examples():
    skel, imm = skeleton_and_immoralities(COLLIDER)
    assert skel == graph(3, (0, 1), (1, 2)) and imm == {(0, 1, 2)}
    assert skeleton_and_immoralities(CHAIN)[1] == frozenset()
    skel, imm = skeleton_and_immoralities(Dag.complete(3))
    assert skel == UGraph.complete(3) and imm == frozenset()


def test_equivalence_examples():
    for a, b in itertools.combinations([CHAIN, REVERSED, FORK], 2):
        assert markov_equivalent(a, b)
    assert not markov_equivalent(CHAIN, COLLIDER)


@pytest.mark.parametrize("n,classes,dags", [(2, 2, 3), (3, 11, 25), (4, 185, 543)])
def test_class_counts(n, classes, dags):
    all_dags = list(enumerate_dags(n))
    assert len(all_dags) == dags
    assert len({dagoid_of(d) for d in all_dags}) == classes
    assert len({d_clique_vector(d) for d in all_dags}) == classes


def test_enumeration_matches_filter_oracle():
    mine = {frozenset(d.edges()) for d in enumerate_dags(3)}
    assert mine == set(all_dags_by_filter(3))


def test_covered_edge_reversal():
    d = Dag.complete(3)
    assert (0, 1) in covered_edges(d)
    r = reverse_covered_edge(d, (0, 1))
    assert sorted(r.edges()) == [(0, 2), (1, 0), (1, 2)]
    assert markov_equivalent(d, r)
    assert covered_edges(COLLIDER) == []
    with pytest.raises(NotCovered):
        reverse_covered_edge(COLLIDER, (0, 1))


def test_reversal_closure_is_the_class():
    for n in (3, 4):
        classes = {}
        for d in enumerate_dags(n):
            classes.setdefault(dagoid_of(d), set()).add(d)
        for dg, group in classes.items():
            assert set(dagoid_members(dg)) == group


def test_class_sizes():
    assert len(dagoid_members(dagoid_of(Dag.complete(3)))) == 6
    assert len(dagoid_members(dagoid_of(dag(3, (0, 1))))) == 2
    assert len(dagoid_members(dagoid_of(VSTRUCT))) == 1


def test_d_clique_vector_examples():
    assert d_clique_vector(FORK) == vec(3, {(0, 1): 1, (1, 2): 1, (1,): -1})
    assert d_clique_vector(FORK) == clique_vector(FORK.skeleton())
    assert d_clique_vector(VSTRUCT) == vec(3, {(0, 1, 2): 1, (0, 1): -1, (0,): 1, (1,): 1, (): -1})
    assert d_clique_vector(Dag.empty(4)) == vec(4, {(0,): 1, (1,): 1, (2,): 1, (3,): 1, (): -3})


def test_d_clique_vector_invariant_under_reversal():
    for n in (3, 4):
        for d in enumerate_dags(n):
            for e in covered_edges(d):
                assert d_clique_vector(reverse_covered_edge(d, e)) == d_clique_vector(d)


def test_sum_identities_for_all_dags():
    for n in range(1, 6):
        for d in enumerate_dags(n):
            t = d_clique_vector(d)
            assert t.total() == 1
            for v in range(n):
                assert sum(x for a, x in t.items() if a >> v & 1) == 1
            assert sum(a.bit_count() * x for a, x in t.items()) == n
            assert sum(a.bit_count() * (a.bit_count() - 1) // 2 * x for a, x in t.items()) == d.num_edges


def test_perfect_dags_match_skeleton():
    for n in range(1, 6):
        for d in enumerate_dags(n):
            if d.is_perfect():
                assert d_clique_vector(d) == clique_vector(d.skeleton())


def test_completeness_and_standard_imset():
    d = Dag.complete(3)
    assert d_completeness_vector(d) == SubsetVector(3, {a: 1 for a in range(8)})
    assert standard_imset(d) == SubsetVector.zeros(3)
    c = d_completeness_vector(VSTRUCT)
    assert c[S(0, 1, 2)] == 1 and c[S(0, 1)] == 0
    for n in range(1, 5):
        for d in enumerate_dags(n):
            assert d_completeness_vector(d) == d_completeness_by_parents(d)
            standard_imset(d, check=True)


def test_ancestral_insert_examples():
    h = Dag.from_edges(3, [(1, 0)], S(0, 1))
    assert sorted(ancestral_insert(h, CHAIN).edges()) == [(1, 0), (1, 2)]
    assert ancestral_insert(CHAIN.induced(S(0, 1)), CHAIN) == CHAIN
    with pytest.raises(NotAncestral):
        ancestral_insert(Dag.empty(3, S(1, 2)), CHAIN)


def test_insertion_preserves_equivalence():
    dags = list(enumerate_dags(3))
    for a in submasks(full(3)):
        subs = list(enumerate_dags(3, a))
        for d, d2 in itertools.product(dags, dags):
            if not (d.is_ancestral(a) and d2.is_ancestral(a) and markov_equivalent(d, d2)):
                continue
            for h, h2 in itertools.product(subs, subs):
                if markov_equivalent(h, h2):
                    assert markov_equivalent(ancestral_insert(h, d), ancestral_insert(h2, d2))


def test_remainder_examples():
    dg = dagoid_of(VSTRUCT)
    assert remainder_dagoid(dg, S(0, 1)) == dagoid_of(Dag.complete(3))
    sparse = dagoid_of(Dag.empty(4))
    for a in submasks(full(4)):
        assert remainder_dagoid(sparse, a) == dagoid_complete_on(4, a)
    with pytest.raises(NotAncestralInDagoid):
        remainder_dagoid(dg, S(0, 2))


def test_clique_vector_splits_over_ancestral_sets():
    for n in range(1, 5):
        for dg in {dagoid_of(d) for d in enumerate_dags(n)}:
            for a in submasks(full(n)):
                if not is_ancestral_in_dagoid(dg, a):
                    continue
                lhs = d_clique_vector(induced_subdagoid(dg, a).representative) \
                    + d_clique_vector(remainder_dagoid(dg, a)) - SubsetVector.delta(n, a)
                assert lhs == dg.tvec


def test_worked_split_at_v_structure():
    expected = vec(3, {(0,): 1, (1,): 1, (): -1}) + vec(3, {(0, 1, 2): 1}) - vec(3, {(0, 1): 1})
    assert expected == d_clique_vector(VSTRUCT)


def test_induced_and_remainder_are_variation_independent():
    classes = {dagoid_of(d) for d in enumerate_dags(3)}
    for a in submasks(full(3)):
        holders = [dg for dg in classes if is_ancestral_in_dagoid(dg, a)]
        pairs = {(induced_subdagoid(dg, a), remainder_dagoid(dg, a)) for dg in holders}
        firsts = {p for p, _ in pairs}
        seconds = {q for _, q in pairs}
        assert pairs == set(itertools.product(firsts, seconds))


def test_ordered_remainder_examples():
    r = ordered_remainder_graph(VSTRUCT, [0, 1, 2], 2)
    assert sorted(r.graph.edges()) == [(0, 1), (0, 2), (1, 2)]
    first = ordered_remainder_graph(VSTRUCT, [0, 1, 2], 0)
    assert first.graph.vertices == S(0) and first.graph.edges() == []
    with pytest.raises(IncompatibleOrder):
        ordered_remainder_graph(VSTRUCT, [2, 0, 1], 2)


def test_remainders_reconstruct_the_dag():
    order = [0, 1, 2]
    for d in enumerate_dags(3):
        try:
            rs = [ordered_remainder_graph(d, order, v) for v in order]
        except IncompatibleOrder:
            continue
        assert dag_from_remainders(rs, 3) == d


def test_d_separation_examples():
    assert d_separated(CHAIN, S(0), S(2), S(1))
    assert d_separated(VSTRUCT, S(0), S(1), 0)
    assert not d_separated(VSTRUCT, S(0), S(1), S(2))


def test_d_separation_matches_path_criterion():
    for d in enumerate_dags(4):
        arcs = d.edges()
        for labels in itertools.product(range(4), repeat=4):
            a = {v for v in range(4) if labels[v] == 1}
            b = {v for v in range(4) if labels[v] == 2}
            c = {v for v in range(4) if labels[v] == 3}
            if a and b:
                assert d_separated(d, S(*a), S(*b), S(*c)) == d_separated_by_paths(4, arcs, a, b, c)


def test_equivalence_matches_separation_semantics():
    by_sep = partition_dags(3, lambda arcs: dsep_signature(3, arcs))
    for group in by_sep.values():
        dags = [Dag.from_edges(3, sorted(g)) for g in group]
        assert len({dagoid_of(d) for d in dags}) == 1
    assert len(by_sep) == 11
