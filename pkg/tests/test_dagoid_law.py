from math import log

import numpy as np
import pytest

from graphlaws.dag import Dag, d_clique_vector, dagoid_of, enumerate_dags
from graphlaws.dagoid_law import (
    ExponentialDagoidLaw,
    OrderedLaw,
    TableDagoidLaw,
    check_dagoid_structural_markov,
    check_ordered_independence,
    class_size,
    class_size_law,
    dagoid_structural_markov_witnesses,
    edge_count_dagoid_omega,
    enumerate_dagoids,
    ordered_law_density,
    ordered_parent_marginal,
    recover_dagoid_omega,
    to_dagoid_table,
)
from graphlaws.errors import CapExceeded, IncompatibleOrder, NotStructurallyMarkov
from graphlaws.subsets import SubsetVector, submasks

from conftest import S, dag

COMPLETE = dagoid_of(Dag.complete(3))
SPARSE = dagoid_of(Dag.empty(3))


@pytest.mark.parametrize("n,classes,dags", [(2, 2, 3), (3, 11, 25), (4, 185, 543)])
def test_dagoid_counts(n, classes, dags):
    table = enumerate_dagoids(n)
    assert len(table) == classes
    assert sum(c for _, c in table) == dags


def test_class_sizes_at_three():
    sizes = sorted(c for _, c in enumerate_dagoids(3))
    assert sizes == [1, 1, 1, 1, 2, 2, 2, 3, 3, 3, 6]
    assert class_size(COMPLETE) == 6
    assert class_size(SPARSE) == 1
    assert class_size(dagoid_of(dag(3, (0, 2), (1, 2)))) == 1
    assert class_size(dagoid_of(dag(3, (0, 1)))) == 2


def test_enumeration_cap():
    with pytest.raises(CapExceeded):
        enumerate_dagoids(6)


def test_zero_parameter_is_uniform():
    law = ExponentialDagoidLaw(SubsetVector.zeros(3))
    table = to_dagoid_table(law)
    assert all(lp == pytest.approx(-log(11)) for lp in table.entries.values())
    assert law.logpdf(COMPLETE) == law.logpdf(SPARSE)


def test_edge_count_law():
    rho = 0.4
    law = ExponentialDagoidLaw(edge_count_dagoid_omega(3, rho))
    for dg, _ in enumerate_dagoids(3):
        assert law.logpdf(dg) == pytest.approx(dg.num_edges * log(rho), abs=1e-12)


def test_exponential_dagoid_laws_pass(rng):
    for _ in range(10):
        omega = SubsetVector.from_dense(rng.normal(size=8), 3)
        assert check_dagoid_structural_markov(ExponentialDagoidLaw(omega)) is None
    assert check_dagoid_structural_markov(ExponentialDagoidLaw(SubsetVector.zeros(3))) is None


def test_class_size_law_witness():
    law = class_size_law(3)
    assert check_dagoid_structural_markov(law) is not None
    named = [w for w in dagoid_structural_markov_witnesses(law)
             if w.a == S(0, 1) and {w.d, w.d2} == {COMPLETE, SPARSE}]
    assert named
    w = named[0]
    sizes = sorted(class_size(c) for c in w.cross)
    assert sizes == [1, 2]
    assert np.exp(w.lhs - w.rhs) == pytest.approx(3.0)


def test_recover_dagoid_parameter(rng):
    uniform = TableDagoidLaw({dg: 0.0 for dg, _ in enumerate_dagoids(3)}, normalize=True)
    omega = recover_dagoid_omega(uniform)
    for dg in uniform.support():
        assert omega.dot(d_clique_vector(dg)) == pytest.approx(-log(11), abs=1e-12)
    for _ in range(5):
        law = to_dagoid_table(ExponentialDagoidLaw(SubsetVector.from_dense(rng.normal(size=8), 3)))
        omega = recover_dagoid_omega(law)
        for dg, lp in law.entries.items():
            assert abs(omega.dot(d_clique_vector(dg)) - lp) < 1e-9
    with pytest.raises(NotStructurallyMarkov):
        recover_dagoid_omega(class_size_law(3))


def test_posterior_style_update_stays_structurally_markov(rng):
    omega = SubsetVector.from_dense(rng.normal(size=16), 4)
    assert check_dagoid_structural_markov(ExponentialDagoidLaw(omega)) is None


def test_ordered_uniform():
    law = OrderedLaw([0, 1, 2])
    dags = [d for d in enumerate_dags(3) if all(u < v for u, v in d.edges())]
    assert len(dags) == 8
    assert all(ordered_law_density(law, d) == pytest.approx(-log(8)) for d in dags)
    with pytest.raises(IncompatibleOrder):
        ordered_law_density(law, dag(3, (2, 0)))


def test_ordered_parent_marginal_matches_specification():
    weights = [{}, {0: 0.7}, {S(0): -0.4, S(1): 1.1, S(0, 1): 0.3}]
    law = OrderedLaw([0, 1, 2], weights)
    marg = ordered_parent_marginal(law, 2)
    for pa in submasks(S(0, 1)):
        assert marg[pa] == pytest.approx(np.exp(law.parent_log_prob(2, pa)), abs=1e-12)
    assert check_ordered_independence(law) is None


def test_edge_log_odds_give_independent_edges(rng):
    lo = rng.normal(size=(3, 3))
    law = OrderedLaw.from_edge_log_odds([0, 1, 2], lo)
    p = 1 / (1 + np.exp(-lo))
    for d in enumerate_dags(3):
        if any(u > v for u, v in d.edges()):
            continue
        want = 0.0
        for u in range(3):
            for v in range(u + 1, 3):
                want += log(p[u, v]) if (u, v) in d.edges() else log(1 - p[u, v])
        assert ordered_law_density(law, d) == pytest.approx(want, abs=1e-12)
