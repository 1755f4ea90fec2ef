import numpy as np
import pytest

from graphlaws.cliques import clique_vector
from graphlaws.errors import InvalidInput, NotDecomposable
from graphlaws.laws import edge_bernoulli_omega
from graphlaws.mcmc import (
    ChainState,
    detailed_balance_gap,
    exact_distribution,
    mh_step,
    run_chain,
    run_chains,
    transition_log_prob,
    tv_distance,
)
from graphlaws.subsets import SubsetVector
from graphlaws.ugraph import UGraph, enumerate_decomposable, is_chordal

from conftest import graph


def test_same_seed_same_report(rng):
    omega = SubsetVector.from_dense(rng.normal(size=16), 4)
    a = run_chain(omega, steps=5000, seed=7)
    b = run_chain(omega, steps=5000, seed=7)
    assert a.counts == b.counts and a.accepted == b.accepted
    c = run_chain(omega, steps=5000, seed=8)
    assert c.counts != a.counts


def test_uniform_three_vertices():
    report = run_chain(SubsetVector.zeros(3), steps=100_000, seed=1, check=False)
    freqs = report.frequencies()
    assert len(freqs) == 8
    assert all(abs(f - 0.125) < 0.02 for f in freqs.values())


def test_exact_distribution_examples():
    dist = exact_distribution(SubsetVector.zeros(3))
    assert all(p == pytest.approx(1 / 8) for p in dist.values())
    psi = 0.25
    dist = exact_distribution(edge_bernoulli_omega(3, psi))
    raw = {g: psi ** g.num_edges * (1 - psi) ** (3 - g.num_edges) for g in enumerate_decomposable(3)}
    total = sum(raw.values())
    for g, p in dist.items():
        assert p == pytest.approx(raw[g] / total, rel=1e-12)
    assert tv_distance(dist, dist) == 0


def test_detailed_balance(rng):
    for n in (2, 3, 4):
        omega = SubsetVector.from_dense(rng.normal(size=1 << n), n)
        assert detailed_balance_gap(omega, n) < 1e-12


def test_chordless_cycle_proposals_are_rejected():
    path4 = graph(4, (0, 1), (1, 2), (2, 3))
    assert transition_log_prob(SubsetVector.zeros(4), path4, path4.toggle(0, 3)) == -np.inf
    omega = SubsetVector.zeros(4)
    state = ChainState.start(omega, path4)
    rng = np.random.default_rng(0)
    for _ in range(2000):
        state = mh_step(state, omega, rng)
        assert is_chordal(state.graph)


def test_caches_match_recomputation_after_long_run(rng):
    omega = SubsetVector.from_dense(rng.normal(size=32), 5)
    _, state = run_chain(omega, steps=10_000, seed=3, check=True, final_state=True)
    assert state.t == clique_vector(state.graph)
    assert state.logp == float(omega.dot(clique_vector(state.graph)))


def test_single_steps_keep_caches(rng):
    omega = SubsetVector.from_dense(rng.normal(size=16), 4)
    state = ChainState.start(omega)
    for _ in range(500):
        state = mh_step(state, omega, rng, check=True)
    state.verify(omega)
    assert state.step == 500


def test_chain_close_to_exact_law(rng):
    omega = SubsetVector.from_dense(rng.normal(size=16), 4)
    report = run_chain(omega, steps=200_000, burn_in=1000, seed=11, check=False)
    assert tv_distance(report, exact_distribution(omega)) < 0.03
    assert 0 < report.acceptance_rate < 1


def test_parallel_chains_are_deterministic():
    omega = SubsetVector.zeros(3)
    a = run_chains(omega, chains=3, steps=2000, seed=5)
    b = run_chains(omega, chains=3, steps=2000, seed=5)
    assert a.counts == b.counts and a.steps == 6000


def test_argument_validation():
    with pytest.raises(InvalidInput):
        run_chain(SubsetVector.zeros(3), steps=10, burn_in=10)
    with pytest.raises(NotDecomposable):
        ChainState.start(SubsetVector.zeros(4), graph(4, (0, 1), (1, 2), (2, 3), (3, 0)))


def test_report_views():
    report = run_chain(SubsetVector.zeros(2), steps=1000, seed=0)
    assert sum(report.frequencies().values()) == pytest.approx(1.0)
    (u, v, f), = report.edge_freq()
    assert (u, v) == (0, 1) and 0 < f < 1
    top = report.top_graphs(1)
    assert len(top) == 1 and isinstance(top[0][0], UGraph)
