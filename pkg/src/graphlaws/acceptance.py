"""Exhaustive acceptance checks, each comparing a fast route with an oracle.

Every check returns a :class:`CriterionResult`; :func:`run_all` runs them in
order.  Randomness is seeded so results are reproducible.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from math import comb, exp

import numpy as np
from scipy.special import logsumexp

from . import oracles
from .cliques import _clique_vector_jt, clique_vector, clique_vector_mobius, delta_t, dense_delta_t
from .dag import (
    Dag,
    covered_edges,
    d_clique_vector,
    dagoid_complete_on,
    dagoid_members,
    enumerate_dags,
    induced_subdagoid,
    is_ancestral_in_dagoid,
    remainder_dagoid,
    reverse_covered_edge,
    skeleton_and_immoralities,
)
from .dagoid_law import (
    ExponentialDagoidLaw,
    check_dagoid_structural_markov,
    class_size,
    class_size_law,
    dagoid_structural_markov_witnesses,
    enumerate_dagoids,
)
from .gaussian import GaussHyper, clique_log_marginal, clique_marginal_table, posterior_omega, update_hyper
from .laws import (
    ExponentialLaw,
    GraphFamily,
    builtin_law,
    check_meta_markov,
    check_structural_markov,
    edge_bernoulli_omega,
    forest_penalty_omega,
    log_normalizer,
    recover_omega,
    structural_markov_witnesses,
    to_table,
)
from .mcmc import detailed_balance_gap, exact_distribution, run_chain, tv_distance
from .subsets import SubsetVector, full, members, size, submasks, vset
from .ugraph import (
    UGraph,
    decomposable_neighbors,
    enumerate_decomposable,
    mcs_order,
)


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    details: list[str] = field(default_factory=list)
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.number:2d}: {self.title} ({self.seconds:.1f}s)"


class _Recorder:
    def __init__(self):
        self.ok = True
        self.details: list[str] = []

    def check(self, cond: bool, msg: str) -> bool:
        self.ok &= bool(cond)
        self.details.append(("ok   " if cond else "FAIL ") + msg)
        return bool(cond)


def _omega(rng: np.random.Generator, n: int) -> SubsetVector:
    return SubsetVector.from_dense(rng.standard_normal(1 << n), n)


def _prop4(t: SubsetVector, vertices: int, num_edges: int) -> bool:
    return (
        t.total() == 1
        and all(sum(x for a, x in t.items() if a >> v & 1) == 1 for v in members(vertices))
        and sum(size(a) * x for a, x in t.items()) == vertices.bit_count()
        and sum(comb(size(a), 2) * x for a, x in t.items()) == num_edges
    )


# -- 1: enumeration counts ---------------------------------------------------------

def criterion_1() -> _Recorder:
    r = _Recorder()
    want = [1, 2, 8, 61, 822]
    got = [sum(1 for _ in enumerate_decomposable(n)) for n in range(1, 6)]
    oracle = [oracles.count_chordal(n) for n in range(1, 6)]
    r.check(got == want == oracle, f"decomposable counts {got}, elimination oracle {oracle}, expected {want}")
    want = [1, 3, 25, 543]
    got = [sum(1 for _ in enumerate_dags(n)) for n in range(1, 5)]
    oracle = [len(oracles.all_dags_by_filter(n)) for n in range(1, 5)]
    r.check(got == want == oracle, f"DAG counts {got}, filter oracle {oracle}, expected {want}")
    want = [1, 2, 11, 185]
    got = [len(enumerate_dagoids(n)) for n in range(1, 5)]
    oracle = [len(oracles.partition_dags(n, lambda arcs, n=n: oracles.dsep_signature(n, arcs))) for n in range(1, 5)]
    r.check(got == want == oracle, f"dagoid counts {got}, d-separation partition {oracle}, expected {want}")
    return r


# -- 2: clique-vector identities -----------------------------------------------------

def criterion_2() -> _Recorder:
    r = _Recorder()
    for n in range(1, 7):
        total = bad = 0
        for g in enumerate_decomposable(n):
            total += 1
            bad += not _prop4(clique_vector(g, check=False), g.vertices, g.num_edges)
        r.check(bad == 0, f"n={n}: sum identities hold on {total - bad}/{total} decomposable graphs")
    dags = list(enumerate_dags(4))
    bad = sum(not _prop4(d_clique_vector(d), d.vertices, d.num_edges) for d in dags)
    r.check(bad == 0 and len(dags) == 543, f"n=4: sum identities hold on {len(dags) - bad}/{len(dags)} DAGs")
    return r


# -- 3: two routes to t ------------------------------------------------------------

def criterion_3() -> _Recorder:
    r = _Recorder()
    for n in range(1, 6):
        total = bad = 0
        for g in enumerate_decomposable(n):
            total += 1
            bad += _clique_vector_jt(g) != clique_vector_mobius(g)
        r.check(bad == 0, f"n={n}: junction-tree and Moebius routes agree on {total - bad}/{total} graphs")
    return r


# -- 4: structural Markov graph laws --------------------------------------------------

def criterion_4() -> _Recorder:
    r = _Recorder()
    rng = np.random.default_rng(4)
    fails = 0
    worst = 0.0
    for _ in range(25):
        law = ExponentialLaw(_omega(rng, 4))
        fails += check_structural_markov(law) is not None
        table = to_table(law)
        rec = ExponentialLaw(recover_omega(table))
        log_z = log_normalizer(rec)
        worst = max(worst, max(abs(rec.logpdf(g) - log_z - lp) for g, lp in table.entries.items()))
    r.check(fails == 0, f"25 random exponential laws at n=4: {25 - fails} pass the cross-product identity")
    r.check(worst < 1e-9, f"recovered parameters reproduce the tables, max log error {worst:.2e}")
    arm = builtin_law("armstrong", n=3)
    first = check_structural_markov(arm)
    r.check(first is not None and np.isclose(exp(first.lhs), 1 / 48) and np.isclose(exp(first.rhs), 1 / 144),
            f"Armstrong law fails; first witness A={members(first.a)}, B={members(first.b)}, "
            f"products {exp(first.lhs):.6f} vs {exp(first.rhs):.6f} (1/48 vs 1/144)")
    path = UGraph.from_edges(3, [(0, 1), (1, 2)])
    named = [w for w in structural_markov_witnesses(arm)
             if (w.a, w.b) == (vset([0, 1]), vset([1, 2])) and {w.g, w.g2} == {path, UGraph.empty(3)}]
    r.check(len(named) == 1 and np.isclose(exp(named[0].lhs), 1 / 48) and np.isclose(exp(named[0].rhs), 1 / 144),
            "witness A={0,1}, B={1,2}, G=path 0-1-2, G'=empty is reported with 1/48 vs 1/144")
    return r


# -- 5: structural Markov dagoid laws --------------------------------------------------

def criterion_5() -> _Recorder:
    r = _Recorder()
    rng = np.random.default_rng(5)
    fails = sum(check_dagoid_structural_markov(ExponentialDagoidLaw(_omega(rng, 3))) is not None for _ in range(10))
    r.check(fails == 0, f"10 random exponential dagoid laws at n=3: {10 - fails} pass")
    law = class_size_law(3)
    r.check(check_dagoid_structural_markov(law) is not None, "class-size law fails the ancestral identity")
    complete, sparse = dagoid_complete_on(3, full(3)), dagoid_complete_on(3, 0)
    hits = [w for w in dagoid_structural_markov_witnesses(law)
            if w.a == vset([0, 1]) and {w.d, w.d2} == {complete, sparse}]
    ok = False
    if hits:
        w = hits[0]
        sizes = class_size(w.d) * class_size(w.d2), class_size(w.cross[0]) * class_size(w.cross[1])
        cross = sorted(class_size(c) for c in w.cross)
        ok = sizes == (6, 2) and cross == [1, 2]
    r.check(ok, "witness A={0,1}, D=complete, D'=sparse gives 6*1 vs 2*1 (cross classes of sizes 2 and 1)")
    return r


# -- 6: equivalence criteria agree ------------------------------------------------------

def _dag_arcs(d: Dag) -> frozenset:
    return frozenset(d.edges())


def criterion_6() -> _Recorder:
    r = _Recorder()
    for n, pairs in ((3, None), (4, 10_000)):
        dags = list(enumerate_dags(n))
        sig = [oracles.dsep_signature(n, _dag_arcs(d)) for d in dags]
        struct = [skeleton_and_immoralities(d) for d in dags]
        vec = [d_clique_vector(d) for d in dags]
        if pairs is None:
            idx = [(i, j) for i in range(len(dags)) for j in range(i + 1, len(dags))]
        else:
            rng = np.random.default_rng(6)
            draws = rng.integers(len(dags), size=(pairs, 2))
            idx = [(int(i), int(j)) for i, j in draws]
        bad = sum(len({struct[i] == struct[j], vec[i] == vec[j], sig[i] == sig[j]}) != 1 for i, j in idx)
        r.check(bad == 0, f"n={n}: {len(idx)} DAG pairs, {bad} disagreements among skeleton+immoralities, "
                          f"d-clique vectors and d-separation statements")
    return r


# -- 7: covered-edge reversals -------------------------------------------------------------

def criterion_7() -> _Recorder:
    r = _Recorder()
    for n in range(1, 5):
        changed = 0
        reversals = 0
        for d in enumerate_dags(n):
            t = d_clique_vector(d)
            for e in covered_edges(d):
                reversals += 1
                changed += d_clique_vector(reverse_covered_edge(d, e)) != t
        classes = oracles.partition_dags(n, lambda arcs, n=n: oracles.dsep_signature(n, arcs))
        size_of = {arcs: len(members_) for members_ in classes.values() for arcs in members_}
        mismatch = sum(len(dagoid_members(d)) != size_of[_dag_arcs(d)] for d in enumerate_dags(n))
        r.check(changed == 0 and mismatch == 0,
                f"n={n}: {reversals} covered reversals leave t unchanged ({changed} changed); "
                f"reversal-closure sizes match the partition oracle ({mismatch} mismatches)")
    return r


# -- 8: ancestral decomposition of t --------------------------------------------------------

def criterion_8() -> _Recorder:
    r = _Recorder()
    for n in range(1, 5):
        checked = bad = 0
        for dg, _ in enumerate_dagoids(n):
            for a in submasks(full(n)):
                if not is_ancestral_in_dagoid(dg, a):
                    continue
                checked += 1
                rhs = d_clique_vector(induced_subdagoid(dg, a)) + d_clique_vector(remainder_dagoid(dg, a)) \
                    - SubsetVector.delta(n, a)
                bad += rhs != d_clique_vector(dg)
        r.check(bad == 0, f"n={n}: identity holds for {checked - bad}/{checked} (dagoid, ancestral set) pairs")
    return r


# -- 9: conjugate posterior ---------------------------------------------------------------

def _perfect_families(g: UGraph) -> list[tuple[int, list[int]]]:
    seen = 0
    out = []
    for v in mcs_order(g):
        out.append((v, members(g.adj[v] & seen)))
        seen |= 1 << v
    return out


def _random_hyper(rng: np.random.Generator, n: int) -> GaussHyper:
    a = rng.standard_normal((n, n))
    return GaussHyper(2.0 + 3.0 * rng.random(), a @ a.T / n + np.eye(n))


def criterion_9() -> _Recorder:
    r = _Recorder()
    rng = np.random.default_rng(9)
    for n in (3, 4):
        for m in (5, 50):
            h = _random_hyper(rng, n)
            x = rng.standard_normal((m, n)) @ np.linalg.cholesky(h.phi / h.delta).T
            omega = _omega(rng, n)
            post = posterior_omega(omega, h, x)
            graphs = list(enumerate_decomposable(n))
            brute = np.array([
                float(omega.dot(clique_vector(g))) + oracles.log_marginal_by_regressions(x, h.delta, h.phi, _perfect_families(g))
                for g in graphs
            ])
            brute -= logsumexp(brute)
            law = ExponentialLaw(post)
            mine = np.array([law.logpdf(g) for g in graphs])
            mine -= logsumexp(mine)
            err = float(np.max(np.abs(mine - brute)))
            r.check(err < 1e-9, f"n={n}, {m} obs: graph posterior matches brute force, max log error {err:.2e}")
            dagoids = [dg for dg, _ in enumerate_dagoids(n)]
            brute = np.array([
                float(omega.dot(d_clique_vector(dg))) + oracles.log_marginal_by_regressions(
                    x, h.delta, h.phi, [(v, members(dg.representative.parents[v])) for v in range(n)])
                for dg in dagoids
            ])
            brute -= logsumexp(brute)
            dlaw = ExponentialDagoidLaw(post)
            mine = np.array([dlaw.logpdf(dg) for dg in dagoids])
            mine -= logsumexp(mine)
            err = float(np.max(np.abs(mine - brute)))
            r.check(err < 1e-9, f"n={n}, {m} obs: dagoid posterior matches brute force, max log error {err:.2e}")
            r.check(check_structural_markov(law) is None and check_dagoid_structural_markov(dlaw) is None,
                    f"n={n}, {m} obs: posterior graph and dagoid laws are structurally Markov")
    return r


# -- 10: Gaussian marginals ------------------------------------------------------------------

def criterion_10() -> _Recorder:
    r = _Recorder()
    worst = 0.0
    for delta, phi, xs in ((3.0, 1.0, [0.5]), (1.5, 0.7, [0.3, -1.2, 2.0]), (6.0, 2.5, [-0.4, 0.1]), (0.8, 1.0, [3.0])):
        h = GaussHyper(delta, np.array([[phi]]))
        mine = clique_log_marginal(h, np.array(xs).reshape(-1, 1), 1)
        worst = max(worst, abs(mine - oracles.iw_univariate_marginal_by_quadrature(np.array(xs), delta, phi)))
    r.check(worst < 1e-8, f"single-vertex marginals match quadrature, max error {worst:.2e}")
    rng = np.random.default_rng(10)
    worst = 0.0
    for _ in range(5):
        n = 4
        h = _random_hyper(rng, n)
        x = rng.standard_normal((7, n))
        table = clique_marginal_table(h, x)
        for b in submasks(full(n)):
            for a in submasks(b):
                if a == b:
                    continue
                via_b = table[b] - oracles.iw_regression_log_marginal(
                    x[:, members(b & ~a)], x[:, members(a)], h.delta, h.phi, members(a), members(b & ~a))
                worst = max(worst, abs(via_b - table[a]))
    r.check(worst < 1e-10, f"marginal of A agrees when reached from every superset B, max error {worst:.2e}")
    worst = 0.0
    for _ in range(5):
        h = _random_hyper(rng, 4)
        x = rng.standard_normal((12, 4))
        k = int(rng.integers(1, 11))
        seq = clique_marginal_table(h, x[:k]) + clique_marginal_table(update_hyper(h, x[:k]), x[k:])
        worst = max(worst, seq.max_abs_diff(clique_marginal_table(h, x)))
    r.check(worst < 1e-9, f"sequential updating equals batch, max error {worst:.2e}")
    return r


# -- 11: MCMC ------------------------------------------------------------------------------

def criterion_11(steps: int = 500_000) -> _Recorder:
    r = _Recorder()
    rng = np.random.default_rng(11)
    gap = max(detailed_balance_gap(_omega(rng, n)) for n in (2, 3, 4) for _ in range(3))
    r.check(gap <= 1e-12, f"detailed balance at n<=4, max log gap {gap:.1e}")
    settings = {
        "random normal omega": _omega(rng, 4),
        "edge-bernoulli psi=0.3": edge_bernoulli_omega(4, 0.3),
        "forest-penalty rho=0.5 kappa=1": forest_penalty_omega(4, 0.5, 1.0),
    }
    for i, (name, omega) in enumerate(settings.items()):
        report = run_chain(omega, steps=steps, seed=1100 + i, check=True)
        tv = tv_distance(report, exact_distribution(omega))
        r.check(tv < 0.02, f"{name}: TV {tv:.4f} after {steps} steps (acceptance {report.acceptance_rate:.3f})")
    moves = bad = 0
    for n in range(2, 6):
        for g in enumerate_decomposable(n):
            for (u, v), g2 in decomposable_neighbors(g):
                dt = delta_t(g, (u, v))
                moves += 1
                bad += len(dt) > 4 or dt != dense_delta_t(g, (u, v))
    r.check(bad == 0, f"sparse change has <=4 entries and equals recomputation on all {moves} moves at n<=5")
    return r


# -- 12: meta-Markov families ------------------------------------------------------------------

def criterion_12() -> _Recorder:
    r = _Recorder()
    good = {
        "forests": GraphFamily.forests(4),
        "trees": GraphFamily.trees(4),
        "clique size <= 3": GraphFamily.bounded(4, 3),
        "clique size <= 3, separators >= 1": GraphFamily.bounded(4, 3, 1),
        "sandwich edge 01 .. path 0-1-2-3": GraphFamily.sandwich(UGraph.from_edges(4, [(0, 1)]),
                                                                  UGraph.from_edges(4, [(0, 1), (1, 2), (2, 3)])),
        "sandwich empty .. star at 0": GraphFamily.sandwich(UGraph.empty(4),
                                                           UGraph.from_edges(4, [(0, 1), (0, 2), (0, 3)])),
        "sandwich path 0-1-2 .. complete": GraphFamily.sandwich(UGraph.from_edges(4, [(0, 1), (1, 2)]),
                                                               UGraph.complete(4)),
    }
    for name, fam in good.items():
        r.check(check_meta_markov(fam) is None, f"{name} ({len(fam)} graphs) is closed under products")
    single = GraphFamily([UGraph.empty(3), UGraph.from_edges(3, [(0, 1)]), UGraph.from_edges(3, [(1, 2)])])
    w = check_meta_markov(single)
    r.check(w is not None, "family {empty, edge 01, edge 12} fails with a product witness"
            + (f" (product {w.product.edges()})" if w else ""))
    w = check_meta_markov(GraphFamily([UGraph.empty(3), UGraph.complete(3)]))
    r.check(w is not None, "family {empty, triangle} fails with a product witness"
            + ("" if w else ": no witness exists; every product over a decomposition event "
                            "returns the empty graph or the triangle"))
    return r


CRITERIA = {
    1: ("enumeration counts", criterion_1),
    2: ("clique-vector sum identities", criterion_2),
    3: ("junction-tree and Moebius routes agree", criterion_3),
    4: ("structural Markov graph laws", criterion_4),
    5: ("structural Markov dagoid laws", criterion_5),
    6: ("equivalence criteria agree", criterion_6),
    7: ("covered-edge reversal invariance", criterion_7),
    8: ("ancestral decomposition of the d-clique vector", criterion_8),
    9: ("conjugate posterior", criterion_9),
    10: ("Gaussian marginal correctness", criterion_10),
    11: ("MCMC correctness", criterion_11),
    12: ("meta-Markov families", criterion_12),
}


def run_criterion(number: int) -> CriterionResult:
    title, fn = CRITERIA[number]
    start = time.perf_counter()
    rec = fn()
    return CriterionResult(number, title, rec.ok, rec.details, time.perf_counter() - start)


def run_all(numbers=None) -> list[CriterionResult]:
    return [run_criterion(k) for k in (sorted(CRITERIA) if numbers is None else numbers)]
