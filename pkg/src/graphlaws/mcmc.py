"""Metropolis-Hastings over decomposable graphs with single-edge toggles.

The proposal picks one of the ``C(n,2)`` vertex pairs uniformly and toggles
it, so it is symmetric.  Moves leaving the decomposable graphs are rejected;
the rest are accepted with probability ``min(1, exp(ω · Δt))`` where ``Δt``
is the sparse four-term clique-vector change.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from math import comb, log

import numpy as np
from scipy.special import logsumexp

from . import config
from .cliques import _delta_t, clique_vector, dense_delta_t
from .errors import CapExceeded, InvalidInput, NotDecomposable
from .subsets import SubsetVector, full
from .ugraph import UGraph, enumerate_decomposable, is_chordal, vertex_pairs

_BATCH = 4096


@dataclass(frozen=True)
class ChainState:
    graph: UGraph
    t: SubsetVector
    logp: float
    step: int = 0
    accepted: int = 0

    @classmethod
    def start(cls, omega: SubsetVector, graph: UGraph | None = None) -> "ChainState":
        graph = UGraph.empty(omega.n) if graph is None else graph
        if not is_chordal(graph):
            raise NotDecomposable(f"chain start {graph!r} is not decomposable")
        t = clique_vector(graph)
        return cls(graph, t, float(omega.dot(t)))

    def verify(self, omega: SubsetVector) -> None:
        t = clique_vector(self.graph)
        assert self.t == t, "cached clique vector drifted"
        assert self.logp == float(omega.dot(t)), "cached log-density drifted"


class _Kernel:
    """Memoised toggle outcomes: ``(graph, pair) -> (graph', Δt, log π(graph'))``."""

    def __init__(self, omega: SubsetVector, check: bool):
        self.omega = omega
        self.check = check
        self.pairs = vertex_pairs(full(omega.n))
        self.memo: dict[tuple[UGraph, int], tuple | None] = {}
        self.logp: dict[UGraph, float] = {}

    def log_density(self, g: UGraph) -> float:
        value = self.logp.get(g)
        if value is None:
            value = self.logp[g] = float(self.omega.dot(clique_vector(g)))
        return value

    def move(self, g: UGraph, k: int):
        key = (g, k)
        if key in self.memo:
            return self.memo[key]
        u, v = self.pairs[k]
        nxt = g.toggle(u, v)
        out = None
        if is_chordal(nxt):
            dt = _delta_t(g, u, v)
            if self.check:
                assert len(dt) <= 4, f"Δt has {len(dt)} nonzero entries"
                assert dt == dense_delta_t(g, (u, v)), "sparse Δt disagrees with recomputation"
            out = (nxt, dt, self.log_density(nxt))
        self.memo[key] = out
        return out


def mh_step(state: ChainState, omega: SubsetVector, rng: np.random.Generator, check: bool | None = None) -> ChainState:
    """One proposal and accept/reject decision."""
    check = config.DEBUG if check is None else check
    pairs = vertex_pairs(state.graph.vertices)
    if not pairs:
        return replace(state, step=state.step + 1)
    u, v = pairs[int(rng.integers(len(pairs)))]
    log_u = np.log(rng.random())
    nxt = state.graph.toggle(u, v)
    if not is_chordal(nxt):
        return replace(state, step=state.step + 1)
    dt = _delta_t(state.graph, u, v)
    new_logp = float(omega.dot(clique_vector(nxt)))
    if log_u < new_logp - state.logp:
        out = ChainState(nxt, state.t + dt, new_logp, state.step + 1, state.accepted + 1)
        if check:
            assert len(dt) <= 4
            out.verify(omega)
        return out
    return replace(state, step=state.step + 1)


@dataclass
class ChainReport:
    n: int
    steps: int = 0
    proposals: int = 0
    accepted: int = 0
    counts: dict = field(default_factory=dict)

    @property
    def acceptance_rate(self) -> float:
        return self.accepted / self.proposals if self.proposals else 0.0

    def frequencies(self) -> dict[UGraph, float]:
        return {g: c / self.steps for g, c in self.counts.items()}

    def edge_freq(self) -> list[tuple[int, int, float]]:
        out = []
        for u, v in vertex_pairs(full(self.n)):
            hits = sum(c for g, c in self.counts.items() if g.has_edge(u, v))
            out.append((u, v, hits / self.steps if self.steps else 0.0))
        return out

    def top_graphs(self, k: int = 10) -> list[tuple[UGraph, float]]:
        ranked = sorted(self.counts.items(), key=lambda gc: (-gc[1], gc[0].canonical()))
        return [(g, c / self.steps) for g, c in ranked[:k]]

    def merge(self, other: "ChainReport") -> "ChainReport":
        if other.n != self.n:
            raise InvalidInput("cannot merge reports over different vertex counts")
        counts = dict(self.counts)
        for g, c in other.counts.items():
            counts[g] = counts.get(g, 0) + c
        return ChainReport(self.n, self.steps + other.steps, self.proposals + other.proposals,
                           self.accepted + other.accepted, counts)


def run_chain(omega: SubsetVector, n: int | None = None, steps: int = 10_000, burn_in: int = 0,
              seed: int | np.random.SeedSequence = 0, check: bool | None = None,
              start: UGraph | None = None, final_state: bool = False):
    """Run one chain; the report covers the ``steps - burn_in`` post-burn-in states.

    Deterministic given ``seed``.  With ``final_state=True`` the last
    :class:`ChainState` is returned alongside the report.
    """
    n = omega.n if n is None else n
    if n != omega.n:
        raise InvalidInput(f"omega is over {omega.n} vertices, not {n}")
    if not steps > burn_in >= 0:
        raise InvalidInput("need steps > burn_in >= 0")
    check = config.DEBUG if check is None else check
    rng = np.random.Generator(np.random.PCG64(seed))
    kernel = _Kernel(omega, check)
    state = ChainState.start(omega, start)
    g, t, logp = state.graph, state.t, state.logp
    n_pairs = len(kernel.pairs)
    counts: dict[UGraph, int] = {}
    proposals = accepted = 0
    done = 0
    while done < steps:
        batch = min(_BATCH, steps - done)
        if n_pairs:
            ks = rng.integers(n_pairs, size=batch)
            log_us = np.log(rng.random(batch))
        for i in range(batch):
            if n_pairs:
                proposals += 1
                out = kernel.move(g, int(ks[i]))
                if out is not None:
                    nxt, dt, new_logp = out
                    if log_us[i] < new_logp - logp:
                        g, logp = nxt, new_logp
                        t = t + dt
                        accepted += 1
            if done + i >= burn_in:
                counts[g] = counts.get(g, 0) + 1
        done += batch
    report = ChainReport(n, steps - burn_in, proposals, accepted, counts)
    if final_state:
        state = ChainState(g, t, logp, steps, accepted)
        if check:
            state.verify(omega)
        return report, state
    return report


def run_chains(omega: SubsetVector, chains: int, steps: int, burn_in: int = 0, seed: int = 0,
               check: bool | None = None) -> ChainReport:
    """Independent chains on spawned seed streams, merged in chain order."""
    seeds = np.random.SeedSequence(seed).spawn(chains)
    with ThreadPoolExecutor(max_workers=chains) as pool:
        reports = list(pool.map(lambda s: run_chain(omega, steps=steps, burn_in=burn_in, seed=s, check=check), seeds))
    out = reports[0]
    for r in reports[1:]:
        out = out.merge(r)
    return out


def exact_distribution(omega: SubsetVector, n: int | None = None) -> dict[UGraph, float]:
    n = omega.n if n is None else n
    if n > 6:
        raise CapExceeded(f"exact distribution over {n} vertices exceeds cap 6")
    graphs = list(enumerate_decomposable(n))
    logs = np.array([float(omega.dot(clique_vector(g))) for g in graphs])
    probs = np.exp(logs - logsumexp(logs))
    return dict(zip(graphs, probs.tolist()))


def tv_distance(p, q: dict[UGraph, float]) -> float:
    """Total variation ``½ Σ |p - q|``; ``p`` may be a report or a distribution."""
    if isinstance(p, ChainReport):
        p = p.frequencies()
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(g, 0.0) - q.get(g, 0.0)) for g in keys)


def transition_log_prob(omega: SubsetVector, g: UGraph, g2: UGraph) -> float:
    """``log P(G -> G')`` for distinct graphs differing in one edge."""
    diff = g.edge_mask() ^ g2.edge_mask()
    if diff.bit_count() != 1 or not (is_chordal(g) and is_chordal(g2)):
        return -np.inf
    delta = float(omega.dot(clique_vector(g2) - clique_vector(g)))
    return -log(comb(g.vertices.bit_count(), 2)) + min(0.0, delta)


def detailed_balance_gap(omega: SubsetVector, n: int | None = None) -> float:
    """Largest ``|log π(G)P(G→G') - log π(G')P(G'→G)|`` over neighbour pairs."""
    n = omega.n if n is None else n
    dist = exact_distribution(omega, n)
    gap = 0.0
    for g in dist:
        for u, v in vertex_pairs(full(n)):
            g2 = g.toggle(u, v)
            if g2 in dist:
                lhs = log(dist[g]) + transition_log_prob(omega, g, g2)
                rhs = log(dist[g2]) + transition_log_prob(omega, g2, g)
                gap = max(gap, abs(lhs - rhs))
    return gap
