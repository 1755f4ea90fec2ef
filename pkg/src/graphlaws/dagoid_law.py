"""Laws over dagoids (Markov equivalence classes of DAGs) and ordered DAG laws."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import inf, log
from typing import Iterator, Mapping, Sequence

import numpy as np
from scipy.special import logsumexp

from .dag import (
    Dag,
    Dagoid,
    _positions,
    d_clique_vector,
    dagoid_complete_on,
    dagoid_of,
    enumerate_dags,
    enumerate_ordered_dags,
    induced_subdagoid,
    insert_dagoid,
    is_ancestral_in_dagoid,
    remainder_dagoid,
)
from .errors import CapExceeded, IncompleteSupport, InvalidInput, NotStructurallyMarkov, OutOfSupport
from .subsets import SubsetVector, close, full, members, size, submasks


def _key(dg: Dagoid):
    return dg.canonical()


@lru_cache(maxsize=8)
def _dagoid_table(n: int) -> tuple[tuple[Dagoid, int], ...]:
    counts: dict[Dagoid, int] = {}
    for d in enumerate_dags(n):
        dg = dagoid_of(d)
        counts[dg] = counts.get(dg, 0) + 1
    return tuple(sorted(counts.items(), key=lambda kv: _key(kv[0])))


def enumerate_dagoids(n: int) -> list[tuple[Dagoid, int]]:
    """Every dagoid on ``n`` vertices with its number of member DAGs."""
    if n > 5:
        raise CapExceeded(f"dagoid enumeration over {n} vertices exceeds cap 5")
    return list(_dagoid_table(n))


def class_size(dg: Dagoid) -> int:
    return dict(_dagoid_table(dg.n))[dg]


# -- laws ----------------------------------------------------------------------

class DagoidLaw:
    n: int

    def logpdf(self, dg: Dagoid) -> float:
        raise NotImplementedError

    def support(self) -> list[Dagoid]:
        raise NotImplementedError

    def log_density(self, dg: Dagoid) -> float:
        if dg.n != self.n or dg.vertices != full(self.n):
            raise OutOfSupport(f"{dg!r} is not a dagoid on the law's vertex set")
        value = self.logpdf(dg)
        if value == -inf:
            raise OutOfSupport(f"{dg!r} is outside the support")
        return value


dagoid_log_density = DagoidLaw.log_density


class ExponentialDagoidLaw(DagoidLaw):
    """``π(D) ∝ exp(ω · t(D))`` with ``t`` the d-clique vector."""

    kind = "exponential"

    def __init__(self, omega: SubsetVector):
        for k, v in omega.items():
            if not np.isfinite(v):
                raise InvalidInput(f"omega is not finite at subset {members(k)}")
        self.omega = omega
        self.n = omega.n
        self._cache: dict[Dagoid, float] = {}

    def logpdf(self, dg: Dagoid) -> float:
        value = self._cache.get(dg)
        if value is None:
            value = self._cache[dg] = float(self.omega.dot(d_clique_vector(dg)))
        return value

    def support(self) -> list[Dagoid]:
        return [dg for dg, _ in enumerate_dagoids(self.n)]


class TableDagoidLaw(DagoidLaw):
    kind = "table"

    def __init__(self, entries: Mapping[Dagoid, float], normalize: bool = False):
        finite = {dg: float(lp) for dg, lp in entries.items() if lp > -inf}
        if not finite:
            raise InvalidInput("a table law needs at least one dagoid with positive probability")
        self.n = next(iter(finite)).n
        total = logsumexp(list(finite.values()))
        if normalize:
            finite = {dg: lp - total for dg, lp in finite.items()}
        elif abs(np.expm1(total)) > 1e-12:
            raise InvalidInput(f"table probabilities sum to {np.exp(total)!r}, not 1")
        self.entries = dict(sorted(finite.items(), key=lambda kv: _key(kv[0])))

    def logpdf(self, dg: Dagoid) -> float:
        return self.entries.get(dg, -inf)

    def support(self) -> list[Dagoid]:
        return list(self.entries)


def to_dagoid_table(law: DagoidLaw) -> TableDagoidLaw:
    if isinstance(law, TableDagoidLaw):
        return law
    return TableDagoidLaw({dg: law.logpdf(dg) for dg in law.support()}, normalize=True)


def class_size_law(n: int) -> TableDagoidLaw:
    """Each dagoid weighted by its number of member DAGs (uniform over DAGs)."""
    return TableDagoidLaw({dg: log(c) for dg, c in enumerate_dagoids(n)}, normalize=True)


def edge_count_dagoid_omega(n: int, rho: float) -> SubsetVector:
    """``ω_A = C(|A|,2) log ρ`` so that ``π(D) ∝ ρ^{e(D)}``."""
    return SubsetVector.from_function(n, lambda a: size(a) * (size(a) - 1) // 2 * log(rho))


# -- structural Markov verification ---------------------------------------------

@dataclass(frozen=True)
class DagoidWitness:
    """``lhs = log π(D) + log π(D')``; ``rhs`` sums the two recombined classes."""

    a: int
    d: Dagoid
    d2: Dagoid
    cross: tuple[Dagoid, Dagoid]
    lhs: float
    rhs: float


def dagoid_structural_markov_witnesses(law: DagoidLaw, rel_tol: float = 1e-9) -> Iterator[DagoidWitness]:
    """Violations of ``π(D)π(D') = π(D_A ⋉ D'_{V|A}) π(D'_A ⋉ D_{V|A})``.

    Vertex sets ``A`` are visited in ascending mask order; the trivial sets
    ``∅`` and ``V`` are skipped.
    """
    n = law.n
    if n > 4:
        raise CapExceeded(f"dagoid verification over {n} vertices exceeds cap 4")
    support = sorted(law.support(), key=_key)
    logp = {dg: law.logpdf(dg) for dg in support}
    v_all = full(n)
    for a in submasks(v_all):
        if a in (0, v_all):
            continue
        inside = [dg for dg in support if logp[dg] > -inf and is_ancestral_in_dagoid(dg, a)]
        heads = [induced_subdagoid(dg, a) for dg in inside]
        tails = [remainder_dagoid(dg, a) for dg in inside]
        for i, d in enumerate(inside):
            for j in range(i + 1, len(inside)):
                d2 = inside[j]
                c1 = insert_dagoid(heads[i], tails[j])
                c2 = insert_dagoid(heads[j], tails[i])
                lhs = logp[d] + logp[d2]
                rhs = law.logpdf(c1) + law.logpdf(c2)
                if not close(lhs, rhs, rel_tol):
                    yield DagoidWitness(a, d, d2, (c1, c2), lhs, rhs)


def check_dagoid_structural_markov(law: DagoidLaw, rel_tol: float = 1e-9) -> DagoidWitness | None:
    return next(dagoid_structural_markov_witnesses(law, rel_tol), None)


def recover_dagoid_omega(law: DagoidLaw, tol: float = 1e-9) -> SubsetVector:
    """``ω_A = log π(D^(A))`` for a full-support structurally Markov dagoid law."""
    table = to_dagoid_table(law)
    n = table.n
    if len(table.entries) != len(enumerate_dagoids(n)):
        raise IncompleteSupport("law does not charge every dagoid")
    witness = check_dagoid_structural_markov(table)
    if witness is not None:
        raise NotStructurallyMarkov("ancestral cross-product identity fails", A=members(witness.a))
    omega = SubsetVector(n, {a: table.logpdf(dagoid_complete_on(n, a)) for a in submasks(full(n))})
    for dg in table.support():
        if abs(omega.dot(d_clique_vector(dg)) - table.logpdf(dg)) > tol:
            raise NotStructurallyMarkov(f"recovered parameter does not reproduce the law at {dg!r}")
    return omega


# -- ordered laws ----------------------------------------------------------------

class OrderedLaw:
    """Law on DAGs compatible with a fixed order, factorised over parent sets.

    ``weights[v]`` maps parent-set masks (subsets of the predecessors of
    ``v``) to log-weights; missing parent sets get log-weight 0.
    """

    def __init__(self, order: Sequence[int], weights: Sequence[Mapping[int, float]] | None = None):
        self.order = tuple(order)
        self.n = len(self.order)
        if sorted(self.order) != list(range(self.n)):
            raise InvalidInput("order must be a permutation of 0..n-1")
        self.pred = {}
        seen = 0
        for v in self.order:
            self.pred[v] = seen
            seen |= 1 << v
        weights = [{} for _ in range(self.n)] if weights is None else [dict(w) for w in weights]
        for v in range(self.n):
            for pa in weights[v]:
                if pa & ~self.pred[v]:
                    raise InvalidInput(f"parent set {members(pa)} of {v} is not among its predecessors")
        self.weights = weights
        self.log_norm = [
            float(logsumexp([self.weight(v, pa) for pa in submasks(self.pred[v])])) for v in range(self.n)
        ]

    @classmethod
    def from_edge_log_odds(cls, order: Sequence[int], log_odds) -> "OrderedLaw":
        lo = np.asarray(log_odds, dtype=float)
        n = len(order)
        law = cls(order)
        weights = [{pa: float(sum(lo[u, v] for u in members(pa))) for pa in submasks(law.pred[v])} for v in range(n)]
        return cls(order, weights)

    def weight(self, v: int, pa: int) -> float:
        return self.weights[v].get(pa, 0.0)

    def parent_log_prob(self, v: int, pa: int) -> float:
        return self.weight(v, pa) - self.log_norm[v]


def ordered_law_density(law: OrderedLaw, d: Dag) -> float:
    _positions(law.order, d)
    return sum(law.parent_log_prob(v, d.parents[v]) for v in range(law.n))


@dataclass(frozen=True)
class OrderedWitness:
    vertex: int
    parents: int
    predecessors: Dag
    joint: float
    product: float


def check_ordered_independence(law: OrderedLaw, tol: float = 1e-12) -> OrderedWitness | None:
    """Exhaustively verify that, for every vertex, the parent set is
    independent of the graph induced on its predecessors.  ``None`` if so."""
    if law.n > 5:
        raise CapExceeded(f"ordered verification over {law.n} vertices exceeds cap 5")
    dags = list(enumerate_ordered_dags(law.n, law.order))
    probs = np.exp([ordered_law_density(law, d) for d in dags])
    for v in range(law.n):
        pred = law.pred[v]
        joint: dict[tuple, float] = {}
        pa_m: dict[int, float] = {}
        ind_m: dict[Dag, float] = {}
        for d, p in zip(dags, probs):
            h = d.induced(pred)
            pa = d.parents[v]
            joint[(pa, h)] = joint.get((pa, h), 0.0) + p
            pa_m[pa] = pa_m.get(pa, 0.0) + p
            ind_m[h] = ind_m.get(h, 0.0) + p
        for (pa, h), p in joint.items():
            if abs(p - pa_m[pa] * ind_m[h]) > tol:
                return OrderedWitness(v, pa, h, p, pa_m[pa] * ind_m[h])
    return None


def ordered_parent_marginal(law: OrderedLaw, v: int) -> dict[int, float]:
    """Marginal law of ``pa(v)`` by exhaustive summation over ordered DAGs."""
    out: dict[int, float] = {}
    for d in enumerate_ordered_dags(law.n, law.order):
        out[d.parents[v]] = out.get(d.parents[v], 0.0) + np.exp(ordered_law_density(law, d))
    return out
