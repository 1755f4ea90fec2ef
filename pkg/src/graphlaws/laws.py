"""Laws over undirected decomposable graphs.

Two kinds of law are supported: the clique exponential family, with density
proportional to ``exp(ω · t(G))``, and explicit tables of log-probabilities.
All arithmetic is in log space.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb, inf, log
from typing import Iterable, Iterator, Mapping

import numpy as np
from scipy.special import logsumexp

from . import config
from .cliques import clique_vector
from .errors import (
    CapExceeded,
    IncompleteSupport,
    InvalidInput,
    NotDecomposable,
    NotStructurallyMarkov,
    OutOfSupport,
    UnknownLaw,
    ZeroMassEvent,
)
from .subsets import SubsetVector, close, full, members, size, submasks
from .ugraph import (
    UGraph,
    covering_pairs,
    enumerate_decomposable,
    graph_complete_on,
    is_chordal,
    is_decomposition,
    junction_tree,
)


def _product(h: UGraph, j: UGraph) -> UGraph:
    # unchecked graph product; callers guarantee a decomposition context
    return UGraph(h.n, tuple(x | y for x, y in zip(h.adj, j.adj)), h.vertices | j.vertices)


def _sort_key(g: UGraph):
    return g.edge_mask()


# -- families ----------------------------------------------------------------

class GraphFamily:
    """Explicit family of decomposable graphs sharing one vertex set."""

    def __init__(self, graphs: Iterable[UGraph], n: int | None = None, vertices: int | None = None):
        graphs = sorted(set(graphs), key=_sort_key)
        if n is None:
            if not graphs:
                raise InvalidInput("an empty family needs an explicit n")
            n = graphs[0].n
        vertices = (graphs[0].vertices if graphs else full(n)) if vertices is None else vertices
        for g in graphs:
            if g.n != n or g.vertices != vertices:
                raise InvalidInput("family members must share one vertex set")
            if not is_chordal(g):
                raise NotDecomposable(f"family member {g!r} is not decomposable")
        self.n = n
        self.vertices = vertices
        self.graphs = tuple(graphs)
        self._set = frozenset(graphs)

    def __contains__(self, g) -> bool:
        return g in self._set

    def __iter__(self):
        return iter(self.graphs)

    def __len__(self) -> int:
        return len(self.graphs)

    @classmethod
    def all_decomposable(cls, n: int, vertices: int | None = None) -> "GraphFamily":
        return cls(enumerate_decomposable(n, vertices), n, full(n) if vertices is None else vertices)

    @classmethod
    def bounded(cls, n: int, max_clique: int, min_separator: int = 0) -> "GraphFamily":
        """Clique sizes at most ``max_clique`` and separator sizes at least ``min_separator``."""
        keep = []
        for g in enumerate_decomposable(n):
            jt = junction_tree(g)
            if max(size(c) for c in jt.cliques) <= max_clique and all(
                size(s) >= min_separator for s, _ in jt.separators
            ):
                keep.append(g)
        return cls(keep, n, full(n))

    @classmethod
    def forests(cls, n: int) -> "GraphFamily":
        return cls.bounded(n, 2, 0)

    @classmethod
    def trees(cls, n: int) -> "GraphFamily":
        return cls.bounded(n, 2, 1)

    @classmethod
    def sandwich(cls, lower: UGraph, upper: UGraph) -> "GraphFamily":
        lo, hi = lower.edge_mask(), upper.edge_mask()
        if lo & ~hi:
            raise InvalidInput("lower graph must be a subgraph of the upper graph")
        keep = [g for g in enumerate_decomposable(lower.n, lower.vertices) if lo & ~g.edge_mask() == 0 and g.edge_mask() & ~hi == 0]
        return cls(keep, lower.n, lower.vertices)


# -- laws ----------------------------------------------------------------------

class GraphLaw:
    n: int
    vertices: int

    def logpdf(self, g: UGraph) -> float:
        """Log-density, ``-inf`` off the support (unnormalised for exponential laws)."""
        raise NotImplementedError

    def support(self) -> list[UGraph]:
        raise NotImplementedError

    def in_support(self, g: UGraph) -> bool:
        return self.logpdf(g) > -inf

    def log_density(self, g: UGraph) -> float:
        if g.n != self.n or g.vertices != self.vertices or not is_chordal(g):
            raise OutOfSupport(f"{g!r} is not a decomposable graph on the law's vertex set")
        value = self.logpdf(g)
        if value == -inf:
            raise OutOfSupport(f"{g!r} is outside the support")
        return value


class ExponentialLaw(GraphLaw):
    """Clique exponential family member ``π(G) ∝ exp(ω · t(G))``.

    ``family`` optionally restricts the support to an explicit graph family.
    """

    kind = "exponential"

    def __init__(self, omega: SubsetVector, vertices: int | None = None, family: GraphFamily | None = None):
        for k, v in omega.items():
            if not np.isfinite(v):
                raise InvalidInput(f"omega is not finite at subset {members(k)}")
        self.omega = omega
        self.n = omega.n
        self.vertices = full(self.n) if vertices is None else vertices
        self.family = family
        self._cache: dict[UGraph, float] = {}

    def logpdf(self, g: UGraph) -> float:
        value = self._cache.get(g)
        if value is None:
            if self.family is not None and g not in self.family:
                value = -inf
            else:
                value = float(self.omega.dot(clique_vector(g)))
            self._cache[g] = value
        return value

    def support(self) -> list[UGraph]:
        if self.family is not None:
            return list(self.family)
        return list(enumerate_decomposable(self.n, self.vertices))


class TableLaw(GraphLaw):
    """Explicit law: ``entries`` maps graphs to log-probabilities."""

    kind = "table"

    def __init__(self, entries: Mapping[UGraph, float], normalize: bool = False, n: int | None = None,
                 vertices: int | None = None):
        finite = {g: float(lp) for g, lp in entries.items() if lp > -inf}
        if not finite:
            raise InvalidInput("a table law needs at least one graph with positive probability")
        first = next(iter(finite))
        self.n = first.n if n is None else n
        self.vertices = first.vertices if vertices is None else vertices
        for g in finite:
            if g.n != self.n or g.vertices != self.vertices:
                raise InvalidInput("table entries must share one vertex set")
            if not is_chordal(g):
                raise NotDecomposable(f"table entry {g!r} is not decomposable")
        total = logsumexp(list(finite.values()))
        if normalize:
            finite = {g: lp - total for g, lp in finite.items()}
        elif abs(np.expm1(total)) > 1e-12:
            raise InvalidInput(f"table probabilities sum to {np.exp(total)!r}, not 1")
        self.entries = dict(sorted(finite.items(), key=lambda kv: _sort_key(kv[0])))

    def logpdf(self, g: UGraph) -> float:
        return self.entries.get(g, -inf)

    def support(self) -> list[UGraph]:
        return list(self.entries)


def log_normalizer(law: GraphLaw, cap: int | None = None) -> float:
    """``log Z`` by exhaustive summation over the support."""
    cap = config.MAX_ENUMERATE if cap is None else cap
    if law.vertices.bit_count() > cap:
        raise CapExceeded(f"exhaustive normalisation over {law.vertices.bit_count()} vertices exceeds cap {cap}")
    return float(logsumexp([law.logpdf(g) for g in law.support()]))


normalize = log_normalizer


def to_table(law: GraphLaw) -> TableLaw:
    if isinstance(law, TableLaw):
        return law
    return TableLaw({g: law.logpdf(g) for g in law.support()}, normalize=True, n=law.n, vertices=law.vertices)


def standardize_omega(omega: SubsetVector, n: int | None = None) -> SubsetVector:
    """Identifiable representative: ``ω*_A = ω_A + (|A|-1) ω_∅ - sum_{v∈A} ω_{v}``.

    Zero on the empty set and on singletons; leaves every log-density
    difference unchanged.
    """
    n = omega.n if n is None else n
    base = omega[0]
    singles = [omega[1 << v] for v in range(n)]

    def value(a: int) -> float:
        return omega[a] + (size(a) - 1) * base - sum(singles[v] for v in members(a))

    return SubsetVector.from_function(n, value)


# -- built-in laws -----------------------------------------------------------------

def _logit(p: float) -> float:
    if not 0 < p < 1:
        raise InvalidInput(f"probability {p} must lie strictly between 0 and 1")
    return log(p / (1 - p))


def edge_bernoulli_omega(n: int, psi: float) -> SubsetVector:
    lo = _logit(psi)
    return SubsetVector.from_function(n, lambda a: comb(size(a), 2) * lo)


def per_edge_bernoulli_omega(n: int, psi) -> SubsetVector:
    """``psi`` maps edges ``(u, v)`` to inclusion probabilities, or is an ``n x n`` matrix."""
    if isinstance(psi, Mapping):
        lookup = {tuple(sorted(k)): _logit(p) for k, p in psi.items()}
    else:
        mat = np.asarray(psi, dtype=float)
        lookup = {(u, v): _logit(mat[u, v]) for u in range(n) for v in range(u + 1, n)}

    def value(a: int) -> float:
        vs = members(a)
        return sum(lookup[(u, v)] for i, u in enumerate(vs) for v in vs[i + 1:])

    return SubsetVector.from_function(n, value)


def forest_penalty_omega(n: int, rho: float, kappa: float) -> SubsetVector:
    return SubsetVector.from_function(n, lambda a: comb(size(a), 2) * rho - kappa * max(0, size(a) - 2))


def armstrong_law(n: int) -> TableLaw:
    """Uniform over the edge count, then uniform among graphs with that count."""
    by_count: dict[int, list[UGraph]] = {}
    for g in enumerate_decomposable(n):
        by_count.setdefault(g.num_edges, []).append(g)
    levels = comb(n, 2) + 1
    entries = {}
    for graphs in by_count.values():
        for g in graphs:
            entries[g] = -log(levels) - log(len(graphs))
    return TableLaw(entries)


BUILTIN_LAWS = ("uniform", "edge-bernoulli", "per-edge-bernoulli", "forest-penalty", "armstrong")


def builtin_law(name: str, params: Mapping | None = None, n: int = 3) -> GraphLaw:
    params = dict(params or {})
    if name == "uniform":
        return ExponentialLaw(SubsetVector.zeros(n))
    if name == "edge-bernoulli":
        return ExponentialLaw(edge_bernoulli_omega(n, float(params.get("psi", 0.5))))
    if name == "per-edge-bernoulli":
        if "psi" not in params:
            raise InvalidInput("per-edge-bernoulli needs a 'psi' matrix or edge map")
        return ExponentialLaw(per_edge_bernoulli_omega(n, params["psi"]))
    if name == "forest-penalty":
        return ExponentialLaw(forest_penalty_omega(n, float(params.get("rho", 0.0)), float(params.get("kappa", 1.0))))
    if name == "armstrong":
        return armstrong_law(n)
    raise UnknownLaw(f"unknown law {name!r}; choose from {', '.join(BUILTIN_LAWS)}", name=name)


# -- structural Markov verification ---------------------------------------------

@dataclass(frozen=True)
class Witness:
    """A covering pair and two graphs violating the cross-product identity.

    ``lhs`` is ``log π(G) + log π(G')``; ``rhs`` is the log of the product of
    the densities of the two recombined graphs.
    """

    a: int
    b: int
    g: UGraph
    g2: UGraph
    lhs: float
    rhs: float

    @property
    def recombined(self) -> tuple[UGraph, UGraph]:
        return (_product(self.g.induced(self.a), self.g2.induced(self.b)),
                _product(self.g2.induced(self.a), self.g.induced(self.b)))


def _check_cap(vertices: int, cap: int = 5) -> None:
    if vertices.bit_count() > cap:
        raise CapExceeded(f"exhaustive verification over {vertices.bit_count()} vertices exceeds cap {cap}")


def structural_markov_witnesses(law: GraphLaw, rel_tol: float = 1e-9) -> Iterator[Witness]:
    """Every violation of the cross-product identity, in deterministic order.

    Covering pairs are visited in ascending ``(A, B)`` order (nested pairs are
    trivially satisfied and skipped), graph pairs in ascending edge-mask order.
    """
    _check_cap(law.vertices)
    support = sorted(law.support(), key=_sort_key)
    logp = {g: law.logpdf(g) for g in support}

    def lp(g: UGraph) -> float:
        value = logp.get(g)
        return law.logpdf(g) if value is None else value

    for a, b in covering_pairs(law.vertices, proper=True):
        inside = [g for g in support if logp[g] > -inf and is_decomposition(g, a, b)]
        parts = [(g.induced(a), g.induced(b)) for g in inside]
        for i, g in enumerate(inside):
            ga, gb = parts[i]
            for j in range(i + 1, len(inside)):
                g2 = inside[j]
                ga2, gb2 = parts[j]
                lhs = logp[g] + logp[g2]
                rhs = lp(_product(ga, gb2)) + lp(_product(ga2, gb))
                if not close(lhs, rhs, rel_tol):
                    yield Witness(a, b, g, g2, lhs, rhs)


def check_structural_markov(law: GraphLaw, rel_tol: float = 1e-9) -> Witness | None:
    """``None`` if the law is structurally Markov, else the first witness."""
    return next(structural_markov_witnesses(law, rel_tol), None)


def recover_omega(law: GraphLaw, support: str = "full", tol: float = 1e-9) -> SubsetVector:
    """Natural parameter ``ω_C = log π(G^(C))`` of a structurally Markov law.

    ``G^(C)`` is complete on ``C`` and sparse elsewhere.  With
    ``support="clique-closed"`` (experimental, not a proven result) the law
    may live on a family containing ``G^(C)`` for every clique and separator
    ``C`` of its members; ``ω`` is then only defined on those sets.
    """
    table = to_table(law)
    n, vertices = table.n, table.vertices
    if support == "full":
        universe = set(enumerate_decomposable(n, vertices))
        if set(table.entries) != universe:
            raise IncompleteSupport("law does not charge every decomposable graph",
                                    missing=len(universe - set(table.entries)))
        witness = check_structural_markov(table)
        if witness is not None:
            raise NotStructurallyMarkov("cross-product identity fails", **witness_json(witness))
        omega = SubsetVector(n, {c: table.logpdf(graph_complete_on(n, c, vertices)) for c in submasks(vertices)})
    elif support == "clique-closed":
        entries = {}
        for g in table.support():
            jt = junction_tree(g)
            for c in list(jt.cliques) + [s for s, _ in jt.separators]:
                value = table.logpdf(graph_complete_on(n, c, vertices))
                if value == -inf:
                    raise IncompleteSupport(f"support lacks the graph complete on {members(c)}")
                entries[c] = value
        omega = SubsetVector(n, entries)
    else:
        raise InvalidInput(f"unknown support option {support!r}")
    for g in table.support():
        if abs(omega.dot(clique_vector(g)) - table.logpdf(g)) > tol:
            raise NotStructurallyMarkov(f"recovered parameter does not reproduce the law at {g!r}")
    return omega


# -- meta Markov families ---------------------------------------------------------

@dataclass(frozen=True)
class MetaWitness:
    a: int
    b: int
    g: UGraph
    g2: UGraph
    product: UGraph


def check_meta_markov(family: GraphFamily) -> MetaWitness | None:
    """``None`` if every product ``G_A ⋈ G'_B`` over a decomposition event stays in the family."""
    _check_cap(family.vertices)
    for a, b in covering_pairs(family.vertices, proper=True):
        inside = [g for g in family if is_decomposition(g, a, b)]
        for g in inside:
            for g2 in inside:
                prod = _product(g.induced(a), g2.induced(b))
                if prod not in family:
                    return MetaWitness(a, b, g, g2, prod)
    return None


# -- conditioning and margins -----------------------------------------------------

def conditional_given_decomposition(law: GraphLaw, a: int, b: int) -> TableLaw:
    """Renormalised restriction of ``law`` to graphs decomposed by ``(a, b)``."""
    _check_cap(law.vertices)
    entries = {g: law.logpdf(g) for g in law.support() if is_decomposition(g, a, b)}
    entries = {g: lp for g, lp in entries.items() if lp > -inf}
    if not entries:
        raise ZeroMassEvent(f"the law gives no mass to decompositions ({members(a)}, {members(b)})")
    return TableLaw(entries, normalize=True, n=law.n, vertices=law.vertices)


def margin(law: GraphLaw, subset: int) -> TableLaw:
    """Law of the induced subgraph on ``subset``."""
    acc: dict[UGraph, list[float]] = {}
    table = to_table(law)
    for g, lp in table.entries.items():
        acc.setdefault(g.induced(subset), []).append(lp)
    return TableLaw({h: float(logsumexp(v)) for h, v in acc.items()}, normalize=True, n=law.n, vertices=subset)


def witness_json(w) -> dict:
    from .io import graph_to_json

    out = {"A": members(w.a), "B": members(w.b), "G": graph_to_json(w.g), "G_prime": graph_to_json(w.g2)}
    if isinstance(w, Witness):
        r1, r2 = w.recombined
        out.update(
            recombined=[graph_to_json(r1), graph_to_json(r2)],
            lhs_log=w.lhs,
            rhs_log=w.rhs,
            lhs=float(np.exp(w.lhs)),
            rhs=float(np.exp(w.rhs)),
        )
    else:
        out["product"] = graph_to_json(w.product)
    return out
