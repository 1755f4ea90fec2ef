"""Completeness and clique vectors of undirected graphs.

The clique vector has two routes that must agree: the junction-tree route
(``+1`` on cliques, ``-multiplicity`` on separators) and the superset Moebius
inverse of the completeness vector.  In debug mode every call computes both.
"""
from __future__ import annotations

from functools import lru_cache

from . import config
from .errors import NotDecomposable, NotDecomposableAfterToggle
from .subsets import SubsetVector, members, mobius_superset_inverse
from .ugraph import UGraph, is_chordal, junction_tree


def complete_subsets(g: UGraph) -> list[int]:
    """Every vertex set inducing a complete subgraph, including the empty set."""
    out = [0]

    def grow(current: int, candidates: int) -> None:
        for v in members(candidates):
            nxt = current | (1 << v)
            out.append(nxt)
            # only extend with higher-indexed common neighbours
            grow(nxt, candidates & g.adj[v] & ~((2 << v) - 1))

    grow(0, g.vertices)
    return out


def completeness_vector(g: UGraph) -> SubsetVector:
    return SubsetVector(g.n, {a: 1 for a in complete_subsets(g)})


def clique_vector_mobius(g: UGraph) -> SubsetVector:
    """Clique vector as the superset Moebius inverse of the completeness vector."""
    return mobius_superset_inverse(completeness_vector(g), g.n)


@lru_cache(maxsize=1 << 16)
def _clique_vector_jt(g: UGraph) -> SubsetVector:
    jt = junction_tree(g)
    entries = {c: 1 for c in jt.cliques}
    for s, nu in jt.separators:
        entries[s] = entries.get(s, 0) - nu
    return SubsetVector(g.n, entries)


def clique_vector(g: UGraph, check: bool | None = None) -> SubsetVector:
    """Clique vector ``t(G)`` of a decomposable graph.

    Raises :class:`NotDecomposable` for non-chordal input.
    """
    if not is_chordal(g):
        raise NotDecomposable(f"{g!r} is not chordal")
    t = _clique_vector_jt(g)
    if config.DEBUG if check is None else check:
        other = clique_vector_mobius(g)
        assert t == other, f"clique vector routes disagree for {g!r}: {t} vs {other}"
    return t


def delta_t(g: UGraph, edge: tuple[int, int]) -> SubsetVector:
    """Sparse change ``t(G') - t(G)`` when ``edge`` is toggled.

    With ``S`` the common neighbourhood of the two endpoints the change is
    ``±[δ(S∪{u,v}) - δ(S∪{u}) - δ(S∪{v}) + δ(S)]``, positive for an added edge.
    """
    u, v = edge
    if not is_chordal(g):
        raise NotDecomposable(f"{g!r} is not chordal")
    if not is_chordal(g.toggle(u, v)):
        raise NotDecomposableAfterToggle(f"toggling {edge} leaves the decomposable graphs", edge=list(edge))
    return _delta_t(g, u, v)


def _delta_t(g: UGraph, u: int, v: int) -> SubsetVector:
    s = g.adj[u] & g.adj[v]
    bu, bv = 1 << u, 1 << v
    sign = -1 if g.adj[u] >> v & 1 else 1
    return SubsetVector(g.n, {s | bu | bv: sign, s | bu: -sign, s | bv: -sign, s: sign})


def dense_delta_t(g: UGraph, edge: tuple[int, int]) -> SubsetVector:
    return clique_vector(g.toggle(*edge)) - clique_vector(g)
