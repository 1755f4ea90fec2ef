"""Undirected graphs on bit-mask vertex sets and the decomposable-graph kernel.

Graphs carry their own vertex set, a subset of ``{0, ..., n-1}``.  An induced
subgraph ``G_A`` keeps the original vertex labels, so vectors computed from it
are automatically zero-expanded into the lattice of the parent graph.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from . import config
from .errors import CapExceeded, IncompatibleIntersection, InvalidInput, NotDecomposable
from .subsets import check_width, full, members, submasks, vset


@lru_cache(maxsize=None)
def vertex_pairs(vertices: int) -> tuple[tuple[int, int], ...]:
    """Unordered pairs ``(u, v)``, ``u < v``, in lexicographic order.

    Bit ``i`` of an edge mask refers to the ``i``-th pair of this list.
    """
    vs = members(vertices)
    return tuple((u, v) for i, u in enumerate(vs) for v in vs[i + 1:])


@dataclass(frozen=True)
class UGraph:
    n: int
    adj: tuple[int, ...]
    vertices: int

    def __post_init__(self):
        if len(self.adj) != self.n:
            raise InvalidInput(f"adjacency has {len(self.adj)} rows for n={self.n}")
        for v, nb in enumerate(self.adj):
            if nb & ~self.vertices or (nb and not self.vertices >> v & 1):
                raise InvalidInput(f"edge at vertex {v} leaves the vertex set")
            if nb >> v & 1:
                raise InvalidInput(f"self-loop at vertex {v}")
            for u in members(nb):
                if not self.adj[u] >> v & 1:
                    raise InvalidInput(f"asymmetric adjacency between {u} and {v}")

    # -- constructors -----------------------------------------------------
    @classmethod
    def from_edges(cls, n: int, edges, vertices: int | None = None) -> "UGraph":
        check_width(n)
        vertices = full(n) if vertices is None else vertices
        adj = [0] * n
        for u, v in edges:
            if u == v:
                raise InvalidInput(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidInput(f"edge ({u},{v}) outside 0..{n - 1}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj), vertices)

    @classmethod
    def empty(cls, n: int, vertices: int | None = None) -> "UGraph":
        check_width(n)
        return cls(n, (0,) * n, full(n) if vertices is None else vertices)

    @classmethod
    def complete(cls, n: int, vertices: int | None = None) -> "UGraph":
        check_width(n)
        vertices = full(n) if vertices is None else vertices
        adj = tuple((vertices & ~(1 << v)) if vertices >> v & 1 else 0 for v in range(n))
        return cls(n, adj, vertices)

    @classmethod
    def from_edge_mask(cls, n: int, mask: int, vertices: int | None = None) -> "UGraph":
        vertices = full(n) if vertices is None else vertices
        adj = [0] * n
        for i, (u, v) in enumerate(vertex_pairs(vertices)):
            if mask >> i & 1:
                adj[u] |= 1 << v
                adj[v] |= 1 << u
        return cls(n, tuple(adj), vertices)

    # -- queries ----------------------------------------------------------
    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in members(self.vertices) for v in members(self.adj[u]) if u < v]

    @property
    def num_edges(self) -> int:
        return sum(nb.bit_count() for nb in self.adj) // 2

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def edge_mask(self) -> int:
        mask = 0
        for i, (u, v) in enumerate(vertex_pairs(self.vertices)):
            if self.adj[u] >> v & 1:
                mask |= 1 << i
        return mask

    def canonical(self) -> tuple[tuple[int, int], ...]:
        """Sorted edge list; the hashing and tie-breaking key."""
        return tuple(self.edges())

    def is_complete_on(self, subset: int) -> bool:
        for v in members(subset):
            if (subset & ~(1 << v)) & ~self.adj[v]:
                return False
        return True

    def is_complete(self) -> bool:
        return self.is_complete_on(self.vertices)

    def induced(self, subset: int) -> "UGraph":
        if subset & ~self.vertices:
            raise InvalidInput("induced subgraph on vertices outside the graph")
        adj = tuple((nb & subset) if subset >> v & 1 else 0 for v, nb in enumerate(self.adj))
        return UGraph(self.n, adj, subset)

    def toggle(self, u: int, v: int) -> "UGraph":
        adj = list(self.adj)
        adj[u] ^= 1 << v
        adj[v] ^= 1 << u
        return UGraph(self.n, tuple(adj), self.vertices)

    def reach(self, start: int, allowed: int) -> int:
        """Vertices reachable from ``start`` by paths inside ``allowed``."""
        seen = start & allowed
        frontier = seen
        while frontier:
            nxt = 0
            for v in members(frontier):
                nxt |= self.adj[v]
            nxt &= allowed & ~seen
            seen |= nxt
            frontier = nxt
        return seen

    def components(self, subset: int | None = None) -> list[int]:
        """Connected components of the subgraph induced by ``subset``."""
        rest = self.vertices if subset is None else subset
        out = []
        while rest:
            comp = self.reach(rest & -rest, rest)
            out.append(comp)
            rest &= ~comp
        return out

    def separates(self, a: int, b: int, s: int) -> bool:
        """True iff every path from ``a`` to ``b`` meets ``s``."""
        start = a & ~s
        if start & b:
            return False
        return not self.reach(start, self.vertices & ~s) & b

    def boundary(self, subset: int) -> int:
        out = 0
        for v in members(subset):
            out |= self.adj[v]
        return out & ~subset

    def __repr__(self) -> str:
        vs = "" if self.vertices == full(self.n) else f", vertices={members(self.vertices)}"
        return f"UGraph(n={self.n}, edges={self.edges()}{vs})"


# -- chordality ---------------------------------------------------------------

def mcs_order(g: UGraph, priority: Sequence[int] | None = None) -> list[int]:
    """Maximum cardinality search visiting order.

    Ties are broken by ``priority`` (a ranking of vertices, lowest first); by
    default the lowest vertex index wins.
    """
    rank = list(range(g.n)) if priority is None else _ranks(priority, g.n)
    weight = [0] * g.n
    unvisited = g.vertices
    order = []
    while unvisited:
        best = -1
        for v in members(unvisited):
            if best < 0 or weight[v] > weight[best] or (weight[v] == weight[best] and rank[v] < rank[best]):
                best = v
        order.append(best)
        unvisited &= ~(1 << best)
        for u in members(g.adj[best] & unvisited):
            weight[u] += 1
    return order


def _ranks(priority: Sequence[int], n: int) -> list[int]:
    rank = [n] * n
    for i, v in enumerate(priority):
        rank[v] = i
    return rank


def _earlier_neighbours(g: UGraph, order: list[int]) -> list[int]:
    seen = 0
    out = []
    for v in order:
        out.append(g.adj[v] & seen)
        seen |= 1 << v
    return out


@lru_cache(maxsize=1 << 16)
def _is_chordal(g: UGraph) -> bool:
    order = mcs_order(g)
    for earlier in _earlier_neighbours(g, order):
        if not g.is_complete_on(earlier):
            return False
    return True


def is_chordal(g: UGraph) -> bool:
    """Chordality by maximum cardinality search.

    The MCS order is a reverse perfect elimination order iff the graph is
    chordal, so it suffices to check that every vertex's previously visited
    neighbours form a clique.
    """
    return _is_chordal(g)


is_decomposable = is_chordal


@dataclass(frozen=True)
class JunctionTree:
    cliques: tuple[int, ...]
    separators: tuple[tuple[int, int], ...]

    def multiplicity(self, s: int) -> int:
        return dict(self.separators).get(s, 0)

    def separator_sequence(self) -> list[int]:
        """``S_j = C_j ∩ (C_1 ∪ ... ∪ C_{j-1})`` for ``j >= 2``."""
        out, seen = [], 0
        for i, c in enumerate(self.cliques):
            if i:
                out.append(c & seen)
            seen |= c
        return out


def junction_tree(g: UGraph, priority: Sequence[int] | None = None) -> JunctionTree:
    """Cliques in a perfect ordering, with separators and multiplicities.

    Cliques are ordered by the MCS step at which they are completed, which
    gives the running-intersection property.  Disconnected graphs produce the
    empty separator once per extra component.
    """
    if not is_chordal(g):
        raise NotDecomposable(f"{g!r} is not chordal")
    if g.vertices == 0:
        return JunctionTree((0,), ())
    order = mcs_order(g, priority)
    candidates = [p | (1 << v) for v, p in zip(order, _earlier_neighbours(g, order))]
    cliques = []
    for i, k in enumerate(candidates):
        nxt = candidates[i + 1] if i + 1 < len(candidates) else None
        # a candidate is maximal unless the next step extends it
        if nxt is None or k & ~nxt:
            cliques.append(k)
    counts: dict[int, int] = {}
    order_seen: list[int] = []
    seen = 0
    for i, c in enumerate(cliques):
        if i:
            s = c & seen
            if s not in counts:
                order_seen.append(s)
            counts[s] = counts.get(s, 0) + 1
        seen |= c
    return JunctionTree(tuple(cliques), tuple((s, counts[s]) for s in order_seen))


def has_running_intersection(cliques: Sequence[int]) -> bool:
    seen = 0
    for j, c in enumerate(cliques):
        if j:
            s = c & seen
            if not any(s & ~cliques[k] == 0 for k in range(j)):
                return False
        seen |= c
    return True


# -- decompositions and products ---------------------------------------------

def decomposition_reason(g: UGraph, a: int, b: int) -> str | None:
    """``None`` if ``(a, b)`` decomposes ``g``, else a reason code."""
    if a | b != g.vertices or (a | b) & ~g.vertices:
        return "NotCovering"
    s = a & b
    if not g.is_complete_on(s):
        return "IntersectionIncomplete"
    if not g.separates(a & ~b, b & ~a, s):
        return "NotSeparated"
    return None


def is_decomposition(g: UGraph, a: int, b: int) -> bool:
    return decomposition_reason(g, a, b) is None


def graph_product(h: UGraph, j: UGraph) -> UGraph:
    """Graph product of ``h`` (on A) and ``j`` (on B): the edge union on A ∪ B."""
    if h.n != j.n:
        raise InvalidInput("graph product of graphs with different label ranges")
    s = h.vertices & j.vertices
    if not (h.is_complete_on(s) and j.is_complete_on(s)):
        raise IncompatibleIntersection("restriction to A ∩ B is not complete in both factors")
    for factor in (h, j):
        if not is_chordal(factor):
            raise NotDecomposable(f"factor {factor!r} is not decomposable")
    adj = tuple(x | y for x, y in zip(h.adj, j.adj))
    return UGraph(h.n, adj, h.vertices | j.vertices)


def is_collapsible(g: UGraph, a: int) -> bool:
    for comp in g.components(g.vertices & ~a):
        if not g.is_complete_on(g.boundary(comp)):
            return False
    return True


def covering_pairs(vertices: int, proper: bool = False) -> Iterator[tuple[int, int]]:
    """Ordered covering pairs ``(A, B)`` with ``A ∪ B = vertices``.

    With ``proper=True`` nested pairs (``A ⊆ B`` or ``B ⊆ A``) are skipped and
    each unordered pair is produced once, with ``A < B`` numerically.
    """
    for a in submasks(vertices):
        for extra in submasks(a):
            b = (vertices & ~a) | extra
            if proper and (a & ~b == 0 or b & ~a == 0 or a > b):
                continue
            yield a, b


# -- enumeration and neighbourhoods ------------------------------------------

def enumerate_graphs(n: int, vertices: int | None = None) -> Iterator[UGraph]:
    vertices = full(n) if vertices is None else vertices
    m = len(vertex_pairs(vertices))
    for mask in range(1 << m):
        yield UGraph.from_edge_mask(n, mask, vertices)


def enumerate_decomposable(n: int, vertices: int | None = None, cap: int | None = None) -> Iterator[UGraph]:
    """Every decomposable graph on the vertex set, in ascending edge-mask order."""
    cap = config.MAX_ENUMERATE if cap is None else cap
    vertices = full(n) if vertices is None else vertices
    if vertices.bit_count() > cap:
        raise CapExceeded(f"enumeration over {vertices.bit_count()} vertices exceeds cap {cap}", n=n)
    for g in enumerate_graphs(n, vertices):
        if is_chordal(g):
            yield g


def decomposable_neighbors(g: UGraph) -> list[tuple[tuple[int, int], UGraph]]:
    """Single-edge toggles of ``g`` that stay decomposable."""
    if not is_chordal(g):
        raise NotDecomposable(f"{g!r} is not chordal")
    out = []
    for u, v in vertex_pairs(g.vertices):
        h = g.toggle(u, v)
        if is_chordal(h):
            out.append(((u, v), h))
    return out


def graph_complete_on(n: int, subset: int, vertices: int | None = None) -> UGraph:
    """Complete on ``subset`` and sparse elsewhere."""
    vertices = full(n) if vertices is None else vertices
    adj = tuple((subset & ~(1 << v)) if subset >> v & 1 else 0 for v in range(n))
    return UGraph(n, adj, vertices)


def parse_vertex_list(vs) -> int:
    return vset(vs)
