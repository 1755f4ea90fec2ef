"""Directed acyclic graphs, Markov equivalence and dagoids.

A :class:`Dagoid` (Markov equivalence class) is represented canonically by its
skeleton and its immoralities.  The d-clique vector is an independent class
invariant and is used to cross-check equivalence verdicts.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import product
from typing import Iterator, Sequence

from . import config
from .errors import (
    CapExceeded,
    CriteriaDisagree,
    CyclicInput,
    IncompatibleOrder,
    InvalidInput,
    NotAncestral,
    NotAncestralInDagoid,
    NotCovered,
)
from .subsets import SubsetVector, check_width, full, members, submasks, superset_sum
from .ugraph import UGraph, vertex_pairs


@dataclass(frozen=True)
class Dag:
    n: int
    parents: tuple[int, ...]
    vertices: int

    def __post_init__(self):
        if len(self.parents) != self.n:
            raise InvalidInput(f"parent table has {len(self.parents)} rows for n={self.n}")
        for v, pa in enumerate(self.parents):
            if pa >> v & 1:
                raise CyclicInput(f"vertex {v} is its own parent")
            if pa & ~self.vertices or (pa and not self.vertices >> v & 1):
                raise InvalidInput(f"edge into {v} leaves the vertex set")
        if _topological_order(self.parents, self.vertices) is None:
            raise CyclicInput(f"directed graph with edges {self.edges()} has a cycle")

    @classmethod
    def from_edges(cls, n: int, edges, vertices: int | None = None) -> "Dag":
        check_width(n)
        parents = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidInput(f"edge ({u},{v}) outside 0..{n - 1}")
            if u == v:
                raise CyclicInput(f"self-loop at vertex {u}")
            parents[v] |= 1 << u
        return cls(n, tuple(parents), full(n) if vertices is None else vertices)

    @classmethod
    def empty(cls, n: int, vertices: int | None = None) -> "Dag":
        return cls(n, (0,) * n, full(n) if vertices is None else vertices)

    @classmethod
    def complete(cls, n: int, vertices: int | None = None, order: Sequence[int] | None = None) -> "Dag":
        """Complete DAG following ``order`` (ascending vertex index by default)."""
        vertices = full(n) if vertices is None else vertices
        order = members(vertices) if order is None else list(order)
        parents = [0] * n
        seen = 0
        for v in order:
            parents[v] = seen
            seen |= 1 << v
        return cls(n, tuple(parents), vertices)

    def edges(self) -> list[tuple[int, int]]:
        return sorted((u, v) for v in range(self.n) for u in members(self.parents[v]))

    @property
    def num_edges(self) -> int:
        return sum(p.bit_count() for p in self.parents)

    def children(self, v: int) -> int:
        bit = 1 << v
        return sum(1 << w for w in range(self.n) if self.parents[w] & bit)

    def topological_order(self) -> list[int]:
        return _topological_order(self.parents, self.vertices)

    def is_ancestral(self, subset: int) -> bool:
        return all(self.parents[v] & ~subset == 0 for v in members(subset))

    def ancestors(self, subset: int) -> int:
        """Smallest ancestral set containing ``subset``."""
        out = subset
        frontier = subset
        while frontier:
            nxt = 0
            for v in members(frontier):
                nxt |= self.parents[v]
            frontier = nxt & ~out
            out |= frontier
        return out

    def induced(self, subset: int) -> "Dag":
        if subset & ~self.vertices:
            raise InvalidInput("induced subgraph on vertices outside the graph")
        parents = tuple((p & subset) if subset >> v & 1 else 0 for v, p in enumerate(self.parents))
        return Dag(self.n, parents, subset)

    def skeleton(self) -> UGraph:
        adj = [0] * self.n
        for v, pa in enumerate(self.parents):
            adj[v] |= pa
            for u in members(pa):
                adj[u] |= 1 << v
        return UGraph(self.n, tuple(adj), self.vertices)

    def moral_graph(self) -> UGraph:
        adj = list(self.skeleton().adj)
        for pa in self.parents:
            for u in members(pa):
                adj[u] |= pa & ~(1 << u)
        return UGraph(self.n, tuple(adj), self.vertices)

    def is_perfect(self) -> bool:
        """No immoralities: every vertex's parents are pairwise adjacent."""
        return not immoralities(self)

    def with_parents(self, v: int, pa: int) -> "Dag":
        parents = list(self.parents)
        parents[v] = pa
        return Dag(self.n, tuple(parents), self.vertices)

    def __repr__(self) -> str:
        vs = "" if self.vertices == full(self.n) else f", vertices={members(self.vertices)}"
        return f"Dag(n={self.n}, edges={self.edges()}{vs})"


def _topological_order(parents: Sequence[int], vertices: int) -> list[int] | None:
    """Kahn's algorithm, lowest index first; ``None`` if there is a cycle."""
    placed = 0
    order = []
    remaining = vertices
    while remaining:
        ready = [v for v in members(remaining) if parents[v] & ~placed == 0]
        if not ready:
            return None
        v = ready[0]
        order.append(v)
        placed |= 1 << v
        remaining &= ~(1 << v)
    return order


# -- equivalence ---------------------------------------------------------------

def immoralities(d: Dag) -> frozenset[tuple[int, int, int]]:
    """Unshielded colliders ``a -> b <- c`` as triples ``(a, b, c)`` with ``a < c``."""
    out = set()
    for b in members(d.vertices):
        pa = members(d.parents[b])
        for i, a in enumerate(pa):
            for c in pa[i + 1:]:
                if not (d.parents[a] >> c & 1 or d.parents[c] >> a & 1):
                    out.add((a, b, c))
    return frozenset(out)


def skeleton_and_immoralities(d: Dag) -> tuple[UGraph, frozenset[tuple[int, int, int]]]:
    return d.skeleton(), immoralities(d)


@lru_cache(maxsize=1 << 17)
def d_clique_vector_of_dag(d: Dag) -> SubsetVector:
    entries: dict[int, int] = {0: 1}
    for v in members(d.vertices):
        pa = d.parents[v]
        fam = pa | (1 << v)
        entries[fam] = entries.get(fam, 0) + 1
        entries[pa] = entries.get(pa, 0) - 1
    return SubsetVector(d.n, entries)


def d_clique_vector(x) -> SubsetVector:
    """d-clique vector ``sum_v [δ({v} ∪ pa(v)) - δ(pa(v))] + δ(∅)``."""
    if isinstance(x, Dagoid):
        return x.tvec
    return d_clique_vector_of_dag(x)


def d_completeness_vector(x) -> SubsetVector:
    """Superset sums of the d-clique vector."""
    t = d_clique_vector(x)
    return superset_sum(t, t.n)


def d_completeness_by_parents(d: Dag) -> SubsetVector:
    """Completeness from parent sets: nonempty ``A`` is d-complete iff every
    other member of ``A`` is a parent of the last member of ``A`` in a
    topological order.  The empty set is always d-complete."""
    pos = {v: i for i, v in enumerate(d.topological_order())}
    entries = {0: 1}
    for a in submasks(d.vertices):
        if not a:
            continue
        top = max(members(a), key=pos.__getitem__)
        if (a & ~(1 << top)) & ~d.parents[top] == 0:
            entries[a] = 1
    return SubsetVector(d.n, entries)


def standard_imset(d: Dag, check: bool = True) -> SubsetVector:
    """Standard imset ``δ(V) - t(D)``, checked against the explicit sum
    ``δ(V) - δ(∅) + sum_v [δ(pa(v)) - δ(pa(v) ∪ {v})]``."""
    n = d.n
    u = SubsetVector.delta(n, d.vertices) - d_clique_vector(d)
    if check:
        entries = {d.vertices: 1}
        entries[0] = entries.get(0, 0) - 1
        for v in members(d.vertices):
            pa = d.parents[v]
            entries[pa] = entries.get(pa, 0) + 1
            entries[pa | (1 << v)] = entries.get(pa | (1 << v), 0) - 1
        assert u == SubsetVector(n, entries), "standard imset routes disagree"
    return u


def markov_equivalent(d1: Dag, d2: Dag) -> bool:
    """Equivalence by skeleton and immoralities, asserted against d-clique vectors."""
    if d1.n != d2.n or d1.vertices != d2.vertices:
        raise InvalidInput("equivalence test needs graphs on the same vertex set")
    by_structure = skeleton_and_immoralities(d1) == skeleton_and_immoralities(d2)
    by_vector = d_clique_vector(d1) == d_clique_vector(d2)
    if by_structure != by_vector:
        raise CriteriaDisagree(f"criteria disagree for {d1!r} and {d2!r}")
    return by_structure


def covered_edges(d: Dag) -> list[tuple[int, int]]:
    return [(a, b) for a, b in d.edges() if d.parents[b] == d.parents[a] | (1 << a)]


def reverse_covered_edge(d: Dag, edge: tuple[int, int]) -> Dag:
    a, b = edge
    if not (d.parents[b] >> a & 1) or d.parents[b] != d.parents[a] | (1 << a):
        raise NotCovered(f"edge {a}->{b} is not a covered edge of {d!r}", edge=[a, b])
    parents = list(d.parents)
    parents[b] &= ~(1 << a)
    parents[a] |= 1 << b
    return Dag(d.n, tuple(parents), d.vertices)


# -- dagoids -------------------------------------------------------------------

@dataclass(frozen=True)
class Dagoid:
    """Markov equivalence class of DAGs, keyed by skeleton and immoralities."""

    skeleton: UGraph
    immoralities: frozenset
    representative: Dag = field(compare=False, hash=False, repr=False)

    @property
    def n(self) -> int:
        return self.skeleton.n

    @property
    def vertices(self) -> int:
        return self.skeleton.vertices

    @cached_property
    def tvec(self) -> SubsetVector:
        return d_clique_vector_of_dag(self.representative)

    @property
    def num_edges(self) -> int:
        return self.skeleton.num_edges

    def canonical(self) -> tuple:
        return (self.skeleton.canonical(), tuple(sorted(self.immoralities)))

    def __repr__(self) -> str:
        return f"Dagoid(skeleton={self.skeleton.edges()}, immoralities={sorted(self.immoralities)})"


def dagoid_of(d: Dag) -> Dagoid:
    skel, imm = skeleton_and_immoralities(d)
    return Dagoid(skel, imm, d)


def dagoid_from_parts(skeleton: UGraph, imm) -> Dagoid:
    """Build a dagoid from its canonical parts by finding a consistent member."""
    imm = frozenset(tuple(x) for x in imm)
    for d in _orientations(skeleton):
        if immoralities(d) == imm:
            return Dagoid(skeleton, imm, d)
    raise InvalidInput("no DAG has this skeleton and immorality set")


def _orientations(skeleton: UGraph) -> Iterator[Dag]:
    edges = skeleton.edges()
    for bits in range(1 << len(edges)):
        parents = [0] * skeleton.n
        for i, (u, v) in enumerate(edges):
            if bits >> i & 1:
                parents[u] |= 1 << v
            else:
                parents[v] |= 1 << u
        if _topological_order(parents, skeleton.vertices) is not None:
            yield Dag(skeleton.n, tuple(parents), skeleton.vertices)


def dagoid_members(dg: Dagoid | Dag, cap: int = 6) -> list[Dag]:
    """Whole equivalence class by breadth-first covered-edge reversals."""
    start = dg.representative if isinstance(dg, Dagoid) else dg
    if start.vertices.bit_count() > cap:
        raise CapExceeded(f"member enumeration over {start.vertices.bit_count()} vertices exceeds cap {cap}")
    return list(_members(start))


@lru_cache(maxsize=1 << 15)
def _members(start: Dag) -> tuple[Dag, ...]:
    seen = {start}
    queue = deque([start])
    out = [start]
    while queue:
        d = queue.popleft()
        for e in covered_edges(d):
            nxt = reverse_covered_edge(d, e)
            if nxt not in seen:
                seen.add(nxt)
                out.append(nxt)
                queue.append(nxt)
    out.sort(key=lambda x: x.parents)
    return tuple(out)


def ancestral_member(dg: Dagoid, subset: int) -> Dag | None:
    """A member in which ``subset`` is ancestral, or ``None``."""
    for d in dagoid_members(dg):
        if d.is_ancestral(subset):
            return d
    return None


def is_ancestral_in_dagoid(dg: Dagoid, subset: int) -> bool:
    return ancestral_member(dg, subset) is not None


def ancestral_insert(h: Dag, d: Dag) -> Dag:
    """Insertion ``H ⋉ D``: edges inside A come from ``h``, all others from ``d``."""
    a = h.vertices
    if h.n != d.n or a & ~d.vertices:
        raise InvalidInput("inserted graph must live on a subset of the host's vertices")
    if not d.is_ancestral(a):
        raise NotAncestral(f"vertex set {members(a)} is not ancestral in {d!r}")
    parents = tuple(h.parents[v] if a >> v & 1 else p for v, p in enumerate(d.parents))
    return Dag(d.n, parents, d.vertices)


def induced_subdagoid(dg: Dagoid, subset: int) -> Dagoid:
    g = ancestral_member(dg, subset)
    if g is None:
        raise NotAncestralInDagoid(f"{members(subset)} is not ancestral in {dg!r}")
    out = dagoid_of(g.induced(subset))
    if config.DEBUG:
        for other in dagoid_members(dg):
            if other.is_ancestral(subset):
                assert dagoid_of(other.induced(subset)) == out
    return out


def remainder_dagoid(dg: Dagoid, subset: int) -> Dagoid:
    """Class of the complete DAG on ``subset`` inserted into a member of ``dg``."""
    g = ancestral_member(dg, subset)
    if g is None:
        raise NotAncestralInDagoid(f"{members(subset)} is not ancestral in {dg!r}")
    out = _remainder_from_member(g, subset)
    if config.DEBUG:
        for other in dagoid_members(dg):
            if other.is_ancestral(subset):
                assert _remainder_from_member(other, subset) == out
    return out


def _remainder_from_member(g: Dag, subset: int) -> Dagoid:
    return dagoid_of(ancestral_insert(Dag.complete(g.n, subset), g))


def insert_dagoid(k: Dagoid, dg: Dagoid) -> Dagoid:
    """Ancestral insertion of a dagoid on A into a dagoid with A ancestral."""
    host = ancestral_member(dg, k.vertices)
    if host is None:
        raise NotAncestralInDagoid(f"{members(k.vertices)} is not ancestral in {dg!r}")
    return dagoid_of(ancestral_insert(k.representative, host))


def dagoid_complete_on(n: int, subset: int) -> Dagoid:
    """Class of the DAG complete on ``subset`` and sparse elsewhere."""
    parents = [0] * n
    seen = 0
    for v in members(subset):
        parents[v] = seen
        seen |= 1 << v
    return dagoid_of(Dag(n, tuple(parents), full(n)))


# -- ordered remainder graphs --------------------------------------------------

@dataclass(frozen=True)
class OrderedRemainder:
    vertex: int
    graph: Dag


def _positions(order: Sequence[int], d: Dag) -> dict[int, int]:
    pos = {v: i for i, v in enumerate(order)}
    if sorted(pos) != members(d.vertices) or len(order) != len(pos):
        raise IncompatibleOrder("order is not a permutation of the vertex set")
    for u, v in d.edges():
        if pos[u] > pos[v]:
            raise IncompatibleOrder(f"edge {u}->{v} runs against the order", edge=[u, v])
    return pos


def ordered_remainder_graph(d: Dag, order: Sequence[int], v: int) -> OrderedRemainder:
    """Graph on ``{v} ∪ pr(v)``: the induced graph with pr(v) completed along the order."""
    pos = _positions(order, d)
    pred = [u for u in order if pos[u] < pos[v]]
    parents = [0] * d.n
    seen = 0
    for u in pred:
        parents[u] = seen
        seen |= 1 << u
    parents[v] = d.parents[v]
    out = Dag(d.n, tuple(parents), seen | (1 << v))
    assert out.parents[v] == d.parents[v]
    return OrderedRemainder(v, out)


def dag_from_remainders(remainders: Sequence[OrderedRemainder], n: int) -> Dag:
    parents = [0] * n
    vertices = 0
    for r in remainders:
        parents[r.vertex] = r.graph.parents[r.vertex]
        vertices |= 1 << r.vertex
    return Dag(n, tuple(parents), vertices)


# -- d-separation --------------------------------------------------------------

def d_separated(d: Dag, a: int, b: int, c: int) -> bool:
    """Separation of ``a`` and ``b`` by ``c`` in the moral graph of the
    subgraph induced by the ancestral closure of ``a ∪ b ∪ c``."""
    anc = d.ancestors(a | b | c)
    return d.induced(anc).moral_graph().separates(a, b, c)


# -- enumeration -----------------------------------------------------------------

def enumerate_dags(n: int, vertices: int | None = None, cap: int = 6) -> Iterator[Dag]:
    """All DAGs: each vertex pair is absent, forward or backward."""
    vertices = full(n) if vertices is None else vertices
    if vertices.bit_count() > cap:
        raise CapExceeded(f"DAG enumeration over {vertices.bit_count()} vertices exceeds cap {cap}")
    pairs = vertex_pairs(vertices)
    for states in product((0, 1, 2), repeat=len(pairs)):
        parents = [0] * n
        for (u, v), s in zip(pairs, states):
            if s == 1:
                parents[v] |= 1 << u
            elif s == 2:
                parents[u] |= 1 << v
        if _topological_order(parents, vertices) is not None:
            yield Dag(n, tuple(parents), vertices)


def enumerate_ordered_dags(n: int, order: Sequence[int]) -> Iterator[Dag]:
    """DAGs for which ``order`` is a compatible ordering (2^C(n,2) of them)."""
    pairs = [(order[i], order[j]) for i in range(len(order)) for j in range(i + 1, len(order))]
    vertices = sum(1 << v for v in order)
    for mask in range(1 << len(pairs)):
        parents = [0] * n
        for i, (u, v) in enumerate(pairs):
            if mask >> i & 1:
                parents[v] |= 1 << u
        yield Dag(n, tuple(parents), vertices)
