"""Finite simplicial graphs: crossing graphs, label graphs, octahedralisations."""

from __future__ import annotations

import itertools
from typing import Hashable, Iterable

import networkx as nx


def _sort_key(x):
    return (type(x).__name__, repr(x))


class SimplicialGraph:
    """A finite graph with no loops and no multi-edges.

    Vertices may be any hashable values. Edges are stored as frozensets of
    size two.
    """

    __slots__ = ("vertices", "edges", "_adj")

    def __init__(self, vertices: Iterable[Hashable] = (), edges: Iterable = ()):
        self.vertices = frozenset(vertices)
        es = set()
        for e in edges:
            a, b = tuple(e)
            if a == b:
                raise ValueError(f"loop at {a!r}")
            if a not in self.vertices or b not in self.vertices:
                raise ValueError(f"edge {a!r}-{b!r} uses an unknown vertex")
            es.add(frozenset((a, b)))
        self.edges = frozenset(es)
        adj = {v: set() for v in self.vertices}
        for e in self.edges:
            a, b = tuple(e)
            adj[a].add(b)
            adj[b].add(a)
        self._adj = {v: frozenset(n) for v, n in adj.items()}

    def __repr__(self):
        return f"SimplicialGraph({len(self.vertices)} vertices, {len(self.edges)} edges)"

    def __eq__(self, other):
        if not isinstance(other, SimplicialGraph):
            return NotImplemented
        return self.vertices == other.vertices and self.edges == other.edges

    def __hash__(self):
        return hash((self.vertices, self.edges))

    def neighbours(self, v) -> frozenset:
        return self._adj[v]

    def adjacent(self, a, b) -> bool:
        return b in self._adj.get(a, ())

    def sorted_vertices(self) -> list:
        return sorted(self.vertices, key=_sort_key)

    def sorted_edges(self) -> list:
        out = [tuple(sorted(e, key=_sort_key)) for e in self.edges]
        return sorted(out, key=lambda p: (_sort_key(p[0]), _sort_key(p[1])))

    def is_clique(self, vs) -> bool:
        vs = list(vs)
        return all(self.adjacent(a, b) for a, b in itertools.combinations(vs, 2))

    def induced(self, vs) -> "SimplicialGraph":
        vs = frozenset(vs)
        return SimplicialGraph(vs, (e for e in self.edges if e <= vs))

    def complement(self) -> "SimplicialGraph":
        vs = self.sorted_vertices()
        es = [(a, b) for a, b in itertools.combinations(vs, 2) if not self.adjacent(a, b)]
        return SimplicialGraph(vs, es)

    def relabel(self, mapping) -> "SimplicialGraph":
        return SimplicialGraph((mapping[v] for v in self.vertices),
                               ((mapping[a], mapping[b]) for a, b in map(tuple, self.edges)))

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.sorted_vertices())
        g.add_edges_from(self.sorted_edges())
        return g

    def cliques(self, min_size: int = 0):
        """All cliques (complete subgraphs) with at least min_size vertices."""
        out = []
        if min_size <= 0:
            out.append(frozenset())
        for c in nx.enumerate_all_cliques(self.to_networkx()):
            if len(c) >= max(min_size, 1):
                out.append(frozenset(c))
        return out

    def clique_counts(self) -> dict:
        counts: dict[int, int] = {}
        for c in self.cliques():
            counts[len(c)] = counts.get(len(c), 0) + 1
        return counts

    def maximal_independent_sets(self, cap: int | None = None):
        """Bron-Kerbosch on the complement graph; raises CapExceeded past cap."""
        from .errors import CapExceeded

        comp = self.complement().to_networkx()
        out = []
        if not self.vertices:
            return [frozenset()]
        for c in nx.find_cliques(comp):
            out.append(frozenset(c))
            if cap is not None and len(out) > cap:
                raise CapExceeded("independent sets", cap)
        return sorted(out, key=lambda s: sorted(map(_sort_key, s)))

    def is_isomorphic(self, other: "SimplicialGraph") -> bool:
        if len(self.vertices) != len(other.vertices) or len(self.edges) != len(other.edges):
            return False
        return nx.is_isomorphic(self.to_networkx(), other.to_networkx())

    def isomorphism(self, other: "SimplicialGraph"):
        """Return a vertex bijection self -> other, or None."""
        if len(self.vertices) != len(other.vertices) or len(self.edges) != len(other.edges):
            return None
        gm = nx.algorithms.isomorphism.GraphMatcher(self.to_networkx(), other.to_networkx())
        for m in gm.isomorphisms_iter():
            return dict(m)
        return None

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        return nx.is_connected(self.to_networkx())


def path_graph(n: int) -> SimplicialGraph:
    vs = [f"v{i}" for i in range(n)]
    return SimplicialGraph(vs, zip(vs, vs[1:]))


def cycle_graph(n: int) -> SimplicialGraph:
    vs = [f"v{i}" for i in range(n)]
    return SimplicialGraph(vs, [(vs[i], vs[(i + 1) % n]) for i in range(n)])


def complete_graph(n: int) -> SimplicialGraph:
    vs = [f"v{i}" for i in range(n)]
    return SimplicialGraph(vs, itertools.combinations(vs, 2))


def empty_graph(n: int) -> SimplicialGraph:
    return SimplicialGraph([f"v{i}" for i in range(n)])


def edge_graph(g: SimplicialGraph) -> SimplicialGraph:
    """The graph of edges of g, two edges adjacent when they are disjoint."""
    es = g.sorted_edges()
    names = [f"{a}~{b}" for a, b in es]
    adj = [(names[i], names[j]) for i, j in itertools.combinations(range(len(es)), 2)
           if not set(es[i]) & set(es[j])]
    return SimplicialGraph(names, adj)


def octahedralisation(g: SimplicialGraph, n: int) -> SimplicialGraph:
    """N-th octahedralisation: vertices (v, i, sign), i = 1..n."""
    if n < 1:
        raise ValueError("octahedralisation needs N >= 1")
    vs = [(v, i, s) for v in g.sorted_vertices() for i in range(1, n + 1) for s in "+-"]
    es = []
    for a, b in g.sorted_edges():
        for i, j in itertools.product(range(1, n + 1), repeat=2):
            for s, t in itertools.product("+-", repeat=2):
                es.append(((a, i, s), (b, j, t)))
    return SimplicialGraph(vs, es)


def half_octahedralisation(g: SimplicialGraph, n: int) -> SimplicialGraph:
    """Gamma[N/2]: keep the '+' copies of Gamma[N] and drop the sign."""
    if n < 1:
        raise ValueError("octahedralisation needs N >= 1")
    vs = [(v, i) for v in g.sorted_vertices() for i in range(1, n + 1)]
    es = [((a, i), (b, j)) for a, b in g.sorted_edges()
          for i, j in itertools.product(range(1, n + 1), repeat=2)]
    return SimplicialGraph(vs, es)
