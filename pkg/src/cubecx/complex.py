"""Combinatorial cube complexes.

Edges are pairs of darts exchanged by ``rev``; a dart ``d`` leaves
``origin[d]`` and arrives at ``origin[rev[d]]``.  A dart doubles as the germ
of its edge at its origin, so a loop has two distinct germs at its vertex.

A k-cube (k >= 2) is stored by its corner data: for a corner ``c`` (a
bitmask over the k axes) ``verts[c]`` is the vertex sitting there and
``germs[c][i]`` is the dart leaving that corner along axis ``i``.  Cells are
identified by the set of their corner germ-sets, which is what "uniquely
determined by the 1-skeleton" means at the level of germs.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from .errors import AmbiguousFill, InvalidComplex
from .graph import SimplicialGraph


class UnionFind:
    def __init__(self, items=()):
        self.parent = {x: x for x in items}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        p = self.parent
        root = x
        while p[root] != root:
            root = p[root]
        while p[x] != root:
            p[x], x = root, p[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        # keep the smaller id as the root so classes have stable names
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return ra

    def classes(self):
        out = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return out


def _bits(c: int, k: int):
    return [i for i in range(k) if c >> i & 1]


class Cube:
    """A k-cube with k >= 2, given by its corner data."""

    __slots__ = ("dim", "verts", "germs", "_key")

    def __init__(self, verts, germs):
        self.verts = tuple(verts)
        self.germs = tuple(tuple(g) for g in germs)
        self.dim = len(self.germs[0])
        self._key = None

    @property
    def key(self) -> frozenset:
        if self._key is None:
            self._key = frozenset(frozenset(g) for g in self.germs)
        return self._key

    def corner_sets(self):
        return [frozenset(g) for g in self.germs]

    def axis_darts(self, i: int):
        """Darts along axis i that point from the 0-side to the 1-side."""
        return [self.germs[c][i] for c in range(1 << self.dim) if not c >> i & 1]

    def face(self, axis: int, side: int):
        """The codimension-1 face {t_axis = side}; an edge dart when dim == 2."""
        k = self.dim
        corners = [c for c in range(1 << k) if (c >> axis & 1) == side]
        if k == 2:
            other = 1 - axis
            return self.germs[corners[0]][other]
        verts, germs = [], []
        for c in corners:
            verts.append(self.verts[c])
            germs.append(tuple(g for i, g in enumerate(self.germs[c]) if i != axis))
        # corners are listed in increasing order, which matches the bitmask
        # order of the face once the axis bit is squeezed out
        return Cube(verts, germs)

    def faces(self):
        return [self.face(i, s) for i in range(self.dim) for s in (0, 1)]

    def as_square(self):
        g = self.germs
        return (g[0][0], g[1][1], g[3][0], g[2][1])

    def __eq__(self, other):
        return isinstance(other, Cube) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"Cube(dim={self.dim}, at={self.verts[0]!r}, frame={self.germs[0]!r})"


def square_from_tuple(origin, rev, darts):
    d1, d2, d3, d4 = darts
    verts = [origin[d1], origin[d2], origin[d4], origin[d3]]
    germs = [(d1, rev[d4]), (rev[d1], d2), (rev[d3], d4), (d3, rev[d2])]
    return Cube(verts, germs)


@dataclass
class Hyperplane:
    id: str
    darts: frozenset
    edges: frozenset
    embedded: bool
    two_sided: bool
    positive: frozenset | None

    @property
    def orientable(self) -> bool:
        return self.embedded and self.two_sided

    def orientations(self) -> list:
        if not self.orientable:
            return []
        neg = self.darts - self.positive
        return [OrientedHyperplane(self.id, self.positive), OrientedHyperplane(self.id, neg)]


@dataclass(frozen=True)
class OrientedHyperplane:
    hyperplane: str
    positive_darts: frozenset

    def reversed(self, complex_: "CubeComplex") -> "OrientedHyperplane":
        return OrientedHyperplane(self.hyperplane,
                                  frozenset(complex_.rev[d] for d in self.positive_darts))


@dataclass
class Link:
    vertex: str
    vertices: list
    simplices: dict = field(default_factory=dict)  # dim -> list of frozensets
    labels: dict = field(default_factory=dict)

    def graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        for s in self.simplices.get(1, []):
            if len(s) == 2:
                g.add_edge(*sorted(s))
        return g


@dataclass
class ValidationReport:
    ok: bool
    violations: list

    def __bool__(self):
        return self.ok


@dataclass
class SpecialReport:
    special: bool
    not_embedded: list
    one_sided: list
    direct_self_osculations: list
    inter_osculations: list
    indirect_self_osculations: list

    def __bool__(self):
        return self.special


class CubeComplex:
    """A finite combinatorial cube complex."""

    def __init__(self, name: str = ""):
        self.name = name
        self.vertices: list = []
        self._vset: set = set()
        self.origin: dict = {}
        self.rev: dict = {}
        self.label: dict = {}
        self.cubes: dict = {}
        self.bad_cells: list = []
        self._corner: dict = {}
        self._cache: dict = {}

    # construction

    def _dirty(self):
        self._cache.clear()

    def add_vertex(self, v):
        if v not in self._vset:
            self._vset.add(v)
            self.vertices.append(v)
            self._dirty()
        return v

    def add_dart(self, d, origin, reverse=None, label=None):
        """Low-level dart insertion; used by readers that may see bad data."""
        self.origin[d] = origin
        if reverse is not None:
            self.rev[d] = reverse
        self.label[d] = label
        self._dirty()

    def add_edge(self, u, v, name: str | None = None, labels=(None, None), rname=None):
        """Add an edge from u to v; returns the dart leaving u."""
        if name is None:
            name = f"e{len(self.origin) // 2}"
            while name in self.origin:
                name += "'"
        if rname is None:
            rname = name + "~"
        if name in self.origin or rname in self.origin:
            raise InvalidComplex(f"dart {name!r} already exists")
        self.add_vertex(u)
        self.add_vertex(v)
        self.origin[name] = u
        self.origin[rname] = v
        self.rev[name] = rname
        self.rev[rname] = name
        self.label[name] = labels[0]
        self.label[rname] = labels[1]
        self._dirty()
        return name

    def terminus(self, d):
        return self.origin[self.rev[d]]

    def edges(self) -> list:
        """One dart per edge (the smaller id), in sorted order."""
        return sorted(d for d in self.origin if d in self.rev and d <= self.rev[d])

    def darts_at(self, v) -> list:
        return self._darts_at().get(v, [])

    def _darts_at(self):
        if "darts_at" not in self._cache:
            out = {v: [] for v in self.vertices}
            for d in sorted(self.origin):
                out.setdefault(self.origin[d], []).append(d)
            self._cache["darts_at"] = out
        return self._cache["darts_at"]

    def germ(self, v, label):
        """The dart at v carrying the given germ label, or None."""
        tab = self._cache.get("germ")
        if tab is None:
            tab = {}
            for d, o in self.origin.items():
                lab = self.label.get(d)
                if lab is not None:
                    tab.setdefault((o, lab), []).append(d)
            self._cache["germ"] = tab
        ds = tab.get((v, label), [])
        if len(ds) > 1:
            raise InvalidComplex(f"label {label!r} appears twice at {v!r}")
        return ds[0] if ds else None

    def add_cube(self, cube: Cube, strict: bool = True):
        """Insert a cube unless an identical one exists; returns the stored cube."""
        for cs in cube.corner_sets():
            hit = self._corner.get(cs)
            if hit is not None:
                if hit[0].key == cube.key:
                    return hit[0]
                if strict:
                    raise AmbiguousFill(f"corner {sorted(cs)} already belongs to {hit[0]!r}")
                self.bad_cells.append(("duplicate-corner", cube, sorted(cs)))
                return None
        self.cubes.setdefault(cube.dim, []).append(cube)
        for c, cs in enumerate(cube.corner_sets()):
            self._corner[cs] = (cube, c)
        self._dirty()
        return cube

    def add_square(self, d1, d2, d3, d4, strict: bool = True):
        ds = (d1, d2, d3, d4)
        for a, b in zip(ds, ds[1:] + ds[:1]):
            if a not in self.rev or b not in self.origin or self.terminus(a) != self.origin[b]:
                if strict:
                    raise InvalidComplex(f"square {ds} does not close up")
                self.bad_cells.append(("square-open", ds, None))
                return None
        return self.add_cube(square_from_tuple(self.origin, self.rev, ds), strict=strict)

    def copy(self) -> "CubeComplex":
        out = CubeComplex(self.name)
        out.vertices = list(self.vertices)
        out._vset = set(self._vset)
        out.origin = dict(self.origin)
        out.rev = dict(self.rev)
        out.label = dict(self.label)
        out.cubes = {k: list(v) for k, v in self.cubes.items()}
        out.bad_cells = list(self.bad_cells)
        out._corner = dict(self._corner)
        return out

    # lookups

    def squares(self) -> list:
        return self.cubes.get(2, [])

    def max_dim(self) -> int:
        if any(self.cubes.get(k) for k in self.cubes):
            return max(k for k, v in self.cubes.items() if v)
        return 1 if self.origin else 0

    def cell_counts(self) -> dict:
        out = {0: len(self.vertices), 1: len(self.origin) // 2}
        for k in sorted(self.cubes):
            if self.cubes[k]:
                out[k] = len(self.cubes[k])
        return out

    def cube_at(self, germs):
        """The cube having the given germ set as a corner, with the corner index."""
        return self._corner.get(frozenset(germs))

    def has_cube_key(self, key: frozenset) -> bool:
        cs = next(iter(key))
        hit = self._corner.get(cs)
        return hit is not None and hit[0].key == key

    def square_transport(self, a, d):
        """Dart parallel to d starting at the far end of a, across their square."""
        hit = self._corner.get(frozenset((a, d)))
        if hit is None or hit[0].dim != 2:
            return None
        sq, c = hit
        g = sq.germs[c]
        ia = 0 if g[0] == a else 1
        return sq.germs[c ^ (1 << ia)][1 - ia]

    def label_transport(self, a, d):
        lab = self.label.get(d)
        if lab is None:
            return None
        return self.germ(self.terminus(a), lab)

    def assemble(self, frame, transport=None):
        """Build the cube spanned by the germs in ``frame`` at a common vertex.

        Returns None when the germs do not close up into a cube.
        """
        transport = transport or self.square_transport
        k = len(frame)
        if k < 2 or len(set(frame)) != k:
            return None
        v0 = self.origin.get(frame[0])
        if any(self.origin.get(d) != v0 for d in frame):
            return None
        n = 1 << k
        germs = [None] * n
        germs[0] = list(frame)
        for c in range(1, n):
            i = (c & -c).bit_length() - 1
            prev = germs[c ^ (1 << i)]
            row = [None] * k
            row[i] = self.rev.get(prev[i])
            for j in range(k):
                if j != i:
                    t = transport(prev[i], prev[j])
                    if t is None:
                        return None
                    row[j] = t
            germs[c] = row
        verts = []
        for c in range(n):
            row = germs[c]
            if None in row or len(set(row)) != k:
                return None
            o = self.origin[row[0]]
            if any(self.origin[d] != o for d in row):
                return None
            verts.append(o)
        for c in range(n):
            for i in range(k):
                if c >> i & 1:
                    continue
                c2 = c | (1 << i)
                if germs[c2][i] != self.rev[germs[c][i]]:
                    return None
                for j in range(k):
                    if j != i and germs[c2][j] != transport(germs[c][i], germs[c][j]):
                        return None
        return Cube(verts, germs)

    def faces_present(self, cube: Cube) -> bool:
        if cube.dim == 2:
            return all(d in self.rev for row in cube.germs for d in row)
        return all(self.has_cube_key(f.key) for f in cube.faces())

    # hyperplanes

    def _hyperplane_data(self):
        if "hyp" in self._cache:
            return self._cache["hyp"]
        oriented = UnionFind(self.origin)
        for sq in self.squares():
            for i in range(2):
                a, b = sq.axis_darts(i)
                oriented.union(a, b)
                oriented.union(self.rev[a], self.rev[b])
        unoriented = UnionFind(self.origin)
        for d in self.origin:
            unoriented.union(d, oriented.find(d))
            if d in self.rev:
                unoriented.union(d, self.rev[d])
        groups = unoriented.classes()
        hyps = []
        dart_to_h = {}
        for root in sorted(groups):
            darts = frozenset(groups[root])
            hid = min(darts)
            for d in darts:
                dart_to_h[d] = hid
            hyps.append((hid, darts))
        embedded = {hid: True for hid, _ in hyps}
        for sq in self.squares():
            a = dart_to_h[sq.germs[0][0]]
            b = dart_to_h[sq.germs[0][1]]
            if a == b:
                embedded[a] = False
        out = []
        for hid, darts in hyps:
            two_sided = all(d in self.rev and oriented.find(d) != oriented.find(self.rev[d])
                            for d in darts)
            pos = None
            if two_sided and embedded[hid]:
                r = oriented.find(hid)
                pos = frozenset(d for d in darts if oriented.find(d) == r)
            edges = frozenset(d for d in darts if d in self.rev and d <= self.rev[d])
            out.append(Hyperplane(hid, darts, edges, embedded[hid], two_sided, pos))
        self._cache["hyp"] = (out, dart_to_h)
        return self._cache["hyp"]

    def hyperplanes(self) -> list:
        return self._hyperplane_data()[0]

    def hyperplane(self, hid) -> Hyperplane:
        for h in self.hyperplanes():
            if h.id == hid:
                return h
        raise KeyError(hid)

    def hyperplane_of(self, d) -> str:
        return self._hyperplane_data()[1][d]

    def orientations(self, h) -> list:
        if not isinstance(h, Hyperplane):
            h = self.hyperplane(h)
        return h.orientations()

    def carrier_vertices(self, h) -> frozenset:
        h = h if isinstance(h, Hyperplane) else self.hyperplane(h)
        return frozenset(self.origin[d] for d in h.darts)

    def half_carrier(self, positive_darts) -> frozenset:
        """Vertex set of the positive carrier of an orientation (dart heads)."""
        return frozenset(self.terminus(d) for d in positive_darts)

    def half_carriers(self, h):
        """(negative, positive) vertex sets for the default orientation."""
        h = h if isinstance(h, Hyperplane) else self.hyperplane(h)
        if h.positive is None:
            raise InvalidComplex(f"hyperplane {h.id} has no orientation")
        pos = self.half_carrier(h.positive)
        neg = frozenset(self.origin[d] for d in h.positive)
        return neg, pos

    def carrier_cubes(self, h) -> list:
        h = h if isinstance(h, Hyperplane) else self.hyperplane(h)
        out = []
        for k in sorted(self.cubes):
            for cube in self.cubes[k]:
                if any(cube.germs[0][i] in h.darts for i in range(k)):
                    out.append(cube)
        return out

    def _crossings(self):
        if "cross" not in self._cache:
            dh = self._hyperplane_data()[1]
            pairs = set()
            for sq in self.squares():
                a, b = dh[sq.germs[0][0]], dh[sq.germs[0][1]]
                if a != b:
                    pairs.add(frozenset((a, b)))
            self._cache["cross"] = pairs
        return self._cache["cross"]

    def cross(self, h, k) -> bool:
        return frozenset((h, k)) in self._crossings()

    def crossing_graph(self) -> SimplicialGraph:
        return SimplicialGraph((h.id for h in self.hyperplanes()), self._crossings())

    # links and curvature

    def link(self, v) -> Link:
        if v not in self._vset:
            raise KeyError(f"unknown vertex {v!r}")
        germs = self.darts_at(v)
        lk = Link(v, list(germs), {}, {d: self.label.get(d) for d in germs})
        for k in sorted(self.cubes):
            for cube in self.cubes[k]:
                for c in range(1 << k):
                    if cube.verts[c] == v:
                        lk.simplices.setdefault(k - 1, []).append(frozenset(cube.germs[c]))
        return lk

    def is_npc(self):
        """Gromov's link condition. Returns (bool, witness or None)."""
        for v in self.vertices:
            lk = self.link(v)
            seen = set()
            for dim, simps in sorted(lk.simplices.items()):
                for s in simps:
                    if len(s) != dim + 1:
                        return False, ("degenerate-corner", v, sorted(s))
                    if s in seen:
                        return False, ("multi-simplex", v, sorted(s))
                    seen.add(s)
            for clique in nx.enumerate_all_cliques(lk.graph()):
                if len(clique) >= 3 and frozenset(clique) not in seen:
                    return False, ("missing-cube", v, sorted(clique))
        return True, None

    def validate(self) -> ValidationReport:
        """Check the structural invariants; violations are returned, not raised."""
        bad = []
        for d in sorted(self.origin):
            r = self.rev.get(d)
            if r is None or r not in self.origin or self.rev.get(r) != d or r == d:
                bad.append(("involution", d))
            if self.origin[d] not in self._vset:
                bad.append(("unknown-vertex", d, self.origin[d]))
        for kind, cell, extra in self.bad_cells:
            bad.append((kind, cell if not isinstance(cell, Cube) else cell.germs[0], extra))
        if not any(b[0] == "involution" for b in bad):
            for k in sorted(self.cubes):
                for idx, cube in enumerate(self.cubes[k]):
                    if k >= 3 and not self.faces_present(cube):
                        bad.append(("missing-face", k, idx))
                    rebuilt = self.assemble(cube.germs[0])
                    if rebuilt is None or rebuilt.key != cube.key:
                        bad.append(("cube-poset", k, idx))
        return ValidationReport(not bad, bad)

    def flag_fill(self) -> "CubeComplex":
        """Add every higher cube whose corner germs pairwise span squares."""
        out = self.copy()
        k = 3
        while True:
            added = 0
            candidates = 0
            lower = {cs for cube in out.cubes.get(k - 1, []) for cs in cube.corner_sets()}
            for v in out.vertices:
                lk = out.link(v)
                g = lk.graph()
                for clique in nx.enumerate_all_cliques(g):
                    if len(clique) < k:
                        continue
                    if len(clique) > k:
                        break
                    candidates += 1
                    s = frozenset(clique)
                    if s in out._corner:
                        continue
                    if not all(frozenset(t) in lower for t in itertools.combinations(clique, k - 1)):
                        continue
                    cube = out.assemble(sorted(clique))
                    if cube is None or not out.faces_present(cube):
                        continue
                    for cs in cube.corner_sets():
                        hit = out._corner.get(cs)
                        if hit is not None and hit[0].key != cube.key:
                            raise AmbiguousFill(f"cube at {v!r} spanned by {sorted(clique)} "
                                                f"clashes with {hit[0]!r}")
                    out.add_cube(cube)
                    added += 1
            if candidates == 0:
                break
            k += 1
        return out

    def special_report(self) -> SpecialReport:
        hyps = self.hyperplanes()
        dh = self._hyperplane_data()[1]
        pos = {}
        for h in hyps:
            if h.positive is not None:
                for d in h.positive:
                    pos[d] = True
        not_emb = [h.id for h in hyps if not h.embedded]
        one_sided = [h.id for h in hyps if not h.two_sided]
        direct, indirect, inter = [], [], []
        for x in self.vertices:
            ds = self.darts_at(x)
            for a, b in itertools.combinations(ds, 2):
                ha, hb = dh[a], dh[b]
                spans = self._corner.get(frozenset((a, b)))
                if ha == hb:
                    if spans is not None:
                        continue
                    h = self.hyperplane(ha)
                    if h.positive is None:
                        continue
                    if pos.get(a, False) == pos.get(b, False):
                        direct.append((ha, x, a, b))
                    else:
                        indirect.append((ha, x, a, b))
                elif spans is None and self.cross(ha, hb):
                    inter.append((min(ha, hb), max(ha, hb), x, a, b))
        ok = not (not_emb or one_sided or direct or inter)
        return SpecialReport(ok, not_emb, one_sided, direct, inter, indirect)

    def is_special(self) -> bool:
        return self.special_report().special

    # global structure

    def one_skeleton(self) -> nx.MultiGraph:
        g = nx.MultiGraph()
        g.add_nodes_from(self.vertices)
        for d in self.edges():
            g.add_edge(self.origin[d], self.terminus(d), key=d)
        return g

    def simple_graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        for d in self.edges():
            a, b = self.origin[d], self.terminus(d)
            if a != b:
                g.add_edge(a, b)
        return g

    def connected_vertex_sets(self, skip_darts=frozenset()) -> list:
        """Vertex sets of components after deleting the edges in skip_darts."""
        uf = UnionFind(self.vertices)
        for d in self.origin:
            if d not in skip_darts:
                uf.union(self.origin[d], self.terminus(d))
        groups = uf.classes()
        return sorted((frozenset(g) for g in groups.values()), key=lambda s: min(s))

    def subcomplex(self, vs, name: str = "") -> "CubeComplex":
        """The full subcomplex spanned by a vertex set."""
        vs = set(vs)
        out = CubeComplex(name or self.name)
        for v in self.vertices:
            if v in vs:
                out.add_vertex(v)
        for d in sorted(self.origin):
            if self.origin[d] in vs and self.terminus(d) in vs:
                out.add_dart(d, self.origin[d], self.rev[d], self.label.get(d))
        for k in sorted(self.cubes):
            for cube in self.cubes[k]:
                if all(v in vs for v in cube.verts):
                    out.add_cube(cube)
        return out

    def sub_by_darts(self, darts, name: str = "") -> "CubeComplex":
        """Subcomplex with all vertices, the given edges and cubes built from them."""
        darts = set(darts)
        darts |= {self.rev[d] for d in darts}
        out = CubeComplex(name or self.name)
        for v in self.vertices:
            out.add_vertex(v)
        for d in sorted(darts):
            out.add_dart(d, self.origin[d], self.rev[d], self.label.get(d))
        for k in sorted(self.cubes):
            for cube in self.cubes[k]:
                if all(d in darts for row in cube.germs for d in row):
                    out.add_cube(cube)
        return out

    def components(self) -> list:
        return [self.subcomplex(vs) for vs in self.connected_vertex_sets()]

    def is_connected(self) -> bool:
        return len(self.connected_vertex_sets()) <= 1

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * n for k, n in self.cell_counts().items())


def is_median_graph(g):
    """Median test on a connected graph. Returns (bool, witness triple or None)."""
    if isinstance(g, CubeComplex):
        g = g.simple_graph()
    nodes = sorted(g.nodes, key=repr)
    n = len(nodes)
    if n == 0:
        return True, None
    if not nx.is_connected(g):
        raise ValueError("median check needs a connected graph")
    idx = {v: i for i, v in enumerate(nodes)}
    dist = np.zeros((n, n), dtype=np.int64)
    for v in nodes:
        for w, l in nx.single_source_shortest_path_length(g, v).items():
            dist[idx[v], idx[w]] = l
    # between[a, b, m] is true when m lies on a geodesic from a to b
    between = (dist[:, None, :] + dist[None, :, :]) == dist[:, :, None]
    for a in range(n):
        counts = (between[a][:, None, :] & between[:, :, :] & between[a][None, :, :]).sum(axis=2)
        bad = np.argwhere(counts != 1)
        if len(bad):
            b, c = bad[0]
            return False, (nodes[a], nodes[b], nodes[c])
    return True, None
