"""Cubical maps: hyperplane collapse and isomorphism search."""

from __future__ import annotations

from dataclasses import dataclass, field

import networkx as nx
from networkx.algorithms import isomorphism as nxiso

from .complex import Cube, CubeComplex, UnionFind
from .errors import NotCarrierRetract


@dataclass
class CubicalMap:
    source: CubeComplex
    target: CubeComplex
    vertex_map: dict
    dart_map: dict  # a dart maps to a dart, or to None when it is squashed
    note: str = ""
    extra: dict = field(default_factory=dict)

    def image_cube(self, cube: Cube):
        """Image of a cube, or None if it degenerates."""
        rows = []
        for row in cube.germs:
            img = [self.dart_map.get(d) for d in row]
            if None in img:
                return None
            rows.append(img)
        return Cube([self.vertex_map[v] for v in cube.verts], rows)

    def compose(self, other: "CubicalMap") -> "CubicalMap":
        """other after self."""
        vm = {v: other.vertex_map[w] for v, w in self.vertex_map.items()}
        dm = {}
        for d, e in self.dart_map.items():
            dm[d] = None if e is None else other.dart_map.get(e)
        return CubicalMap(self.source, other.target, vm, dm, note=f"{other.note}.{self.note}")


def identity_map(c: CubeComplex) -> CubicalMap:
    return CubicalMap(c, c, {v: v for v in c.vertices}, {d: d for d in c.origin}, "id")


def _collapse_one(c: CubeComplex, hid) -> tuple:
    h = c.hyperplane(hid)
    if h.positive is None:
        raise NotCarrierRetract(hid, set())
    neg, pos = c.half_carriers(h)
    if neg & pos:
        raise NotCarrierRetract(hid, neg & pos)
    vuf = UnionFind(c.vertices)
    for d in h.positive:
        vuf.union(c.origin[d], c.terminus(d))
    duf = UnionFind(d for d in c.origin if d not in h.darts)
    for k in sorted(c.cubes):
        for cube in c.cubes[k]:
            for i in range(k):
                if cube.germs[0][i] not in h.darts:
                    continue
                for corner in range(1 << k):
                    if corner >> i & 1:
                        continue
                    other = corner | (1 << i)
                    for j in range(k):
                        if j != i:
                            a, b = cube.germs[corner][j], cube.germs[other][j]
                            duf.union(a, b)
                            duf.union(c.rev[a], c.rev[b])
    out = CubeComplex(c.name + "/" + str(hid))
    vmap = {v: vuf.find(v) for v in c.vertices}
    for v in c.vertices:
        if vmap[v] == v:
            out.add_vertex(v)
    dmap = {}
    for d in sorted(c.origin):
        if d in h.darts:
            dmap[d] = None
            continue
        r = duf.find(d)
        dmap[d] = r
        if r == d:
            out.add_dart(d, vmap[c.origin[d]], duf.find(c.rev[d]), c.label.get(d))
    m = CubicalMap(c, out, vmap, dmap, note=f"collapse {hid}")
    for k in sorted(c.cubes):
        for cube in c.cubes[k]:
            img = m.image_cube(cube)
            if img is not None:
                out.add_cube(img)
    return out, m


def collapse(c: CubeComplex, hs) -> tuple:
    """Collapse the given hyperplanes one at a time.

    ``hs`` lists hyperplane ids (or any dart dual to each hyperplane).  Each
    one must be a carrier retract at the moment it is collapsed.
    """
    handles = [h if not hasattr(h, "id") else h.id for h in hs]
    cur = c
    total = identity_map(c)
    for handle in handles:
        d = total.dart_map.get(handle)
        if d is None:
            raise NotCarrierRetract(handle, set())
        hid = cur.hyperplane_of(d)
        cur, m = _collapse_one(cur, hid)
        total = total.compose(m)
    total.target = cur
    total.note = "collapse"
    return cur, total


def _encode(c: CubeComplex, labels: bool) -> nx.Graph:
    g = nx.Graph()
    for v in c.vertices:
        g.add_node(("v", v), kind="v")
    for d in c.origin:
        g.add_node(("d", d), kind="d", label=c.label.get(d) if labels else None)
        g.add_edge(("d", d), ("v", c.origin[d]), kind="o")
    for d in c.origin:
        r = c.rev[d]
        g.add_edge(("d", d), ("d", r), kind="r")
    for k in sorted(c.cubes):
        for n, cube in enumerate(c.cubes[k]):
            cn = ("k", k, n)
            g.add_node(cn, kind=f"k{k}")
            for corner, row in enumerate(cube.germs):
                kn = ("c", k, n, corner)
                g.add_node(kn, kind=f"c{k}")
                g.add_edge(cn, kn, kind="kc")
                for d in row:
                    g.add_edge(kn, ("d", d), kind="cg")
    return g


def _identity_works(a: CubeComplex, b: CubeComplex, labels: bool) -> bool:
    if set(a.vertices) != set(b.vertices) or a.origin != b.origin or a.rev != b.rev:
        return False
    if labels and any(a.label.get(d) != b.label.get(d) for d in a.origin):
        return False
    ka = {cube.key for cubes in a.cubes.values() for cube in cubes}
    kb = {cube.key for cubes in b.cubes.values() for cube in cubes}
    return ka == kb


def _profile(c: CubeComplex) -> tuple:
    counts = c.cell_counts()
    degs = sorted(len(c.darts_at(v)) for v in c.vertices)
    return tuple(sorted(counts.items())), tuple(degs)


def is_isomorphic(a: CubeComplex, b: CubeComplex, respect_labels: bool = False):
    """Return a CubicalMap a -> b that is an isomorphism, or None."""
    if _identity_works(a, b, respect_labels):
        return CubicalMap(a, b, {v: v for v in a.vertices}, {d: d for d in a.origin}, "iso")
    if _profile(a) != _profile(b):
        return None
    ga, gb = _encode(a, respect_labels), _encode(b, respect_labels)
    gm = nxiso.GraphMatcher(
        ga, gb,
        node_match=lambda x, y: x.get("kind") == y.get("kind") and x.get("label") == y.get("label"),
        edge_match=lambda x, y: x.get("kind") == y.get("kind"),
    )
    for m in gm.isomorphisms_iter():
        vm = {n[1]: t[1] for n, t in m.items() if n[0] == "v"}
        dm = {n[1]: t[1] for n, t in m.items() if n[0] == "d"}
        return CubicalMap(a, b, vm, dm, "iso")
    return None
