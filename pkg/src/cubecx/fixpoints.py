"""Cubical automorphisms, finite groups of them, and their fixed sets."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .complex import Cube, CubeComplex
from .errors import CapExceeded, InvalidComplex
from .maps import CubicalMap

DEFAULT_GROUP_ORDER_CAP = 10**4


@dataclass
class CubicalAutomorphism:
    complex: CubeComplex
    vertex_map: dict
    dart_map: dict

    def key(self) -> tuple:
        return tuple(sorted(self.dart_map.items())), tuple(sorted(self.vertex_map.items()))

    def __eq__(self, other):
        return isinstance(other, CubicalAutomorphism) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __mul__(self, other: "CubicalAutomorphism") -> "CubicalAutomorphism":
        """self after other."""
        vm = {v: self.vertex_map[w] for v, w in other.vertex_map.items()}
        dm = {d: self.dart_map[e] for d, e in other.dart_map.items()}
        return CubicalAutomorphism(self.complex, vm, dm)

    def inverse(self) -> "CubicalAutomorphism":
        return CubicalAutomorphism(self.complex, {w: v for v, w in self.vertex_map.items()},
                                   {e: d for d, e in self.dart_map.items()})

    def is_identity(self) -> bool:
        return all(k == v for k, v in self.vertex_map.items()) and \
            all(k == v for k, v in self.dart_map.items())

    def image_cube(self, cube: Cube) -> Cube:
        return Cube([self.vertex_map[v] for v in cube.verts],
                    [[self.dart_map[d] for d in row] for row in cube.germs])

    def order(self, cap: int = DEFAULT_GROUP_ORDER_CAP) -> int:
        cur, n = self, 1
        while not cur.is_identity():
            cur = self * cur
            n += 1
            if n > cap:
                raise CapExceeded("automorphism order", cap)
        return n

    def problems(self) -> list:
        """Reasons this is not a cubical automorphism (empty when it is)."""
        c = self.complex
        bad = []
        if sorted(self.vertex_map) != sorted(c.vertices) or \
                sorted(self.vertex_map.values()) != sorted(c.vertices):
            bad.append("vertex map is not a bijection")
        if sorted(self.dart_map) != sorted(c.origin) or \
                sorted(self.dart_map.values()) != sorted(c.origin):
            bad.append("dart map is not a bijection")
            return bad
        for d, e in self.dart_map.items():
            if self.dart_map[c.rev[d]] != c.rev[e]:
                bad.append(f"dart map does not commute with reverse at {d}")
            if self.vertex_map.get(c.origin[d]) != c.origin[e]:
                bad.append(f"dart map does not respect origins at {d}")
        for k in sorted(c.cubes):
            for cube in c.cubes[k]:
                if not c.has_cube_key(self.image_cube(cube).key):
                    bad.append(f"image of {cube!r} is not a cube")
        return bad

    def to_map(self) -> CubicalMap:
        return CubicalMap(self.complex, self.complex, dict(self.vertex_map), dict(self.dart_map), "aut")


def identity_automorphism(c: CubeComplex) -> CubicalAutomorphism:
    return CubicalAutomorphism(c, {v: v for v in c.vertices}, {d: d for d in c.origin})


def group_closure(gens, cap: int = DEFAULT_GROUP_ORDER_CAP) -> list:
    """All elements of the group generated by ``gens`` (breadth first)."""
    gens = list(gens)
    if not gens:
        return []
    e = identity_automorphism(gens[0].complex)
    seen = {e}
    out = [e]
    queue = deque([e])
    while queue:
        g = queue.popleft()
        for s in gens:
            h = s * g
            if h not in seen:
                seen.add(h)
                out.append(h)
                if len(out) > cap:
                    raise CapExceeded("group order", cap)
                queue.append(h)
    return out


def inverted_hyperplanes(gens, cap: int = DEFAULT_GROUP_ORDER_CAP) -> list:
    """Ids of 2-sided hyperplanes sent to themselves with orientation reversed."""
    group = group_closure(gens, cap)
    if not group:
        return []
    c = group[0].complex
    out = []
    for h in c.hyperplanes():
        if h.positive is None:
            continue
        d = min(h.positive)
        if any(g.dart_map[d] in h.darts and g.dart_map[d] not in h.positive for g in group):
            out.append(h.id)
    return out


# cells of every dimension, including vertices and edges


class _Cell:
    __slots__ = ("dim", "verts", "germs", "key", "where")

    def __init__(self, verts, germs):
        self.verts = tuple(verts)
        self.germs = tuple(tuple(r) for r in germs)
        self.dim = len(self.germs[0])
        if self.dim == 0:
            self.key = ("vertex", self.verts[0])
        else:
            self.key = frozenset(frozenset(r) for r in self.germs)
        self.where = {}
        for c, row in enumerate(self.germs):
            for i, d in enumerate(row):
                self.where[d] = (c, i)


def _cells(c: CubeComplex):
    for v in c.vertices:
        yield _Cell([v], [()])
    for d in c.edges():
        yield _Cell([c.origin[d], c.terminus(d)], [(d,), (c.rev[d],)])
    for k in sorted(c.cubes):
        for cube in c.cubes[k]:
            yield _Cell(cube.verts, cube.germs)


def _image_key(g: CubicalAutomorphism, cell: _Cell):
    if cell.dim == 0:
        return ("vertex", g.vertex_map[cell.verts[0]])
    return frozenset(frozenset(g.dart_map[d] for d in r) for r in cell.germs)


def invariant_locus(gens, cap: int = DEFAULT_GROUP_ORDER_CAP) -> CubeComplex:
    """The intersection of all inverted hyperplanes, as a 0/1-skeleton.

    Vertices are cubes whose axes are exactly the inverted hyperplanes; edges
    come from cubes with one further axis.  With nothing inverted the
    ambient complex is returned.
    """
    gens = list(gens)
    c = gens[0].complex
    inv = frozenset(inverted_hyperplanes(gens, cap))
    if not inv:
        return c.copy()
    out = CubeComplex(c.name + "/I")
    k = len(inv)
    hyp_of = c.hyperplane_of

    def axes(cell):
        return [hyp_of(d) for d in cell.germs[0]]

    for cell in _cells(c):
        if cell.dim == k and set(axes(cell)) == inv and len(set(axes(cell))) == k:
            out.add_vertex(_cell_name(cell.germs))
    for cell in _cells(c):
        if cell.dim != k + 1:
            continue
        ax = axes(cell)
        if len(set(ax)) != k + 1 or not inv <= set(ax):
            continue
        extra = next(i for i, h in enumerate(ax) if h not in inv)
        ends = []
        for side in (0, 1):
            rows = [tuple(d for i, d in enumerate(cell.germs[cn]) if i != extra)
                    for cn in range(1 << cell.dim) if (cn >> extra & 1) == side]
            ends.append(_cell_name(rows))
        sig0 = [cell.germs[cn][extra] for cn in range(1 << cell.dim) if not cn >> extra & 1]
        sig1 = [cell.germs[cn][extra] for cn in range(1 << cell.dim) if cn >> extra & 1]
        out.add_edge(ends[0], ends[1], name=_dart_name(sig0), rname=_dart_name(sig1))
    return out


def _cell_name(rows) -> str:
    darts = sorted({d for r in rows for d in r})
    return "mid[" + ",".join(map(str, darts)) + "]"


def _dart_name(sig) -> str:
    sig = sorted(set(sig))
    if len(sig) == 1:
        return sig[0]
    return "diag[" + ",".join(map(str, sig)) + "]"


@dataclass
class FixedSet:
    complex: CubeComplex
    support: dict = field(default_factory=dict)  # fixed-set cell name -> ambient cell key
    inverted_axes: dict = field(default_factory=dict)


def _axis_orbits(gens, cell: _Cell):
    """Parity union-find over the axes of an invariant cell.

    Returns (free orbits with per-axis parity, inverted axes).
    """
    k = cell.dim
    parent = list(range(k))
    parity = [0] * k
    broken = set()

    def find(i):
        if parent[i] == i:
            return i, 0
        r, p = find(parent[i])
        parent[i] = r
        parity[i] ^= p
        return r, parity[i]

    for g in gens:
        for i in range(k):
            d = cell.germs[0][i]
            cn, j = cell.where[g.dart_map[d]]
            flip = cn >> j & 1
            ri, pi = find(i)
            rj, pj = find(j)
            if ri == rj:
                if pi ^ pj != flip:
                    broken.add(ri)
            else:
                parent[rj] = ri
                parity[rj] = pi ^ pj ^ flip
                if rj in broken:
                    broken.add(ri)
    groups = {}
    for i in range(k):
        r, p = find(i)
        groups.setdefault(r, []).append((i, p))
    free, inverted = [], []
    for r in sorted(groups):
        if r in broken or find(r)[0] in broken:
            inverted.extend(i for i, _ in groups[r])
        else:
            free.append(groups[r])
    return free, sorted(inverted)


def fixed_set(gens, name: str = "") -> FixedSet:
    """The fixed set of the group generated by ``gens``, assembled cell by cell.

    Each invariant cube contributes one cell whose axes are the diagonals of
    its non-inverted axis orbits.  Fixed cells that are ambient vertices or
    edges keep their ambient names.
    """
    gens = list(gens)
    if not gens:
        raise InvalidComplex("fixed_set needs at least one automorphism")
    c = gens[0].complex
    out = CubeComplex(name or c.name + "/Fix")
    support, inv_axes = {}, {}
    pending_cubes = []
    for cell in _cells(c):
        if any(_image_key(g, cell) != cell.key for g in gens):
            continue
        free, inverted = _axis_orbits(gens, cell)
        m = len(free)
        inv_axes[cell.key] = inverted
        verts, germs = [], []
        for b in range(1 << m):
            corners = []
            for cn in range(1 << cell.dim):
                if all((cn >> i & 1) == ((b >> j & 1) ^ p) for j, orbit in enumerate(free) for i, p in orbit):
                    corners.append(cn)
            if inverted:
                v = _cell_name([[cell.germs[cn][i] for i in inverted] for cn in corners])
            else:
                v = cell.verts[corners[0]]
            verts.append(v)
            row = []
            for orbit in free:
                row.append(_dart_name([cell.germs[cn][i] for cn in corners for i, _ in orbit]))
            germs.append(row)
        if m == 0:
            out.add_vertex(verts[0])
            support[verts[0]] = cell.key
        elif m == 1:
            d, r = germs[0][0], germs[1][0]
            if d not in out.origin:
                label = c.label.get(d) if d in c.origin else None
                rlabel = c.label.get(r) if r in c.origin else None
                out.add_vertex(verts[0])
                out.add_vertex(verts[1])
                out.add_dart(d, verts[0], r, label)
                out.add_dart(r, verts[1], d, rlabel)
            support[d] = support[r] = cell.key
        else:
            pending_cubes.append(Cube(verts, germs))
    for cube in pending_cubes:
        out.add_cube(cube, strict=False)
    return FixedSet(out, support, inv_axes)


def component_of(fixed: CubeComplex, seed) -> tuple:
    """The connected component containing ``seed``, with its inclusion map."""
    if seed not in fixed._vset:
        raise InvalidComplex(f"{seed!r} is not a vertex of the fixed set")
    for vs in fixed.connected_vertex_sets():
        if seed in vs:
            sub = fixed.subcomplex(vs, f"{fixed.name}[{seed}]")
            inc = CubicalMap(sub, fixed, {v: v for v in sub.vertices}, {d: d for d in sub.origin}, "inclusion")
            return sub, inc
    raise InvalidComplex(f"{seed!r} lies in no component")


def components(fixed: CubeComplex) -> list:
    return [fixed.subcomplex(vs, f"{fixed.name}#{i}") for i, vs in enumerate(fixed.connected_vertex_sets())]
