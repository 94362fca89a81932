"""Builders for standard complexes: Salvetti, Droms, configuration spaces,
double covers and canonical completions."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import networkx as nx

from .colouring import SpecialColouring, colouring_from_labels
from .complex import Cube, CubeComplex
from .errors import ConstructionFault, InvalidComplex
from .graph import SimplicialGraph, _sort_key, edge_graph, half_octahedralisation, octahedralisation


def signed_base(label: str) -> str:
    return label[:-1] if label and label[-1] in "+-" else label


def attach_label_cliques(c: CubeComplex, base_graph: SimplicialGraph, max_size: int | None = None,
                         base=signed_base, strict: bool = True) -> int:
    """Add a cube at every vertex for every clique of germ-label bases.

    Each germ label must appear at most once per vertex.  A frame whose
    labels do not close up into a cube raises ConstructionFault when
    ``strict``; otherwise it is skipped.  Returns the number of cubes added.
    """
    added = 0
    for x in list(c.vertices):
        by_base = {}
        for d in c.darts_at(x):
            lab = c.label.get(d)
            if lab is None:
                continue
            by_base.setdefault(base(lab), []).append(d)
        present = [b for b in by_base if b in base_graph.vertices]
        sub = base_graph.induced(present).to_networkx()
        for clique in nx.enumerate_all_cliques(sub):
            k = len(clique)
            if k < 2:
                continue
            if max_size is not None and k > max_size:
                break
            clique = sorted(clique, key=_sort_key)
            for frame in itertools.product(*(by_base[b] for b in clique)):
                if c.cube_at(frame) is not None:
                    continue
                cube = c.assemble(list(frame), c.label_transport)
                if cube is None:
                    if strict:
                        raise ConstructionFault(f"labels {clique} at {x!r} do not close up")
                    continue
                if c.add_cube(cube) is cube:
                    added += 1
    return added


def _build_higher(c: CubeComplex, base_graph: SimplicialGraph, route: str, base=signed_base):
    if route == "cliques":
        attach_label_cliques(c, base_graph, base=base)
        return c
    if route == "flag":
        attach_label_cliques(c, base_graph, max_size=2, base=base)
        return c.flag_fill()
    raise ValueError(f"unknown route {route!r}")


def salvetti(g: SimplicialGraph, route: str = "cliques") -> CubeComplex:
    """One vertex, a loop per generator, a torus per clique."""
    c = CubeComplex("salvetti")
    c.add_vertex("*")
    for v in g.sorted_vertices():
        c.add_edge("*", "*", name=str(v), rname=f"{v}~", labels=(f"{v}+", f"{v}-"))
    return _build_higher(c, g, route)


def droms(g: SimplicialGraph, route: str = "cliques") -> tuple:
    """The cube complex on 0/1 vectors over the vertices of g, with its pattern.

    Vertex names are bit strings in sorted vertex order.  An edge flips one
    coordinate v; its germ at the 0 end is labelled v+ and at the 1 end v-.
    The pattern has one partition per vertex v: the v-coloured hyperplanes
    in the middle, coordinate 0 on the minus side.
    """
    vs = [str(v) for v in g.sorted_vertices()]
    c = CubeComplex("droms")
    for bits in itertools.product("01", repeat=len(vs)):
        c.add_vertex("".join(bits))
    for x in list(c.vertices):
        for i, v in enumerate(vs):
            if x[i] == "0":
                y = x[:i] + "1" + x[i + 1:]
                c.add_edge(x, y, name=f"{x}:{v}", rname=f"{y}:{v}", labels=(f"{v}+", f"{v}-"))
    gs = g.relabel({v: str(v) for v in g.vertices})
    c = _build_higher(c, gs, route)
    return c, droms_pattern(vs, c)


def droms_pattern(vs, c: CubeComplex):
    from .divisibility import DividingPattern, Tripartition

    col = colouring_from_labels(c)
    col.graph = SimplicialGraph(vs, col.graph.edges)
    parts = []
    for i, v in enumerate(vs):
        zero = frozenset(h for h, w in col.colour.items() if w == v)
        minus = frozenset(x for x in c.vertices if x[i] == "0")
        parts.append(Tripartition(zero, minus, frozenset(c.vertices) - minus))
    return DividingPattern(col, parts)


def _subset_name(s) -> str:
    return "{" + ",".join(sorted(s)) + "}"


def configuration_space(g: SimplicialGraph, n: int, route: str = "cliques") -> tuple:
    """UC_n: unordered n-point configurations on the vertices of g, with its pattern.

    Moving a token along the edge {a, b} with a < b carries the germ label
    'a~b+' when the token goes a -> b and 'a~b-' otherwise.
    """
    vs = sorted(str(v) for v in g.vertices)
    if not 0 <= n <= len(vs):
        raise ValueError(f"need 0 <= n <= {len(vs)}, got {n}")
    gs = g.relabel({v: str(v) for v in g.vertices})
    c = CubeComplex(f"UC{n}")
    subsets = [frozenset(s) for s in itertools.combinations(vs, n)]
    for s in subsets:
        c.add_vertex(_subset_name(s))
    for s in subsets:
        for a in sorted(s):
            for b in sorted(gs.neighbours(a)):
                if b in s:
                    continue
                t = (s - {a}) | {b}
                lo, hi = sorted((a, b))
                sign = "+" if a == lo else "-"
                other = "-" if sign == "+" else "+"
                name = f"{_subset_name(s)}:{a}>{b}"
                if name in c.origin:
                    continue
                c.add_edge(_subset_name(s), _subset_name(t), name=name,
                           rname=f"{_subset_name(t)}:{b}>{a}",
                           labels=(f"{lo}~{hi}{sign}", f"{lo}~{hi}{other}"))
    c = _build_higher(c, edge_graph(gs), route)
    return c, configuration_pattern(gs, c)


def configuration_pattern(g: SimplicialGraph, c: CubeComplex):
    """The natural dividing pattern of UC_n: one partition per graph vertex."""
    from .divisibility import DividingPattern, Tripartition

    col = colouring_from_labels(c)
    parts = []
    for a in sorted(str(v) for v in g.vertices):
        zero = frozenset(h for h, e in col.colour.items() if a in e.split("~"))
        plus = frozenset(x for x in c.vertices if a in x[1:-1].split(","))
        minus = frozenset(c.vertices) - plus
        parts.append(Tripartition(zero, minus, plus))
    return DividingPattern(col, parts)


def octahedralise(g: SimplicialGraph, n: int) -> SimplicialGraph:
    """Gamma[N] with string vertex names 'v|i+' / 'v|i-'."""
    o = octahedralisation(g, n)
    return o.relabel({v: f"{v[0]}|{v[1]}{v[2]}" for v in o.vertices})


def half_octahedralise(g: SimplicialGraph, n: int) -> SimplicialGraph:
    """Gamma[N/2] with string vertex names 'v|i'."""
    o = half_octahedralisation(g, n)
    return o.relabel({v: f"{v[0]}|{v[1]}" for v in o.vertices})


# double covers


def _lift_cube(cube: Cube, flips: list, sheet0: int, vname, dname) -> Cube:
    k = cube.dim
    verts, germs = [], []
    for corner in range(1 << k):
        s = sheet0
        for i in range(k):
            if corner >> i & 1:
                s ^= flips[i]
        verts.append(vname(cube.verts[corner], s))
        germs.append([dname(d, s) for d in cube.germs[corner]])
    return Cube(verts, germs)


def double_cover(q: CubeComplex, s) -> CubeComplex:
    """The 2-sheeted cover whose monodromy flips across the hyperplanes in s.

    Vertex (x, k) is named 'x/k' and the lift of dart d starting on sheet k
    is named 'd/k'.  Labels are copied from q.
    """
    s = frozenset(s)
    known = {h.id for h in q.hyperplanes()}
    if not s <= known:
        raise InvalidComplex(f"unknown hyperplanes {sorted(s - known)}")
    flip = {d: int(q.hyperplane_of(d) in s) for d in q.origin}
    out = CubeComplex(q.name + "~2")

    def vname(x, k):
        return f"{x}/{k}"

    def dname(d, k):
        return f"{d}/{k}"

    for x in q.vertices:
        for k in (0, 1):
            out.add_vertex(vname(x, k))
    for d in sorted(q.origin):
        for k in (0, 1):
            out.add_dart(dname(d, k), vname(q.origin[d], k), dname(q.rev[d], k ^ flip[d]),
                         q.label.get(d))
    for dim in sorted(q.cubes):
        for cube in q.cubes[dim]:
            flips = [flip[cube.germs[0][i]] for i in range(dim)]
            for k in (0, 1):
                out.add_cube(_lift_cube(cube, flips, k, vname, dname))
    return out


def cover_projection(cover: CubeComplex) -> dict:
    """Dart projection of a double cover built by double_cover()."""
    return {d: d.rsplit("/", 1)[0] for d in cover.origin}


def cover_map(q: CubeComplex, cover: CubeComplex):
    """The covering projection cover -> q as a cubical map."""
    from .maps import CubicalMap

    return CubicalMap(cover, q, {v: v.rsplit("/", 1)[0] for v in cover.vertices},
                      cover_projection(cover), "projection")


# canonical completions


@dataclass
class CompletionBundle:
    base: CubeComplex  # q, or its double cover in the Coxeter variant
    completed: CubeComplex
    phi: object  # CubicalAutomorphism fixing every vertex
    salvetti_target: SimplicialGraph  # Gamma[3/2]
    link_target: SimplicialGraph  # what every link of the completion should be
    covering: object = None  # CubicalMap onto salvetti(salvetti_target), when it exists
    degree: int = 0
    warnings: list = field(default_factory=list)

    @property
    def original_darts(self) -> frozenset:
        return frozenset(self.base.origin)


def _label_covering(c: CubeComplex, target: SimplicialGraph):
    """The label-driven map c -> salvetti(target), with its degree (0 if not a covering)."""
    from .maps import CubicalMap

    sal = salvetti(target)
    ok, degree = covers_by_labels(c, sal)
    dmap = {d: sal.germ("*", c.label[d]) for d in c.origin}
    if None in dmap.values():
        return None, 0
    return CubicalMap(c, sal, {v: "*" for v in c.vertices}, dmap, "covering"), degree if ok else 0


def _add_labelled_edge(c: CubeComplex, u, lu: str, w, lw: str, stem: str):
    """Add an edge u -> w with germ labels lu at u and lw at w, unless present."""
    du = c.germ(u, lu)
    if du is not None:
        if c.terminus(du) != w or c.label[c.rev[du]] != lw:
            raise ConstructionFault(f"germ {lu!r} at {u!r} already leads elsewhere")
        return du
    if c.germ(w, lw) is not None and not (u == w and lu == lw):
        raise ConstructionFault(f"germ {lw!r} at {w!r} already used")
    name = stem
    n = 0
    while name in c.origin or name + "~" in c.origin:
        n += 1
        name = f"{stem}#{n}"
    return c.add_edge(u, w, name=name, labels=(lu, lw))


def _check_completion_input(q: CubeComplex):
    rep = q.special_report()
    if not rep.special:
        raise InvalidComplex("canonical completion needs a special complex")
    return rep


def canonical_completion(q: CubeComplex) -> CompletionBundle:
    """The completion of a special complex with two-sided hyperplanes.

    Every edge of q dual to H gets the label 'H|1' with the sign of its
    orientation; new edges carry 'H|2' and 'H|3'.
    """
    _check_completion_input(q)
    hyps = q.hyperplanes()
    gamma = q.crossing_graph()
    c = CubeComplex(q.name + "^")
    for v in q.vertices:
        c.add_vertex(v)
    for h in hyps:
        for d in h.darts:
            sign = "+" if d in h.positive else "-"
            c.add_dart(d, q.origin[d], q.rev[d], f"{h.id}|1{sign}")
    for dim in sorted(q.cubes):
        for cube in q.cubes[dim]:
            c.add_cube(cube)
    original = frozenset(q.origin)

    def follow(x, hid, sign):
        # walk along germs 'hid|1<sign>' until a vertex lacks one
        seen = {x}
        cur = x
        while True:
            d = c.germ(cur, f"{hid}|1{sign}")
            if d is None:
                return cur
            cur = c.terminus(d)
            if cur in seen:
                raise ConstructionFault(f"hyperplane {hid} closes into a cycle at {x!r}")
            seen.add(cur)

    for x in q.vertices:
        for h in hyps:
            hid = h.id
            plus = c.germ(x, f"{hid}|1+")
            minus = c.germ(x, f"{hid}|1-")
            if plus is None and minus is None:
                for i in (1, 2, 3):
                    _add_labelled_edge(c, x, f"{hid}|{i}+", x, f"{hid}|{i}-", f"{x}.{hid}.{i}.loop")
            elif plus is not None and minus is not None:
                x1 = c.terminus(minus)
                x2 = c.terminus(plus)
                for i in (2, 3):
                    _add_labelled_edge(c, x1, f"{hid}|{i}+", x, f"{hid}|{i}-", f"{x1}.{hid}.{i}>{x}")
                    _add_labelled_edge(c, x, f"{hid}|{i}+", x2, f"{hid}|{i}-", f"{x}.{hid}.{i}>{x2}")
            elif minus is not None:
                x1 = c.terminus(minus)
                for i in (2, 3):
                    _add_labelled_edge(c, x1, f"{hid}|{i}+", x, f"{hid}|{i}-", f"{x1}.{hid}.{i}>{x}")
                y = follow(x, hid, "-")
                for i in (1, 2, 3):
                    _add_labelled_edge(c, x, f"{hid}|{i}+", y, f"{hid}|{i}-", f"{x}.{hid}.{i}>{y}")
            else:
                x2 = c.terminus(plus)
                for i in (2, 3):
                    _add_labelled_edge(c, x, f"{hid}|{i}+", x2, f"{hid}|{i}-", f"{x}.{hid}.{i}>{x2}")
                y = follow(x, hid, "+")
                for i in (1, 2, 3):
                    _add_labelled_edge(c, y, f"{hid}|{i}+", x, f"{hid}|{i}-", f"{y}.{hid}.{i}>{x}")
    base = half_octahedralise(gamma, 3)
    attach_label_cliques(c, base, max_size=2)
    c = c.flag_fill()
    phi = {}
    for d in c.origin:
        if d in original:
            phi[d] = d
            continue
        lab = c.label[d]
        hid, rest = lab.rsplit("|", 1)
        i, sign = int(rest[:-1]), rest[-1]
        x = c.origin[d]
        first = c.germ(x, f"{hid}|1{sign}")
        if first is not None and first in original:
            j = {1: 1, 2: 3, 3: 2}[i]
        else:
            j = i % 3 + 1
        img = c.germ(x, f"{hid}|{j}{sign}")
        if img is None:
            raise ConstructionFault(f"no image for {d!r}")
        phi[d] = img
    base = q.copy()
    for d in base.origin:
        base.label[d] = c.label[d]
    covering, degree = _label_covering(c, half_octahedralise(gamma, 3))
    return CompletionBundle(base, c, _automorphism(c, phi), half_octahedralise(gamma, 3),
                            octahedralise(gamma, 3), covering, degree)


def _automorphism(c: CubeComplex, dart_map: dict):
    from .fixpoints import CubicalAutomorphism

    return CubicalAutomorphism(c, {v: v for v in c.vertices}, dart_map)


def canonical_completion_racg(q: CubeComplex, s=None) -> CompletionBundle:
    """Completion through a double cover, for the right-angled Coxeter case.

    Labels on the cover are unsigned: 'H|i' for the hyperplane H of q.
    """
    rep = _check_completion_input(q)
    if rep.indirect_self_osculations:
        raise ConstructionFault("the double cover needs no indirect self-osculation")
    if s is None:
        s = [h.id for h in q.hyperplanes()]
    cov = double_cover(q, s)
    warnings = []
    if not cov.is_connected():
        warnings.append("double cover is disconnected")
    hyps = q.hyperplanes()
    gamma = q.crossing_graph()
    c = CubeComplex(q.name + "^2")
    for v in cov.vertices:
        c.add_vertex(v)
    for d in sorted(cov.origin):
        c.add_dart(d, cov.origin[d], cov.rev[d], f"{q.hyperplane_of(d.rsplit('/', 1)[0])}|1")
    for dim in sorted(cov.cubes):
        for cube in cov.cubes[dim]:
            c.add_cube(cube)
    original = frozenset(cov.origin)
    for x in q.vertices:
        x0, x1 = f"{x}/0", f"{x}/1"
        for h in hyps:
            hid = h.id
            here = [d for d in q.darts_at(x) if q.hyperplane_of(d) == hid]
            if not here:
                for i in (1, 2, 3):
                    _add_labelled_edge(c, x0, f"{hid}|{i}", x1, f"{hid}|{i}", f"{x}.{hid}.{i}.pair")
                continue
            for d in here:
                for k in (0, 1):
                    lift = f"{d}/{k}"
                    u, w = c.origin[lift], c.terminus(lift)
                    for i in (2, 3):
                        _add_labelled_edge(c, u, f"{hid}|{i}", w, f"{hid}|{i}", f"{lift}.{i}")
    base = half_octahedralise(gamma, 3)
    attach_label_cliques(c, base, max_size=2, base=lambda lab: lab)
    c = c.flag_fill()
    phi = {}
    for d in c.origin:
        if d in original:
            phi[d] = d
            continue
        hid, rest = c.label[d].rsplit("|", 1)
        i = int(rest)
        x = c.origin[d]
        first = c.germ(x, f"{hid}|1")
        j = {1: 1, 2: 3, 3: 2}[i] if first in original else i % 3 + 1
        img = c.germ(x, f"{hid}|{j}")
        if img is None:
            raise ConstructionFault(f"no image for {d!r}")
        phi[d] = img
    lifted = cov.copy()
    for d in lifted.origin:
        lifted.label[d] = c.label[d]
    degree = len(c.vertices) if not links_match(c, base) else 0
    return CompletionBundle(lifted, c, _automorphism(c, phi), base, base, None, degree, warnings)


def link_label_graph(c: CubeComplex, x) -> SimplicialGraph:
    """Link of x with germs replaced by their labels; None on label clashes."""
    lk = c.link(x)
    labels = [c.label.get(d) for d in lk.vertices]
    if None in labels or len(set(labels)) != len(labels):
        return None
    edges = [tuple(c.label[d] for d in s) for s in lk.simplices.get(1, [])]
    if len(set(map(frozenset, edges))) != len(edges):
        return None
    return SimplicialGraph(labels, edges)


def links_match(c: CubeComplex, target: SimplicialGraph) -> list:
    """Vertices whose labelled link differs from target (empty when all match)."""
    ok, _ = c.is_npc()
    bad = [] if ok else ["npc"]
    for x in c.vertices:
        if link_label_graph(c, x) != target:
            bad.append(x)
    return bad


def covers_by_labels(cover: CubeComplex, base: CubeComplex) -> tuple:
    """Check that matching germ labels define a covering map cover -> base.

    The base must have one vertex.  Returns (ok, degree).
    """
    if len(base.vertices) != 1:
        raise ValueError("base must have a single vertex")
    b = base.vertices[0]
    want_germs = sorted(base.label[d] for d in base.darts_at(b))
    want_corners = sorted(sorted(map(base.label.get, s)) for simps in base.link(b).simplices.values()
                          for s in simps)
    for x in cover.vertices:
        lk = cover.link(x)
        have = sorted(cover.label.get(d) or "" for d in lk.vertices)
        if have != want_germs:
            return False, 0
        corners = sorted(sorted(cover.label[d] for d in s) for simps in lk.simplices.values()
                         for s in simps)
        if corners != want_corners:
            return False, 0
    return True, len(cover.vertices)


# fixtures

FIXTURES = ("fig3-left", "fig3-left-mirror", "fig3-middle", "fig3-right", "genus2")


@dataclass
class Fixture:
    name: str
    complex: CubeComplex
    pattern: object = None
    note: str = ""


def fixture(name: str) -> Fixture:
    """Load one of the shipped fixture complexes (with its pattern, if any)."""
    from importlib import resources

    from .io import check_schema, complex_from_json, pattern_from_json

    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURES)}")
    text = resources.files("cubecx").joinpath("data", f"{name}.json").read_text()
    import json

    doc = json.loads(text)
    check_schema(doc, "fixture")
    c = complex_from_json(doc["complex"], strict=True)
    pattern = pattern_from_json(doc["pattern"]) if "pattern" in doc else None
    return Fixture(name, c, pattern, doc.get("note", ""))
