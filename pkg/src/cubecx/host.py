"""The complex E dual to a dividing pattern, the host M and the extended host."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .complex import CubeComplex, is_median_graph
from .divisibility import DividingPattern, extended_crossing_graph, validate_pattern
from .errors import ConstructionFault, InvalidComplex, NotCarrierRetract
from .generators import attach_label_cliques, signed_base
from .graph import SimplicialGraph, complete_graph
from .maps import CubicalMap, collapse

PARTITION_PREFIX = "#H"


def vertex_name(signs) -> str:
    return "[" + "".join("+" if s > 0 else "-" for s in signs) + "]"


def dart_name(x, label: str) -> str:
    """Host darts are named by their origin and germ label, which is unique there."""
    return f"{x}@{label}"


def _add_labelled(c: CubeComplex, x, lx: str, y, ly: str):
    """Add the edge x -> y with germ labels lx, ly unless that germ exists."""
    d = c.germ(x, lx)
    if d is not None:
        if c.terminus(d) != y or c.label[c.rev[d]] != ly:
            raise ConstructionFault(f"germ {lx} at {x} already leads to {c.terminus(d)}")
        return d
    if c.germ(y, ly) is not None and not (x == y and lx == ly):
        raise ConstructionFault(f"germ {ly} at {y} is already used")
    return c.add_edge(x, y, name=dart_name(x, lx), rname=dart_name(y, ly), labels=(lx, ly))


def _sides(p: DividingPattern):
    return [(t.minus, t.plus) for t in p.partitions]


def _compatible(sides, signs) -> bool:
    chosen = [sides[i][1] if s > 0 else sides[i][0] for i, s in enumerate(signs)]
    return all(a & b for a, b in itertools.combinations_with_replacement(chosen, 2))


def build_e_complex(p: DividingPattern, q: CubeComplex | None = None, full_cube: bool = False) -> CubeComplex:
    """The CAT(0) cube complex whose vertices are compatible side choices.

    With ``full_cube`` every sign vector is a vertex, as if the partitions
    were pairwise transverse.
    """
    n = len(p.partitions)
    sides = _sides(p)
    e = CubeComplex("E")
    for signs in itertools.product((-1, 1), repeat=n):
        if full_cube or _compatible(sides, signs):
            e.add_vertex(vertex_name(signs))
    if not e.vertices:
        raise ConstructionFault("the pattern has no compatible side choice")
    present = set(e.vertices)
    for x in list(e.vertices):
        for i in range(n):
            if x[1 + i] == "-":
                y = x[:1 + i] + "+" + x[2 + i:]
                if y in present:
                    lab = f"{PARTITION_PREFIX}{i}"
                    e.add_edge(x, y, name=dart_name(x, lab + "+"), rname=dart_name(y, lab + "-"),
                               labels=(lab + "+", lab + "-"))
    labels = [f"{PARTITION_PREFIX}{i}" for i in range(n)]
    attach_label_cliques(e, SimplicialGraph(labels, itertools.combinations(labels, 2)), max_size=2,
                         strict=False)
    if not e.is_connected():
        # two partitions describing one wall with opposite sides split E apart
        raise ConstructionFault("E is disconnected; some partitions duplicate a wall")
    return e.flag_fill()


@dataclass
class ExtendedHost:
    n: int
    host: CubeComplex
    graph: SimplicialGraph
    phi: object  # CubicalAutomorphism


@dataclass
class HostBundle:
    base: CubeComplex
    pattern: DividingPattern
    e_complex: CubeComplex
    host: CubeComplex
    embedding_j: CubicalMap
    sign_vectors: dict
    graph: SimplicialGraph  # the extended crossing graph
    extended: ExtendedHost | None = None


def _flip_set(p: DividingPattern) -> dict:
    col = p.colouring
    classes = col.classes()
    out = {}
    for v, hs in classes.items():
        out[v] = frozenset(i for i, t in enumerate(p.partitions) if hs and set(hs) <= t.zero)
    return out


def _colour_edges(c: CubeComplex, q: CubeComplex, p: DividingPattern, sides, present):
    col = p.colouring
    flips = _flip_set(p)
    half = {(v, s): col.half_carrier(q, v, s) for v in col.graph.vertices for s in "+-"}
    for x in list(c.vertices):
        signs = [1 if ch == "+" else -1 for ch in x[1:-1]]
        mine = [sides[i][1] if s > 0 else sides[i][0] for i, s in enumerate(signs)]
        for v in col.graph.sorted_vertices():
            for here, there in (("+", "-"), ("-", "+")):
                # a germ v+ needs C(v-) to meet every chosen side
                hc = half[(v, there)]
                if not all(hc & side for side in mine):
                    continue
                ys = [-s if i in flips[v] else s for i, s in enumerate(signs)]
                y = vertex_name(ys)
                if y not in present:
                    raise ConstructionFault(f"flipping {x} along {v} leaves E")
                _add_labelled(c, x, f"{v}{here}", y, f"{v}{there}")


def _embedding(q: CubeComplex, p: DividingPattern, host: CubeComplex) -> CubicalMap:
    col = p.colouring
    labels = col.germ_labels(q)
    vmap = {}
    for x in q.vertices:
        vmap[x] = vertex_name([1 if x in t.plus else -1 for t in p.partitions])
    if len(set(vmap.values())) != len(vmap):
        raise ConstructionFault("vertex embedding is not injective")
    dmap = {}
    for d in q.origin:
        img = host.germ(vmap[q.origin[d]], labels[d])
        if img is None or host.terminus(img) != vmap[q.terminus(d)]:
            raise ConstructionFault(f"dart {d} has no image in the host")
        dmap[d] = img
    if len(set(dmap.values())) != len(dmap):
        raise ConstructionFault("dart embedding is not injective")
    j = CubicalMap(q, host, vmap, dmap, "j")
    for k in sorted(q.cubes):
        for cube in q.cubes[k]:
            img = j.image_cube(cube)
            if img is None or not host.has_cube_key(img.key):
                raise ConstructionFault(f"cube {cube!r} has no image in the host")
    return j


def build_host(p: DividingPattern, q: CubeComplex, route: str = "cliques", full_cube: bool = False,
               check: bool = True) -> HostBundle:
    if check:
        rep = validate_pattern(q, p)
        if not rep.ok:
            bad = {k: v for k, v in rep.witnesses.items() if v}
            raise InvalidComplex(f"pattern does not validate: {bad}")
    for v in p.colouring.graph.vertices:
        if str(v).startswith("#"):
            raise InvalidComplex(f"colour name {v!r} clashes with partition labels")
    e = build_e_complex(p, q, full_cube)
    g = extended_crossing_graph(q, p)
    if full_cube:
        labels = p.labels()
        g = SimplicialGraph(g.vertices, set(g.edges) | {frozenset(e_) for e_ in itertools.combinations(labels, 2)})
    m = CubeComplex("M")
    for v in e.vertices:
        m.add_vertex(v)
    for d in sorted(e.origin):
        m.add_dart(d, e.origin[d], e.rev[d], e.label[d])
    _colour_edges(m, q, p, _sides(p), set(e.vertices))
    if route == "cliques":
        attach_label_cliques(m, g)
    elif route == "flag":
        attach_label_cliques(m, g, max_size=2)
        m = m.flag_fill()
    else:
        raise ValueError(f"unknown route {route!r}")
    signs = {v: tuple(1 if ch == "+" else -1 for ch in v[1:-1]) for v in e.vertices}
    j = _embedding(q, p, m)
    return HostBundle(q, p, e, m, j, signs, g)


# verification


@dataclass
class HostReport:
    checks: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def hyperplane_labels(c: CubeComplex) -> dict:
    """Hyperplane id -> label base, or None when its darts disagree."""
    out = {}
    for h in c.hyperplanes():
        bases = {signed_base(c.label.get(d) or "") for d in h.darts}
        out[h.id] = bases.pop() if len(bases) == 1 else None
    return out


def labelled_crossing_graph(c: CubeComplex):
    """Crossing graph with hyperplanes named by their labels; None if ambiguous."""
    labs = hyperplane_labels(c)
    if None in labs.values() or len(set(labs.values())) != len(labs):
        return None
    return c.crossing_graph().relabel(labs)


def salvetti_profile(c: CubeComplex, g: SimplicialGraph) -> list:
    """Problems preventing c from being the Salvetti complex of g (empty if none)."""
    bad = []
    if len(c.vertices) != 1:
        bad.append(("vertices", len(c.vertices)))
    edge_bases = sorted(signed_base(c.label.get(d) or "") for d in c.edges())
    if edge_bases != sorted(map(str, g.vertices)):
        bad.append(("edges", edge_bases))
    counts = g.clique_counts()
    for k in range(2, max(list(counts) + [c.max_dim()]) + 1):
        have = len(c.cubes.get(k, []))
        if have != counts.get(k, 0):
            bad.append(("cubes", k, have, counts.get(k, 0)))
    seen = set()
    for k in sorted(c.cubes):
        for cube in c.cubes[k]:
            bases = frozenset(signed_base(c.label.get(d) or "") for d in cube.germs[0])
            if len(bases) != k or not g.is_clique(bases) or bases in seen:
                bad.append(("cube-labels", sorted(bases)))
            seen.add(bases)
    return bad


def partition_hyperplanes(c: CubeComplex) -> list:
    return sorted(h for h, lab in hyperplane_labels(c).items()
                  if lab is not None and lab.startswith(PARTITION_PREFIX))


def verify_host(b: HostBundle) -> HostReport:
    rep = HostReport()
    m = b.host
    rep.checks["special"] = m.is_special()
    g = labelled_crossing_graph(m)
    rep.checks["crossing_graph"] = g is not None and g == b.graph
    rep.details["crossing_graph"] = g
    colours = b.pattern.colouring.graph
    try:
        collapsed, _ = collapse(m, partition_hyperplanes(m))
        problems = salvetti_profile(collapsed, colours)
    except NotCarrierRetract as exc:
        problems = [("not-retract", str(exc))]
    rep.checks["collapse_salvetti"] = not problems
    rep.details["collapse_salvetti"] = problems
    j = b.embedding_j
    img_v = set(j.vertex_map.values())
    img_d = set(j.dart_map.values())
    img_cubes = set()
    for k in sorted(b.base.cubes):
        for cube in b.base.cubes[k]:
            img_cubes.add(j.image_cube(cube).key)
    convex = len(img_v) == len(j.vertex_map) and len(img_d) == len(j.dart_map)
    bad_convex = []
    for k in sorted(m.cubes):
        for cube in m.cubes[k]:
            for corner in range(1 << k):
                if cube.verts[corner] in img_v and all(d in img_d for d in cube.germs[corner]):
                    if cube.key not in img_cubes:
                        bad_convex.append(cube)
                    break
    rep.checks["locally_convex"] = convex and not bad_convex
    rep.details["locally_convex"] = bad_convex
    stray = []
    for x in img_v:
        for d in m.darts_at(x):
            if not m.label[d].startswith(PARTITION_PREFIX) and d not in img_d:
                stray.append(d)
    rep.checks["colour_edges_in_base"] = not stray
    rep.details["colour_edges_in_base"] = stray
    return rep


def e_embeds_convexly(b: HostBundle) -> bool:
    """E is a locally convex subcomplex of M."""
    m, e = b.host, b.e_complex
    e_darts = set(e.origin)
    e_keys = {cube.key for cubes in e.cubes.values() for cube in cubes}
    for k in sorted(m.cubes):
        for cube in m.cubes[k]:
            if all(d in e_darts for d in cube.germs[0]) and cube.key not in e_keys:
                return False
    return all(d in m.origin for d in e_darts)


def without_edge(c: CubeComplex, d) -> CubeComplex:
    """Copy of c with one edge (and every cube containing it) removed."""
    keep = [x for x in c.origin if x not in (d, c.rev[d])]
    return c.sub_by_darts(keep, c.name)


# extended host


def copy_label(base: str, s: int) -> str:
    return f"{base}.{s}"


def extended_graph(g: SimplicialGraph, n_partitions: int, n: int) -> SimplicialGraph:
    """The crossing graph of the extended host: N copies of every partition vertex."""
    parts = [f"{PARTITION_PREFIX}{i}" for i in range(n_partitions)]
    colours = [v for v in g.vertices if v not in parts]
    vs = list(colours) + [copy_label(h, s) for h in parts for s in range(n)]
    es = [e for e in g.edges if not any(str(v).startswith(PARTITION_PREFIX) for v in e)]
    for h in parts:
        for v in colours:
            if g.adjacent(h, v):
                es.extend((copy_label(h, s), v) for s in range(n))
    for h, k in itertools.combinations(parts, 2):
        if g.adjacent(h, k):
            es.extend((copy_label(h, s), copy_label(k, t)) for s in range(n) for t in range(n))
    return SimplicialGraph(vs, es)


def build_extended_host(b: HostBundle, n: int, route: str = "cliques") -> HostBundle:
    from .fixpoints import CubicalAutomorphism

    if n < 2:
        raise ValueError("the extended host needs N >= 2")
    m = b.host
    gn = extended_graph(b.graph, len(b.pattern.partitions), n)
    out = CubeComplex(f"M{n}")
    for v in m.vertices:
        out.add_vertex(v)
    for d in m.edges():
        lab, rlab = m.label[d], m.label[m.rev[d]]
        x, y = m.origin[d], m.terminus(d)
        if lab.startswith(PARTITION_PREFIX):
            for s in range(n):
                lx = copy_label(lab[:-1], s) + lab[-1]
                ly = copy_label(rlab[:-1], s) + rlab[-1]
                out.add_edge(x, y, name=dart_name(x, lx), rname=dart_name(y, ly), labels=(lx, ly))
        else:
            out.add_dart(d, x, m.rev[d], lab)
            out.add_dart(m.rev[d], y, d, rlab)
    if route == "cliques":
        attach_label_cliques(out, gn)
    else:
        attach_label_cliques(out, gn, max_size=2)
        out = out.flag_fill()
    dmap = {}
    for d in out.origin:
        lab = out.label[d]
        if lab.startswith(PARTITION_PREFIX):
            base, s = lab[:-1].rsplit(".", 1)
            img = out.germ(out.origin[d], copy_label(base, (int(s) + 1) % n) + lab[-1])
            dmap[d] = img
        else:
            dmap[d] = d
    phi = CubicalAutomorphism(out, {v: v for v in out.vertices}, dmap)
    return HostBundle(b.base, b.pattern, b.e_complex, b.host, b.embedding_j, b.sign_vectors, b.graph,
                      ExtendedHost(n, out, gn, phi))


def host_automorphism(b: HostBundle):
    if b.extended is None:
        raise InvalidComplex("the bundle has no extended host")
    return b.extended.phi


def embedding_into_extended(b: HostBundle) -> CubicalMap:
    """j composed with the inclusion M's colour part -> extended host (same dart ids)."""
    j = b.embedding_j
    return CubicalMap(j.source, b.extended.host, dict(j.vertex_map), dict(j.dart_map), "j")


def collapse_one_copy(b: HostBundle) -> tuple:
    """Collapse copy 0 of every partition hyperplane in the extended host.

    Returns (collapsed complex, list of problems against the Salvetti
    complex of the extended graph on the remaining N - 1 copies).
    """
    ext = b.extended
    if ext is None:
        raise InvalidComplex("the bundle has no extended host")
    labs = hyperplane_labels(ext.host)
    drop = sorted(h for h, lab in labs.items()
                  if lab and lab.startswith(PARTITION_PREFIX) and lab.endswith(".0"))
    target = ext.graph.induced([v for v in ext.graph.vertices
                                if not (str(v).startswith(PARTITION_PREFIX) and str(v).endswith(".0"))])
    try:
        collapsed, _ = collapse(ext.host, drop)
    except NotCarrierRetract as exc:
        return None, [("not-retract", str(exc))]
    return collapsed, salvetti_profile(collapsed, target)
