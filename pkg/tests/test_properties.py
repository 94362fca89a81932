import itertools
import math

import networkx as nx
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from cubecx.complex import Cube, CubeComplex, is_median_graph
from cubecx.divisibility import is_strongly_divisible, validate_pattern
from cubecx.generators import configuration_space, droms, salvetti
from cubecx.graph import SimplicialGraph, half_octahedralisation, octahedralisation
from cubecx.host import build_host, verify_host
from cubecx.maps import collapse, is_isomorphic

from conftest import disjoint_union, relabel_complex

FAST = settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def graphs(draw, max_vertices=6, min_vertices=1):
    n = draw(st.integers(min_vertices, max_vertices))
    vs = [f"v{i}" for i in range(n)]
    pairs = list(itertools.combinations(vs, 2))
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return SimplicialGraph(vs, [e for e, k in zip(pairs, keep) if k])


def clique_counts(g):
    nxg = nx.Graph()
    nxg.add_nodes_from(g.vertices)
    nxg.add_edges_from(tuple(e) for e in g.edges)
    out = {}
    for q in nx.enumerate_all_cliques(nxg):
        out[len(q)] = out.get(len(q), 0) + 1
    return out


def euler(c):
    return sum((-1) ** k * n for k, n in c.cell_counts().items())


def two_skeleton(c):
    out = CubeComplex(c.name + "^2")
    for v in c.vertices:
        out.add_vertex(v)
    for d in c.origin:
        out.add_dart(d, c.origin[d], c.rev[d], c.label.get(d))
    for cube in c.cubes.get(2, []):
        out.add_cube(Cube(cube.verts, cube.germs))
    return out


@FAST
@given(graphs(), st.integers(1, 3))
def test_octahedralisation_clique_counts(g, n):
    base = clique_counts(g)
    full = clique_counts(octahedralisation(g, n))
    half = clique_counts(half_octahedralisation(g, n))
    assert full == {k: m * (2 * n) ** k for k, m in base.items()}
    assert half == {k: m * n ** k for k, m in base.items()}


@FAST
@given(graphs(max_vertices=5))
def test_salvetti_counts_and_links(g):
    c = salvetti(g)
    assert len(c.vertices) == 1
    counts = clique_counts(g)
    for k, m in counts.items():
        assert c.cell_counts().get(k, 0) == m
    assert c.is_special()
    link = c.link(c.vertices[0])
    assert len(link.graph().nodes) == 2 * len(g.vertices)


@FAST
@given(graphs(max_vertices=5), st.data())
def test_configuration_space_symmetry(g, data):
    n = data.draw(st.integers(0, len(g.vertices)))
    a, _ = configuration_space(g, n)
    b, _ = configuration_space(g, len(g.vertices) - n)
    assert len(a.vertices) == math.comb(len(g.vertices), n)
    assert is_isomorphic(a, b)


@FAST
@given(graphs(max_vertices=4))
def test_droms_hyperplanes_two_sided(g):
    c, _ = droms(g)
    for h in c.hyperplanes():
        assert h.two_sided and h.embedded
        assert len(c.orientations(h.id)) == 2
    assert c.is_special()
    ok, _ = is_median_graph(c)
    assert ok


@FAST
@given(graphs(max_vertices=4))
def test_flag_fill_idempotent_and_restores_cubes(g):
    c, _ = droms(g)
    once = two_skeleton(c).flag_fill()
    assert once.cell_counts() == c.cell_counts()
    assert once.flag_fill().cell_counts() == once.cell_counts()
    assert is_isomorphic(once, c, respect_labels=True)


@FAST
@given(graphs(max_vertices=3), graphs(max_vertices=3))
def test_flag_fill_commutes_with_disjoint_union(g1, g2):
    a, b = two_skeleton(droms(g1)[0]), two_skeleton(droms(g2)[0])
    left = disjoint_union(a, b).flag_fill()
    right = disjoint_union(a.flag_fill(), b.flag_fill())
    assert left.cell_counts() == right.cell_counts()
    assert is_isomorphic(left, right, respect_labels=True)


@FAST
@given(graphs(max_vertices=4), st.randoms(use_true_random=False))
def test_collapse_order_independent(g, rnd):
    c, _ = droms(g)
    hs = sorted(h.id for h in c.hyperplanes())
    chosen = rnd.sample(hs, min(len(hs), rnd.randint(1, 3)))
    first, _ = collapse(c, chosen)
    second, _ = collapse(c, list(reversed(chosen)))
    assert first.cell_counts() == second.cell_counts()
    assert is_isomorphic(first, second, respect_labels=True)


@FAST
@given(graphs(max_vertices=4), st.randoms(use_true_random=False))
def test_specialness_survives_relabelling(g, rnd):
    for c in (droms(g)[0], salvetti(g)):
        vs, ds = list(c.vertices), list(c.origin)
        newv, newd = [f"x{i}" for i in range(len(vs))], [f"y{i}" for i in range(len(ds))]
        rnd.shuffle(newv)
        rnd.shuffle(newd)
        r = relabel_complex(c, dict(zip(vs, newv)), dict(zip(ds, newd)))
        assert r.is_special() == c.is_special()
        assert r.cell_counts() == c.cell_counts()
        assert len(r.hyperplanes()) == len(c.hyperplanes())


@FAST
@given(graphs(max_vertices=4))
def test_droms_host_pipeline(g):
    c, p = droms(g)
    assert validate_pattern(c, p).ok
    assert is_strongly_divisible(c).divisible
    b = build_host(p, c)
    assert verify_host(b).ok
    ok, _ = is_median_graph(b.e_complex)
    assert ok
    counts = clique_counts(p.colouring.graph)
    assert euler(b.host) == 1 + sum((-1) ** k * m for k, m in counts.items())


@settings(max_examples=10, deadline=None)
@given(graphs(min_vertices=4, max_vertices=5), st.data())
def test_configuration_host_pipeline(g, data):
    n = data.draw(st.integers(2, len(g.vertices) - 2))
    c, p = configuration_space(g, n)
    if not c.hyperplanes():
        return
    assert validate_pattern(c, p).ok
    b = build_host(p, c)
    assert verify_host(b).ok
    ok, _ = is_median_graph(b.e_complex)
    assert ok
