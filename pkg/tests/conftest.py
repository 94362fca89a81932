import itertools

import pytest

from cubecx.complex import CubeComplex
from cubecx.generators import FIXTURES, configuration_space, droms, fixture, salvetti
from cubecx.graph import SimplicialGraph, complete_graph, cycle_graph, empty_graph, path_graph


def interval():
    c = CubeComplex("interval")
    c.add_edge("a", "b", "e")
    return c


def lone_square():
    c = CubeComplex("square")
    c.add_edge("a", "b", "p")
    c.add_edge("b", "c", "q")
    c.add_edge("c", "d", "r")
    c.add_edge("d", "a", "s")
    c.add_square("p", "q", "r", "s")
    return c


def one_vertex_torus():
    return salvetti(complete_graph(2))


def four_cycle():
    return droms(empty_graph(2))[0]


def mobius_square():
    """One square whose two horizontal sides are glued with a flip."""
    c = CubeComplex("mobius")
    c.add_edge("a", "b", "p")
    c.add_edge("b", "a", "q")
    c.add_edge("b", "a", "r")
    c.add_square("p", "q", "p", "r")
    return c


def direct_osculation_square():
    """One square with two opposite corners identified; the loop side stays."""
    c = CubeComplex("osculating")
    c.add_edge("a", "b", "d1")
    c.add_edge("b", "c", "d2")
    c.add_edge("c", "a", "d3")
    c.add_edge("a", "a", "d4")
    c.add_square("d1", "d2", "d3", "d4")
    return c


def cube_corner(with_cube: bool):
    """The 3-cube; with_cube=False leaves only its six squares."""
    c = CubeComplex("cube" if with_cube else "hollow-cube")
    names = {}
    for x in itertools.product("01", repeat=3):
        c.add_vertex("".join(x))
    for x in list(c.vertices):
        for i in range(3):
            if x[i] == "0":
                y = x[:i] + "1" + x[i + 1:]
                names[(x, i)] = c.add_edge(x, y, name=f"{x}>{i}", labels=(f"x{i}+", f"x{i}-"))
    from cubecx.generators import attach_label_cliques
    attach_label_cliques(c, complete_graph(3).relabel({f"v{i}": f"x{i}" for i in range(3)}),
                         max_size=3 if with_cube else 2)
    return c


CORPUS_GRAPHS = {
    "edge": complete_graph(2),
    "anticlique2": empty_graph(2),
    "P3": path_graph(3),
    "P4": path_graph(4),
    "C4": cycle_graph(4),
    "C5": cycle_graph(5),
    "K3": complete_graph(3),
}


def corpus():
    """Named complexes used by the oracle and property suites."""
    out = [(name, fixture(name).complex) for name in FIXTURES]
    out += [("torus", one_vertex_torus()), ("square", lone_square()), ("interval", interval())]
    for name, g in CORPUS_GRAPHS.items():
        out.append((f"droms-{name}", droms(g)[0]))
    out.append(("UC2-C5", configuration_space(cycle_graph(5), 2)[0]))
    out.append(("UC2-P4", configuration_space(path_graph(4), 2)[0]))
    return out


def corpus_patterns():
    """(name, complex, pattern) triples with validated patterns."""
    out = [("genus2", fixture("genus2").complex, fixture("genus2").pattern)]
    for name in ("edge", "anticlique2", "P3", "P4", "C4", "K3"):
        c, p = droms(CORPUS_GRAPHS[name])
        out.append((f"droms-{name}", c, p))
    c, p = configuration_space(cycle_graph(5), 2)
    out.append(("UC2-C5", c, p))
    return out


@pytest.fixture
def genus2():
    return fixture("genus2")


def relabel_complex(c, vmap, dmap):
    from cubecx.complex import Cube

    out = CubeComplex(c.name + "'")
    for v in c.vertices:
        out.add_vertex(vmap[v])
    for d in c.origin:
        out.add_dart(dmap[d], vmap[c.origin[d]], dmap[c.rev[d]], c.label.get(d))
    for k in sorted(c.cubes):
        for cube in c.cubes[k]:
            out.add_cube(Cube([vmap[v] for v in cube.verts], [[dmap[d] for d in r] for r in cube.germs]))
    return out


def prefixed(c, prefix):
    return relabel_complex(c, {v: prefix + v for v in c.vertices}, {d: prefix + d for d in c.origin})


def disjoint_union(a, b):
    """Disjoint union, with vertices and darts prefixed by L: and R:."""
    left, right = prefixed(a, "L:"), prefixed(b, "R:")
    out = left.copy()
    for v in right.vertices:
        out.add_vertex(v)
    for d in right.origin:
        out.add_dart(d, right.origin[d], right.rev[d], right.label.get(d))
    for k in sorted(right.cubes):
        for cube in right.cubes[k]:
            out.add_cube(cube)
    return out
