"""Regenerate the shipped fixture files under src/cubecx/data.

The gluings below are written out by hand; this script only
freezes them.  Run from the repository root: python3 tools/make_fixtures.py
"""

import os

from cubecx.complex import CubeComplex
from cubecx.divisibility import DividingPattern, Tripartition
from cubecx.colouring import standard_colouring
from cubecx.io import SCHEMAS, complex_to_json, pattern_to_json, write_json

OUT = os.path.join(os.path.dirname(__file__), "..", "src", "cubecx", "data")


def two_square_torus_cover():
    c = CubeComplex("fig3-right")
    for v in "xy":
        c.add_vertex(v)
    c.add_edge("x", "y", "a0")
    c.add_edge("y", "x", "a1")
    c.add_edge("x", "y", "b0")
    c.add_edge("y", "x", "b1")
    c.add_square("a0", "b1", "a1~", "b0~")
    c.add_square("a1", "b0", "a0~", "b1~")
    return c


def two_squares(name="fig3-middle"):
    c = CubeComplex(name)
    for v in "xtrbps":
        c.add_vertex(v)
    c.add_edge("x", "t", "xt")
    c.add_edge("t", "r", "tr")
    c.add_edge("r", "b", "rb")
    c.add_edge("b", "x", "bx")
    c.add_edge("b", "t", "c")
    c.add_edge("t", "p", "e")
    c.add_edge("p", "s", "ps")
    c.add_edge("s", "b", "sb")
    c.add_square("xt", "tr", "rb", "bx")
    c.add_square("c", "e", "ps", "sb")
    return c


def three_squares(mirror=False):
    c = two_squares("fig3-left-mirror" if mirror else "fig3-left")
    c.add_vertex("u")
    c.add_vertex("w")
    c.add_edge("x", "r", "d")
    if mirror:
        c.add_edge("x", "u", "f")
        c.add_edge("u", "w", "uw")
        c.add_edge("w", "r", "wr")
        c.add_square("d~", "f", "uw", "wr")
    else:
        c.add_edge("r", "u", "f")
        c.add_edge("u", "w", "uw")
        c.add_edge("w", "x", "wx")
        c.add_square("d", "f", "uw", "wx")
    return c


def genus_two():
    """Dual square complex of a pants decomposition (blue) and a transverse
    system (red) on the genus-2 surface: one vertex per hexagon."""
    c = CubeComplex("genus2")
    for v in "ABCD":
        c.add_vertex(v)
    for i in (1, 2, 3):
        c.add_edge("A", "C", f"bt{i}")
        c.add_edge("B", "D", f"bb{i}")
    for k in (1, 2, 3):
        c.add_edge("A", "B", f"r{k}")
        c.add_edge("C", "D", f"rp{k}")
    for i in (1, 2, 3):
        for k in (1, 2, 3):
            if i != k:
                c.add_square(f"bt{i}", f"rp{k}", f"bb{i}~", f"r{k}~")
    return c


def genus_two_pattern(c):
    col = standard_colouring(c)
    blue = frozenset(c.hyperplane_of(f"bt{i}") for i in (1, 2, 3))
    red = frozenset(c.hyperplane_of(f"r{k}") for k in (1, 2, 3))
    parts = [Tripartition(blue, frozenset("AB"), frozenset("CD")),
             Tripartition(red, frozenset("AC"), frozenset("BD"))]
    return DividingPattern(col, parts)


def fixture_doc(c, pattern=None, note=""):
    doc = {"schema": SCHEMAS["fixture"], "name": c.name, "note": note, "complex": complex_to_json(c)}
    if pattern is not None:
        doc["pattern"] = pattern_to_json(pattern)
    return doc


def main():
    g2 = genus_two()
    docs = {
        "fig3-right": fixture_doc(two_square_torus_cover(), note="two vertices, two squares"),
        "fig3-middle": fixture_doc(two_squares(), note="two squares sharing two vertices"),
        "fig3-left": fixture_doc(three_squares(), note="three squares sharing vertices"),
        "fig3-left-mirror": fixture_doc(three_squares(True), note="mirror reading of fig3-left"),
        "genus2": fixture_doc(g2, genus_two_pattern(g2), note="genus-2 surface, blue/red curves"),
    }
    for name, doc in docs.items():
        write_json(os.path.join(OUT, f"{name}.json"), doc)


if __name__ == "__main__":
    main()
