import json

import pytest

from cubecx import io
from cubecx.cli import INCONCLUSIVE, INPUT_ERROR, NO, OK, parse_graph, run_command
from cubecx.colouring import standard_colouring
from cubecx.errors import CubeComplexError, InvalidComplex, SchemaError
from cubecx.fixpoints import identity_automorphism
from cubecx.generators import droms, fixture, salvetti
from cubecx.graph import SimplicialGraph, complete_graph, cycle_graph, path_graph
from cubecx.host import build_extended_host, build_host, extended_graph
from cubecx.maps import is_isomorphic

from conftest import corpus, corpus_patterns, lone_square


def run(argv, capsys):
    code = run_command([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def same_pattern(p, q):
    return (p.colouring.graph == q.colouring.graph and p.colouring.colour == q.colouring.colour
            and p.colouring.positive == q.colouring.positive and p.partitions == q.partitions)


# round trips


def test_complex_round_trip():
    for name, c in corpus():
        back = io.complex_from_json(json.loads(io.dumps(io.complex_to_json(c))), strict=True)
        assert back.cell_counts() == c.cell_counts(), name
        assert is_isomorphic(back, c, respect_labels=True), name
        assert io.complex_to_json(back) == io.complex_to_json(c), name


def test_colouring_and_pattern_round_trip():
    for name, c, p in corpus_patterns():
        back = io.pattern_from_json(json.loads(io.dumps(io.pattern_to_json(p))))
        assert same_pattern(back, p), name
        col = standard_colouring(c)
        again = io.colouring_from_json(io.colouring_to_json(col))
        assert again.colour == col.colour and again.graph == col.graph


def test_automorphism_round_trip():
    e = identity_automorphism(lone_square())
    vm, dm = io.automorphism_from_json(io.automorphism_to_json(e.vertex_map, e.dart_map))
    assert vm == e.vertex_map and dm == e.dart_map


def test_bundle_round_trip():
    f = fixture("genus2")
    b = build_extended_host(build_host(f.pattern, f.complex), 2)
    obj = json.loads(io.dumps(io.bundle_to_json(b)))
    back = io.bundle_from_json(obj)
    assert back.extended.n == 2
    assert io.complex_to_json(back.extended.host) == io.complex_to_json(b.extended.host)
    obj["host"]["vertices"] = obj["host"]["vertices"][:-1]
    with pytest.raises(SchemaError):
        io.bundle_from_json(obj)


def test_file_round_trip(tmp_path):
    c = droms(path_graph(3))[0]
    path = tmp_path / "c.json"
    io.save_complex(path, c)
    assert is_isomorphic(io.load_complex(path), c, respect_labels=True)
    assert [p.name for p in tmp_path.iterdir()] == ["c.json"]


def test_bad_square_strict_and_lenient():
    obj = io.complex_to_json(lone_square())
    obj["squares"][0] = ["p", "q", "s", "r"]
    with pytest.raises(CubeComplexError):
        io.complex_from_json(obj, strict=True)
    c = io.complex_from_json(obj)
    assert c.bad_cells and not c.validate()


def test_bad_cube_faces():
    c = salvetti(complete_graph(3))
    obj = io.complex_to_json(c)
    k = max(obj["cubes"], key=int)
    obj["cubes"][k][0] = obj["cubes"][k][0][:-1] + [999]
    with pytest.raises(SchemaError):
        io.complex_from_json(obj, strict=True)
    assert io.complex_from_json(obj).bad_cells


def test_schema_versions():
    obj = io.complex_to_json(lone_square())
    obj["schema"] = "cubecx/complex@1.7"
    io.complex_from_json(obj)
    obj["schema"] = "cubecx/complex@2.0"
    with pytest.raises(SchemaError):
        io.complex_from_json(obj)
    obj["schema"] = "cubecx/pattern@1.0"
    with pytest.raises(SchemaError):
        io.complex_from_json(obj)
    del obj["schema"]
    with pytest.raises(SchemaError):
        io.complex_from_json(obj)


def test_dot_is_deterministic():
    c = fixture("genus2").complex
    a, b = io.to_dot(c), io.to_dot(c.copy())
    assert a == b and a.startswith("graph ")
    assert io.graph_to_dot(SimplicialGraph([], [])) == 'graph "graph" {\n}\n'


def test_extended_dot_counts():
    f = fixture("genus2")
    b = build_host(f.pattern, f.complex)
    text = io.graph_to_dot(b.graph)
    assert sum(1 for l in text.splitlines() if l.strip().endswith(";") and "--" not in l) == 8
    for n in (2, 3):
        assert len(extended_graph(b.graph, 2, n).vertices) == 6 + 2 * n


# graph specs


def test_parse_graph():
    assert parse_graph("cycle:5") == cycle_graph(5)
    g = parse_graph("a-b,b-c,d")
    assert sorted(g.vertices) == ["a", "b", "c", "d"] and len(g.edges) == 2
    from cubecx.cli import InputError
    for bad in ("wheel:3", "a-a", "a-b-c", "path:x"):
        with pytest.raises(InputError):
            parse_graph(bad)


# command line


def test_build_and_check(tmp_path, capsys):
    out = tmp_path / "d.json"
    pat = tmp_path / "p.json"
    code, text, _ = run(["build", "droms", "--graph", "path:3", "-o", out, "--pattern-out", pat], capsys)
    assert code == OK and out.exists() and pat.exists()
    for what in ("valid", "npc", "special"):
        assert run(["check", what, out], capsys)[0] == OK
    assert run(["check", "median", "--fixture", "genus2"], capsys)[0] == OK
    assert run(["check", "median", "--fixture", "fig3-left"], capsys)[0] == NO
    code, text, _ = run(["check", "special", "--fixture", "fig3-right", "--json"], capsys)
    assert code == OK and json.loads(text)["hyperplanes"] == 2
    assert run(["build", "salvetti", "--graph", "cycle:4"], capsys)[0] == OK
    assert run(["build", "config", "--graph", "cycle:5", "--n", "2"], capsys)[0] == OK
    assert run(["build", "config", "--graph", "cycle:5", "--n", "9"], capsys)[0] == INPUT_ERROR
    assert run(["build", "fixture", "--name", "fig3-left"], capsys)[0] == OK


def test_double_cover_command(tmp_path, capsys):
    base = tmp_path / "b.json"
    io.save_complex(base, lone_square())
    code, text, _ = run(["build", "double-cover", base, "--cover", "p", "--json"], capsys)
    assert code == OK and json.loads(text)["cells"]["0"] == 8


def test_colour_commands(capsys):
    assert run(["colour", "--fixture", "genus2"], capsys)[0] == OK
    code, text, _ = run(["colour", "--enumerate", "--fixture", "fig3-left", "--json"], capsys)
    assert code == OK and json.loads(text)["minimal_colourings"] == 17
    assert run(["colour", "--enumerate", "--fixture", "fig3-left", "--cap-colourings", "1"],
               capsys)[0] == INCONCLUSIVE


def test_divide_commands(tmp_path, capsys):
    assert run(["divide", "strong", "--fixture", "fig3-left"], capsys)[0] == NO
    assert run(["divide", "decide", "--fixture", "fig3-left"], capsys)[0] == OK
    assert run(["divide", "decide", "--fixture", "fig3-middle"], capsys)[0] == NO
    assert run(["divide", "decide", "--fixture", "fig3-middle", "--cap-colourings", "1"],
               capsys)[0] == INCONCLUSIVE
    assert run(["divide", "decide", "--fixture", "fig3-middle", "--cap-colourings", "0"],
               capsys)[0] == INPUT_ERROR
    assert run(["divide", "validate", "--fixture", "genus2"], capsys)[0] == OK
    c = tmp_path / "c.json"
    p = tmp_path / "p.json"
    run(["build", "droms", "--graph", "cycle:4", "-o", c], capsys)
    assert run(["divide", "strong", c, "-o", p], capsys)[0] == OK
    assert run(["divide", "validate", c, "--pattern", p], capsys)[0] == OK
    assert run(["divide", "validate", c], capsys)[0] == INPUT_ERROR


def test_host_pipeline(tmp_path, capsys):
    b1, b2 = tmp_path / "b1.json", tmp_path / "b2.json"
    dot = tmp_path / "g.dot"
    code, text, _ = run(["host", "build", "--fixture", "genus2", "-o", b1, "--dot", dot, "--json"], capsys)
    assert code == OK and json.loads(text)["host_cells"] == {"0": 4, "1": 16, "2": 13}
    assert dot.read_text().count(" -- ") == 13
    assert run(["host", "verify", b1], capsys)[0] == OK
    assert run(["host", "extend", "--n", "2", b1, "-o", b2], capsys)[0] == OK
    code, text, _ = run(["fix", b2, "--json"], capsys)
    rep = json.loads(text)
    assert code == OK and rep["base_component_isomorphic"] and rep["group_order"] == 2
    assert run(["fix", b1], capsys)[0] == INPUT_ERROR
    assert run(["host", "extend", "--n", "1", b1], capsys)[0] == INPUT_ERROR
    assert run(["host", "build", "--fixture", "fig3-left"], capsys)[0] == INPUT_ERROR


def test_fix_with_automorphism_files(tmp_path, capsys):
    c = lone_square()
    cp, ap = tmp_path / "c.json", tmp_path / "a.json"
    io.save_complex(cp, c)
    rot = {"p": "r", "q": "s", "r": "p", "s": "q", "p~": "r~", "q~": "s~", "r~": "p~", "s~": "q~"}
    io.write_json(ap, io.automorphism_to_json({"a": "c", "b": "d", "c": "a", "d": "b"}, rot))
    code, text, _ = run(["fix", cp, "--aut", ap, "--json"], capsys)
    assert code == OK and json.loads(text)["component_vertices"] == [1]
    assert run(["fix", cp, "--aut", ap, "--cap-group-order", "1"], capsys)[0] == INCONCLUSIVE
    io.write_json(ap, io.automorphism_to_json({"a": "b", "b": "a", "c": "c", "d": "d"}, rot))
    assert run(["fix", cp, "--aut", ap], capsys)[0] == INPUT_ERROR
    assert run(["fix", cp], capsys)[0] == INPUT_ERROR


def test_complete_commands(tmp_path, capsys):
    code, text, _ = run(["complete", "--fixture", "fig3-right", "--json"], capsys)
    rep = json.loads(text)
    assert code == OK and rep["links_ok"] and rep["phi_order"] == 2 and rep["degree"] == 2
    cp = tmp_path / "c.json"
    io.save_complex(cp, droms(SimplicialGraph(["a", "b"], []))[0])
    assert run(["complete", "--racg", cp], capsys)[0] == OK


def test_collapse_iso_stats_export(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    io.save_complex(a, lone_square())
    assert run(["collapse", "p", "--input", a, "-o", b], capsys)[0] == OK
    assert io.load_complex(b).cell_counts() == {0: 2, 1: 1}
    assert run(["iso", a, a, "--labels"], capsys)[0] == OK
    assert run(["iso", a, b], capsys)[0] == NO
    code, text, _ = run(["stats", "--fixture", "genus2", "--json"], capsys)
    assert code == OK and json.loads(text)["euler_characteristic"] == -2
    code, text, _ = run(["export", "extended", "--fixture", "genus2"], capsys)
    assert code == OK and text.count(" -- ") == 13
    assert run(["export", "crossing", "--fixture", "genus2"], capsys)[0] == OK
    assert run(["export", "complex", "--fixture", "genus2"], capsys)[0] == OK


def test_input_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["stats", bad], capsys)[0] == INPUT_ERROR
    assert run(["stats", tmp_path / "missing.json"], capsys)[0] == INPUT_ERROR
    assert run(["stats"], capsys)[0] == INPUT_ERROR
    newer = tmp_path / "newer.json"
    obj = io.complex_to_json(lone_square())
    obj["schema"] = "cubecx/complex@9.0"
    newer.write_text(json.dumps(obj))
    assert run(["stats", newer], capsys)[0] == INPUT_ERROR
    with pytest.raises(SystemExit) as exc:
        run_command(["nope"])
    assert exc.value.code == INPUT_ERROR
    with pytest.raises(SystemExit) as exc:
        run_command(["stats", "a", "b"])
    assert exc.value.code == INPUT_ERROR


def test_thread_setting(monkeypatch, capsys):
    monkeypatch.setenv("CUBECX_THREADS", "0")
    assert run(["stats", "--fixture", "genus2"], capsys)[0] == INPUT_ERROR
    monkeypatch.setenv("CUBECX_THREADS", "x")
    assert run(["stats", "--fixture", "genus2"], capsys)[0] == INPUT_ERROR
    monkeypatch.setenv("CUBECX_THREADS", "4")
    assert run(["stats", "--fixture", "genus2"], capsys)[0] == OK
