"""JSON serialisation and DOT export."""

from __future__ import annotations

import json
import os
import tempfile

from .complex import Cube, CubeComplex
from .errors import SchemaError
from .graph import SimplicialGraph, _sort_key

MAJOR = 1
SCHEMAS = {
    "complex": "cubecx/complex@1.0",
    "colouring": "cubecx/colouring@1.0",
    "pattern": "cubecx/pattern@1.0",
    "automorphism": "cubecx/automorphism@1.0",
    "bundle": "cubecx/bundle@1.0",
    "fixture": "cubecx/fixture@1.0",
}


def check_schema(obj: dict, kind: str):
    tag = obj.get("schema")
    if not isinstance(tag, str) or "@" not in tag:
        raise SchemaError(f"missing schema tag for {kind}")
    name, version = tag.split("@", 1)
    if name != f"cubecx/{kind}":
        raise SchemaError(f"expected a {kind} document, got {name}")
    try:
        major = int(version.split(".")[0])
    except ValueError as exc:
        raise SchemaError(f"bad schema version {version!r}") from exc
    if major > MAJOR:
        raise SchemaError(f"{tag} is newer than supported major version {MAJOR}")


# complexes


def complex_to_json(c: CubeComplex) -> dict:
    squares = sorted(c.squares(), key=lambda s: s.as_square())
    sq_index = {s.key: i for i, s in enumerate(squares)}
    cubes = {}
    index = sq_index
    for k in sorted(c.cubes):
        if k < 3:
            continue
        cells = sorted(c.cubes[k], key=lambda q: sorted(q.germs[0]))
        cubes[str(k)] = [[index[f.key] for f in q.faces()] for q in cells]
        index = {q.key: i for i, q in enumerate(cells)}
    return {
        "schema": SCHEMAS["complex"],
        "name": c.name,
        "vertices": list(c.vertices),
        "darts": [{"id": d, "origin": c.origin[d], "reverse": c.rev.get(d),
                   "germ_label": c.label.get(d)} for d in sorted(c.origin)],
        "squares": [list(s.as_square()) for s in squares],
        "cubes": cubes,
    }


def _cube_from_faces(c: CubeComplex, faces: list):
    """Rebuild a cube from its 2k codimension-1 faces."""
    k = len(faces) // 2
    want = {f.key for f in faces}
    g0 = set(faces[0].germs[0])
    for f in faces[1:]:
        for row in f.germs:
            frame = g0 | set(row)
            if len(frame) != k:
                continue
            cube = c.assemble(sorted(frame))
            if cube is not None and {q.key for q in cube.faces()} == want:
                return cube
    return None


def complex_from_json(obj: dict, strict: bool = False) -> CubeComplex:
    check_schema(obj, "complex")
    c = CubeComplex(obj.get("name", ""))
    for v in obj.get("vertices", []):
        c.add_vertex(v)
    for d in obj.get("darts", []):
        c.add_dart(d["id"], d["origin"], d.get("reverse"), d.get("germ_label"))
    ok_darts = all(c.rev.get(c.rev.get(d)) == d for d in c.origin)
    level = []
    for sq in obj.get("squares", []):
        if not ok_darts:
            c.bad_cells.append(("square-open", tuple(sq), None))
            level.append(None)
            continue
        level.append(c.add_square(*sq, strict=strict))
    for k in sorted(obj.get("cubes", {}), key=int):
        nxt = []
        for faces in obj["cubes"][k]:
            fs = [level[i] if 0 <= i < len(level) else None for i in faces]
            cube = None
            if None not in fs and len(fs) == 2 * int(k):
                cube = _cube_from_faces(c, fs)
            if cube is None:
                if strict:
                    raise SchemaError(f"{k}-cube with faces {faces} does not assemble")
                c.bad_cells.append(("cube-poset", tuple(faces), int(k)))
                nxt.append(None)
                continue
            nxt.append(c.add_cube(cube, strict=strict))
        level = nxt
    return c


# colourings and patterns


def colouring_to_json(col) -> dict:
    classes = []
    for v, hs in col.classes().items():
        classes.append({"colour": v, "hyperplanes": hs, "positive": [col.positive[h] for h in hs]})
    return {
        "schema": SCHEMAS["colouring"],
        "graph": {"vertices": col.graph.sorted_vertices(), "edges": [list(e) for e in col.graph.sorted_edges()]},
        "classes": classes,
    }


def colouring_from_json(obj: dict):
    from .colouring import SpecialColouring

    check_schema(obj, "colouring")
    g = SimplicialGraph(obj["graph"]["vertices"], [tuple(e) for e in obj["graph"]["edges"]])
    colour, positive = {}, {}
    for cl in obj["classes"]:
        for h, p in zip(cl["hyperplanes"], cl["positive"]):
            colour[h] = cl["colour"]
            positive[h] = p
    return SpecialColouring(g, colour, positive)


def pattern_to_json(p) -> dict:
    return {
        "schema": SCHEMAS["pattern"],
        "colouring": colouring_to_json(p.colouring),
        "partitions": [{"zero": sorted(t.zero), "minus": sorted(t.minus, key=_sort_key),
                        "plus": sorted(t.plus, key=_sort_key)} for t in p.partitions],
    }


def pattern_from_json(obj: dict):
    from .divisibility import DividingPattern, Tripartition

    check_schema(obj, "pattern")
    col = colouring_from_json(obj["colouring"])
    parts = [Tripartition(frozenset(t["zero"]), frozenset(t["minus"]), frozenset(t["plus"]))
             for t in obj["partitions"]]
    return DividingPattern(col, parts)


def automorphism_to_json(vertex_map: dict, dart_map: dict) -> dict:
    return {"schema": SCHEMAS["automorphism"],
            "vertex_map": {str(k): v for k, v in sorted(vertex_map.items())},
            "dart_map": {str(k): v for k, v in sorted(dart_map.items())}}


def automorphism_from_json(obj: dict) -> tuple:
    check_schema(obj, "automorphism")
    return dict(obj["vertex_map"]), dict(obj["dart_map"])


# files


def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def write_json(path, obj: dict):
    """Write atomically: a temporary file in the same directory, then rename."""
    path = os.fspath(path)
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(dumps(obj))
            fh.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_json(path) -> dict:
    with open(path) as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: {exc}") from exc


def load_complex(path, strict: bool = False) -> CubeComplex:
    return complex_from_json(read_json(path), strict=strict)


def save_complex(path, c: CubeComplex):
    write_json(path, complex_to_json(c))


# DOT


def _q(x) -> str:
    return '"' + str(x).replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(c: CubeComplex, colouring=None) -> str:
    """The 1-skeleton as an undirected DOT multigraph, deterministic output."""
    lines = [f"graph {_q(c.name or 'complex')} {{"]
    for v in sorted(c.vertices, key=_sort_key):
        lines.append(f"  {_q(v)};")
    colour = {}
    if colouring is not None:
        for d in c.origin:
            colour[d] = colouring.colour.get(c.hyperplane_of(d))
    for d in c.edges():
        attrs = [f"label={_q(d)}"]
        if d in colour:
            attrs.append(f"colour_class={_q(colour[d])}")
        lines.append(f"  {_q(c.origin[d])} -- {_q(c.terminus(d))} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_to_dot(g: SimplicialGraph, name: str = "graph") -> str:
    lines = [f"graph {_q(name)} {{"]
    for v in g.sorted_vertices():
        lines.append(f"  {_q(v)};")
    for a, b in g.sorted_edges():
        lines.append(f"  {_q(a)} -- {_q(b)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# host bundles


def bundle_to_json(b) -> dict:
    out = {
        "schema": SCHEMAS["bundle"],
        "base": complex_to_json(b.base),
        "pattern": pattern_to_json(b.pattern),
        "e_complex": complex_to_json(b.e_complex),
        "host": complex_to_json(b.host),
        "sign_vectors": {v: list(s) for v, s in sorted(b.sign_vectors.items())},
        "embedding_j": dict(sorted(b.embedding_j.vertex_map.items())),
    }
    if b.extended is not None:
        out["extended"] = {
            "n": b.extended.n,
            "host": complex_to_json(b.extended.host),
            "phi": automorphism_to_json(b.extended.phi.vertex_map, b.extended.phi.dart_map),
        }
    return out


def bundle_from_json(obj: dict, check: bool = True):
    """Rebuild a host bundle from its base and pattern; stored complexes must agree."""
    from .host import build_extended_host, build_host

    check_schema(obj, "bundle")
    base = complex_from_json(obj["base"], strict=True)
    pattern = pattern_from_json(obj["pattern"])
    b = build_host(pattern, base)
    if "extended" in obj:
        b = build_extended_host(b, int(obj["extended"]["n"]))
    if check:
        if complex_to_json(b.host) != dict(obj["host"], name=b.host.name):
            raise SchemaError("stored host differs from the rebuilt one")
        if b.extended is not None and \
                complex_to_json(b.extended.host) != dict(obj["extended"]["host"], name=b.extended.host.name):
            raise SchemaError("stored extended host differs from the rebuilt one")
    return b
