"""Command-line driver.

Exit codes: 0 success or affirmative verdict, 1 negative verdict,
2 inconclusive (a cap was hit), 3 input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

from . import io
from .colouring import enumerate_minimal_colourings, standard_colouring, validate_colouring
from .complex import CubeComplex, is_median_graph
from .divisibility import (Caps, decide_divisible_exhaustive, extended_crossing_graph,
                           is_strongly_divisible, strong_pattern, validate_pattern)
from .errors import CapExceeded, CubeComplexError, SchemaError
from .fixpoints import DEFAULT_GROUP_ORDER_CAP, CubicalAutomorphism, fixed_set, group_closure
from .generators import (FIXTURES, canonical_completion, canonical_completion_racg,
                         configuration_space, double_cover, droms, fixture, links_match, salvetti)
from .graph import SimplicialGraph, complete_graph, cycle_graph, empty_graph, path_graph
from .maps import collapse, is_isomorphic

OK, NO, INCONCLUSIVE, INPUT_ERROR = 0, 1, 2, 3


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(INPUT_ERROR, f"{self.prog}: error: {message}\n")


@dataclass
class PipelineConfig:
    inputs: list = field(default_factory=list)
    n: int = 2
    cap_independent_sets: int = 10**5
    cap_colourings: int = 10**6
    cap_group_order: int = DEFAULT_GROUP_ORDER_CAP
    output: str | None = None
    dot: str | None = None
    json: bool = False
    threads: int = 1

    def check(self):
        for name in ("cap_independent_sets", "cap_colourings", "cap_group_order", "threads"):
            if getattr(self, name) < 1:
                raise InputError(f"{name.replace('_', '-')} must be positive")

    @property
    def caps(self) -> Caps:
        return Caps(independent_sets=self.cap_independent_sets, colourings=self.cap_colourings)


def _threads() -> int:
    raw = os.environ.get("CUBECX_THREADS", "1")
    try:
        n = int(raw)
    except ValueError as exc:
        raise InputError(f"CUBECX_THREADS must be an integer, got {raw!r}") from exc
    if n < 1:
        raise InputError("CUBECX_THREADS must be positive")
    return n


# input helpers


GRAPH_FAMILIES = {"path": path_graph, "cycle": cycle_graph, "complete": complete_graph, "empty": empty_graph}


def parse_graph(text: str) -> SimplicialGraph:
    """A graph from 'cycle:5', 'path:3', 'complete:2', 'empty:2', 'a-b,b-c' or a JSON file."""
    if os.path.exists(text):
        obj = io.read_json(text)
        return SimplicialGraph(obj["vertices"], [tuple(e) for e in obj["edges"]])
    if ":" in text:
        fam, _, n = text.partition(":")
        if fam not in GRAPH_FAMILIES or not n.isdigit():
            raise InputError(f"bad graph description {text!r}")
        return GRAPH_FAMILIES[fam](int(n))
    vs, es = set(), []
    for part in filter(None, text.split(",")):
        ends = part.split("-")
        if len(ends) == 1:
            vs.add(ends[0])
        elif len(ends) == 2 and ends[0] != ends[1]:
            vs.update(ends)
            es.append(tuple(ends))
        else:
            raise InputError(f"bad edge {part!r}")
    return SimplicialGraph(vs, es)


def load_input(args, want_pattern: bool = False):
    """(complex, pattern or None) from --fixture or a path."""
    if getattr(args, "fixture", None):
        if args.fixture not in FIXTURES:
            raise InputError(f"unknown fixture {args.fixture!r}; choose from {', '.join(FIXTURES)}")
        f = fixture(args.fixture)
        return f.complex, f.pattern
    path = getattr(args, "input", None)
    if not path:
        raise InputError("give an input file or --fixture")
    if not os.path.exists(path):
        raise InputError(f"no such file: {path}")
    obj = io.read_json(path)
    tag = str(obj.get("schema", ""))
    if tag.startswith("cubecx/fixture@"):
        io.check_schema(obj, "fixture")
        c = io.complex_from_json(obj["complex"], strict=True)
        return c, io.pattern_from_json(obj["pattern"]) if "pattern" in obj else None
    c = io.complex_from_json(obj, strict=True)
    pattern = None
    if want_pattern and getattr(args, "pattern", None):
        pattern = io.pattern_from_json(io.read_json(args.pattern))
    return c, pattern


def _emit(args, report: dict, text: str):
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True, default=str))
    else:
        print(text)


def _write(path, obj):
    if path:
        io.write_json(path, obj)


# commands


def cmd_build(args, cfg) -> int:
    kind = args.kind
    pattern = None
    if kind == "fixture":
        f = fixture(args.name)
        c, pattern = f.complex, f.pattern
    elif kind == "salvetti":
        c = salvetti(parse_graph(args.graph))
    elif kind == "droms":
        c, pattern = droms(parse_graph(args.graph))
    elif kind == "config":
        g = parse_graph(args.graph)
        if not 0 <= cfg.n <= len(g.vertices):
            raise InputError(f"--n must lie in [0, {len(g.vertices)}]")
        c, pattern = configuration_space(g, cfg.n)
    else:
        base, _ = load_input(args)
        c = double_cover(base, args.cover or [])
    _write(cfg.output, io.complex_to_json(c))
    if pattern is not None and args.pattern_out:
        _write(args.pattern_out, io.pattern_to_json(pattern))
    if cfg.dot:
        with open(cfg.dot, "w") as fh:
            fh.write(io.to_dot(c))
    counts = c.cell_counts()
    _emit(args, {"cells": counts}, f"{c.name}: cells {counts}")
    return OK


def cmd_check(args, cfg) -> int:
    c, _ = load_input(args)
    what = args.what
    hyps = c.hyperplanes()
    report = {"property": what, "hyperplanes": len(hyps)}
    if what == "valid":
        rep = c.validate()
        ok = bool(rep)
        report["violations"] = [str(p) for p in rep.violations]
    elif what == "npc":
        ok, witness = c.is_npc()
        report["witness"] = witness
    elif what == "special":
        rep = c.special_report()
        ok = rep.special
        report.update({k: v for k, v in vars(rep).items() if k != "special"})
    else:
        if not c.is_connected():
            raise InputError("the median check needs a connected complex")
        ok, witness = is_median_graph(c)
        report["witness"] = witness
    report["result"] = ok
    _emit(args, report, f"{what}: {'yes' if ok else 'no'} ({len(hyps)} hyperplanes)")
    return OK if ok else NO


def cmd_colour(args, cfg) -> int:
    c, _ = load_input(args)
    if args.enumerate:
        try:
            n = sum(1 for _ in enumerate_minimal_colourings(c, cfg.cap_colourings))
        except CapExceeded as exc:
            _emit(args, {"status": "inconclusive", "reason": str(exc)}, f"inconclusive: {exc}")
            return INCONCLUSIVE
        _emit(args, {"minimal_colourings": n}, f"{n} minimal colourings")
        return OK
    col = standard_colouring(c)
    rep = validate_colouring(c, col)
    _write(cfg.output, io.colouring_to_json(col))
    _emit(args, {"conditions": rep.conditions, "witnesses": rep.witnesses},
          f"standard colouring: valid={rep.valid} minimal={rep.minimal}")
    return OK if rep.valid else NO


def cmd_divide(args, cfg) -> int:
    c, pattern = load_input(args, want_pattern=True)
    if args.mode == "validate":
        if pattern is None:
            raise InputError("validate needs --pattern or a fixture with a pattern")
        rep = validate_pattern(c, pattern)
        _emit(args, {"conditions": rep.conditions, "witnesses": rep.witnesses},
              f"pattern valid: {rep.ok}")
        return OK if rep.ok else NO
    if args.mode == "strong":
        try:
            res = is_strongly_divisible(c, cfg.cap_independent_sets)
        except CapExceeded as exc:
            _emit(args, {"status": "inconclusive", "reason": str(exc)}, f"inconclusive: {exc}")
            return INCONCLUSIVE
        if res.divisible and cfg.output:
            _write(cfg.output, io.pattern_to_json(strong_pattern(c, cfg.cap_independent_sets)))
        _emit(args, {"strongly_divisible": res.divisible, "failures": res.failures},
              f"strongly divisible: {'yes' if res.divisible else 'no'}")
        return OK if res.divisible else NO
    verdict = decide_divisible_exhaustive(c, cfg.caps)
    if verdict.pattern is not None:
        _write(cfg.output, io.pattern_to_json(verdict.pattern))
    _emit(args, {"status": verdict.status, "colourings_tried": verdict.colourings_tried,
                 "reason": verdict.reason}, f"divisible: {verdict.status}")
    return {"yes": OK, "no": NO}.get(verdict.status, INCONCLUSIVE)


def _bundle_summary(b) -> dict:
    out = {"e_cells": b.e_complex.cell_counts(), "host_cells": b.host.cell_counts(),
           "graph_vertices": len(b.graph.vertices), "graph_edges": len(b.graph.edges)}
    if b.extended is not None:
        out["extended_n"] = b.extended.n
        out["extended_cells"] = b.extended.host.cell_counts()
    return out


def cmd_host(args, cfg) -> int:
    from .host import build_extended_host, build_host, verify_host

    if args.action == "build":
        c, pattern = load_input(args, want_pattern=True)
        if pattern is None:
            raise InputError("host build needs --pattern or a fixture with a pattern")
        b = build_host(pattern, c)
    else:
        if not args.input or not os.path.exists(args.input):
            raise InputError("host verify/extend needs a bundle file")
        b = io.bundle_from_json(io.read_json(args.input))
    if args.action == "extend":
        if cfg.n < 2:
            raise InputError("--n must be at least 2")
        b = build_extended_host(b, cfg.n)
    if args.action == "verify":
        rep = verify_host(b)
        _emit(args, {"checks": rep.checks}, "\n".join(f"{k}: {'pass' if v else 'fail'}"
                                                       for k, v in rep.checks.items()))
        return OK if rep.ok else NO
    _write(cfg.output, io.bundle_to_json(b))
    if cfg.dot:
        with open(cfg.dot, "w") as fh:
            fh.write(io.graph_to_dot(b.graph, "extended_crossing_graph"))
    summary = _bundle_summary(b)
    _emit(args, summary, " ".join(f"{k}={v}" for k, v in summary.items()))
    return OK


def cmd_fix(args, cfg) -> int:
    from .fixpoints import component_of

    if not args.input or not os.path.exists(args.input):
        raise InputError("fix needs an input file")
    obj = io.read_json(args.input)
    base = None
    if str(obj.get("schema", "")).startswith("cubecx/bundle@"):
        b = io.bundle_from_json(obj)
        if b.extended is None:
            raise InputError("the bundle has no extended host; run 'host extend' first")
        gens = [b.extended.phi]
        base = b.base
        seed = b.embedding_j.vertex_map[base.vertices[0]] if base.vertices else None
    else:
        c = io.complex_from_json(obj, strict=True)
        if not args.aut:
            raise InputError("give --aut files for a plain complex")
        gens = []
        for path in args.aut:
            vm, dm = io.automorphism_from_json(io.read_json(path))
            g = CubicalAutomorphism(c, vm, dm)
            if g.problems():
                raise InputError(f"{path}: not an automorphism: {g.problems()[0]}")
            gens.append(g)
        seed = None
    try:
        order = len(group_closure(gens, cfg.cap_group_order))
    except CapExceeded as exc:
        _emit(args, {"status": "inconclusive", "reason": str(exc)}, f"inconclusive: {exc}")
        return INCONCLUSIVE
    fs = fixed_set(gens)
    sizes = [len(vs) for vs in fs.complex.connected_vertex_sets()]
    report = {"group_order": order, "components": len(sizes), "component_vertices": sizes}
    code = OK
    if base is not None and seed is not None:
        comp, _ = component_of(fs.complex, seed)
        same = is_isomorphic(comp, base) is not None
        report["base_component_isomorphic"] = same
        code = OK if same else NO
    _write(cfg.output, io.complex_to_json(fs.complex))
    _emit(args, report, " ".join(f"{k}={v}" for k, v in report.items()))
    return code


def cmd_complete(args, cfg) -> int:
    from .fixpoints import fixed_set as fix

    c, _ = load_input(args)
    b = canonical_completion_racg(c, args.cover) if args.racg else canonical_completion(c)
    bad_links = links_match(b.completed, b.link_target)
    f = fix([b.phi]).complex
    fixed_is_base = set(f.vertices) == set(b.base.vertices) and set(f.origin) == set(b.base.origin)
    report = {"cells": b.completed.cell_counts(), "links_ok": not bad_links, "phi_order": b.phi.order(),
              "fix_is_base": fixed_is_base, "degree": b.degree, "warnings": b.warnings}
    _write(cfg.output, io.complex_to_json(b.completed))
    _emit(args, report, " ".join(f"{k}={v}" for k, v in report.items()))
    return OK if not bad_links and fixed_is_base else NO


def cmd_collapse(args, cfg) -> int:
    c, _ = load_input(args)
    out, _ = collapse(c, args.hyperplanes)
    _write(cfg.output, io.complex_to_json(out))
    _emit(args, {"cells": out.cell_counts()}, f"collapsed: cells {out.cell_counts()}")
    return OK


def cmd_iso(args, cfg) -> int:
    a = io.load_complex(args.first, strict=True)
    b = io.load_complex(args.second, strict=True)
    m = is_isomorphic(a, b, respect_labels=args.labels)
    report = {"isomorphic": m is not None}
    if m is not None:
        report["vertex_map"] = m.vertex_map
    _emit(args, report, f"isomorphic: {'yes' if m else 'no'}")
    return OK if m is not None else NO


def cmd_stats(args, cfg) -> int:
    c, _ = load_input(args)
    report = {"cells": c.cell_counts(), "euler_characteristic": c.euler_characteristic(),
              "components": len(c.connected_vertex_sets()), "hyperplanes": len(c.hyperplanes()),
              "crossings": len(c.crossing_graph().edges), "special": c.is_special()}
    _emit(args, report, "\n".join(f"{k}: {v}" for k, v in report.items()))
    return OK


def cmd_export(args, cfg) -> int:
    c, pattern = load_input(args, want_pattern=True)
    if args.what == "complex":
        text = io.to_dot(c, pattern.colouring if pattern else None)
    elif args.what == "crossing":
        text = io.graph_to_dot(c.crossing_graph(), "crossing_graph")
    else:
        if pattern is None:
            raise InputError("the extended crossing graph needs a pattern")
        text = io.graph_to_dot(extended_crossing_graph(c, pattern), "extended_crossing_graph")
    if cfg.dot:
        with open(cfg.dot, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return OK


# parser


def _add_input(p, pattern=False):
    p.add_argument("input", nargs="?", help="complex JSON (or fixture document)")
    p.add_argument("--fixture", choices=FIXTURES, help="use a shipped fixture instead of a file")
    if pattern:
        p.add_argument("--pattern", help="dividing pattern JSON")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=2, help="copies in the extended host, or tokens")
    common.add_argument("--cap-independent-sets", type=int, default=10**5)
    common.add_argument("--cap-colourings", type=int, default=10**6)
    common.add_argument("--cap-group-order", type=int, default=DEFAULT_GROUP_ORDER_CAP)
    common.add_argument("--json", action="store_true", help="machine-readable report")
    common.add_argument("--dot", help="write a DOT file")
    common.add_argument("-o", "--output", help="write the main artifact here")

    p = _Parser(prog="cubecx", description="Special cube complexes, colourings and dividing patterns.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("build", parents=[common], help="build a complex")
    b.add_argument("kind", choices=["salvetti", "droms", "config", "fixture", "double-cover"])
    b.add_argument("--graph", default="path:2")
    b.add_argument("--name", choices=FIXTURES, default="genus2")
    b.add_argument("--cover", nargs="*", help="hyperplanes for the double cover")
    b.add_argument("--pattern-out")
    _add_input(b)
    b.set_defaults(func=cmd_build)

    c = sub.add_parser("check", parents=[common], help="check a property")
    c.add_argument("what", choices=["valid", "npc", "special", "median"])
    _add_input(c)
    c.set_defaults(func=cmd_check)

    k = sub.add_parser("colour", parents=[common], help="standard colouring or enumeration")
    k.add_argument("--enumerate", action="store_true")
    _add_input(k)
    k.set_defaults(func=cmd_colour)

    d = sub.add_parser("divide", parents=[common], help="divisibility questions")
    d.add_argument("mode", choices=["strong", "decide", "validate"])
    _add_input(d, pattern=True)
    d.set_defaults(func=cmd_divide)

    h = sub.add_parser("host", parents=[common], help="host construction")
    h.add_argument("action", choices=["build", "verify", "extend"])
    _add_input(h, pattern=True)
    h.set_defaults(func=cmd_host)

    f = sub.add_parser("fix", parents=[common], help="fixed set of automorphisms")
    f.add_argument("input", nargs="?")
    f.add_argument("--phi", action="store_true", help="use the bundle's host automorphism")
    f.add_argument("--aut", nargs="*", help="automorphism JSON files")
    f.set_defaults(func=cmd_fix)

    m = sub.add_parser("complete", parents=[common], help="canonical completion")
    m.add_argument("--racg", action="store_true")
    m.add_argument("--cover", nargs="*", help="hyperplanes for the double cover")
    _add_input(m)
    m.set_defaults(func=cmd_complete)

    o = sub.add_parser("collapse", parents=[common], help="collapse hyperplanes")
    o.add_argument("hyperplanes", nargs="+")
    o.add_argument("--input", dest="input")
    o.add_argument("--fixture", choices=FIXTURES)
    o.set_defaults(func=cmd_collapse)

    i = sub.add_parser("iso", parents=[common], help="isomorphism test")
    i.add_argument("first")
    i.add_argument("second")
    i.add_argument("--labels", action="store_true")
    i.set_defaults(func=cmd_iso)

    s = sub.add_parser("stats", parents=[common], help="cell counts and invariants")
    _add_input(s)
    s.set_defaults(func=cmd_stats)

    e = sub.add_parser("export", parents=[common], help="DOT export")
    e.add_argument("what", choices=["complex", "crossing", "extended"])
    _add_input(e, pattern=True)
    e.set_defaults(func=cmd_export)
    return p


def run_command(argv) -> int:
    parser = build_parser()
    args, extra = parser.parse_known_args(argv)
    # argparse cannot place an optional positional after flags; pick it up here
    if len(extra) == 1 and not extra[0].startswith("-") and getattr(args, "input", "") is None:
        args.input = extra[0]
    elif extra:
        parser.error(f"unrecognized arguments: {' '.join(extra)}")
    try:
        cfg = PipelineConfig(inputs=[getattr(args, "input", None)], n=args.n,
                             cap_independent_sets=args.cap_independent_sets,
                             cap_colourings=args.cap_colourings, cap_group_order=args.cap_group_order,
                             output=args.output, dot=args.dot, json=args.json, threads=_threads())
        cfg.check()
        return args.func(args, cfg)
    except (InputError, SchemaError, KeyError, OSError) as exc:
        print(f"cubecx: input error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    except CubeComplexError as exc:
        print(f"cubecx: {type(exc).__name__}: {exc}", file=sys.stderr)
        return INPUT_ERROR


def main(argv=None) -> int:
    return run_command(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
