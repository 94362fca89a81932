"""Dividing patterns, strong divisibility and the exhaustive divisibility search."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

import networkx as nx

from .colouring import (DEFAULT_COLOURING_CAP, SpecialColouring, enumerate_minimal_colourings,
                        standard_colouring, validate_colouring)
from .complex import CubeComplex, UnionFind
from .errors import CapExceeded, InvalidComplex
from .graph import SimplicialGraph, _sort_key

DEFAULT_INDEPENDENT_SET_CAP = 10**5
DEFAULT_ZERO_SET_CAP = 10**6


@dataclass(frozen=True)
class Tripartition:
    zero: frozenset  # hyperplane ids
    minus: frozenset  # vertices
    plus: frozenset  # vertices

    def side(self, x) -> str:
        if x in self.plus:
            return "+"
        if x in self.minus:
            return "-"
        raise KeyError(x)

    def flipped(self) -> "Tripartition":
        return Tripartition(self.zero, self.plus, self.minus)

    def separates(self, a, b) -> bool:
        """True when vertex sets a and b lie on opposite sides."""
        return (a <= self.minus and b <= self.plus) or (a <= self.plus and b <= self.minus)


@dataclass
class DividingPattern:
    colouring: SpecialColouring
    partitions: list

    def labels(self) -> list:
        return [f"#H{i}" for i in range(len(self.partitions))]


@dataclass
class PatternReport:
    conditions: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.conditions.values())


def _zero_darts(c: CubeComplex, zero) -> frozenset:
    out = set()
    for h in zero:
        out |= c.hyperplane(h).darts
    return frozenset(out)


def queries(c: CubeComplex, col: SpecialColouring) -> list:
    """Everything condition (4) asks to separate.

    ('pair', x, y) for distinct vertices, and ('carrier', x, colour, sign)
    for each vertex outside a generalised half-carrier.
    """
    out = []
    vs = sorted(c.vertices, key=_sort_key)
    for x, y in itertools.combinations(vs, 2):
        out.append(("pair", x, y))
    for v in col.graph.sorted_vertices():
        for sign in "+-":
            hc = col.half_carrier(c, v, sign)
            for x in vs:
                if x not in hc:
                    out.append(("carrier", x, v, sign))
    return out


def _query_sets(c, col, q):
    if q[0] == "pair":
        return frozenset([q[1]]), frozenset([q[2]])
    return frozenset([q[1]]), col.half_carrier(c, q[2], q[3])


def validate_pattern(c: CubeComplex, p: DividingPattern) -> PatternReport:
    col = p.colouring
    known = {h.id for h in c.hyperplanes()}
    for t in p.partitions:
        if not t.zero <= known:
            raise InvalidComplex(f"partition uses unknown hyperplanes {sorted(t.zero - known)}")
    rep = PatternReport()
    crep = validate_colouring(c, col)
    rep.conditions["colouring"] = crep.minimal
    rep.witnesses["colouring"] = {k: v for k, v in crep.witnesses.items() if v}
    if not crep.valid:
        for k in ("1", "2", "3", "4a", "4b"):
            rep.conditions[k] = False
        return rep
    classes = col.classes()
    allv = frozenset(c.vertices)
    bad1, bad2, bad3 = [], [], []
    for i, t in enumerate(p.partitions):
        for a, b in itertools.combinations(sorted(t.zero), 2):
            if c.cross(a, b):
                bad1.append((i, "crossing", a, b))
        for h in t.zero:
            missing = set(classes[col.colour[h]]) - t.zero
            if missing:
                bad1.append((i, "class", h, sorted(missing)))
        if t.minus & t.plus or (t.minus | t.plus) != allv:
            bad2.append((i, "cover"))
        else:
            for comp in c.connected_vertex_sets(_zero_darts(c, t.zero)):
                if not (comp <= t.minus or comp <= t.plus):
                    bad2.append((i, "component", sorted(comp, key=_sort_key)))
        for v in {col.colour[h] for h in t.zero}:
            cp, cm = col.half_carrier(c, v, "+"), col.half_carrier(c, v, "-")
            if not ((cp <= t.plus and cm <= t.minus) or (cp <= t.minus and cm <= t.plus)):
                bad3.append((i, v))
    rep.conditions["1"], rep.witnesses["1"] = not bad1, bad1
    rep.conditions["2"], rep.witnesses["2"] = not bad2, bad2
    rep.conditions["3"], rep.witnesses["3"] = not bad3, bad3
    bad4a, bad4b = [], []
    for q in queries(c, col):
        a, b = _query_sets(c, col, q)
        if not any(t.separates(a, b) for t in p.partitions):
            (bad4a if q[0] == "pair" else bad4b).append(q)
    rep.conditions["4a"], rep.witnesses["4a"] = not bad4a, bad4a
    rep.conditions["4b"], rep.witnesses["4b"] = not bad4b, bad4b
    return rep


# strong divisibility


def _separations(c: CubeComplex, family) -> dict:
    """Map vertex -> component index of Q minus the hyperplanes in family."""
    comps = c.connected_vertex_sets(_zero_darts(c, family))
    return {x: i for i, comp in enumerate(comps) for x in comp}


def _strong_queries(c: CubeComplex) -> list:
    out = []
    vs = sorted(c.vertices, key=_sort_key)
    for x, y in itertools.combinations(vs, 2):
        out.append(("pair", x, y, frozenset([y])))
    for h in c.hyperplanes():
        neg, pos = c.half_carriers(h)
        for sign, hc in (("+", pos), ("-", neg)):
            for x in vs:
                if x not in hc:
                    out.append(("carrier", x, (h.id, sign), hc))
    return out


@dataclass
class StrongDivisibility:
    divisible: bool
    failures: list
    families: int

    def __bool__(self):
        return self.divisible


def is_strongly_divisible(c: CubeComplex, cap: int = DEFAULT_INDEPENDENT_SET_CAP) -> StrongDivisibility:
    """Decide strong divisibility by testing maximal disjoint families only.

    Adding a hyperplane to a family only cuts components further, so a
    separation achieved by some family is achieved by every maximal family
    containing it.
    """
    rep = c.special_report()
    if rep.not_embedded or rep.one_sided:
        raise InvalidComplex("strong divisibility needs embedded two-sided hyperplanes")
    families = c.crossing_graph().maximal_independent_sets(cap)
    comp_maps = [_separations(c, f) for f in families]
    failures = []
    for kind, x, target, hc in _strong_queries(c):
        if not any(all(m[x] != m[y] for y in hc) for m in comp_maps):
            failures.append((kind, x, target))
    return StrongDivisibility(not failures, failures, len(families))


def strongly_divisible_naive(c: CubeComplex) -> StrongDivisibility:
    """Reference search over every pairwise-disjoint family of hyperplanes."""
    hyps = sorted(h.id for h in c.hyperplanes())
    dual = {h.id: h.darts for h in c.hyperplanes()}
    families = []
    for r in range(len(hyps) + 1):
        for fam in itertools.combinations(hyps, r):
            if all(not c.cross(a, b) for a, b in itertools.combinations(fam, 2)):
                families.append(fam)
    graphs = []
    for fam in families:
        removed = set().union(*(dual[h] for h in fam)) if fam else set()
        g = nx.Graph()
        g.add_nodes_from(c.vertices)
        g.add_edges_from((c.origin[d], c.terminus(d)) for d in c.origin if d not in removed)
        graphs.append(g)
    failures = []
    for kind, x, target, hc in _strong_queries(c):
        ok = False
        for g in graphs:
            if not nx.node_connected_component(g, x) & hc:
                ok = True
                break
        if not ok:
            failures.append((kind, x, target))
    return StrongDivisibility(not failures, failures, len(families))


def strong_pattern(c: CubeComplex, cap: int = DEFAULT_INDEPENDENT_SET_CAP, minimal: bool = True):
    """Dividing pattern for the standard colouring built from (family, component) pairs.

    Each pair is trimmed so that the component meets exactly one half-carrier
    of every hyperplane kept in the family.  Returns None when the complex is
    not strongly divisible.
    """
    col = standard_colouring(c)
    allv = frozenset(c.vertices)
    parts = []
    seen = set()
    for fam in c.crossing_graph().maximal_independent_sets(cap):
        for comp in c.connected_vertex_sets(_zero_darts(c, fam)):
            kept = []
            for h in sorted(fam):
                neg, pos = c.half_carriers(h)
                if bool(neg & comp) != bool(pos & comp):
                    kept.append(h)
            t = Tripartition(frozenset(kept), allv - comp, comp)
            key = (t.zero, t.plus)
            if key not in seen and (t.zero, t.minus) not in seen:
                seen.add(key)
                parts.append(t)
    p = DividingPattern(col, parts)
    rep = validate_pattern(c, p)
    if not rep.ok:
        return None
    if minimal:
        p = DividingPattern(col, _greedy_cover(c, col, parts))
    return p


def _greedy_cover(c, col, parts) -> list:
    """A small sub-list of partitions still meeting condition (4)."""
    qs = [_query_sets(c, col, q) for q in queries(c, col)]
    todo = set(range(len(qs)))
    chosen = []
    while todo:
        best, best_hit = None, set()
        for i, t in enumerate(parts):
            hit = {j for j in todo if t.separates(*qs[j])}
            if len(hit) > len(best_hit):
                best, best_hit = i, hit
        if best is None:
            break
        chosen.append(parts[best])
        todo -= best_hit
    return chosen


# exhaustive divisibility


@dataclass
class Caps:
    independent_sets: int = DEFAULT_INDEPENDENT_SET_CAP
    colourings: int = DEFAULT_COLOURING_CAP
    zero_sets: int = DEFAULT_ZERO_SET_CAP


@dataclass
class DivisibilityVerdict:
    status: str  # "yes", "no" or "inconclusive"
    pattern: DividingPattern | None = None
    colourings_tried: int = 0
    reason: str = ""
    unmet: list = field(default_factory=list)


class _ZeroSetData:
    """Components of Q minus a zero set, grouped into blocks with relative signs."""

    def __init__(self, c, col, zero_colours):
        self.zero = frozenset(h for v in zero_colours for h in col.classes()[v])
        comps = c.connected_vertex_sets(_zero_darts(c, self.zero))
        self.comps = comps
        self.comp_of = {x: i for i, comp in enumerate(comps) for x in comp}
        # parity union-find over components
        self.parent = list(range(len(comps)))
        self.parity = [0] * len(comps)
        self.ok = True
        for v in zero_colours:
            plus = {self.comp_of[x] for x in col.half_carrier(c, v, "+")}
            minus = {self.comp_of[x] for x in col.half_carrier(c, v, "-")}
            members = [(k, 0) for k in plus] + [(k, 1) for k in minus]
            for (a, pa), (b, pb) in zip(members, members[1:]):
                if not self._union(a, b, pa ^ pb):
                    self.ok = False
                    return

    def _find(self, a):
        par = 0
        while self.parent[a] != a:
            par ^= self.parity[a]
            a = self.parent[a]
        return a, par

    def _union(self, a, b, rel):
        ra, pa = self._find(a)
        rb, pb = self._find(b)
        if ra == rb:
            return (pa ^ pb) == rel
        self.parent[rb] = ra
        self.parity[rb] = pa ^ pb ^ rel
        return True

    def solve(self, x, targets):
        """Signs per component putting x on side 0 and every target on side 1."""
        rx, px = self._find(self.comp_of[x])
        want = {rx: px}  # root -> parity of the root relative to side 0
        for y in targets:
            ry, py = self._find(self.comp_of[y])
            need = py ^ 1
            if ry in want and want[ry] != need:
                return None
            want[ry] = need
        signs = []
        for k in range(len(self.comps)):
            r, p = self._find(k)
            signs.append(want.get(r, 0) ^ p)
        return signs

    def partition(self, signs, flip=False) -> Tripartition:
        minus, plus = set(), set()
        for k, comp in enumerate(self.comps):
            (plus if signs[k] ^ flip else minus).update(comp)
        return Tripartition(self.zero, frozenset(minus), frozenset(plus))


def pattern_for_colouring(c, col, caps=None, order_seed=None):
    """Try to build a dividing pattern for a fixed colouring; returns (pattern, unmet)."""
    caps = caps or Caps()
    g = col.graph
    independent = []
    for clique in g.complement().cliques():
        independent.append(tuple(sorted(clique, key=_sort_key)))
        if len(independent) > caps.zero_sets:
            raise CapExceeded("zero sets", caps.zero_sets)
    independent.sort(key=lambda s: (len(s), [_sort_key(v) for v in s]))
    if order_seed is not None:
        random.Random(order_seed).shuffle(independent)
    datas = [d for d in (_ZeroSetData(c, col, z) for z in independent) if d.ok]
    parts, seen, unmet = [], set(), []
    for q in queries(c, col):
        x = q[1]
        targets = [q[2]] if q[0] == "pair" else sorted(col.half_carrier(c, q[2], q[3]), key=_sort_key)
        found = None
        for d in datas:
            signs = d.solve(x, targets)
            if signs is not None:
                found = d.partition(signs)
                break
        if found is None:
            unmet.append(q)
            continue
        key = (found.zero, found.minus)
        if key not in seen and (found.zero, found.plus) not in seen:
            seen.add(key)
            parts.append(found)
    if unmet:
        return None, unmet
    return DividingPattern(col, parts), []


def decide_divisible_exhaustive(c: CubeComplex, caps: Caps | None = None,
                                order_seed: int | None = None) -> DivisibilityVerdict:
    """Search all minimal colourings for a dividing pattern.

    The verdict is 'yes' with a pattern, 'no' when the enumerated space is
    exhausted, or 'inconclusive' when a cap is hit.  ``order_seed`` shuffles
    the search order; the verdict must not depend on it.
    """
    caps = caps or Caps()
    if not c.is_special():
        raise InvalidComplex("divisibility is defined for special complexes")
    try:
        if order_seed is None and is_strongly_divisible(c, caps.independent_sets):
            p = strong_pattern(c, caps.independent_sets)
            if p is not None:
                return DivisibilityVerdict("yes", p, 1, "standard colouring")
        # coarsest colourings first, then enumeration order
        cols = list(enumerate_minimal_colourings(c, caps.colourings))
        cols.sort(key=lambda col: len(col.graph.vertices))
        if order_seed is not None:
            random.Random(order_seed).shuffle(cols)
        tried = 0
        last_unmet = []
        for col in cols:
            tried += 1
            p, unmet = pattern_for_colouring(c, col, caps, order_seed)
            if p is not None:
                return DivisibilityVerdict("yes", p, tried)
            last_unmet = unmet
    except CapExceeded as exc:
        return DivisibilityVerdict("inconclusive", reason=str(exc))
    return DivisibilityVerdict("no", None, tried, "no minimal colouring admits a pattern", last_unmet)


# transversality


def transverse(a: Tripartition, b: Tripartition) -> bool:
    return all(x & y for x in (a.minus, a.plus) for y in (b.minus, b.plus))


def transverse_colour(c: CubeComplex, col: SpecialColouring, t: Tripartition, v) -> bool:
    for sign in "+-":
        hc = col.half_carrier(c, v, sign)
        if not (hc & t.minus and hc & t.plus):
            return False
    return True


def extended_crossing_graph(c: CubeComplex, p: DividingPattern) -> SimplicialGraph:
    """Colours plus one vertex '#H<i>' per partition, joined on transversality."""
    col = p.colouring
    names = p.labels()
    vs = list(col.graph.vertices) + names
    es = list(col.graph.edges)
    for (i, a), (j, b) in itertools.combinations(enumerate(p.partitions), 2):
        if transverse(a, b):
            es.append((names[i], names[j]))
    for i, t in enumerate(p.partitions):
        for v in col.graph.vertices:
            if transverse_colour(c, col, t, v):
                es.append((names[i], v))
    return SimplicialGraph(vs, es)
