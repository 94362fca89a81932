"""Special colourings of special cube complexes."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .complex import CubeComplex
from .errors import CapExceeded, InvalidComplex
from .graph import SimplicialGraph

DEFAULT_COLOURING_CAP = 10**6


@dataclass
class SpecialColouring:
    """A colouring of hyperplanes by vertices of ``graph``.

    ``positive`` records, for each hyperplane id, one dart of the orientation
    sent to ``colour+``.
    """

    graph: SimplicialGraph
    colour: dict
    positive: dict

    def classes(self) -> dict:
        out = {v: [] for v in self.graph.sorted_vertices()}
        for h, v in sorted(self.colour.items()):
            out.setdefault(v, []).append(h)
        return out

    def is_standard(self) -> bool:
        return len(set(self.colour.values())) == len(self.colour) == len(self.graph.vertices)

    def positive_darts(self, c: CubeComplex, hid) -> frozenset:
        h = c.hyperplane(hid)
        if h.positive is None:
            raise InvalidComplex(f"hyperplane {hid} is not two-sided")
        d = self.positive[hid]
        return h.positive if d in h.positive else h.darts - h.positive

    def oriented_carrier(self, c: CubeComplex, hid, sign: str) -> frozenset:
        """Vertices of C(->H) for sign '+', of C(<-H) for sign '-'."""
        pos = self.positive_darts(c, hid)
        if sign == "+":
            return frozenset(c.terminus(d) for d in pos)
        return frozenset(c.origin[d] for d in pos)

    def carrier(self, c: CubeComplex, v) -> frozenset:
        out = set()
        for h in self.classes().get(v, []):
            out |= c.carrier_vertices(h)
        return frozenset(out)

    def half_carrier(self, c: CubeComplex, v, sign: str) -> frozenset:
        """Generalised half-carrier C(v^sign) as a vertex set."""
        out = set()
        for h in self.classes().get(v, []):
            out |= self.oriented_carrier(c, h, sign)
        return frozenset(out)

    def germ_labels(self, c: CubeComplex) -> dict:
        """Germ labels v+ / v- induced by the colouring, keyed by dart."""
        out = {}
        for hid, v in self.colour.items():
            pos = self.positive_darts(c, hid)
            for d in c.hyperplane(hid).darts:
                out[d] = f"{v}+" if d in pos else f"{v}-"
        return out


@dataclass
class ColouringReport:
    conditions: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    carriers: dict = field(default_factory=dict)
    half_carriers: dict = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return all(self.conditions[k] for k in ("1", "2", "3"))

    @property
    def minimal(self) -> bool:
        return self.valid and self.conditions["4"]


def validate_colouring(c: CubeComplex, col: SpecialColouring) -> ColouringReport:
    hyps = {h.id: h for h in c.hyperplanes()}
    missing = sorted(set(hyps) - set(col.colour))
    if missing:
        raise InvalidComplex(f"colouring is not total: {missing}")
    rep = ColouringReport()
    bad1 = []
    for hid, h in hyps.items():
        if h.positive is None or col.colour[hid] not in col.graph.vertices \
                or col.positive.get(hid) not in h.darts:
            bad1.append(hid)
    rep.conditions["1"] = not bad1
    rep.witnesses["1"] = bad1
    if bad1:
        rep.conditions.update({"2": False, "3": False, "4": False})
        return rep
    classes = col.classes()
    bad2 = []
    for v, hs in classes.items():
        for sign in "+-":
            for a, b in itertools.combinations(hs, 2):
                if col.oriented_carrier(c, a, sign) & col.oriented_carrier(c, b, sign):
                    bad2.append((v, sign, a, b))
    rep.conditions["2"] = not bad2
    rep.witnesses["2"] = bad2
    bad3 = []
    carriers = {hid: c.carrier_vertices(hid) for hid in hyps}
    for a, b in itertools.combinations(sorted(hyps), 2):
        if not carriers[a] & carriers[b]:
            continue
        if c.cross(a, b) != col.graph.adjacent(col.colour[a], col.colour[b]):
            bad3.append((a, b))
    rep.conditions["3"] = not bad3
    rep.witnesses["3"] = bad3
    bad4 = [v for v, hs in classes.items() if not hs]
    for e in col.graph.sorted_edges():
        v, w = e
        if not any(c.cross(a, b) for a in classes.get(v, []) for b in classes.get(w, [])):
            bad4.append(e)
    rep.conditions["4"] = not bad4
    rep.witnesses["4"] = bad4
    for v in classes:
        rep.carriers[v] = col.carrier(c, v)
        for sign in "+-":
            rep.half_carriers[(v, sign)] = col.half_carrier(c, v, sign)
    return rep


def standard_colouring(c: CubeComplex) -> SpecialColouring:
    """Each hyperplane is its own colour; the lowest dart is positive."""
    g = c.crossing_graph()
    colour = {h.id: h.id for h in c.hyperplanes()}
    positive = {h.id: h.id for h in c.hyperplanes()}
    return SpecialColouring(g, colour, positive)


def colouring_from_labels(c: CubeComplex) -> SpecialColouring:
    """Read a colouring off germ labels of the form 'v+' / 'v-'."""
    colour, positive = {}, {}
    for h in c.hyperplanes():
        bases = set()
        pos = None
        for d in sorted(h.darts):
            lab = c.label.get(d)
            if lab is None or lab[-1] not in "+-":
                raise InvalidComplex(f"dart {d} has no signed germ label")
            bases.add(lab[:-1])
            if lab[-1] == "+" and pos is None:
                pos = d
        if len(bases) != 1 or pos is None:
            raise InvalidComplex(f"hyperplane {h.id} has inconsistent germ labels {sorted(bases)}")
        if h.positive is None:
            raise InvalidComplex(f"hyperplane {h.id} is not two-sided")
        want = h.positive if pos in h.positive else h.darts - h.positive
        if any((c.label[d][-1] == "+") != (d in want) for d in h.darts):
            raise InvalidComplex(f"germ labels of {h.id} disagree with its sides")
        colour[h.id] = bases.pop()
        positive[h.id] = pos
    vs = set(colour.values())
    edges = {frozenset((colour[a], colour[b])) for a, b in map(tuple, c._crossings())}
    return SpecialColouring(SimplicialGraph(vs, edges), colour, positive)


def colouring_from_classes(c: CubeComplex, classes, names=None, positives=None) -> SpecialColouring:
    """Build the minimal colouring whose fibres are the given hyperplane classes."""
    classes = [sorted(cl) for cl in classes]
    if names is None:
        names = [f"c{i}" for i in range(len(classes))]
    colour = {}
    for name, cl in zip(names, classes):
        for h in cl:
            colour[h] = name
    positive = dict(positives or {})
    for h in colour:
        positive.setdefault(h, h)
    edges = set()
    for a, b in map(tuple, c._crossings()):
        if colour[a] != colour[b]:
            edges.add(frozenset((colour[a], colour[b])))
        else:
            raise InvalidComplex(f"crossing hyperplanes {a}, {b} share a colour")
    return SpecialColouring(SimplicialGraph(names, edges), colour, positive)


def enumerate_minimal_colourings(c: CubeComplex, cap: int = DEFAULT_COLOURING_CAP):
    """Yield every minimal special colouring up to renaming of colours.

    Colours are named c0, c1, ... by least hyperplane id; the least
    hyperplane of each class keeps its lowest dart as positive.
    """
    hyps = sorted(h.id for h in c.hyperplanes())
    info = {h.id: h for h in c.hyperplanes()}
    if any(info[h].positive is None for h in hyps):
        raise InvalidComplex("colourings need two-sided embedded hyperplanes")
    pos_car = {h: (c.half_carrier(info[h].positive),
                   frozenset(c.origin[d] for d in info[h].positive)) for h in hyps}
    carriers = {h: c.carrier_vertices(h) for h in hyps}
    n = len(hyps)
    count = [0]

    def side(h, flip, s):
        # vertex set of C(h^s) when h's orientation is flipped by `flip`
        p, m = pos_car[h]
        if flip:
            p, m = m, p
        return p if s == "+" else m

    def compatible(h, fh, other, fo):
        return not (side(h, fh, "+") & side(other, fo, "+")) and \
            not (side(h, fh, "-") & side(other, fo, "-"))

    def check_condition3(assign):
        cls = {}
        for h, (k, _) in assign.items():
            cls.setdefault(k, []).append(h)
        adj = set()
        for a, b in map(tuple, c._crossings()):
            adj.add(frozenset((assign[a][0], assign[b][0])))
        for a, b in itertools.combinations(hyps, 2):
            if carriers[a] & carriers[b] and not c.cross(a, b):
                ka, kb = assign[a][0], assign[b][0]
                if ka != kb and frozenset((ka, kb)) in adj:
                    return None
        return adj

    def rec(i, assign, nclasses):
        if i == n:
            count[0] += 1
            if count[0] > cap:
                raise CapExceeded("colourings", cap)
            adj = check_condition3(assign)
            if adj is None:
                return
            names = [f"c{k}" for k in range(nclasses)]
            colour = {h: names[k] for h, (k, _) in assign.items()}
            positive = {}
            for h, (_, flip) in assign.items():
                h_pos = sorted(info[h].positive)[0]
                positive[h] = c.rev[h_pos] if flip else h_pos
            edges = [(names[a], names[b]) for a, b in map(tuple, adj)]
            yield SpecialColouring(SimplicialGraph(names, edges), colour, positive)
            return
        h = hyps[i]
        for k in range(nclasses + 1):
            members = [m for m, (kk, _) in assign.items() if kk == k]
            if any(c.cross(h, m) for m in members):
                continue
            flips = (False,) if k == nclasses else (False, True)
            for flip in flips:
                if all(compatible(h, flip, m, assign[m][1]) for m in members):
                    assign[h] = (k, flip)
                    yield from rec(i + 1, assign, max(nclasses, k + 1))
                    del assign[h]

    yield from rec(0, {}, 0)
