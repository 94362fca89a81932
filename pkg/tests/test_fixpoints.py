import itertools

import pytest

from cubecx.errors import CapExceeded, InvalidComplex
from cubecx.fixpoints import (CubicalAutomorphism, component_of, components, fixed_set, group_closure,
                              identity_automorphism, invariant_locus, inverted_hyperplanes)
from cubecx.generators import canonical_completion, configuration_space, fixture
from cubecx.graph import cycle_graph
from cubecx.host import build_extended_host, build_host, host_automorphism
from cubecx.maps import is_isomorphic

from conftest import corpus, lone_square


def euler(c):
    return sum((-1) ** k * n for k, n in c.cell_counts().items())


def lefschetz(g):
    """Alternating trace on cellular chains, computed from the cube germs alone."""
    c = g.complex
    total = sum(1 for v in c.vertices if g.vertex_map[v] == v)
    for d in c.edges():
        if g.dart_map[d] == d:
            total -= 1
        elif g.dart_map[d] == c.rev[d]:
            total += 1
    for k in sorted(c.cubes):
        for cube in c.cubes[k]:
            where = {e: (cn, i) for cn, row in enumerate(cube.germs) for i, e in enumerate(row)}
            img = [where.get(g.dart_map[d]) for d in cube.germs[0]]
            if None in img or len({j for _, j in img}) != k:
                continue
            perm = [j for _, j in img]
            flips = sum(cn >> j & 1 for cn, j in img)
            inversions = sum(1 for a, b in itertools.combinations(range(k), 2) if perm[a] > perm[b])
            # the image cube must be this cube for the cell to contribute
            image_key = frozenset(frozenset(g.dart_map[d] for d in row) for row in cube.germs)
            if image_key == cube.key:
                total += (-1) ** k * (-1) ** (inversions + flips)
    return total


def rotation(c):
    return CubicalAutomorphism(c, {"a": "c", "b": "d", "c": "a", "d": "b"},
                               {"p": "r", "q": "s", "r": "p", "s": "q",
                                "p~": "r~", "q~": "s~", "r~": "p~", "s~": "q~"})


def reflection(c):
    return CubicalAutomorphism(c, {"a": "b", "b": "a", "c": "d", "d": "c"},
                               {"p": "p~", "p~": "p", "q": "s~", "s~": "q",
                                "r": "r~", "r~": "r", "s": "q~", "q~": "s"})


@pytest.fixture(scope="module")
def uc_phi():
    c, p = configuration_space(cycle_graph(5), 2)
    b = build_extended_host(build_host(p, c), 2)
    return b, host_automorphism(b)


def test_identity_fixes_everything():
    for name, c in corpus():
        e = identity_automorphism(c)
        assert e.is_identity() and e.order() == 1
        f = fixed_set([e])
        assert inverted_hyperplanes([e]) == []
        assert is_isomorphic(f.complex, c, respect_labels=True), name


def test_rotation_fixes_the_centre():
    c = lone_square()
    rot = rotation(c)
    assert rot.problems() == [] and rot.order() == 2
    assert sorted(inverted_hyperplanes([rot])) == ["p", "q"]
    f = fixed_set([rot])
    assert len(f.complex.vertices) == 1 and not f.complex.edges()
    assert invariant_locus([rot]).vertices == f.complex.vertices


def test_reflection_fixes_a_midline():
    c = lone_square()
    ref = reflection(c)
    assert ref.problems() == []
    assert inverted_hyperplanes([ref]) == ["p"]
    f = fixed_set([ref]).complex
    assert sorted(f.vertices) == ["mid[p,p~]", "mid[r,r~]"]
    assert len(f.edges()) == 1
    assert sorted(invariant_locus([ref]).vertices) == sorted(f.vertices)


def test_group_of_both_symmetries():
    c = lone_square()
    gens = [rotation(c), reflection(c)]
    assert len(group_closure(gens)) == 4
    assert len(fixed_set(gens).complex.vertices) == 1


def test_bad_maps_reported():
    c = lone_square()
    rot = rotation(c)
    bad = CubicalAutomorphism(c, dict(rot.vertex_map), dict(rot.dart_map, p="q", q="p"))
    assert bad.problems()
    short = CubicalAutomorphism(c, {"a": "a"}, {})
    assert short.problems()


def test_composition_and_inverse():
    c = lone_square()
    rot, ref = rotation(c), reflection(c)
    assert (rot * rot).is_identity()
    assert (ref * rot) * (ref * rot).inverse() == identity_automorphism(c)
    assert (ref * rot).order() == 2


def test_cap_exceeded(uc_phi):
    _, phi = uc_phi
    with pytest.raises(CapExceeded):
        group_closure([phi], cap=1)
    with pytest.raises(CapExceeded):
        phi.order(cap=1)
    assert group_closure([]) == []


def test_phi_inverts_nothing(uc_phi):
    _, phi = uc_phi
    assert inverted_hyperplanes([phi]) == []


def test_uc_fixed_components(uc_phi):
    b, phi = uc_phi
    fix = fixed_set([phi]).complex
    comps = components(fix)
    assert sorted(len(k.vertices) for k in comps) == [1, 1, 5, 5, 10, 10]
    spaces = {k: configuration_space(cycle_graph(5), k)[0] for k in range(6)}
    for comp in comps:
        assert any(is_isomorphic(comp, s) for s in spaces.values())
    for x in b.embedding_j.vertex_map.values():
        comp, inc = component_of(fix, x)
        assert is_isomorphic(comp, b.base)
        assert all(inc.vertex_map[v] == v for v in comp.vertices)
    assert euler(fix) == sum(euler(k) for k in comps)


def test_genus2_fixed_set(uc_phi):
    f = fixture("genus2")
    b = build_extended_host(build_host(f.pattern, f.complex), 2)
    fix = fixed_set([host_automorphism(b)]).complex
    assert fix.cell_counts() == {0: 4, 1: 12, 2: 6}
    assert len(components(fix)) == 1
    assert is_isomorphic(fix, f.complex)


def test_unknown_seed():
    f = fixed_set([rotation(lone_square())]).complex
    with pytest.raises(InvalidComplex):
        component_of(f, "nowhere")
    with pytest.raises(InvalidComplex):
        fixed_set([])


def test_euler_of_fixed_set_matches_lefschetz(uc_phi):
    c = lone_square()
    cases = [rotation(c), reflection(c), uc_phi[1]]
    for name in ("fig3-right",):
        bundle = canonical_completion(fixture(name).complex)
        cases.append(bundle.phi)
    for k in (2, 3):
        f = fixture("genus2")
        cases.append(host_automorphism(build_extended_host(build_host(f.pattern, f.complex), k)))
    for g in cases:
        for power in range(1, g.order() + 1):
            h = g
            for _ in range(power - 1):
                h = g * h
            assert euler(fixed_set([h]).complex) == lefschetz(h)
