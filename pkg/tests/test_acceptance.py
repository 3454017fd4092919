"""Acceptance criteria 1 to 11, one test each; a PASS/FAIL line per criterion is
printed in the terminal summary."""

from __future__ import annotations

import math
import random
from fractions import Fraction
from itertools import combinations

import pytest

from conftest import brute_nu, brute_tau, naive_triangles, random_graph
from tuza.cli import random_partial_6tree
from tuza.graph import average_degree, complete_graph, figure1_graph, is_bipartite, is_triangle_free, k5_minus_e
from tuza.ninefifths import nine_fifths_tp, verify_nine_fifths_exact
from tuza.planar import (
    RESTRICTED_SHAPES,
    all_restricted_3trees,
    dual,
    figure4_triangulation,
    has_bridge,
    icosahedron,
    is_restricted,
    is_super_restricted,
    k4_triangulation,
    k5_minus_e_triangulation,
    octahedron,
    packing_via_coloring,
    packing_with_external,
    random_triangulation,
    restricted_packing,
    restricted_shape,
    stellate,
    strip_triangulation,
    transversal_via_matching,
)
from tuza.reduction import construct_lemma34_config, construct_theorem35_config, verify_reducing_triple
from tuza.solvers import nu_exact, tau_exact
from tuza.threetrees import enumerate_3trees, generate_3tree, three_tree_graph
from tuza.treedec import (
    figure1_decomposition,
    from_ktree_sequence,
    is_full,
    ktree_sequence_of,
    random_ktree_sequence,
    rootify,
    validate,
)

criterion = pytest.mark.criterion


def triangulation_corpus():
    rng = random.Random(20240)
    return [random_triangulation(rng.randint(5, 12), rng) for _ in range(50)]


CORPUS = triangulation_corpus()


@criterion(1, "base values on K4 and all 3-trees with 5 and 6 vertices")
def test_criterion_01_base_values():
    assert (tau_exact(complete_graph(4)).size, nu_exact(complete_graph(4)).size) == (2, 1)
    fives = enumerate_3trees(5)
    assert fives and all((tau_exact(g).size, nu_exact(g).size) == (3, 2) for g in fives)
    sixes = enumerate_3trees(6)
    assert sixes and all(nu_exact(g).size == 3 and tau_exact(g).size <= 4 for g in sixes)


@criterion(2, "matching transversal has n-2 edges, bipartite remainder, equals tau")
def test_criterion_02_matching_transversal():
    assert len(CORPUS) == 50 and all(5 <= t.n <= 12 for t in CORPUS)
    for t in CORPUS:
        cert = transversal_via_matching(t)
        cert.validate(t.graph)
        rest = t.graph.remove_edges(cert.edges)
        assert cert.size == t.n - 2
        assert is_bipartite(rest) and is_triangle_free(rest)
        assert cert.size == tau_exact(t.graph).size


@criterion(3, "coloring packing between ceil(2(n-2)/3) and nu")
def test_criterion_03_coloring_packing():
    for t in CORPUS:
        cert = packing_via_coloring(t)
        cert.validate(t.graph)
        assert math.ceil(2 * (t.n - 2) / 3) <= cert.size <= nu_exact(t.graph).size


@criterion(4, "tau <= 3/2 nu on triangulations, tight on K5-e and stellated octahedron")
def test_criterion_04_three_halves():
    for t in CORPUS + [octahedron(), icosahedron(), k5_minus_e_triangulation(), figure4_triangulation()]:
        assert t.n != 4
        assert Fraction(tau_exact(t.graph).size) <= Fraction(3, 2) * nu_exact(t.graph).size
    assert (tau_exact(k5_minus_e()).size, nu_exact(k5_minus_e()).size) == (3, 2)
    h = stellate(octahedron())
    assert h.n == 14
    assert (tau_exact(h.graph).size, nu_exact(h.graph).size) == (12, 8)


@criterion(5, "nu(stellate(K5-e)) = 7 > 2n - 4 = 6")
def test_criterion_05_stellated_k5e():
    h = stellate(k5_minus_e_triangulation())
    assert nu_exact(h.graph).size == 7 > 2 * 5 - 4


@criterion(6, "figure-4 external packing is 3 and no facial packing of 4 contains the external face")
def test_criterion_06_external_packing():
    t = figure4_triangulation()
    cert = packing_with_external(t)
    cert.validate(t.graph)
    assert cert.size == 3 and t.external_face in cert.triangles
    others = [i for i in range(t.f) if i != t.external]
    for trio in combinations(others, 3):
        edges = [e for i in (t.external, *trio) for e in t.faces[i].edges]
        assert len(edges) != len(set(edges))


@criterion(7, "restricted packings >= ceil(f/3), exactly 5 when super restricted")
def test_criterion_07_restricted():
    fixtures = all_restricted_3trees() + [restricted_shape(s) for s in RESTRICTED_SHAPES]
    assert {t.f for t in fixtures} == {8, 10, 12, 14, 16} and len(RESTRICTED_SHAPES) == 12
    supers = 0
    for t in fixtures:
        assert is_restricted(t)
        cert = restricted_packing(t)
        cert.validate(t.graph)
        assert cert.size >= math.ceil(t.f / 3)
        if is_super_restricted(t):
            supers += 1
            assert cert.size == 5
    assert supers > 0


@criterion(8, "explicit reducing triples verify with their stated cardinalities")
def test_criterion_08_reducing_configs():
    g, t = construct_theorem35_config()
    assert verify_reducing_triple(g, t).valid and (len(t.x), len(t.y)) == (21, 11)
    quoted = {"a1": (15, 8), "a3": (14, 7), "b": (8, 4), "c1": (12, 6), "c2": (12, 6), "c3": (12, 6)}
    for optional in (False, True):
        for case, (x_cap, y_size) in quoted.items():
            g, t = construct_lemma34_config(case, include_optional=optional)
            assert verify_reducing_triple(g, t).valid
            assert len(t.y) == y_size and len(t.x) <= x_cap
        assert len(construct_lemma34_config("a1", include_optional=optional)[1].x) < 16
        for case in ("c1", "c2", "c3"):
            assert len(construct_lemma34_config(case, include_optional=optional)[1].x) == 12
        for variant, (x_cap, y_size) in ((5, (12, 6)), (6, (14, 7))):
            g, t = construct_lemma34_config("a2", include_optional=optional, variant=variant)
            assert verify_reducing_triple(g, t).valid
            assert len(t.y) == y_size and len(t.x) <= x_cap == 2 * y_size


@criterion(9, "tau <= 2 nu on partial 6-trees; figure-1 graph and its width-6 decomposition")
def test_criterion_09_treewidth_six():
    rng = random.Random(35)
    for _ in range(50):
        g = random_partial_6tree(rng.randint(7, 12), rng)
        assert tau_exact(g).size <= 2 * nu_exact(g).size
    g = figure1_graph()
    assert (g.n, g.m) == (9, 33) and average_degree(g) == Fraction(22, 3)
    res = validate(g, figure1_decomposition())
    assert res.valid and res.width == 6


@criterion(10, "nine-fifths pairs on random 3-trees, exhaustive check up to 9 vertices")
def test_criterion_10_nine_fifths():
    rng = random.Random(51)
    for i in range(200):
        n = rng.randint(7, 30)
        seq = generate_3tree(n, i)
        g = three_tree_graph(seq)
        pair = nine_fifths_tp(seq)
        pair.x.validate(g)
        pair.y.validate(g)
        assert 5 * pair.x.size <= 9 * pair.y.size + 1
        if n <= 14:
            assert pair.x.size >= tau_exact(g).size and pair.y.size <= nu_exact(g).size
    for n in range(3, 10):
        for g in enumerate_3trees(n):
            assert verify_nine_fifths_exact(g)


@criterion(11, "property suites: solver oracles, leaf neighbourhoods, rootify, dual graphs")
def test_criterion_11_properties():
    rng = random.Random(11)
    checked = 0
    while checked < 150:
        g = random_graph(rng.randint(3, 7), rng.choice((0.4, 0.6, 0.8)), rng)
        if len(g.edges) <= 12:
            assert tau_exact(g).size == brute_tau(g)
        if len(naive_triangles(g)) <= 10:
            assert nu_exact(g).size == brute_nu(g)
        checked += 1
    for n in range(4, 10):
        for g in enumerate_3trees(n):
            _, d = from_ktree_sequence(ktree_sequence_of(g, 3))
            for root in d.nodes:
                rd = rootify(d, root)
                for t, kids in rd.children_map().items():
                    if not kids and t != rd.root:
                        assert set(g.neighbors(rd.representative(t))) <= rd.bag(t)
    for _ in range(100):
        g, d = from_ktree_sequence(random_ktree_sequence(rng.randint(4, 12), 3, rng))
        rd = rootify(d, rng.choice(d.nodes))
        assert rd.is_rooted() and validate(g, rd.base).valid and is_full(rd.base, 3)
    for t in CORPUS + [k4_triangulation(), octahedron(), icosahedron(), strip_triangulation(7)]:
        dg = dual(t).graph
        assert all(dg.degree(v) == 3 for v in range(dg.n)) and not has_bridge(dg)
