from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import graphs, naive_triangles, random_graph
from tuza.graph import Graph, Triangle, complete_graph, cycle_graph, enumerate_triangles, is_robust
from tuza.reduction import (
    LEMMA34_CASES,
    ReducingTriple,
    ReductionError,
    apply_reduction,
    construct_lemma34_config,
    construct_theorem35_config,
    puleo_violations,
    search_reducing_triple,
    verify_reducing_triple,
)
from tuza.solvers import nu_exact, tau_exact


def brute_verdict(g: Graph, t: ReducingTriple) -> str | None:
    """First failed condition by a direct scan of every triangle and every V0 membership."""
    if len(t.x) > 2 * len(t.y):
        return "i"
    xs = set(t.x)
    for a, b, c in naive_triangles(g):
        if any(v in t.v0 for v in (a, b, c)):
            if not {(a, b), (a, c), (b, c)} & xs:
                return "ii"
    for tri in t.y:
        a, b, c = tri.vertices
        for e in ((a, b), (a, c), (b, c)):
            if e[0] not in t.v0 and e[1] not in t.v0 and e not in xs:
                return "iii"
    return None


def test_k7_three_apex_configuration():
    g, t = construct_theorem35_config()
    assert (g.n, len(t.x), len(t.y)) == (10, 21, 11)
    verdict = verify_reducing_triple(g, t)
    assert verdict.valid and verdict.failed_condition is None
    xs = set(t.x)
    through = [tri for tri in enumerate_triangles(g) if t.v0 & set(tri.vertices)]
    assert through and all(xs & set(tri.edges) for tri in through)
    assert all(len(set(tri.vertices) - t.v0) >= 2 for tri in through)


# (case, variant) -> (max |X| over both optional-edge instantiations, |Y|)
QUOTED = {
    ("a1", None): (15, 8),
    ("a2", 5): (12, 6),
    ("a2", 6): (14, 7),
    ("a3", "c"): (14, 7),
    ("a3", "d"): (14, 7),
    ("b", None): (8, 4),
    ("c1", None): (12, 6),
    ("c2", None): (12, 6),
    ("c3", None): (12, 6),
}


@pytest.mark.parametrize("case, variant", sorted(QUOTED, key=str))
@pytest.mark.parametrize("optional", [False, True])
def test_two_vertex_configurations(case, variant, optional):
    g, t = construct_lemma34_config(case, include_optional=optional, variant=variant)
    assert verify_reducing_triple(g, t).valid
    assert brute_verdict(g, t) is None
    x_cap, y_size = QUOTED[(case, variant)]
    assert len(t.y) == y_size
    assert len(t.x) <= x_cap
    if case == "a1":
        assert len(t.x) < 2 * len(t.y) == 16
    elif case.startswith("c"):
        assert len(t.x) == 12 == 2 * len(t.y)
    else:
        assert x_cap == 2 * len(t.y)


def test_two_vertex_case_list_and_unknown_case():
    assert LEMMA34_CASES == ("a1", "a2", "a3", "b", "c1", "c2", "c3")
    with pytest.raises(ReductionError):
        construct_lemma34_config("z9")


def test_condition_i_failure():
    g = complete_graph(4)
    t = ReducingTriple.of({0}, [(0, 1), (0, 2), (0, 3)], [(1, 2, 3)])
    assert len(t.x) == 2 * len(t.y) + 1
    verdict = verify_reducing_triple(g, t)
    assert not verdict.valid and verdict.failed_condition == "i"


def test_empty_v0_is_an_error():
    with pytest.raises(ReductionError):
        verify_reducing_triple(complete_graph(4), ReducingTriple.of((), (), ()))


def test_triangle_free_vacuous_triple():
    g = cycle_graph(5)
    assert verify_reducing_triple(g, ReducingTriple.of({0}, (), ())).valid
    found = search_reducing_triple(g, 1)
    assert found.triple is not None and verify_reducing_triple(g, found.triple).valid


@settings(max_examples=120, deadline=None)
@given(graphs(max_n=7), st.data())
def test_verifier_matches_brute_scan(g, data):
    if g.n == 0:
        return
    v0 = data.draw(st.sets(st.integers(0, g.n - 1), min_size=1, max_size=3))
    x = data.draw(st.sets(st.sampled_from(g.edges), max_size=len(g.edges))) if g.edges else set()
    tris = enumerate_triangles(g)
    y: list[Triangle] = []
    used: set = set()
    for tri in data.draw(st.permutations(tris)) if tris else []:
        if used.isdisjoint(tri.edges) and data.draw(st.booleans()):
            y.append(tri)
            used |= set(tri.edges)
    t = ReducingTriple.of(v0, x, y)
    verdict = verify_reducing_triple(g, t)
    assert verdict.failed_condition == brute_verdict(g, t)
    assert verdict.valid == (brute_verdict(g, t) is None)


def test_apply_reduction_on_k7_host():
    g, t = construct_theorem35_config()
    h = apply_reduction(g, t)
    assert h.n == g.n - 3
    assert tau_exact(g).size <= tau_exact(h).size + len(t.x)
    assert nu_exact(g).size >= nu_exact(h).size + len(t.y)


def test_all_edges_triple():
    # |X| = m <= 2|Y| <= 2m/3 forces m = 0, so only edgeless hosts admit X = E(G)
    g = Graph(4)
    t = ReducingTriple.of({0}, g.edges, ())
    assert verify_reducing_triple(g, t).valid
    assert apply_reduction(g, t) == Graph(3)
    k5 = complete_graph(5)
    full = ReducingTriple.of({0}, k5.edges, nu_exact(k5).triangles)
    assert verify_reducing_triple(k5, full).failed_condition == "i"
    with pytest.raises(ReductionError):
        apply_reduction(k5, full)


def test_search_examples():
    res = search_reducing_triple(complete_graph(4), 1)
    assert res.triple is not None and verify_reducing_triple(complete_graph(4), res.triple).valid
    g, _ = construct_theorem35_config()
    res = search_reducing_triple(g, 3)
    assert res.triple is not None and verify_reducing_triple(g, res.triple).valid
    with pytest.raises(ReductionError):
        search_reducing_triple(g, 4)


def test_puleo_violation_implies_reducible():
    for g in (complete_graph(6), complete_graph(7)):
        assert is_robust(g)
        assert puleo_violations(g)
        res = search_reducing_triple(g, 3)
        assert res.triple is not None and verify_reducing_triple(g, res.triple).valid


def test_reduction_transfers_the_bound():
    rng = random.Random(32)
    checked = 0
    while checked < 25:
        g = random_graph(rng.randint(5, 9), 0.6, rng)
        res = search_reducing_triple(g, 2)
        if res.triple is None or not res.triple.y:
            continue
        h = apply_reduction(g, res.triple)
        tg, ng = tau_exact(g).size, nu_exact(g).size
        th, nh = tau_exact(h).size, nu_exact(h).size
        assert tg <= th + len(res.triple.x)
        assert ng >= nh + len(res.triple.y)
        if th <= 2 * nh:
            assert tg <= 2 * ng
        checked += 1


def test_triple_json_round_trip():
    _, t = construct_theorem35_config()
    assert ReducingTriple.from_json(t.to_json()) == t
    assert all(isinstance(v, list) for v in t.to_json().values())
