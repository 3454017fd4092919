from __future__ import annotations

import random
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tuza.graph import Graph, complete_graph
from tuza.treedec import (
    DecompositionError,
    KTreeSeq,
    RootedTreeDecomposition,
    SequenceError,
    TreeDecomposition,
    from_ktree_sequence,
    is_full,
    ktree_sequence_of,
    random_ktree_sequence,
    rootify,
    validate,
)


def _path_3tree() -> tuple[Graph, TreeDecomposition]:
    # three bags glued along the same triangle {1,2,3} plus one more below
    bags = {0: {0, 1, 2, 3}, 1: {1, 2, 3, 4}, 2: {1, 2, 3, 5}, 3: {2, 3, 5, 6}}
    d = TreeDecomposition.build(bags, [(0, 1), (1, 2), (2, 3)])
    edges = set()
    for b in bags.values():
        edges |= set(combinations(sorted(b), 2))
    return Graph(7, edges), d


def test_validate_examples():
    p3 = Graph(3, [(0, 1), (1, 2)])
    res = validate(p3, TreeDecomposition.build({0: {0, 1}, 1: {1, 2}}, [(0, 1)]))
    assert res.valid and res.width == 1
    res = validate(complete_graph(4), TreeDecomposition.build({0: {0, 1, 2, 3}}, []))
    assert res.valid and res.width == 3
    p4 = Graph(4, [(0, 1), (1, 2), (2, 3)])
    res = validate(p4, TreeDecomposition.build({0: {0, 1}, 1: {2, 3}}, [(0, 1)]))
    assert not res.valid and any(v.startswith("T2") for v in res.violations)


def test_validate_reports_t1_and_t3():
    g = Graph(3, [(0, 1)])
    res = validate(g, TreeDecomposition.build({0: {0, 1}}, []))
    assert any(v.startswith("T1") for v in res.violations)
    d = TreeDecomposition.build({0: {0, 1}, 1: {2}, 2: {0, 2}}, [(0, 1), (1, 2)])
    res = validate(Graph(3, [(0, 1), (0, 2)]), d)
    assert any(v.startswith("T3") for v in res.violations)


def test_is_full_examples():
    _, d = _path_3tree()
    assert is_full(d, 3)
    assert is_full(TreeDecomposition.build({0: {0, 1, 2, 3}}, []), 3)
    assert not is_full(TreeDecomposition.build({0: {0, 1, 2}, 1: {2, 3, 4}}, [(0, 1)]), 2)


def test_from_sequence_examples():
    g, d = from_ktree_sequence(KTreeSeq.of((0, 1, 2), [((0, 1, 2), 3)]))
    assert g == complete_graph(4) and len(d.nodes) == 1
    seq = random_ktree_sequence(7, 3, random.Random(1))
    g, d = from_ktree_sequence(seq)
    assert len(d.nodes) == 4 and d.width == 3 and validate(g, d).valid
    seq6 = random_ktree_sequence(12, 6, random.Random(2))
    g6, d6 = from_ktree_sequence(seq6)
    assert d6.width == 6 and validate(g6, d6).valid and is_full(d6, 6)


def test_malformed_sequence_rejected():
    with pytest.raises(SequenceError):
        from_ktree_sequence(KTreeSeq.of((0, 1, 2), [((0, 1, 5), 3)]))
    with pytest.raises(SequenceError):
        from_ktree_sequence(KTreeSeq.of((0, 1, 2), [((0, 1, 2), 3), ((0, 1, 2), 3)]))


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 14), st.integers(1, 5), st.integers(0, 10**6))
def test_ktree_edge_count_and_round_trip(n, k, seed):
    if n < k:
        return
    seq = random_ktree_sequence(n, k, random.Random(seed))
    g, d = from_ktree_sequence(seq)
    assert len(g.edges) == k * n - k * (k + 1) // 2
    assert validate(g, d).valid
    assert is_full(d, k) or n == k  # K_k alone is a single bag of width k - 1
    g2, _ = from_ktree_sequence(ktree_sequence_of(g, k))
    assert g2 == g
    assert KTreeSeq.from_json(seq.to_json()) == seq
    assert TreeDecomposition.from_json(d.to_json()) == d


def test_ktree_recognition_rejects():
    with pytest.raises(SequenceError):
        ktree_sequence_of(Graph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]), 2)
    with pytest.raises(SequenceError):
        ktree_sequence_of(complete_graph(6), 3)


def test_rootify_fixed_point():
    _, d = _path_3tree()
    rd = rootify(d, 3)
    assert rd.is_rooted()
    assert rootify(d, 3).parent == rd.parent


def test_rootify_single_rotation():
    _, d = _path_3tree()
    hung = RootedTreeDecomposition.hang(d, 0)
    assert hung.offending_pairs() == [(1, 2)]
    rd = rootify(d, 0)
    assert rd.is_rooted()
    assert rd.parent == {0: None, 1: 0, 2: 0, 3: 2}
    assert sorted(rd.base.bags.items()) == sorted(d.bags.items())


def test_rootify_requires_full():
    d = TreeDecomposition.build({0: {0, 1, 2}, 1: {2, 3, 4}}, [(0, 1)])
    with pytest.raises(DecompositionError):
        rootify(d, 0)


def _leaf_neighbourhoods_inside(g: Graph, rd: RootedTreeDecomposition) -> bool:
    kids = rd.children_map()
    for t, children in kids.items():
        if children or rd.parent[t] is None:
            continue
        y = rd.representative(t)
        if not set(g.neighbors(y)) <= rd.bag(t):
            return False
    return True


def test_rootify_property_on_100_random_decompositions():
    rng = random.Random(2024)
    for _ in range(100):
        n = rng.randint(4, 12)
        g, d = from_ktree_sequence(random_ktree_sequence(n, 3, rng))
        root = rng.choice(d.nodes)
        rd = rootify(d, root)
        assert rd.is_rooted()
        assert validate(g, rd.base).valid and is_full(rd.base, 3)
        assert sorted(map(sorted, rd.base.bags.values())) == sorted(map(sorted, d.bags.values()))
        assert _leaf_neighbourhoods_inside(g, rd)


def test_query_structure():
    _, d = _path_3tree()
    rd = rootify(d, 0)
    with pytest.raises(DecompositionError):
        rd.representative(0)
    assert rd.height(3) == 0 and rd.successors(3) == [] and rd.reps_below(3) == {6}
    assert rd.representative(2) == 5
    faces = rd.successors_by_face(2)
    assert len(faces) == 3 and sum(len(v) for v in faces.values()) == 1
    path = rootify(TreeDecomposition.build({0: {0, 1, 2, 3}, 1: {1, 2, 3, 4}, 2: {2, 3, 4, 5}}, [(0, 1), (1, 2)]), 0)
    assert path.height(0) == 2
