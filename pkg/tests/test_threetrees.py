from __future__ import annotations

from itertools import permutations

import pytest

from tuza.graph import Graph, complete_graph, enumerate_triangles
from tuza.threetrees import enumerate_3trees, generate_3tree, is_3tree, three_tree_graph
from tuza.treedec import KTreeSeq


def canonical(g: Graph) -> tuple:
    return min(tuple(sorted(tuple(sorted((p[u], p[v]))) for u, v in g.edges)) for p in permutations(range(g.n)))


def all_sequence_classes(n: int) -> set[tuple]:
    """Every host-choice sequence up to ``n`` vertices, reduced to canonical forms."""
    layer = {canonical(complete_graph(3))}
    graphs = [complete_graph(3)]
    for size in range(4, n + 1):
        nxt, seen = [], set()
        for g in graphs:
            for tri in enumerate_triangles(g):
                h = Graph(size, list(g.edges) + [(x, size - 1) for x in tri.vertices])
                key = canonical(h)
                if key not in seen:
                    seen.add(key)
                    nxt.append(h)
        graphs, layer = nxt, seen
    return layer


@pytest.mark.parametrize("n", [3, 4, 5, 6, 7])
def test_enumeration_matches_brute_canonical_forms(n):
    ours = enumerate_3trees(n)
    assert len({canonical(g) for g in ours}) == len(ours)
    assert {canonical(g) for g in ours} == all_sequence_classes(n)


def test_class_counts_beyond_brute_force():
    assert [len(enumerate_3trees(n)) for n in (8, 9)] == [15, 58]


def test_generator_examples():
    assert three_tree_graph(generate_3tree(4, 1)) == complete_graph(4)
    assert three_tree_graph(generate_3tree(4, 99)) == complete_graph(4)
    assert generate_3tree(7, 5) == generate_3tree(7, 5)
    assert three_tree_graph(generate_3tree(10, 3)).m == 24
    with pytest.raises(ValueError):
        generate_3tree(2, 0)


def test_sequence_json_shape():
    seq = generate_3tree(6, 2)
    data = seq.to_json()
    assert set(data) == {"initial", "steps"}
    assert all(set(s) == {"host", "v"} for s in data["steps"])
    assert KTreeSeq.from_json(data) == seq


def test_recognition():
    assert all(is_3tree(g) for g in enumerate_3trees(8))
    assert not is_3tree(complete_graph(5))
    assert not is_3tree(Graph(5, [(0, 1), (1, 2), (2, 3), (3, 4)]))
