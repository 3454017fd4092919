from __future__ import annotations

import networkx as nx
from hypothesis import given, settings

from conftest import graphs, to_nx
from tuza.graph import Graph, complete_graph, cycle_graph
from tuza.matching import is_matching, max_matching


@settings(max_examples=200, deadline=None)
@given(graphs(max_n=12))
def test_size_matches_networkx(g):
    m = max_matching(g)
    assert is_matching(g, m)
    assert len(m) == len(nx.max_weight_matching(to_nx(g), maxcardinality=True))


def test_blossom_cases():
    assert len(max_matching(cycle_graph(5))) == 2
    assert len(max_matching(complete_graph(7))) == 3
    # two triangles joined by a path: needs blossom contraction to find the perfect matching
    g = Graph(8, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (5, 7)])
    assert len(max_matching(g)) == 4


def test_is_matching_rejects():
    g = complete_graph(4)
    assert not is_matching(g, [(0, 1), (1, 2)])
    assert not is_matching(Graph(4, [(0, 1)]), [(2, 3)])
