"""3-trees: random construction sequences and exhaustive enumeration up to isomorphism."""

from __future__ import annotations

import random

import networkx as nx

from .graph import Graph, enumerate_triangles
from .treedec import KTreeSeq, SequenceError, from_ktree_sequence, ktree_sequence_of, random_ktree_sequence

ThreeTreeSeq = KTreeSeq


def generate_3tree(n: int, seed: int) -> KTreeSeq:
    """Random 3-tree sequence; each step hosts on a uniformly chosen existing triangle clique."""
    if n < 3:
        raise ValueError("a 3-tree has at least 3 vertices")
    return random_ktree_sequence(n, 3, random.Random(seed))


def generate_ktree(n: int, k: int, seed: int) -> KTreeSeq:
    return random_ktree_sequence(n, k, random.Random(seed))


def three_tree_graph(seq: KTreeSeq) -> Graph:
    if seq.k != 3:
        raise SequenceError(f"expected a 3-tree sequence, got k = {seq.k}")
    return from_ktree_sequence(seq)[0]


def is_3tree(g: Graph) -> bool:
    try:
        ktree_sequence_of(g, 3)
    except SequenceError:
        return False
    return True


def _to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    return h


def enumerate_3trees(n: int) -> list[Graph]:
    """One representative per isomorphism class of 3-trees on ``n`` vertices.

    Grows every class on ``n - 1`` vertices by a vertex on each triangle and
    keeps the first graph of each class, bucketed by a Weisfeiler-Lehman hash
    and separated by exact isomorphism tests.
    """
    if n < 3:
        raise ValueError("a 3-tree has at least 3 vertices")
    layer = [Graph(3, [(0, 1), (0, 2), (1, 2)])]
    for size in range(4, n + 1):
        buckets: dict[str, list[tuple[Graph, nx.Graph]]] = {}
        nxt: list[Graph] = []
        for g in layer:
            for tri in enumerate_triangles(g):
                h = Graph(size, list(g.edges) + [(x, size - 1) for x in tri.vertices])
                hn = _to_nx(h)
                key = nx.weisfeiler_lehman_graph_hash(hn, iterations=3)
                bucket = buckets.setdefault(key, [])
                if any(nx.is_isomorphic(hn, other) for _, other in bucket):
                    continue
                bucket.append((h, hn))
                nxt.append(h)
        layer = nxt
    return layer
