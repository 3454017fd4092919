"""Maximum-cardinality matching in general graphs (Edmonds' blossom algorithm)."""

from __future__ import annotations

from collections import deque

from .graph import Edge, Graph, edge


def _find_path(n: int, adj: list[list[int]], mate: list[int], root: int) -> list[int] | None:
    """BFS for an augmenting path from the free vertex ``root``; returns the parent array."""
    base = list(range(n))
    parent = [-1] * n
    used = [False] * n
    used[root] = True
    queue = deque([root])

    def lca(a: int, b: int) -> int:
        seen = [False] * n
        while True:
            a = base[a]
            seen[a] = True
            if mate[a] < 0:
                break
            a = parent[mate[a]]
        while True:
            b = base[b]
            if seen[b]:
                return b
            b = parent[mate[b]]

    def mark(v: int, b: int, child: int, in_blossom: list[bool]) -> None:
        while base[v] != b:
            in_blossom[base[v]] = in_blossom[base[mate[v]]] = True
            parent[v] = child
            child = mate[v]
            v = parent[mate[v]]

    while queue:
        v = queue.popleft()
        for to in adj[v]:
            if base[v] == base[to] or mate[v] == to:
                continue
            if to == root or (mate[to] >= 0 and parent[mate[to]] >= 0):
                # odd cycle: contract the blossom into its base
                cur = lca(v, to)
                in_blossom = [False] * n
                mark(v, cur, to, in_blossom)
                mark(to, cur, v, in_blossom)
                for i in range(n):
                    if in_blossom[base[i]]:
                        base[i] = cur
                        if not used[i]:
                            used[i] = True
                            queue.append(i)
            elif parent[to] < 0:
                parent[to] = v
                if mate[to] < 0:
                    return _augment(parent, mate, to)
                used[mate[to]] = True
                queue.append(mate[to])
    return None


def _augment(parent: list[int], mate: list[int], v: int) -> list[int]:
    while v >= 0:
        pv = parent[v]
        nxt = mate[pv]
        mate[v] = pv
        mate[pv] = v
        v = nxt
    return mate


def max_matching(g: Graph) -> list[Edge]:
    """A maximum matching of ``g`` as sorted edges. Deterministic for a given graph."""
    n = g.n
    adj = [g.neighbors(v) for v in range(n)]
    mate = [-1] * n
    # greedy start, then augment from each remaining free vertex
    for u, v in g.edges:
        if mate[u] < 0 and mate[v] < 0:
            mate[u], mate[v] = v, u
    for v in range(n):
        if mate[v] < 0:
            _find_path(n, adj, mate, v)
    return sorted({edge(v, mate[v]) for v in range(n) if mate[v] >= 0})


def is_matching(g: Graph, m: list[Edge]) -> bool:
    seen: set[int] = set()
    for u, v in m:
        if not g.has_edge(u, v) or u in seen or v in seen:
            return False
        seen.update((u, v))
    return True
