"""Exact k-coloring by backtracking with saturation-ordered vertex choice (DSATUR)."""

from __future__ import annotations

from .graph import Graph


def color_exact(g: Graph, k: int) -> list[int] | None:
    """A proper coloring with colors ``0..k-1``, or ``None`` if none exists.

    The next vertex is the uncolored one seeing the most distinct colors,
    ties broken by degree and then by smallest id. Colors are tried in
    increasing order and a fresh color is opened at most once per step,
    which removes color-permutation symmetry.
    """
    n = g.n
    color = [-1] * n
    nbrs = [g.neighbors(v) for v in range(n)]

    def pick() -> int:
        best, key = -1, None
        for v in range(n):
            if color[v] >= 0:
                continue
            sat = len({color[u] for u in nbrs[v] if color[u] >= 0})
            cand = (-sat, -len(nbrs[v]), v)
            if key is None or cand < key:
                best, key = v, cand
        return best

    def solve(colored: int, used: int) -> bool:
        if colored == n:
            return True
        v = pick()
        blocked = {color[u] for u in nbrs[v]}
        for c in range(min(used + 1, k)):
            if c in blocked:
                continue
            color[v] = c
            if solve(colored + 1, max(used, c + 1)):
                return True
        color[v] = -1
        return False

    return list(color) if solve(0, 0) else None


def is_proper(g: Graph, color: list[int]) -> bool:
    return len(color) == g.n and all(color[u] != color[v] for u, v in g.edges)
