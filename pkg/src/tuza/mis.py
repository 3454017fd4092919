"""Exact maximum independent set by branch and bound over integer bitsets."""

from __future__ import annotations

DEFAULT_BUDGET = 10_000_000


class BudgetExceeded(RuntimeError):
    """The search needed more branch nodes than allowed; no answer is returned."""

    def __init__(self, budget: int, what: str = "search"):
        super().__init__(f"{what} exceeded the node budget of {budget}: instance too large")
        self.budget = budget


def _low(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def _iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def clique_cover_bound(adj: list[int], cand: int) -> int:
    """Number of cliques in a greedy partition of ``cand``; bounds any independent set in it."""
    commons: list[int] = []
    for v in _iter_bits(cand):
        for i, common in enumerate(commons):
            if common >> v & 1:
                commons[i] = common & adj[v]
                break
        else:
            commons.append(adj[v] & cand)
    return len(commons)


class _Search:
    def __init__(self, adj: list[int], budget: int):
        self.adj = adj
        self.budget = budget
        self.nodes = 0
        self.best: int = 0
        self.best_size = -1

    def run(self, cand: int, chosen: int, size: int) -> None:
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(self.budget, "independent-set search")
        adj = self.adj
        # vertices of degree <= 1 inside cand belong to some maximum solution
        changed = True
        while changed and cand:
            changed = False
            for v in _iter_bits(cand):
                if not cand >> v & 1:
                    continue
                nb = adj[v] & cand
                if nb & (nb - 1) == 0:
                    chosen |= 1 << v
                    size += 1
                    cand &= ~(nb | 1 << v)
                    changed = True
        if not cand:
            if size > self.best_size:
                self.best, self.best_size = chosen, size
            return
        if size + clique_cover_bound(adj, cand) <= self.best_size:
            return
        # fewest conflicts first; ties go to the smallest index
        v = min(_iter_bits(cand), key=lambda x: ((adj[x] & cand).bit_count(), x))
        self.run(cand & ~(adj[v] | 1 << v), chosen | 1 << v, size + 1)
        self.run(cand & ~(1 << v), chosen, size)


def max_independent_set(
    adj: list[int],
    candidates: int | None = None,
    budget: int = DEFAULT_BUDGET,
) -> list[int]:
    """Return a maximum independent set of the graph given by bitset rows ``adj``.

    Only vertices in the ``candidates`` mask (default: all) are considered.
    Deterministic: equal inputs give the same set.
    """
    n = len(adj)
    cand = (1 << n) - 1 if candidates is None else candidates
    search = _Search(adj, budget)
    search.run(cand, 0, 0)
    return list(_iter_bits(search.best))
