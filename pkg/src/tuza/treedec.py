"""Tree decompositions, k-tree construction sequences, and rooted decompositions.

A decomposition is a tree on integer node ids with a bag (vertex set) per
node. ``rootify`` turns a full decomposition into a rooted one, in which no
child shares with a node the same k-set that node shares with its parent.
"""

from __future__ import annotations

import json
import logging
import random
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

from .graph import Graph, GraphError

log = logging.getLogger(__name__)


class DecompositionError(ValueError):
    pass


class SequenceError(ValueError):
    """A construction sequence names a host clique that does not exist."""


# -- plain decompositions ------------------------------------------------------------


@dataclass(frozen=True)
class TreeDecomposition:
    nodes: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    bags: dict[int, frozenset[int]] = field(hash=False)

    @classmethod
    def build(cls, bags: dict[int, Iterable[int]], edges: Iterable[tuple[int, int]]) -> TreeDecomposition:
        es = tuple(sorted((min(a, b), max(a, b)) for a, b in edges))
        return cls(tuple(sorted(bags)), es, {t: frozenset(b) for t, b in sorted(bags.items())})

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags.values()), default=0) - 1

    def adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {t: [] for t in self.nodes}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        for t in adj:
            adj[t].sort()
        return adj

    def to_json(self, root: int | None = None) -> dict:
        out = {
            "nodes": list(self.nodes),
            "edges": [list(e) for e in self.edges],
            "bags": {str(t): sorted(self.bags[t]) for t in self.nodes},
        }
        if root is not None:
            out["root"] = root
        return out

    @classmethod
    def from_json(cls, data: dict | str) -> TreeDecomposition:
        if isinstance(data, str):
            data = json.loads(data)
        bags = {int(t): b for t, b in data["bags"].items()}
        if sorted(bags) != sorted(data["nodes"]):
            raise DecompositionError("bag keys do not match the node list")
        return cls.build(bags, (tuple(e) for e in data["edges"]))


@dataclass(frozen=True)
class ValidationResult:
    valid: bool
    width: int
    violations: tuple[str, ...]


def _is_tree(d: TreeDecomposition) -> bool:
    if not d.nodes:
        return False
    if len(d.edges) != len(d.nodes) - 1:
        return False
    adj = d.adjacency()
    seen = {d.nodes[0]}
    stack = [d.nodes[0]]
    while stack:
        for s in adj[stack.pop()]:
            if s not in seen:
                seen.add(s)
                stack.append(s)
    return len(seen) == len(d.nodes)


def validate(g: Graph, d: TreeDecomposition) -> ValidationResult:
    """Check the three decomposition axioms; violations are reported, not raised."""
    problems: list[str] = []
    if not _is_tree(d):
        problems.append("tree: node graph is not a tree")
    covered = set().union(*d.bags.values()) if d.bags else set()
    stray = sorted(v for v in covered if not 0 <= v < g.n)
    if stray:
        problems.append(f"bags: vertices {stray} are not in the graph")
    missing = sorted(set(range(g.n)) - covered)
    if missing:
        problems.append(f"T1: vertices {missing} are in no bag")
    for u, v in g.edges:
        if not any(u in b and v in b for b in d.bags.values()):
            problems.append(f"T2: edge {(u, v)} is in no bag")
    adj = d.adjacency()
    for v in sorted(covered):
        holders = {t for t in d.nodes if v in d.bags[t]}
        start = min(holders)
        seen = {start}
        stack = [start]
        while stack:
            for s in adj[stack.pop()]:
                if s in holders and s not in seen:
                    seen.add(s)
                    stack.append(s)
        if seen != holders:
            problems.append(f"T3: nodes holding vertex {v} are disconnected")
    return ValidationResult(not problems, d.width, tuple(problems))


def is_full(d: TreeDecomposition, k: int) -> bool:
    if any(len(b) != k + 1 for b in d.bags.values()):
        return False
    return all(len(d.bags[a] & d.bags[b]) == k for a, b in d.edges)


# -- k-tree construction sequences ---------------------------------------------------------


@dataclass(frozen=True)
class KTreeSeq:
    """A k-tree built from the clique ``initial`` by attaching each ``v`` to its ``host`` k-clique."""

    initial: tuple[int, ...]
    steps: tuple[tuple[tuple[int, ...], int], ...]

    @classmethod
    def of(cls, initial: Iterable[int], steps: Iterable[tuple[Iterable[int], int]]) -> KTreeSeq:
        return cls(tuple(initial), tuple((tuple(sorted(h)), int(v)) for h, v in steps))

    @property
    def k(self) -> int:
        return len(self.initial)

    @property
    def n(self) -> int:
        return len(self.initial) + len(self.steps)

    def to_json(self) -> dict:
        return {"initial": list(self.initial), "steps": [{"host": list(h), "v": v} for h, v in self.steps]}

    @classmethod
    def from_json(cls, data: dict | str) -> KTreeSeq:
        if isinstance(data, str):
            data = json.loads(data)
        try:
            return cls.of(data["initial"], ((s["host"], s["v"]) for s in data["steps"]))
        except (KeyError, TypeError) as exc:
            raise SequenceError(f"malformed construction sequence: {exc}") from exc


def from_ktree_sequence(seq: KTreeSeq) -> tuple[Graph, TreeDecomposition]:
    """Build the k-tree and its natural decomposition (one bag per added vertex).

    Each new bag is hung below the earliest bag containing its host clique.
    With no steps the single bag is the initial clique itself.
    """
    k = seq.k
    if k < 1 or len(set(seq.initial)) != k:
        raise SequenceError("initial clique must list k >= 1 distinct vertices")
    present = set(seq.initial)
    edges = set(combinations(sorted(seq.initial), 2))
    bags: dict[int, frozenset[int]] = {}
    tree_edges: list[tuple[int, int]] = []
    for i, (host, v) in enumerate(seq.steps):
        if len(host) != k or len(set(host)) != k:
            raise SequenceError(f"step {i}: host must have {k} distinct vertices")
        if v in present:
            raise SequenceError(f"step {i}: vertex {v} already exists")
        if any(x not in present for x in host) or any((a, b) not in edges for a, b in combinations(host, 2)):
            raise SequenceError(f"step {i}: host {host} is not a clique of the current graph")
        hs = frozenset(host)
        bag = hs | {v}
        if bags:
            parent = next((t for t in range(i) if hs <= bags[t]), None)
            if parent is None:
                raise SequenceError(f"step {i}: host {host} lies in no earlier bag")
            tree_edges.append((parent, i))
        elif hs != frozenset(seq.initial):
            raise SequenceError("the first step must attach to the initial clique")
        bags[i] = bag
        present.add(v)
        edges.update((min(x, v), max(x, v)) for x in host)
    n = len(present)
    if present != set(range(n)):
        raise SequenceError("vertices must be exactly 0..n-1")
    if not bags:
        bags[0] = frozenset(seq.initial)
    try:
        g = Graph(n, edges)
    except GraphError as exc:
        raise SequenceError(str(exc)) from exc
    return g, TreeDecomposition.build(bags, tree_edges)


def ktree_cliques_after(seq: KTreeSeq) -> list[tuple[int, ...]]:
    """All k-cliques of the k-tree, in creation order."""
    cliques = [tuple(sorted(seq.initial))]
    for host, v in seq.steps:
        for drop in host:
            cliques.append(tuple(sorted([x for x in host if x != drop] + [v])))
    return cliques


def random_ktree_sequence(n: int, k: int, rng: random.Random) -> KTreeSeq:
    """Random k-tree on ``n`` vertices; each step picks a uniformly random existing k-clique."""
    if n < k:
        raise ValueError(f"a {k}-tree needs at least {k} vertices")
    cliques = [tuple(range(k))]
    steps = []
    for v in range(k, n):
        host = cliques[rng.randrange(len(cliques))]
        steps.append((host, v))
        for drop in host:
            cliques.append(tuple(sorted([x for x in host if x != drop] + [v])))
    return KTreeSeq.of(range(k), steps)


# -- rooted decompositions ---------------------------------------------------------------


@dataclass(frozen=True)
class RootedTreeDecomposition:
    base: TreeDecomposition
    root: int
    parent: dict[int, int | None] = field(hash=False)

    @classmethod
    def hang(cls, d: TreeDecomposition, root: int) -> RootedTreeDecomposition:
        """Orient ``d`` away from ``root`` without any rotation."""
        if root not in d.bags:
            raise DecompositionError(f"root {root} is not a node")
        adj = d.adjacency()
        parent: dict[int, int | None] = {root: None}
        queue = deque([root])
        while queue:
            t = queue.popleft()
            for s in adj[t]:
                if s not in parent:
                    parent[s] = t
                    queue.append(s)
        return cls(d, root, parent)

    @property
    def k(self) -> int:
        return self.base.width

    def bag(self, t: int) -> frozenset[int]:
        return self.base.bags[t]

    def successors(self, t: int) -> list[int]:
        return sorted(s for s, p in self.parent.items() if p == t)

    def children_map(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {t: [] for t in self.parent}
        for s, p in self.parent.items():
            if p is not None:
                out[p].append(s)
        for t in out:
            out[t].sort()
        return out

    def bfs_order(self) -> list[int]:
        kids = self.children_map()
        order = [self.root]
        for t in order:
            order.extend(kids[t])
        return order

    def depth(self, t: int) -> int:
        d = 0
        while self.parent[t] is not None:
            t = self.parent[t]
            d += 1
        return d

    def attachment(self, t: int) -> frozenset[int]:
        """``V_t`` intersected with its parent's bag."""
        p = self.parent[t]
        if p is None:
            raise DecompositionError("the root has no parent")
        return self.bag(t) & self.bag(p)

    def representative(self, t: int) -> int:
        if self.parent[t] is None:
            raise DecompositionError("the representative of the root is undefined")
        (y,) = self.bag(t) - self.bag(self.parent[t])
        return y

    def height(self, t: int) -> int:
        kids = self.successors(t)
        return 0 if not kids else 1 + max(self.height(s) for s in kids)

    def subtree(self, t: int) -> list[int]:
        kids = self.children_map()
        out = [t]
        for s in out:
            out.extend(kids[s])
        return sorted(out)

    def reps_below(self, t: int) -> set[int]:
        """``R(t)``: representatives of ``t`` and all its descendants."""
        return {self.representative(s) for s in self.subtree(t)}

    def successors_by_face(self, t: int) -> dict[frozenset[int], list[int]]:
        """``S^D(t)`` for every k-subset ``D`` of ``V_t`` other than the parent attachment."""
        bag = self.bag(t)
        skip = self.attachment(t) if self.parent[t] is not None else None
        out = {frozenset(c): [] for c in combinations(sorted(bag), len(bag) - 1) if frozenset(c) != skip}
        for s in self.successors(t):
            out[self.bag(s) & bag].append(s)
        return out

    def offending_pairs(self) -> list[tuple[int, int]]:
        """Pairs (t, child) with the child attached along the same k-set as t."""
        bad = []
        for t in self.bfs_order():
            if self.parent[t] is None:
                continue
            up = self.attachment(t)
            bad.extend((t, s) for s in self.successors(t) if self.bag(s) & self.bag(t) == up)
        return bad

    def is_rooted(self) -> bool:
        return not self.offending_pairs()

    def with_parent(self, parent: dict[int, int | None]) -> RootedTreeDecomposition:
        edges = [(c, p) for c, p in parent.items() if p is not None]
        return RootedTreeDecomposition(TreeDecomposition.build(dict(self.base.bags), edges), self.root, dict(parent))

    def to_json(self) -> dict:
        return self.base.to_json(root=self.root)


def rootify(d: TreeDecomposition, r: int) -> RootedTreeDecomposition:
    """Re-hang offending children onto their grandparent until the rooted condition holds."""
    k = d.width
    if not is_full(d, k):
        raise DecompositionError("rootify needs a full decomposition")
    rd = RootedTreeDecomposition.hang(d, r)
    parent = dict(rd.parent)
    potential = sum(rd.depth(t) for t in parent)
    steps = 0
    while True:
        bad = rd.offending_pairs()
        if not bad:
            break
        t, child = bad[0]
        parent[child] = parent[t]
        rd = rd.with_parent(parent)
        new_potential = sum(rd.depth(s) for s in parent)
        assert new_potential < potential, "rotation failed to decrease the depth potential"
        potential = new_potential
        steps += 1
    log.debug("rootify: %d rotations, final depth potential %d", steps, potential)
    return rd


def ktree_sequence_of(g: Graph, k: int) -> KTreeSeq:
    """Recover a construction sequence if ``g`` is a k-tree, else raise ``SequenceError``.

    Repeatedly strips a smallest-id vertex of degree ``k`` whose neighbourhood
    is a clique; the graph is a k-tree iff this ends at ``K_k`` or ``K_{k+1}``.
    """
    if g.n < k:
        raise SequenceError(f"a {k}-tree has at least {k} vertices")
    alive = (1 << g.n) - 1
    removed: list[tuple[tuple[int, ...], int]] = []
    remaining = g.n
    while remaining > k + 1:
        for v in range(g.n):
            if not alive >> v & 1:
                continue
            hood = g.adjacency_mask(v) & alive
            if hood.bit_count() != k:
                continue
            members = [u for u in range(g.n) if hood >> u & 1]
            if all(g.has_edge(a, b) for a, b in combinations(members, 2)):
                removed.append((tuple(members), v))
                alive &= ~(1 << v)
                remaining -= 1
                break
        else:
            raise SequenceError(f"graph is not a {k}-tree")
    core = [u for u in range(g.n) if alive >> u & 1]
    if not all(g.has_edge(a, b) for a, b in combinations(core, 2)):
        raise SequenceError(f"graph is not a {k}-tree")
    if g.m != k * g.n - k * (k + 1) // 2:
        raise SequenceError(f"graph is not a {k}-tree")
    initial = core[:k]
    steps = [(tuple(core[:k]), core[k])] if len(core) == k + 1 else []
    steps += list(reversed(removed))
    return KTreeSeq.of(initial, steps)


def figure1_decomposition() -> TreeDecomposition:
    """Width-6 decomposition of ``figure1_graph``: one bag per apex, each holding the ``K6``."""
    core = set(range(6))
    return TreeDecomposition.build({0: core | {6}, 1: core | {7}, 2: core | {8}}, [(0, 1), (1, 2)])
