"""Constructive transversal/packing pairs with 5|X| <= 9|Y| + 1 for 3-trees.

The construction peels a rooted width-3 decomposition from below:

* graphs on at most six vertices are solved exactly;
* a height-1 node with two or more leaf successors is removed with one of
  three explicit extensions;
* a height-2 node with three or more successors on one triple is shrunk by
  one successor, after rewriting the transversal of the smaller graph;
* otherwise a height-2 node is removed, its packing rebuilt from a maximum
  facial packing of a restricted planar 3-tree and its transversal chosen as
  the smaller of two explicit candidates.

Every level re-validates its pair against its own graph, so a wrong step
raises ``NineFifthsError`` with the peel trace instead of returning.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Iterable

from .graph import Edge, Graph, Triangle, edge, enumerate_triangles
from .planar import PlanarTriangulation, is_restricted, is_super_restricted, restricted_packing
from .solvers import (
    PackingCertificate,
    TransversalCertificate,
    max_packing,
    min_hitting_edges,
    nu_exact,
    tau_exact,
)
from .treedec import (
    KTreeSeq,
    RootedTreeDecomposition,
    SequenceError,
    TreeDecomposition,
    from_ktree_sequence,
    ktree_sequence_of,
    rootify,
)

log = logging.getLogger(__name__)


class NineFifthsError(RuntimeError):
    """A postcondition of the construction failed; ``trace`` holds the peel log."""

    def __init__(self, message: str, trace: list[dict]):
        super().__init__(f"{message}\npeel trace: {json.dumps(trace, default=_jsonable)}")
        self.trace = trace


def _jsonable(obj):
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    if isinstance(obj, Triangle):
        return list(obj.vertices)
    raise TypeError(type(obj).__name__)


def k_otimes(k4: Iterable[int], a: Iterable[tuple[int, int]]) -> Edge:
    """For a 4-clique meeting ``a`` in exactly one edge, the clique edge disjoint from it."""
    verts = sorted(set(k4))
    if len(verts) != 4:
        raise ValueError("k_otimes needs four vertices")
    inside = {edge(u, v) for u, v in a} & set(combinations(verts, 2))
    if len(inside) != 1:
        raise ValueError(f"the clique meets the edge set in {len(inside)} edges, expected exactly 1")
    (e,) = inside
    rest = [v for v in verts if v not in e]
    return edge(*rest)


@dataclass(frozen=True)
class NineFifthsPair:
    x: TransversalCertificate
    y: PackingCertificate
    trace: tuple[dict, ...] = field(default=(), compare=False, repr=False)

    @property
    def holds(self) -> bool:
        return 5 * self.x.size <= 9 * self.y.size + 1


# -- internal state ---------------------------------------------------------------------------


def _clique_edges(vs: Iterable[int]) -> set[Edge]:
    return {edge(u, v) for u, v in combinations(sorted(vs), 2)}


def _tri(*vs: int) -> Triangle:
    return Triangle.of(*vs)


@dataclass
class _Pair:
    x: set[Edge]
    y: set[Triangle]


class _Peeler:
    def __init__(self, g: Graph):
        self.g = g
        self.trace: list[dict] = []

    # -- helpers on the current rooted decomposition

    @staticmethod
    def _prune(rd: RootedTreeDecomposition, drop: Iterable[int]) -> RootedTreeDecomposition:
        gone = set(drop)
        parent = {t: p for t, p in rd.parent.items() if t not in gone}
        bags = {t: rd.bag(t) for t in parent}
        edges = [(t, p) for t, p in parent.items() if p is not None]
        return RootedTreeDecomposition(TreeDecomposition.build(bags, edges), rd.root, parent)

    @staticmethod
    def _heights(rd: RootedTreeDecomposition) -> dict[int, int]:
        kids = rd.children_map()
        h: dict[int, int] = {}
        for t in reversed(rd.bfs_order()):
            h[t] = 1 + max((h[s] for s in kids[t]), default=-1)
        return h

    def _fail(self, message: str) -> None:
        raise NineFifthsError(message, self.trace)

    def _check_level(self, verts: frozenset[int], pair: _Pair, step: str) -> None:
        # this level's pair must be a valid 9/5 pair of G[verts]
        sub, labels = self.g.induced_subgraph(verts)
        index = {v: i for i, v in enumerate(labels)}
        xs = {edge(index[u], index[v]) for u, v in pair.x}
        for u, v in pair.x:
            if u not in index or v not in index or not self.g.has_edge(u, v):
                self._fail(f"{step}: transversal edge {(u, v)} is not in the current graph")
        for t in enumerate_triangles(sub):
            if xs.isdisjoint(t.edges):
                self._fail(f"{step}: triangle {[labels[v] for v in t.vertices]} is not hit")
        used: set[Edge] = set()
        for t in pair.y:
            for e in t.edges:
                if e[0] not in index or e[1] not in index or not self.g.has_edge(*e):
                    self._fail(f"{step}: packed triangle {t.vertices} is not in the current graph")
                if e in used:
                    self._fail(f"{step}: packed triangles share edge {e}")
                used.add(e)
        if 5 * len(pair.x) > 9 * len(pair.y) + 1:
            self._fail(f"{step}: 5|X| = {5 * len(pair.x)} > 9|Y| + 1 = {9 * len(pair.y) + 1}")

    # -- the recursion

    def solve(self, verts: frozenset[int], rd: RootedTreeDecomposition) -> _Pair:
        if len(verts) <= 6:
            pair = self._base(verts)
            self.trace.append({"step": "base", "n": len(verts), "x": len(pair.x), "y": len(pair.y)})
            self._check_level(verts, pair, "base")
            return pair
        found = self._choose(rd)
        if found is None:
            for r in sorted(rd.parent):
                candidate = rootify(rd.base, r)
                found = self._choose(candidate)
                if found is not None:
                    self.trace.append({"step": "reroot", "n": len(verts), "root": r})
                    rd = candidate
                    break
        if found is None:
            pair = self._single_hub(verts, rd)
            if pair is None:
                self._fail(f"no peel applies on a {len(verts)}-vertex 3-tree under any root")
            self._check_level(verts, pair, "hub")
            return pair
        kind, t, extra = found
        if kind == "leafy":
            pair = self._leafy_peel(verts, rd, t)
        elif kind == "crowded":
            pair = self._crowded(verts, rd, t, extra)
        else:
            pair = self._main_peel(verts, rd, t)
        self._check_level(verts, pair, kind)
        return pair

    def _base(self, verts: frozenset[int]) -> _Pair:
        sub, labels = self.g.induced_subgraph(verts)
        x = tau_exact(sub)
        y = nu_exact(sub)
        return _Pair(
            {edge(labels[u], labels[v]) for u, v in x.edges},
            {_tri(*(labels[v] for v in t.vertices)) for t in y.triangles},
        )

    def _choose(self, rd: RootedTreeDecomposition):
        """The next peel: (kind, node, detail) or ``None``."""
        h = self._heights(rd)
        depth = {t: rd.depth(t) for t in rd.parent}
        order = sorted((t for t in rd.parent if t != rd.root), key=lambda t: (-depth[t], t))
        for t in order:
            if h[t] == 1 and len(rd.successors(t)) >= 2:
                return ("leafy", t, None)
        for t in order:
            if h[t] != 2:
                continue
            for delta, members in sorted(rd.successors_by_face(t).items(), key=lambda kv: sorted(kv[0])):
                if len(members) >= 3:
                    return ("crowded", t, delta)
            return ("main", t, None)
        return None

    def _single_hub(self, verts: frozenset[int], rd: RootedTreeDecomposition) -> _Pair | None:
        """Every vertex outside one triangle ``bcd`` sees exactly ``bcd``: cover with ``E(bcd)``."""
        sub, labels = self.g.induced_subgraph(verts)
        for tri in enumerate_triangles(sub):
            hub = [labels[v] for v in tri.vertices]
            others = sorted(verts - set(hub))
            if len(others) < 3:
                continue
            if all({u for u in self.g.neighbors(o) if u in verts} == set(hub) for o in others):
                b, c, d = hub
                p, q, r = others[:3]
                self.trace.append({"step": "hub", "n": len(verts), "hub": hub})
                return _Pair(_clique_edges(hub), {_tri(p, b, c), _tri(q, b, d), _tri(r, c, d)})
        return None

    # -- height-1 node with several leaves

    def _leafy_peel(self, verts: frozenset[int], rd: RootedTreeDecomposition, t: int) -> _Pair:
        a = rd.representative(t)
        succ = rd.successors(t)
        groups = {d: m for d, m in rd.successors_by_face(t).items() if m}
        below = set(rd.subtree(t))
        sub_verts = verts - rd.reps_below(t)
        inner = self.solve(sub_verts, self._prune(rd, below))
        x, y = set(inner.x), set(inner.y)
        rep = rd.representative
        bag = rd.bag(t)
        if len(groups) == 1:
            (delta,) = groups
            xx, yy = sorted(delta - {a})
            v1, v2 = (rep(s) for s in succ[:2])
            x |= _clique_edges(delta)
            y |= {_tri(a, yy, v1), _tri(a, xx, v2)}
            variant = "one-face"
        elif len(succ) == 2:
            (d1, (t1,)), (d2, (t2,)) = sorted(groups.items(), key=lambda kv: kv[1])
            (b,) = (d1 & d2) - {a}
            (c,) = d1 - {a, b}
            (d,) = d2 - {a, b}
            v1, v2 = rep(t1), rep(t2)
            hit = sorted(x & _clique_edges((b, c, d)))
            if not hit:
                self._fail("smaller transversal misses the triangle shared with the parent bag")
            e = hit[0]
            if e == edge(b, c):
                x |= {edge(a, d), edge(a, v1), edge(b, v2)}
                y |= {_tri(a, c, v1), _tri(a, b, v2)}
            elif e == edge(c, d):
                x |= {edge(a, b), edge(c, v1), edge(d, v2)}
                y |= {_tri(a, c, v1), _tri(a, b, v2)}
            else:
                x |= {edge(a, c), edge(a, v2), edge(b, v1)}
                y |= {_tri(a, d, v2), _tri(a, b, v1)}
            variant = "two-faces"
        else:
            t1 = succ[0]
            t2 = next(s for s in succ if rd.bag(s) & bag != rd.bag(t1) & bag)
            t3 = next(s for s in succ if s not in (t1, t2))
            picks = [t1, t2, t3]
            options = [sorted((rd.bag(s) & bag) - {a}) for s in picks]
            for choice in permutations(sorted(bag - {a}), 3):
                if all(choice[i] in options[i] for i in range(3)):
                    break
            else:  # pragma: no cover - Hall's condition always holds here
                self._fail("no distinct corners for the three extra triangles")
            x |= _clique_edges(bag)
            y |= {_tri(a, choice[i], rep(picks[i])) for i in range(3)}
            variant = "three-plus"
        self.trace.append({"step": "leafy", "variant": variant, "n": len(verts), "t": t,
                           "dx": len(x) - len(inner.x), "dy": len(y) - len(inner.y)})
        return _Pair(x, y)

    # -- three or more successors on one triple

    def _crowded(self, verts: frozenset[int], rd: RootedTreeDecomposition, t: int, delta: frozenset[int]) -> _Pair:
        members = rd.successors_by_face(t)[delta]
        kids = rd.children_map()
        rep = rd.representative
        leaves = [s for s in members if not kids[s]]
        if leaves:
            chosen = min(leaves, key=rep)
            removed = {rep(chosen)}
        else:
            chosen = min(members, key=rep)
            (child,) = kids[chosen]
            removed = {rep(chosen), rep(child)}
        inner = self.solve(verts - removed, self._prune(rd, rd.subtree(chosen)))
        x = set(inner.x)
        tri_edges = _clique_edges(delta)
        if not tri_edges <= x:
            drop: set[Edge] = set()
            add: set[Edge] = set(tri_edges)
            for s in members:
                if s == chosen:
                    continue
                if not kids[s]:
                    drop |= {edge(z, rep(s)) for z in delta}
                else:
                    (child,) = kids[s]
                    drop |= _clique_edges(rd.bag(s) | rd.bag(child)) - tri_edges
                    add.add(edge(rep(s), rep(child)))
            rewritten = (x - drop) | add
            if len(rewritten) > len(x):
                self._fail(f"transversal rewrite grew from {len(x)} to {len(rewritten)}")
            x = rewritten
        y = set(inner.y)
        if len(removed) == 2:
            v, w = sorted(removed)
            common = [u for u in self.g.common_neighbors(v, w) if u in verts]
            x.add(edge(v, w))
            y.add(_tri(v, w, min(common)))
        self.trace.append({"step": "crowded", "n": len(verts), "t": t, "face": sorted(delta),
                           "removed": sorted(removed), "dx": len(x) - len(inner.x), "dy": len(y) - len(inner.y)})
        return _Pair(x, y)

    def _local_exact(
        self, verts: frozenset[int], removed: frozenset[int], inner: _Pair, x: set[Edge], y: set[Triangle]
    ) -> tuple[set[Edge], set[Triangle]]:
        """Best extension of ``inner`` over the triangles that meet ``removed``.

        Keeps ``inner`` fixed and solves the two small residual problems exactly:
        the triangles the smaller transversal misses, and the triangles meeting
        ``removed`` that avoid every edge of the smaller packing.
        """
        local = [t for t in self._triangles_meeting(verts, removed)]
        missed = [t for t in local if inner.x.isdisjoint(t.edges)]
        best_x = set(inner.x) | set(min_hitting_edges(missed))
        used = {e for t in inner.y for e in t.edges}
        free = [t for t in local if used.isdisjoint(t.edges)]
        best_y = set(inner.y) | set(max_packing(free))
        return (best_x if len(best_x) < len(x) else x), (best_y if len(best_y) > len(y) else y)

    def _triangles_meeting(self, verts: frozenset[int], removed: Iterable[int]) -> list[Triangle]:
        found = set()
        for v in removed:
            nbrs = [u for u in self.g.neighbors(v) if u in verts]
            for u, w in combinations(nbrs, 2):
                if self.g.has_edge(u, w):
                    found.add(_tri(u, v, w))
        return sorted(found, key=lambda t: t.vertices)

    # -- height-2 node

    def _main_peel(self, verts: frozenset[int], rd: RootedTreeDecomposition, t: int) -> _Pair:
        kids = rd.children_map()
        rep = rd.representative
        a = rep(t)
        bag = rd.bag(t)
        top = rd.attachment(t)
        succ = rd.successors(t)
        leaves = [s for s in succ if not kids[s]]
        nonleaves = [s for s in succ if kids[s]]
        child = {}
        for q in nonleaves:
            if len(kids[q]) != 1 or kids[kids[q][0]]:
                self._fail(f"node {q} below the peel node does not have a single leaf successor")
            child[q] = kids[q][0]
        m, k = len(leaves), len(nonleaves)
        groups = {d: ms for d, ms in rd.successors_by_face(t).items() if ms}
        k_prime = sum(1 for ms in groups.values() if any(s in child for s in ms))
        m_prime = len(groups) - k_prime
        pruned = []
        for d, ms in sorted(groups.items(), key=lambda kv: sorted(kv[0])):
            if len(ms) == 2:
                pool = [s for s in ms if s not in child] or ms
                pruned.append(min(pool, key=rep))
        q_plus = [q for q in pruned if q in child]

        # G+ : the root clique V_t, external face bcd, plus the unpruned successors
        b, c, d = sorted(top)
        faces = [_tri(b, c, d), _tri(a, b, c), _tri(a, b, d), _tri(a, c, d)]

        def stellate(host: frozenset[int], v: int) -> None:
            i = faces.index(_tri(*host))
            x1, x2, x3 = sorted(host)
            faces[i] = _tri(x1, x2, v)
            faces.extend([_tri(x1, x3, v), _tri(x2, x3, v)])

        plus_verts = set(bag)
        for s in succ:
            if s in pruned:
                continue
            stellate(rd.bag(s) & bag, rep(s))
            plus_verts.add(rep(s))
            if s in child:
                stellate(rd.bag(child[s]) & rd.bag(s), rep(child[s]))
                plus_verts.add(rep(child[s]))
        labels = sorted(plus_verts)
        index = {v: i for i, v in enumerate(labels)}
        plus = PlanarTriangulation.from_faces(
            len(labels), [[index[v] for v in f.vertices] for f in faces], external=0
        )
        f = plus.f
        if not is_restricted(plus):
            self._fail("the pruned neighbourhood is not a restricted planar 3-tree")
        if f != 4 + 4 * k_prime + 2 * m_prime:
            self._fail(f"pruned neighbourhood has {f} faces, expected {4 + 4 * k_prime + 2 * m_prime}")
        p_plus = {_tri(*(labels[v] for v in tri.vertices)) for tri in restricted_packing(plus).triangles}
        super_restricted = is_super_restricted(plus)

        extra = set()
        for q in q_plus:
            v, w = rep(q), rep(child[q])
            common = [u for u in self.g.common_neighbors(v, w) if u in verts]
            extra.add(_tri(v, w, min(common)))

        inner = self.solve(verts - rd.reps_below(t), self._prune(rd, rd.subtree(t)))
        y = set(inner.y) | (p_plus - {_tri(b, c, d)}) | extra

        x1 = set(inner.x) | _clique_edges(bag) | {edge(rep(q), rep(child[q])) for q in nonleaves}
        hit = sorted(inner.x & _clique_edges(top))
        if not hit:
            self._fail("smaller transversal misses the triangle shared with the parent bag")
        e = hit[0]
        e_opp = k_otimes(bag, [e])
        x2 = set(inner.x) | {e_opp}
        for s in leaves:
            x2.add(k_otimes(rd.bag(s), [e, e_opp]))
        for q in nonleaves:
            fq = k_otimes(rd.bag(q), [e, e_opp])
            x2 |= {fq, k_otimes(rd.bag(child[q]), [e, e_opp, fq])}
        x, branch = (x1, "x1") if len(x1) <= len(x2) else (x2, "x2")
        if m_prime == 2 and (not super_restricted or len(p_plus) != 5):
            self._fail("two leaf-only triples but the pruned neighbourhood is not super restricted with packing 5")

        dx, dy = len(x) - len(inner.x), len(y) - len(inner.y)
        allowance = min(5 + k, 1 + m + 2 * k)
        if dx > allowance:
            self._fail(f"transversal grew by {dx}, more than min(5+k, 1+m+2k) = {allowance}")
        pays = 5 * dx <= 9 * dy
        ceiling_form = 5 * allowance <= 9 * (math.ceil(f / 3) - 1 + k - k_prime)
        in_box = (
            1 <= k <= 6 and 1 <= k_prime <= 3 and 0 <= m <= 4 and m_prime in (0, 1)
            and k >= k_prime >= math.ceil(k / 2) and m >= m_prime >= math.ceil(m / 2) and m_prime + k_prime <= 3
        )
        repaired = False
        if not pays:
            log.info("main peel gains less packing than it spends: k=%d k'=%d m=%d m'=%d dx=%d dy=%d",
                     k, k_prime, m, m_prime, dx, dy)
            x, y = self._local_exact(verts, rd.reps_below(t), inner, x, y)
            dx, dy = len(x) - len(inner.x), len(y) - len(inner.y)
            repaired = True
        self.trace.append({
            "step": "main", "branch": branch, "n": len(verts), "t": t, "k": k, "k_prime": k_prime,
            "m": m, "m_prime": m_prime, "f": f, "packing": len(p_plus), "in_box": in_box,
            "ceiling_form_holds": ceiling_form, "pays": pays,
            "repaired": repaired, "dx": dx, "dy": dy,
        })
        return _Pair(x, y)


def _start(seq: KTreeSeq) -> tuple[Graph, RootedTreeDecomposition]:
    g, d = from_ktree_sequence(seq)
    adj = d.adjacency()
    root = min((t for t in d.nodes if len(adj[t]) <= 1), default=d.nodes[0])
    return g, rootify(d, root)


def nine_fifths_tp(seq: KTreeSeq) -> NineFifthsPair:
    """Build a checked transversal/packing pair with 5|X| <= 9|Y| + 1 for the 3-tree of ``seq``."""
    if seq.k != 3:
        raise SequenceError(f"expected a 3-tree sequence, got k = {seq.k}")
    g, rd = _start(seq)
    peeler = _Peeler(g)
    pair = peeler.solve(frozenset(range(g.n)), rd)
    x = TransversalCertificate.of(pair.x)
    y = PackingCertificate.of(pair.y)
    try:
        x.validate(g)
        y.validate(g)
    except ValueError as exc:
        raise NineFifthsError(f"final certificate invalid: {exc}", peeler.trace) from exc
    result = NineFifthsPair(x, y, tuple(peeler.trace))
    if not result.holds:
        raise NineFifthsError("final pair violates 5|X| <= 9|Y| + 1", peeler.trace)
    return result


def verify_nine_fifths_exact(g: Graph) -> bool:
    """``5 tau(g) <= 9 nu(g) + 1`` with exact solvers; ``g`` must be a 3-tree."""
    ktree_sequence_of(g, 3)
    return 5 * tau_exact(g).size <= 9 * nu_exact(g).size + 1
