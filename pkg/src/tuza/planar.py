"""Planar triangulations stored as face lists, their duals, and facial packings.

Every face is a ``Triangle``; one face is designated external. Planar 3-trees
additionally expose their root clique: the external face plus the unique
vertex adjacent to all three of its corners.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterable

from .coloring import color_exact
from .graph import Edge, Graph, Triangle, edge, enumerate_triangles, is_bipartite, is_triangle_free
from .matching import max_matching
from .mis import max_independent_set
from .solvers import PackingCertificate, TransversalCertificate
from .treedec import SequenceError, ktree_sequence_of


class TriangulationError(ValueError):
    pass


@dataclass(frozen=True)
class PlanarTriangulation:
    graph: Graph
    faces: tuple[Triangle, ...]
    external: int = 0

    @classmethod
    def from_faces(cls, n: int, faces: Iterable[Iterable[int]], external: int = 0) -> PlanarTriangulation:
        fs = tuple(Triangle.of(*f) for f in faces)
        g = Graph.from_edges((e for f in fs for e in f.edges), n=n)
        problems = triangulation_problems(g, fs)
        if problems:
            raise TriangulationError("; ".join(problems))
        if not 0 <= external < len(fs):
            raise TriangulationError(f"external face index {external} out of range")
        return cls(g, fs, external)

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def f(self) -> int:
        return len(self.faces)

    @property
    def external_face(self) -> Triangle:
        return self.faces[self.external]

    def face_index(self, t: Triangle | Iterable[int]) -> int:
        tri = t if isinstance(t, Triangle) else Triangle.of(*t)
        return self.faces.index(tri)

    def to_json(self) -> dict:
        return {"n": self.n, "faces": [list(f.vertices) for f in self.faces], "external": self.external}

    @classmethod
    def from_json(cls, data: dict | str) -> PlanarTriangulation:
        if isinstance(data, str):
            data = json.loads(data)
        try:
            return cls.from_faces(int(data["n"]), data["faces"], int(data.get("external", 0)))
        except (KeyError, TypeError) as exc:
            raise TriangulationError(f"malformed face-list JSON: {exc}") from exc


def triangulation_problems(g: Graph, faces: Iterable[Triangle | Iterable[int]]) -> list[str]:
    """Everything that stops ``faces`` from being a triangulation of the sphere with graph ``g``."""
    fs = [f if isinstance(f, Triangle) else Triangle.of(*f) for f in faces]
    n = g.n
    out = []
    if n < 3:
        return ["a triangulation needs at least 3 vertices"]
    if len(fs) != 2 * n - 4:
        out.append(f"{len(fs)} faces, expected 2n-4 = {2 * n - 4}")
    if g.m != 3 * n - 6:
        out.append(f"{g.m} edges, expected 3n-6 = {3 * n - 6}")
    count: dict[Edge, int] = {}
    for f in fs:
        for e in f.edges:
            if not g.has_edge(*e):
                out.append(f"face {f.vertices} uses the non-edge {e}")
            count[e] = count.get(e, 0) + 1
    for e in g.edges:
        if count.get(e, 0) != 2:
            out.append(f"edge {e} lies in {count.get(e, 0)} faces, expected 2")
    if n == 3:
        return out
    if len(set(fs)) != len(fs):
        out.append("a face is listed twice")
    for v in range(n):
        link = [tuple(u for u in f.vertices if u != v) for f in fs if v in f]
        if not _is_single_cycle(link, set(g.neighbors(v))):
            out.append(f"faces around vertex {v} do not form a single disc")
    return out


def _is_single_cycle(link: list[tuple[int, ...]], hood: set[int]) -> bool:
    if len(link) != len(hood) or len(link) < 3:
        return False
    adj: dict[int, list[int]] = {}
    for a, b in link:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    if set(adj) != hood or any(len(x) != 2 for x in adj.values()):
        return False
    start = min(hood)
    prev, cur, steps = None, start, 0
    while True:
        nxt = adj[cur][0] if adj[cur][0] != prev else adj[cur][1]
        prev, cur = cur, nxt
        steps += 1
        if cur == start:
            break
    return steps == len(hood)


def validate_triangulation(g: Graph, faces: Iterable[Triangle | Iterable[int]]) -> bool:
    return not triangulation_problems(g, faces)


# -- construction -----------------------------------------------------------------------


def k3_triangulation() -> PlanarTriangulation:
    return PlanarTriangulation.from_faces(3, [(0, 1, 2), (0, 1, 2)], 0)


def _stellate_face(faces: list[Triangle], i: int, v: int) -> list[Triangle]:
    a, b, c = faces[i].vertices
    out = list(faces)
    out[i] = Triangle.of(a, b, v)
    out += [Triangle.of(a, c, v), Triangle.of(b, c, v)]
    return out


def from_stellation_sequence(
    initial: Iterable[int],
    steps: Iterable[tuple[Iterable[int], int]],
) -> PlanarTriangulation:
    """Start from a triangle with two faces (the first external) and stellate named faces.

    A step names its host face by its corners. Non-external copies are
    preferred; stellating the external face makes ``(a, b, v)`` the new
    external face for sorted host ``a < b < c``.
    """
    a, b, c = sorted(initial)
    base = Triangle.of(a, b, c)
    faces = [base, base]
    external = 0
    n = 3
    for host, v in steps:
        tri = Triangle.of(*host)
        matches = [i for i, f in enumerate(faces) if f == tri]
        if not matches:
            raise TriangulationError(f"{tri.vertices} is not a face")
        inner = [i for i in matches if i != external]
        i = inner[0] if inner else matches[0]
        faces = _stellate_face(faces, i, v)
        n += 1
    verts = {x for f in faces for x in f.vertices}
    if verts != set(range(n)):
        raise TriangulationError("vertices must be exactly 0..n-1")
    return PlanarTriangulation.from_faces(n, faces, external)


def stellate(t: PlanarTriangulation) -> PlanarTriangulation:
    """Add a vertex inside every face (ids ``n, n+1, ...`` in face order)."""
    faces: list[Triangle] = []
    for i, f in enumerate(t.faces):
        a, b, c = f.vertices
        v = t.n + i
        faces += [Triangle.of(a, b, v), Triangle.of(b, c, v), Triangle.of(a, c, v)]
    return PlanarTriangulation.from_faces(t.n + t.f, faces, 3 * t.external)


def flip_edge(t: PlanarTriangulation, e: Edge) -> PlanarTriangulation | None:
    """Replace ``e = uv`` (shared by faces ``uvx``, ``uvy``) with ``xy``; ``None`` if not allowed."""
    u, v = e
    idx = [i for i, f in enumerate(t.faces) if u in f and v in f]
    if len(idx) != 2:
        return None
    (x,) = [w for w in t.faces[idx[0]].vertices if w not in e]
    (y,) = [w for w in t.faces[idx[1]].vertices if w not in e]
    if x == y or t.graph.has_edge(x, y) or t.graph.degree(u) <= 3 or t.graph.degree(v) <= 3:
        return None
    faces = list(t.faces)
    faces[idx[0]] = Triangle.of(x, y, u)
    faces[idx[1]] = Triangle.of(x, y, v)
    return PlanarTriangulation.from_faces(t.n, faces, t.external)


def random_triangulation(n: int, rng: random.Random, flips: int | None = None) -> PlanarTriangulation:
    """Random stellations from ``K4`` up to ``n`` vertices, then random edge flips."""
    if n < 4:
        raise TriangulationError("random triangulations start at n = 4")
    t = k4_triangulation()
    faces = list(t.faces)
    for v in range(4, n):
        faces = _stellate_face(faces, rng.randrange(len(faces)), v)
    t = PlanarTriangulation.from_faces(n, faces, t.external)
    for _ in range(n if flips is None else flips):
        e = t.graph.edges[rng.randrange(t.graph.m)]
        flipped = flip_edge(t, e)
        if flipped is not None:
            t = flipped
    return t


# -- fixtures -------------------------------------------------------------------------------


def k4_triangulation() -> PlanarTriangulation:
    """``K4`` with external face ``123`` and root vertex 0."""
    return PlanarTriangulation.from_faces(4, [(1, 2, 3), (0, 1, 2), (0, 1, 3), (0, 2, 3)], 0)


def octahedron() -> PlanarTriangulation:
    faces = [(a, b, c) for a in (0, 1) for b in (2, 3) for c in (4, 5)]
    return PlanarTriangulation.from_faces(6, faces, 0)


def icosahedron() -> PlanarTriangulation:
    """Apex 0, upper ring 1..5, lower ring 6..10, apex 11."""
    faces = []
    for i in range(5):
        u, u2 = 1 + i, 1 + (i + 1) % 5
        l, l2 = 6 + i, 6 + (i + 1) % 5
        faces += [(0, u, u2), (u, u2, l), (u2, l, l2), (11, l, l2)]
    return PlanarTriangulation.from_faces(12, faces, 0)


def k5_minus_e_triangulation() -> PlanarTriangulation:
    """``K5`` without ``34``: triangle ``012`` with apexes 3 and 4."""
    faces = [(0, 1, 3), (1, 2, 3), (0, 2, 3), (0, 1, 4), (1, 2, 4), (0, 2, 4)]
    return PlanarTriangulation.from_faces(5, faces, 0)


def figure4_triangulation() -> PlanarTriangulation:
    """``K4`` on ``a,b,c,d = 0..3`` (external ``bcd``), then ``g=4`` in ``acd``, 5 in ``acg``, 6 in ``agd``."""
    return planar_3tree([(0, 2, 3, 4), (0, 2, 4, 5), (0, 3, 4, 6)])


def figure4_graph() -> Graph:
    return figure4_triangulation().graph


def strip_triangulation(length: int) -> PlanarTriangulation:
    """Two paths ``u_0..u_{L-1}`` and ``v_0..v_{L-1}`` zig-zag triangulated, closed by two fans.

    ``u_i = i`` and ``v_i = L + i``. ``u_0`` sees every ``u_i`` and ``v_{L-1}``
    sees every ``v_i``; the edge ``u_0 v_{L-1}`` closes the outer region.
    """
    if length < 2:
        raise TriangulationError("strip length must be at least 2")
    L = length
    u = list(range(L))
    v = [L + i for i in range(L)]
    faces = []
    for i in range(L - 1):
        faces += [(u[i], v[i], u[i + 1]), (v[i], u[i + 1], v[i + 1])]
    faces += [(u[0], u[i], u[i + 1]) for i in range(1, L - 1)]
    faces += [(v[L - 1], v[i], v[i + 1]) for i in range(L - 2)]
    faces += [(u[0], u[L - 1], v[L - 1]), (u[0], v[0], v[L - 1])]
    return PlanarTriangulation.from_faces(2 * L, faces, 0)


def planar_3tree(stellations: Iterable[tuple[int, int, int, int]]) -> PlanarTriangulation:
    """``K4`` (external ``123``) followed by stellations ``(x, y, z, new)`` of inner faces."""
    faces = list(k4_triangulation().faces)
    n = 4
    for x, y, z, new in stellations:
        i = faces.index(Triangle.of(x, y, z))
        if i == 0:
            raise TriangulationError("planar_3tree keeps the external face")
        faces = _stellate_face(faces, i, new)
        n += 1
    return PlanarTriangulation.from_faces(n, faces, 0)


# restricted shapes over the root a,b,c,d = 0,1,2,3 with external face bcd
_A, _B, _C, _D = 0, 1, 2, 3

_SHAPES: dict[str, str] = {
    "a": "e:abc f:ebc g:acd",
    "b": "e:abc f:eac g:acd",
    "c": "e:abc f:eab g:acd",
    "d": "e:abc f:ebc g:acd h:gcd i:adb j:idb",
    "e": "e:abc f:eac g:acd h:gcd i:adb j:idb",
    "f": "e:abc f:eac g:acd h:gca i:adb j:idb",
    "g": "e:abc f:eac g:acd h:gda i:adb j:idb",
    "h": "e:abc f:eab g:acd h:gda i:adb j:idb",
    "i": "e:abc f:eab g:acd h:gda i:adb j:ida",
    "j": "e:abc f:eac g:acd h:gda i:adb j:iab",
    "k": "e:abc f:ebc g:acd h:adb",
    "l": "e:abc f:eac g:acd h:adb",
}


def restricted_shape(name: str) -> PlanarTriangulation:
    """One of the twelve named restricted planar 3-trees (``"a"`` to ``"l"``)."""
    recipe = _SHAPES[name]
    ids = {"a": _A, "b": _B, "c": _C, "d": _D}
    steps = []
    for token in recipe.split():
        new, host = token.split(":")
        ids[new] = len(ids)
        steps.append((*(ids[ch] for ch in host), ids[new]))
    return planar_3tree(steps)


RESTRICTED_SHAPES = tuple(sorted(_SHAPES))


def all_restricted_3trees() -> list[PlanarTriangulation]:
    """Every restricted planar 3-tree over the fixed root clique, one per placement choice.

    Each inner root face holds no vertex, one vertex, or a vertex plus a second
    one in one of the three faces it creates; at least one root face holds two.
    """
    root_faces = [(_A, _B, _C), (_A, _C, _D), (_A, _B, _D)]
    options = ["empty", "one", 0, 1, 2]
    out = []
    for choice in product(options, repeat=3):
        if all(c in ("empty", "one") for c in choice):
            continue
        steps = []
        nxt = 4
        for face, c in zip(root_faces, choice):
            if c == "empty":
                continue
            first = nxt
            steps.append((*face, first))
            nxt += 1
            if c == "one":
                continue
            sub = [p for p in combinations(face, 2)][c]
            steps.append((*sub, first, nxt))
            nxt += 1
        out.append(planar_3tree(steps))
    return out


# -- duality -------------------------------------------------------------------------------


@dataclass(frozen=True)
class DualGraph:
    graph: Graph
    face_of: tuple[Triangle, ...]
    edge_of: dict[Edge, Edge] = field(hash=False)


def dual(t: PlanarTriangulation) -> DualGraph:
    """Faces become vertices; faces sharing a primal edge become adjacent."""
    if t.n < 4:
        raise TriangulationError("the dual of K3 is a multigraph")
    owners: dict[Edge, list[int]] = {}
    for i, f in enumerate(t.faces):
        for e in f.edges:
            owners.setdefault(e, []).append(i)
    edge_of = {edge(*owners[e]): e for e in t.graph.edges}
    return DualGraph(Graph(t.f, edge_of), t.faces, edge_of)


def has_bridge(g: Graph) -> bool:
    for e in g.edges:
        h = g.remove_edges([e])
        seen = {e[0]}
        stack = [e[0]]
        while stack:
            for w in h.neighbors(stack.pop()):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if e[1] not in seen:
            return True
    return False


def perfect_matching_cubic(d: DualGraph) -> list[Edge]:
    """A perfect matching of a cubic bridgeless dual; one always exists."""
    m = max_matching(d.graph)
    assert 2 * len(m) == d.graph.n, "cubic bridgeless graph without a perfect matching"
    return m


def transversal_via_matching(t: PlanarTriangulation) -> TransversalCertificate:
    """Primal edges of a perfect dual matching: ``n - 2`` edges leaving a bipartite graph."""
    d = dual(t)
    chosen = [d.edge_of[e] for e in perfect_matching_cubic(d)]
    cert = TransversalCertificate.of(chosen)
    rest = t.graph.remove_edges(cert.edges)
    assert cert.size == t.n - 2
    assert is_triangle_free(rest) and is_bipartite(rest)
    return cert


def _is_k4(g: Graph) -> bool:
    return g.n == 4 and g.m == 6


def color_dual_3(d: DualGraph) -> list[int]:
    """Proper coloring of the dual with colors 0, 1, 2."""
    if _is_k4(d.graph):
        raise TriangulationError("the dual is K4, which needs four colors")
    coloring = color_exact(d.graph, 3)
    assert coloring is not None, "connected cubic graph other than K4 must be 3-colorable"
    return coloring


def packing_via_coloring(t: PlanarTriangulation) -> PackingCertificate:
    """Faces of the largest dual color class (smallest color on ties)."""
    if t.n == 4:
        raise TriangulationError("K4 is excluded: its dual needs four colors")
    colors = color_dual_3(dual(t))
    sizes = [colors.count(c) for c in range(3)]
    best = sizes.index(max(sizes))
    cert = PackingCertificate.of(t.faces[i] for i, c in enumerate(colors) if c == best)
    cert.validate(t.graph)
    assert cert.size >= math.ceil(2 * (t.n - 2) / 3)
    return cert


def has_separating_triangle(t: PlanarTriangulation) -> bool:
    faces = set(t.faces)
    return any(tri not in faces for tri in enumerate_triangles(t.graph))


# -- facial packings ------------------------------------------------------------------------


def _face_conflicts(t: PlanarTriangulation) -> list[int]:
    rows = [0] * t.f
    by_edge: dict[Edge, list[int]] = {}
    for i, f in enumerate(t.faces):
        for e in f.edges:
            by_edge.setdefault(e, []).append(i)
    for i, f in enumerate(t.faces):
        for e in f.edges:
            for j in by_edge[e]:
                if j != i:
                    rows[i] |= 1 << j
    return rows


def max_facial_packing(t: PlanarTriangulation, with_external: bool = False) -> list[int]:
    """Indices of a maximum set of edge-disjoint faces, optionally forced to contain the external one."""
    rows = _face_conflicts(t)
    if not with_external:
        return sorted(max_independent_set(rows))
    ext = t.external
    cand = ((1 << t.f) - 1) & ~rows[ext] & ~(1 << ext)
    return sorted([ext] + max_independent_set(rows, cand))


def packing_with_external(t: PlanarTriangulation) -> PackingCertificate:
    """Largest facial packing through the external face; at least ``ceil((f-1)/3)`` faces."""
    if t.n == 4:
        return PackingCertificate.of([t.external_face])
    chosen = max_facial_packing(t, with_external=True)
    cert = PackingCertificate.of(t.faces[i] for i in chosen)
    cert.validate(t.graph)
    assert cert.size >= math.ceil((t.f - 1) / 3)
    return cert


# -- planar 3-trees ---------------------------------------------------------------------------


def root_clique(t: PlanarTriangulation) -> tuple[int, tuple[int, int, int]]:
    """The vertex adjacent to all corners of the external face, and those corners."""
    if t.n < 4:
        raise TriangulationError("K3 has no root clique")
    corners = t.external_face.vertices
    common = t.graph.adjacency_mask(corners[0]) & t.graph.adjacency_mask(corners[1]) & t.graph.adjacency_mask(corners[2])
    if common.bit_count() != 1:
        raise TriangulationError("external face corners do not have a unique common neighbour")
    return common.bit_length() - 1, corners


def is_planar_3tree(t: PlanarTriangulation) -> bool:
    try:
        ktree_sequence_of(t.graph, 3)
    except SequenceError:
        return False
    return True


def root_face_loads(t: PlanarTriangulation) -> list[int]:
    """Vertex counts inside the three inner faces of the root clique, in decreasing order."""
    if not is_planar_3tree(t):
        raise TriangulationError("not a planar 3-tree")
    if t.n == 3:
        return []
    a, corners = root_clique(t)
    sub, _ = t.graph.remove_vertices([a, *corners])
    sizes = []
    seen: set[int] = set()
    for s in range(sub.n):
        if s in seen:
            continue
        comp = {s}
        stack = [s]
        while stack:
            for w in sub.neighbors(stack.pop()):
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        sizes.append(len(comp))
    sizes += [0] * (3 - len(sizes))
    return sorted(sizes, reverse=True)


def r_of(t: PlanarTriangulation) -> int:
    """Largest number of vertices inside one face of the root clique."""
    if t.n == 3:
        if not is_planar_3tree(t):
            raise TriangulationError("not a planar 3-tree")
        return 0
    return root_face_loads(t)[0]


def is_restricted(t: PlanarTriangulation) -> bool:
    return t.n > 3 and r_of(t) == 2


def is_super_restricted(t: PlanarTriangulation) -> bool:
    return is_restricted(t) and root_face_loads(t) == [2, 1, 1]


def restricted_packing(t: PlanarTriangulation) -> PackingCertificate:
    """Maximum facial packing through the external face of a restricted planar 3-tree."""
    if t.n == 3:
        raise TriangulationError("K3 is not restricted")
    r = r_of(t)
    if r != 2:
        raise TriangulationError(f"not restricted: r = {r}")
    chosen = max_facial_packing(t, with_external=True)
    cert = PackingCertificate.of(t.faces[i] for i in chosen)
    cert.validate(t.graph)
    assert cert.size >= math.ceil(t.f / 3)
    return cert

