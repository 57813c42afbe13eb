"""Metric vertex links, spherical-link recognition, and convexity checks.

The link of a vertex is a weighted graph: one vertex per incident edge-end,
one edge per cell corner at the base vertex, weighted by the corner angle
(a Fraction in units of pi).  Everything downstream is exact rational
arithmetic; no floats.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction

from .complexes import CellMap, Complex2D, corner_image_map, validate_cell_map
from .morphisms import build_graph, graph_isomorphisms

LinkVertex = tuple[int, int]  # (edge index, end: 0 or 1)
CornerKey = tuple[int, int]  # (cell index, corner position)

PI = Fraction(1)


@dataclass(frozen=True)
class LinkEdge:
    corner: CornerKey
    ends: tuple[LinkVertex, LinkVertex]
    weight: Fraction


@dataclass(frozen=True)
class LinkGraph:
    vertices: tuple[LinkVertex, ...]
    edges: tuple[LinkEdge, ...]

    def neighbors(self, v: LinkVertex) -> list[tuple[LinkVertex, Fraction, int]]:
        out = []
        for i, e in enumerate(self.edges):
            if e.ends[0] == v:
                out.append((e.ends[1], e.weight, i))
            elif e.ends[1] == v:
                out.append((e.ends[0], e.weight, i))
        return out


def link(c: Complex2D, v: int | str) -> LinkGraph:
    """The metric link of a vertex; v may be an index or a label."""
    vi = c.vertex_index(v) if isinstance(v, str) else v
    if not 0 <= vi < len(c.vertices):
        raise KeyError(f"no vertex index {vi}")
    angles = c.angle_map()

    def end_at(ei: int) -> LinkVertex:
        _, p, q = c.edges[ei]
        if p == vi:
            return (ei, 0)
        if q == vi:
            return (ei, 1)
        raise KeyError(f"edge {c.edges[ei][0]!r} does not meet vertex {c.vertices[vi]!r}")

    vertices = tuple(end_at(ei) for ei in c.edges_at(vi))
    edges = []
    for ci, pos in c.corners_at(vi):
        prev_e, next_e = c.corner_edges(ci, pos)
        weight = angles.get((ci, pos))
        if weight is None:
            raise ValueError(
                f"cell {c.cells[ci][0]!r} has no angle at corner {pos}"
            )
        edges.append(LinkEdge((ci, pos), (end_at(prev_e), end_at(next_e)), weight))
    return LinkGraph(vertices, tuple(edges))


def is_complete_bipartite(g: LinkGraph, k: int) -> bool:
    """True iff g, ignoring weights, is the complete bipartite graph K_{k,k}."""
    if len(g.vertices) != 2 * k or len(g.edges) != k * k:
        return False
    pairs = {frozenset(e.ends) for e in g.edges}
    if len(pairs) != k * k or any(len(p) != 2 for p in pairs):
        return False
    # 2-color by BFS; multiple components cannot cover k*k distinct pairs
    color: dict[LinkVertex, int] = {g.vertices[0]: 0}
    queue = [g.vertices[0]]
    while queue:
        u = queue.pop()
        for w, _, _ in g.neighbors(u):
            if w not in color:
                color[w] = 1 - color[u]
                queue.append(w)
            elif color[w] == color[u]:
                return False
    if len(color) != 2 * k:
        return False
    part = [lv for lv in g.vertices if color[lv] == 0]
    if len(part) != k:
        return False
    want = {frozenset((a, b)) for a in part for b in g.vertices if color[b] == 1}
    return pairs == want


def _dijkstra(g: LinkGraph, source: LinkVertex, skip_edge: int = -1) -> dict[LinkVertex, Fraction]:
    dist: dict[LinkVertex, Fraction] = {source: Fraction(0)}
    done: set[LinkVertex] = set()
    counter = 0
    heap: list[tuple[Fraction, int, LinkVertex]] = [(Fraction(0), counter, source)]
    while heap:
        d, _, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        for w, weight, ei in g.neighbors(u):
            if ei == skip_edge:
                continue
            nd = d + weight
            if w not in dist or nd < dist[w]:
                dist[w] = nd
                counter += 1
                heapq.heappush(heap, (nd, counter, w))
    return dist


def metric_girth(g: LinkGraph) -> Fraction | float:
    """Minimum total weight of an embedded cycle; math.inf for forests.

    For each edge, the shortest path between its ends avoiding the edge
    itself closes to a cycle through it; positive weights make the shortest
    such closed walk simple.
    """
    best: Fraction | float = math.inf
    for i, e in enumerate(g.edges):
        a, b = e.ends
        if a == b:
            if e.weight < best:
                best = e.weight  # a loop is a 1-edge cycle
            continue
        dist = _dijkstra(g, a, skip_edge=i)
        if b in dist and dist[b] + e.weight < best:
            best = dist[b] + e.weight
    return best


# -- generalized quadrangle recognition --------------------------------------


def _symplectic(u: int, w: int) -> int:
    """The standard alternating form on F_2^4 with pairings (1,2) and (3,4)."""
    return (
        (u & 1 and w >> 1 & 1)
        ^ (u >> 1 & 1 and w & 1)
        ^ (u >> 2 & 1 and w >> 3 & 1)
        ^ (u >> 3 & 1 and w >> 2 & 1)
    )


def reference_quadrangle() -> tuple[list[str], list[tuple[str, str]]]:
    """Incidence graph of the symplectic quadrangle over F_2.

    Points are the 15 nonzero vectors of F_2^4; lines the 15 totally
    isotropic 2-subspaces, each named by its 3 nonzero vectors.
    """
    points = list(range(1, 16))
    lines = []
    for u in points:
        for w in points:
            if w <= u:
                continue
            # emit each isotropic line once, from its two smallest vectors
            if _symplectic(u, w) == 0 and u ^ w > w:
                lines.append((u, w, u ^ w))
    assert len(lines) == 15, f"{len(lines)} isotropic lines (want 15)"
    names = [f"p{u}" for u in points] + [f"l{u},{w},{x}" for u, w, x in lines]
    edges = []
    on_line = {u: 0 for u in points}
    for u, w, x in lines:
        for pt in (u, w, x):
            edges.append((f"p{pt}", f"l{u},{w},{x}"))
            on_line[pt] += 1
    assert all(n == 3 for n in on_line.values()), "each point must lie on 3 lines"
    return names, edges


def _as_colored_graph(vertices: list, edges: list[tuple]) -> "object":
    """Uniformly colored node-and-edge graph for the isomorphism engine."""
    keys = [("lv", v) for v in vertices] + [("le", i) for i in range(len(edges))]
    colors = [("lv",)] * len(vertices) + [("le",)] * len(edges)
    index = {k: i for i, k in enumerate(keys)}
    arcs = []
    for i, (a, b) in enumerate(edges):
        arcs.append((index[("le", i)], index[("lv", a)]))
        arcs.append((index[("le", i)], index[("lv", b)]))
    return build_graph(keys, colors, arcs)


def is_generalized_quadrangle_incidence(g: LinkGraph):
    """Certificate isomorphism onto the reference quadrangle, or None.

    Weights are ignored; the certificate maps each link vertex to a point
    or line name of the reference.  Truthiness doubles as the boolean answer.
    """
    ref_names, ref_edges = reference_quadrangle()
    if len(g.vertices) != len(ref_names) or len(g.edges) != len(ref_edges):
        return None
    g1 = _as_colored_graph(list(g.vertices), [e.ends for e in g.edges])
    g2 = _as_colored_graph(ref_names, ref_edges)
    for m in graph_isomorphisms(g1, g2):
        return {k[1]: m[k][1] for k in m if k[0] == "lv"}
    return None


# -- building-link certification ----------------------------------------------


@dataclass(frozen=True)
class CertificateReport:
    ok: bool
    vertex_types: dict[str, str]  # label -> "A1xA1" | "C2" | "FAIL: ..."
    failures: tuple[str, ...]

    def __bool__(self) -> bool:
        return self.ok


def classify_link(g: LinkGraph) -> str:
    if is_complete_bipartite(g, 3):
        if all(e.weight == Fraction(1, 2) for e in g.edges):
            return "A1xA1"
        return "FAIL: K33 link with a corner angle other than pi/2"
    if is_generalized_quadrangle_incidence(g) is not None:
        if all(e.weight == Fraction(1, 4) for e in g.edges):
            return "C2"
        return "FAIL: quadrangle link with a corner angle other than pi/4"
    return (
        f"FAIL: link with {len(g.vertices)} vertices / {len(g.edges)} corners "
        "is neither K33 nor the symplectic quadrangle"
    )


def certify_building_links(c: Complex2D) -> CertificateReport:
    """Classify every vertex link and check triangle corner types.

    Passing means: each link is K33 with all angles pi/2 or the GQ(2,2)
    incidence graph with all angles pi/4, and every triangle has corner
    types (C2, C2, A1xA1) with the right angle at its A1xA1 vertex.
    """
    for lab, cycle in c.cells:
        if len(cycle) != 3:
            raise ValueError(f"cell {lab!r} is not a triangle")
    vertex_types: dict[str, str] = {}
    failures: list[str] = []
    for vi, lab in enumerate(c.vertices):
        kind = classify_link(link(c, vi))
        vertex_types[lab] = kind
        if kind.startswith("FAIL"):
            failures.append(f"vertex {lab!r}: {kind}")
    angles = c.angle_map()
    if not failures:
        for ci, (lab, _) in enumerate(c.cells):
            walk = c.cell_vertices(ci)
            seen = []
            for pos, w in enumerate(walk):
                kind = vertex_types[c.vertices[w]]
                ang = angles.get((ci, pos))
                want = Fraction(1, 2) if kind == "A1xA1" else Fraction(1, 4)
                if ang != want:
                    failures.append(
                        f"triangle {lab!r} corner {pos} at a {kind} vertex has angle {ang}"
                    )
                seen.append(kind)
            if sorted(seen) != ["A1xA1", "C2", "C2"]:
                failures.append(f"triangle {lab!r} corner types are {seen}")
    return CertificateReport(not failures, vertex_types, tuple(failures))


# -- convexity ------------------------------------------------------------------


def sublink_convex(
    ambient: LinkGraph,
    sub: tuple[set[LinkVertex], set[CornerKey]],
) -> bool:
    """Pi-convexity of a subgraph of a link.

    True iff for every pair of sub-vertices at ambient distance strictly
    below pi, every shortest ambient path between them stays inside the
    subgraph (all intermediate vertices and all edges used).
    """
    sub_vertices, sub_corners = sub
    vset = set(ambient.vertices)
    if not sub_vertices <= vset:
        raise ValueError("sub-vertex not in the ambient link")
    corner_to_edge = {e.corner: i for i, e in enumerate(ambient.edges)}
    for ck in sub_corners:
        if ck not in corner_to_edge:
            raise ValueError(f"sub-edge {ck} not in the ambient link")
        e = ambient.edges[corner_to_edge[ck]]
        if not (e.ends[0] in sub_vertices and e.ends[1] in sub_vertices):
            raise ValueError(f"sub-edge {ck} has an end outside the sub-vertices")

    dist = {v: _dijkstra(ambient, v) for v in ambient.vertices}
    pairs = sorted(sub_vertices)
    for i, s in enumerate(pairs):
        for t in pairs[i + 1 :]:
            d = dist[s].get(t)
            if d is None or d >= PI:
                continue
            # a vertex lies on some shortest s-t path iff it splits the distance
            for z in ambient.vertices:
                if z == s or z == t or z in sub_vertices:
                    continue
                dz = dist[s].get(z)
                if dz is not None and dz + dist[z].get(t, math.inf) == d:
                    return False
            # an edge lies on some shortest s-t path iff it splits it tightly
            for e in ambient.edges:
                if e.corner in sub_corners:
                    continue
                a, b = e.ends
                for u, w in ((a, b), (b, a)):
                    du = dist[s].get(u)
                    rest = dist[w].get(t) if du is not None else None
                    if du is not None and rest is not None and du + e.weight + rest == d:
                        return False
    return True


def induced_sublink(
    m: CellMap, vi: int, corner_map: dict[CornerKey, CornerKey]
) -> tuple[set[LinkVertex], set[CornerKey]]:
    """Image of the link of source vertex vi inside the link of its image."""
    src, dst = m.source, m.target
    wi = m.vertex_map[vi]
    verts: set[LinkVertex] = set()
    for ei in src.edges_at(vi):
        fi = m.edge_map[ei]
        _, p, q = dst.edges[fi]
        verts.add((fi, 0 if p == wi else 1))
    corners = {corner_map[(ci, pos)] for ci, pos in src.corners_at(vi)}
    return verts, corners


def local_isometry_check(m: CellMap) -> bool:
    """True iff m embeds each vertex link pi-convexly into its image link.

    The map must be injective on vertices, edges, and cells and pass the
    incidence and angle checks; violations raise ValueError.
    """
    for name, mp, total in (
        ("vertex", m.vertex_map, len(m.source.vertices)),
        ("edge", m.edge_map, len(m.source.edges)),
        ("cell", m.cell_map, len(m.source.cells)),
    ):
        if len(mp) != total:
            raise ValueError(f"map is not total on {name}s")
        if len(set(mp.values())) != len(mp):
            raise ValueError(f"map is not injective on {name}s")
    report = validate_cell_map(m, require_angles=True)
    if not report.ok:
        raise ValueError("map is not incidence- and angle-compatible: " + report.failures[0])
    corner_map = corner_image_map(m)
    for vi in range(len(m.source.vertices)):
        ambient = link(m.target, m.vertex_map[vi])
        if not sublink_convex(ambient, induced_sublink(m, vi, corner_map)):
            return False
    return True
