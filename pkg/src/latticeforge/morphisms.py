"""Isomorphism and automorphism search for complexes via colored graphs.

A complex is encoded as an incidence graph with one node per vertex, edge,
cell, and cell corner.  Node colors capture everything a combinatorial
isomorphism must preserve (object kind, cell size, corner angle, and any
caller-supplied pinning such as projection labels); arcs capture incidence
(edge-endpoint, corner-cell, corner-vertex, corner-boundary-edge, and the
cyclic adjacency of corners around a cell).  Color-preserving graph
isomorphisms then correspond to maps of complexes matching every cell
boundary up to rotation and reflection.

The search is refinement plus individualization: stable color classes are
computed by iterated neighborhood signatures, the smallest ambiguous class
is split by fixing one node's image, and complete leaf bijections are
verified arc-for-arc before being reported.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

from .complexes import CellMap, Complex2D, validate_cell_map

NodeKey = tuple

ExtraColor = Callable[[str, int], str]


@dataclass
class ColoredGraph:
    keys: list[NodeKey]
    index: dict[NodeKey, int]
    color_keys: list[tuple[str, ...]]
    adj: list[list[int]]


def build_graph(
    keys: list[NodeKey],
    color_keys: list[tuple[str, ...]],
    arcs: list[tuple[int, int]],
) -> ColoredGraph:
    adj: list[list[int]] = [[] for _ in keys]
    for a, b in arcs:
        adj[a].append(b)
        adj[b].append(a)
    adj = [sorted(set(nbrs)) for nbrs in adj]
    return ColoredGraph(keys, {k: i for i, k in enumerate(keys)}, color_keys, adj)


def complex_graph(c: Complex2D, extra: ExtraColor | None = None) -> ColoredGraph:
    """Incidence-graph encoding of a complex.

    extra(kind, index) may add a caller-defined component to a node's color;
    kind is one of "v", "e", "c".  Corners need no extra color: pinning
    vertices, edges, and cells already pins them.
    """
    tag = extra if extra is not None else (lambda kind, i: "")
    keys: list[NodeKey] = []
    color_keys: list[tuple[str, ...]] = []
    index: dict[NodeKey, int] = {}

    def add(key: NodeKey, color: tuple[str, ...]) -> None:
        index[key] = len(keys)
        keys.append(key)
        color_keys.append(color)

    for vi in range(len(c.vertices)):
        add(("v", vi), ("v", tag("v", vi)))
    for ei in range(len(c.edges)):
        add(("e", ei), ("e", tag("e", ei)))
    angles = c.angle_map()
    for ci, (_, cycle) in enumerate(c.cells):
        add(("c", ci), ("c", str(len(cycle)), tag("c", ci)))
        for pos in range(len(cycle)):
            ang = angles.get((ci, pos))
            add(("k", ci, pos), ("k", str(ang) if ang is not None else "?"))

    arcs: list[tuple[int, int]] = []
    for ei, (_, p, q) in enumerate(c.edges):
        arcs.append((index[("e", ei)], index[("v", p)]))
        arcs.append((index[("e", ei)], index[("v", q)]))
    for ci, (_, cycle) in enumerate(c.cells):
        k = len(cycle)
        walk = c.cell_vertices(ci)
        for pos in range(k):
            kn = index[("k", ci, pos)]
            arcs.append((kn, index[("c", ci)]))
            arcs.append((kn, index[("v", walk[pos])]))
            arcs.append((kn, index[("e", cycle[pos - 1])]))
            arcs.append((kn, index[("e", cycle[pos])]))
            arcs.append((kn, index[("k", ci, (pos + 1) % k)]))
    return build_graph(keys, color_keys, arcs)


# -- refinement ------------------------------------------------------------


def _initial_colors(g1: ColoredGraph, g2: ColoredGraph) -> tuple[list[int], list[int]]:
    palette = {ck: i for i, ck in enumerate(sorted(set(g1.color_keys) | set(g2.color_keys)))}
    return [palette[ck] for ck in g1.color_keys], [palette[ck] for ck in g2.color_keys]


def _refine_pair(
    c1: list[int], c2: list[int], g1: ColoredGraph, g2: ColoredGraph
) -> tuple[list[int], list[int]] | None:
    """Refine both colorings to a joint stable point; None if they diverge."""
    while True:
        sig1 = [(c1[v], tuple(sorted(c1[u] for u in g1.adj[v]))) for v in range(len(c1))]
        sig2 = [(c2[v], tuple(sorted(c2[u] for u in g2.adj[v]))) for v in range(len(c2))]
        palette = {s: i for i, s in enumerate(sorted(set(sig1) | set(sig2)))}
        n1 = [palette[s] for s in sig1]
        n2 = [palette[s] for s in sig2]
        if sorted(n1) != sorted(n2):
            return None
        if len(set(n1)) == len(set(c1)) and len(set(n2)) == len(set(c2)):
            return n1, n2
        c1, c2 = n1, n2


def _check_bijection(g1: ColoredGraph, g2: ColoredGraph, m: list[int]) -> bool:
    for v in range(len(m)):
        if sorted(m[u] for u in g1.adj[v]) != g2.adj[m[v]]:
            return False
    return True


def graph_isomorphisms(
    g1: ColoredGraph,
    g2: ColoredGraph,
    require: list[tuple[NodeKey, NodeKey]] | None = None,
) -> Iterator[dict[NodeKey, NodeKey]]:
    """All color-preserving isomorphisms g1 -> g2, lazily.

    require pins node images before the search starts.  Every yielded map
    has been verified arc-for-arc, so a caller may trust any single answer
    without exhausting the iterator.
    """
    if len(g1.keys) != len(g2.keys):
        return
    c1, c2 = _initial_colors(g1, g2)
    fresh = len(c1) + len(c2)
    for a, b in require or []:
        c1[g1.index[a]] = fresh
        c2[g2.index[b]] = fresh
        fresh += 1

    def descend(c1: list[int], c2: list[int]) -> Iterator[dict[NodeKey, NodeKey]]:
        refined = _refine_pair(c1, c2, g1, g2)
        if refined is None:
            return
        c1, c2 = refined
        counts: dict[int, int] = {}
        for col in c1:
            counts[col] = counts.get(col, 0) + 1
        split = min(((n, col) for col, n in counts.items() if n > 1), default=None)
        if split is None:
            where2 = {col: v for v, col in enumerate(c2)}
            m = [where2[col] for col in c1]
            if _check_bijection(g1, g2, m):
                yield {g1.keys[v]: g2.keys[m[v]] for v in range(len(m))}
            return
        col = split[1]
        v = c1.index(col)
        fresh = len(c1) + len(c2)  # above every rank the refiner assigns
        for w in range(len(c2)):
            if c2[w] != col:
                continue
            d1, d2 = c1[:], c2[:]
            d1[v] = fresh
            d2[w] = fresh
            yield from descend(d1, d2)

    yield from descend(c1, c2)


# -- complex-level wrappers --------------------------------------------------


def _decode(c1: Complex2D, c2: Complex2D, m: dict[NodeKey, NodeKey]) -> CellMap:
    vm = {k[1]: m[k][1] for k in m if k[0] == "v"}
    em = {k[1]: m[k][1] for k in m if k[0] == "e"}
    cm = {k[1]: m[k][1] for k in m if k[0] == "c"}
    return CellMap(source=c1, target=c2, vertex_map=vm, edge_map=em, cell_map=cm)


def isomorphisms(
    c1: Complex2D,
    c2: Complex2D,
    extra1: ExtraColor | None = None,
    extra2: ExtraColor | None = None,
) -> Iterator[CellMap]:
    """Angle- and incidence-preserving isomorphisms c1 -> c2, verified."""
    g1 = complex_graph(c1, extra1)
    g2 = complex_graph(c2, extra2)
    seen: set[tuple] = set()
    for m in graph_isomorphisms(g1, g2):
        cand = _decode(c1, c2, m)
        key = (
            tuple(sorted(cand.vertex_map.items())),
            tuple(sorted(cand.edge_map.items())),
            tuple(sorted(cand.cell_map.items())),
        )
        if key in seen:
            continue
        seen.add(key)
        report = validate_cell_map(cand, require_angles=True)
        if report.ok:
            yield cand


def find_isomorphism(c1: Complex2D, c2: Complex2D) -> CellMap | None:
    for m in isomorphisms(c1, c2):
        return m
    return None
