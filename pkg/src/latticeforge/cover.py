"""Balls in the universal cover, complex automorphisms, and rigidity.

develop_ball grows the cover around a lifted center by link completion:
the shallowest vertex whose link is still missing base corners gets fresh
triangles glued on, re-using existing lifts wherever the projection labels
force it.  Vertex links of the base are assumed to be building links
(certified by the links module), which makes every gluing step forced and
conflict-free.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Iterable

from .complexes import CellMap, Complex2D, validate, validate_cell_map
from .links import certify_building_links
from .morphisms import isomorphisms
from .presentations import BudgetExceeded

MAX_RADIUS = 3


@dataclass
class CoverBall:
    complex: Complex2D
    projection: CellMap  # ball -> base
    depth: dict[int, int]  # ball vertex index -> distance from the center
    center: int  # ball vertex index of the lifted center


class _Development:
    """Mutable cover-development state; vertex/edge/cell ids are list positions."""

    def __init__(self, base: Complex2D):
        self.base = base
        self.vert_base: list[int] = []
        self.vert_label: list[str] = []
        self.vert_depth: list[int] = []
        self.edge_base: list[int] = []
        self.edge_label: list[str] = []
        self.edge_ends: list[tuple[int, int]] = []
        self.cell_base: list[int] = []
        self.cell_label: list[str] = []
        self.cell_cycle: list[tuple[int, int, int]] = []
        self.edge_lift: dict[tuple[int, int], int] = {}  # (vertex, base edge) -> edge
        self.corners: list[set[tuple[int, int]]] = []  # per vertex: realized base corners
        self.counters: dict[str, int] = {}
        self.base_walks = [base.cell_vertices(ci) for ci in range(len(base.cells))]

    def _fresh_label(self, base_label: str) -> str:
        n = self.counters.get(base_label, 0) + 1
        self.counters[base_label] = n
        return f"{base_label}#{n}"

    def add_vertex(self, base_vi: int, depth: int) -> int:
        self.vert_base.append(base_vi)
        self.vert_label.append(self._fresh_label(self.base.vertices[base_vi]))
        self.vert_depth.append(depth)
        self.corners.append(set())
        return len(self.vert_base) - 1

    def add_edge(self, base_ei: int, p: int, q: int) -> int:
        ei = len(self.edge_base)
        self.edge_base.append(base_ei)
        self.edge_label.append(self._fresh_label(self.base.edges[base_ei][0]))
        self.edge_ends.append((p, q))
        for end in (p, q):
            if (end, base_ei) in self.edge_lift:
                raise AssertionError("second lift of one base edge at a vertex")
            self.edge_lift[(end, base_ei)] = ei
        return ei

    def far_end(self, ei: int, near: int) -> int:
        p, q = self.edge_ends[ei]
        return q if p == near else p

    def _resolved_count(self, p: int, ci: int, pos: int) -> int:
        """How many of the corner's two far vertices existing lifts pin down."""
        cycle = self.base.cells[ci][1]
        prev_e, next_e = cycle[(pos - 1) % 3], cycle[pos]
        opp_e = cycle[(pos + 1) % 3]
        l1 = self.edge_lift.get((p, prev_e))
        l2 = self.edge_lift.get((p, next_e))
        n = (l1 is not None) + (l2 is not None)
        if l1 is not None and l2 is None:
            if (self.far_end(l1, p), opp_e) in self.edge_lift:
                n += 1
        elif l2 is not None and l1 is None:
            if (self.far_end(l2, p), opp_e) in self.edge_lift:
                n += 1
        return n

    def complete_vertex(self, p: int) -> None:
        """Glue triangles at p until its link realizes every base corner.

        Corners whose far vertices are already pinned by existing lifts are
        closed first (re-scored after every gluing), so fresh vertices are
        created only when nothing in the current complex identifies them.
        """
        b = self.vert_base[p]
        pending = sorted(
            (ci, pos) for ci, pos in self.base.corners_at(b)
            if (ci, pos) not in self.corners[p]
        )
        while pending:
            best = max(
                range(len(pending)),
                key=lambda i: (self._resolved_count(p, *pending[i]), -i),
            )
            ci, pos = pending.pop(best)
            self._close_corner(p, ci, pos)
            pending = [cp for cp in pending if cp not in self.corners[p]]

    def _close_corner(self, p: int, ci: int, pos: int) -> None:
        cycle = self.base.cells[ci][1]
        walk = self.base_walks[ci]
        prev_e, next_e = cycle[(pos - 1) % 3], cycle[pos]
        opp_e = cycle[(pos + 1) % 3]
        depth = self.vert_depth[p] + 1

        l1 = self.edge_lift.get((p, prev_e))
        l2 = self.edge_lift.get((p, next_e))
        q1 = self.far_end(l1, p) if l1 is not None else None
        q2 = self.far_end(l2, p) if l2 is not None else None

        # pull the far vertices through an existing opposite-edge lift
        if q1 is not None and q2 is None:
            l3 = self.edge_lift.get((q1, opp_e))
            if l3 is not None:
                q2 = self.far_end(l3, q1)
        elif q2 is not None and q1 is None:
            l3 = self.edge_lift.get((q2, opp_e))
            if l3 is not None:
                q1 = self.far_end(l3, q2)

        if q1 is None:
            q1 = self.add_vertex(walk[(pos - 1) % 3], depth)
        if q2 is None:
            q2 = self.add_vertex(walk[(pos + 1) % 3], depth)
        if l1 is None:
            l1 = self.add_edge(prev_e, p, q1)
        if l2 is None:
            l2 = self.add_edge(next_e, p, q2)
        l3 = self.edge_lift.get((q1, opp_e))
        l3b = self.edge_lift.get((q2, opp_e))
        if l3 is not None and l3b is not None:
            if l3 != l3b:
                raise AssertionError("opposite-edge lifts disagree")
        elif l3 is not None:
            if self.far_end(l3, q1) != q2:
                raise AssertionError("opposite-edge lift misses its far vertex")
        elif l3b is not None:
            if self.far_end(l3b, q2) != q1:
                raise AssertionError("opposite-edge lift misses its far vertex")
            l3 = l3b
        else:
            l3 = self.add_edge(opp_e, q1, q2)

        lift_of = {prev_e: l1, next_e: l2, opp_e: l3}
        vertex_over = {walk[pos]: p, walk[(pos - 1) % 3]: q1, walk[(pos + 1) % 3]: q2}
        self.cell_base.append(ci)
        self.cell_label.append(self._fresh_label(self.base.cells[ci][0]))
        self.cell_cycle.append(tuple(lift_of[e] for e in cycle))
        for i in range(3):
            vtx = vertex_over[walk[i]]
            if (ci, i) in self.corners[vtx]:
                raise AssertionError("corner realized twice at one vertex")
            self.corners[vtx].add((ci, i))

    def restrict(self, r: int) -> CoverBall:
        """The full subcomplex on vertices of depth <= r, with the projection."""
        keep_v = [i for i, d in enumerate(self.vert_depth) if d <= r]
        vmap = {old: new for new, old in enumerate(keep_v)}
        keep_e = [
            i for i, (pq) in enumerate(self.edge_ends)
            if pq[0] in vmap and pq[1] in vmap
        ]
        emap = {old: new for new, old in enumerate(keep_e)}
        keep_c = [
            i for i, cyc in enumerate(self.cell_cycle) if all(e in emap for e in cyc)
        ]

        base_angles = self.base.angle_map()
        angles = []
        cells = []
        for new_ci, old_ci in enumerate(keep_c):
            cells.append(
                (self.cell_label[old_ci], tuple(emap[e] for e in self.cell_cycle[old_ci]))
            )
            for i in range(3):
                angles.append((new_ci, i, base_angles[(self.cell_base[old_ci], i)]))
        ball = Complex2D(
            vertices=tuple(self.vert_label[i] for i in keep_v),
            edges=tuple(
                (self.edge_label[i], vmap[self.edge_ends[i][0]], vmap[self.edge_ends[i][1]])
                for i in keep_e
            ),
            cells=tuple(cells),
            angles=tuple(angles),
        )
        projection = CellMap(
            source=ball,
            target=self.base,
            vertex_map={vmap[i]: self.vert_base[i] for i in keep_v},
            edge_map={emap[i]: self.edge_base[i] for i in keep_e},
            cell_map={new: self.cell_base[old] for new, old in enumerate(keep_c)},
        )
        depth = {vmap[i]: self.vert_depth[i] for i in keep_v}
        return CoverBall(ball, projection, depth, center=0)


def develop_ball(base: Complex2D, center: int | str, r: int) -> CoverBall:
    """The combinatorial radius-r ball of the universal cover around center.

    Link completion runs for every vertex of depth <= r (one layer past the
    ball) so that cells spanned entirely by depth-r vertices are present,
    then the result is cut back to the full subcomplex on depth <= r.
    """
    if not 0 <= r <= MAX_RADIUS:
        raise ValueError(f"radius {r} out of range 0..{MAX_RADIUS}")
    cert = certify_building_links(base)
    if not cert.ok:
        raise ValueError("base links are not building links: " + cert.failures[0])
    ci = base.vertex_index(center) if isinstance(center, str) else center

    dev = _Development(base)
    dev.add_vertex(ci, 0)
    cursor = 0
    while cursor < len(dev.vert_base) and dev.vert_depth[cursor] <= r:
        dev.complete_vertex(cursor)
        cursor += 1
    ball = dev.restrict(r)
    report = validate(ball.complex)
    if r > 0 and not report.ok:
        raise AssertionError("developed ball failed validation: " + report.failures[0])
    return ball


# -- automorphisms ------------------------------------------------------------


def automorphisms(c: Complex2D, respect_projection: CellMap | None = None) -> list[CellMap]:
    """All angle- and incidence-preserving self-maps, canonically ordered.

    With respect_projection, only automorphisms preserving each object's
    projection label are returned (deck-transformation style).
    """
    extra = None
    if respect_projection is not None:
        p = respect_projection
        tables = {"v": p.vertex_map, "e": p.edge_map, "c": p.cell_map}

        def extra(kind: str, i: int) -> str:
            return str(tables[kind].get(i, "-"))

    out = list(isomorphisms(c, c, extra, extra))
    out.sort(key=lambda m: sorted(m.vertex_map.items()))
    return out


def automorphism_order(c: Complex2D) -> int:
    return len(automorphisms(c))


# -- rigidity ------------------------------------------------------------------


def _full_link_sizes(base: Complex2D) -> dict[tuple, tuple[int, int]]:
    """Per corner-angle marker, the (edge-end, corner) counts of a full link.

    Read off the closed base complex, where every vertex link is complete;
    the marker must determine both counts.
    """
    angles = base.angle_map()
    deg = [0] * len(base.vertices)
    for _, p, q in base.edges:
        deg[p] += 1
        deg[q] += 1
    ntris = [0] * len(base.vertices)
    per: list[set] = [set() for _ in base.vertices]
    for ci in range(len(base.cells)):
        for pos, v in enumerate(base.cell_vertices(ci)):
            ntris[v] += 1
            per[v].add(angles[(ci, pos)])
    out: dict[tuple, tuple[int, int]] = {}
    for v in range(len(base.vertices)):
        m = tuple(sorted(per[v]))
        val = (deg[v], ntris[v])
        assert out.get(m, val) == val, "marker does not determine link size"
        out[m] = val
    return out


class _Skeleton:
    """1-skeleton view of a triangle complex whose automorphisms coincide
    with complex automorphisms: vertex bijections preserving adjacency,
    the triangle set, and per-vertex corner-angle markers.

    Valid only when edges are determined by their endpoints and cells by
    their vertex triples; the constructor asserts both.  `full_sizes` gives
    the (degree, corner count) of a complete link per marker; vertices that
    fall short are the deficient set, and hop distance to it is an intrinsic
    invariant that isolates the center of a developed ball.
    """

    def __init__(
        self,
        c: Complex2D,
        depth: dict[int, int],
        full_sizes: dict[tuple, tuple[int, int]],
    ):
        n = len(c.vertices)
        adj: list[set[int]] = [set() for _ in range(n)]
        seen_pairs: set[frozenset[int]] = set()
        for _, p, q in c.edges:
            pair = frozenset((p, q))
            assert pair not in seen_pairs and p != q, "parallel edge"
            seen_pairs.add(pair)
            adj[p].add(q)
            adj[q].add(p)
        tris: set[frozenset[int]] = set()
        ntris = [0] * n
        for ci, (_, cyc) in enumerate(c.cells):
            assert len(cyc) == 3, "non-triangle cell"
            verts = c.cell_vertices(ci)
            vs = frozenset(verts)
            assert vs not in tris, "two cells on one vertex triple"
            tris.add(vs)
            for v in verts:
                ntris[v] += 1
        marker: list[tuple] = [() for _ in range(n)]
        angles = c.angle_map()
        per_vertex: list[set] = [set() for _ in range(n)]
        for ci in range(len(c.cells)):
            for pos, v in enumerate(c.cell_vertices(ci)):
                per_vertex[v].add(angles[(ci, pos)])
        for v in range(n):
            marker[v] = tuple(sorted(per_vertex[v]))
        fringe = []
        for v in range(n):
            full = full_sizes[marker[v]]
            assert len(adj[v]) <= full[0] and ntris[v] <= full[1]
            if (len(adj[v]), ntris[v]) != full:
                fringe.append(v)
        d_inc = {v: 0 for v in fringe}
        layer = fringe
        while layer:
            nxt = []
            for v in layer:
                for w in adj[v]:
                    if w not in d_inc:
                        d_inc[w] = d_inc[v] + 1
                        nxt.append(w)
            layer = nxt
        self.n = n
        self.adj = [frozenset(s) for s in adj]
        self.tris = tris
        self.color = [
            (marker[v], len(adj[v]), ntris[v], depth[v], d_inc.get(v, 0))
            for v in range(n)
        ]


def _link_iso_iter(
    la: dict[int, set[int]],
    lb: dict[int, set[int]],
    pin: dict[int, int],
    colors,
    bias_nonid: bool,
):
    """All bijections la -> lb of link node sets preserving link adjacency
    and extending `pin`.  Nodes are named by their far vertices, so this
    enumerates the edge-end correspondences a complex automorphism could
    induce between the two vertex links; matched nodes must agree under
    `colors`, an arbitrary vertex invariant.
    """
    if len(la) != len(lb):
        return
    pins = list(pin.items())
    for i, (x, tx) in enumerate(pins):
        if colors[x] != colors[tx]:
            return
        for y, ty in pins[:i]:
            if (y in la[x]) != (ty in lb[tx]):
                return
    iso = dict(pin)
    used = set(pin.values())
    # BFS order from the pinned seeds keeps candidate sets small
    order: list[int] = []
    seen = set(pin)
    frontier = sorted(pin)
    while len(seen) < len(la):
        if not frontier:
            nxt = next(x for x in sorted(la) if x not in seen)
            seen.add(nxt)
            order.append(nxt)
            frontier = [nxt]
        fresh: list[int] = []
        for x in frontier:
            for y in sorted(la[x]):
                if y not in seen:
                    seen.add(y)
                    order.append(y)
                    fresh.append(y)
        frontier = fresh

    def rec(j: int):
        if j == len(order):
            yield dict(iso)
            return
        x = order[j]
        ax = la[x]
        cx = colors[x]
        deg = len(ax)
        assigned = sum(1 for y in ax if y in iso)
        anchor = next((y for y in ax if y in iso), None)
        cand = lb[iso[anchor]] if anchor is not None else lb.keys()
        out = []
        for t in cand:
            if t in used or colors[t] != cx:
                continue
            bt = lb[t]
            # images of x's assigned neighbors must be exactly the assigned
            # nodes adjacent to t; with counts equal, a one-sided inclusion
            # test settles adjacency and non-adjacency both
            if len(bt) != deg or sum(1 for s in bt if s in used) != assigned:
                continue
            ok = True
            for y in ax:
                ty = iso.get(y)
                if ty is not None and ty not in bt:
                    ok = False
                    break
            if ok:
                out.append(t)
        out.sort(key=(lambda t: (t == x, t)) if bias_nonid else None)
        for t in out:
            iso[x] = t
            used.add(t)
            yield from rec(j + 1)
            del iso[x]
            used.discard(t)

    yield from rec(0)


def _find_automorphism_moving(
    c: Complex2D,
    depth: dict[int, int],
    sk: _Skeleton,
    fix: list[int],
    budget: float | None,
) -> dict[int, int] | None:
    """Vertex map of some automorphism of the ball c moving a `fix` vertex,
    or None when every automorphism restricts to the identity there.

    An automorphism of the ball is exactly a family of link isomorphisms,
    one per interior vertex, agreeing on shared edge ends: every boundary
    vertex, boundary edge, and boundary cell lies in the star of an interior
    vertex (checked below), so the family determines the whole map and its
    existence certifies it.  The search sweeps the interior layer by layer,
    enumerating at each vertex only the link isomorphisms that extend what
    earlier choices already force.  A candidate action that does not extend
    dies at the first link with no consistent completion; a branch whose
    whole fix set is pinned to itself is abandoned without touching the
    layers below.
    """
    n = len(c.vertices)
    r = max(depth.values(), default=0)
    assert sum(1 for v in range(n) if depth[v] == 0) == 1
    center = next(v for v in range(n) if depth[v] == 0)
    # every automorphism fixes the center: hop distance to the deficient
    # set is intrinsic and uniquely maximal there; depth is then preserved
    d_inc = [col[4] for col in sk.color]
    assert d_inc[center] == max(d_inc) and d_inc.count(d_inc[center]) == 1

    interiors = sorted(
        (v for v in range(n) if depth[v] < r), key=lambda v: (depth[v], v)
    )
    covered = set(interiors)
    for v in range(n):
        assert depth[v] == r or v in covered
        assert depth[v] == 0 or any(depth[w] < depth[v] for w in sk.adj[v])
    tri_pairs: set[frozenset[int]] = set()
    for tri in sk.tris:
        assert any(depth[v] < r for v in tri), "cell with no interior vertex"
        for pair in ((a, b) for a in tri for b in tri if a < b):
            tri_pairs.add(frozenset(pair))
    for _, p, q in c.edges:
        assert (
            depth[p] < r or depth[q] < r or frozenset((p, q)) in tri_pairs
        ), "boundary edge in no cell"

    ladj: list[dict[int, set[int]]] = [dict() for _ in range(n)]
    for _, p, q in c.edges:
        ladj[p].setdefault(q, set())
        ladj[q].setdefault(p, set())
    for ci in range(len(c.cells)):
        a, b, d = c.cell_vertices(ci)
        for x, y, z in ((a, b, d), (b, d, a), (d, a, b)):
            ladj[x][y].add(z)
            ladj[x][z].add(y)

    # intern the color tuples: they are compared in every inner loop
    color_ids: dict[tuple, int] = {}
    colv = [color_ids.setdefault(col, len(color_ids)) for col in sk.color]

    nfix = len(fix)
    fix_set = set(fix)
    vmap = {center: center}
    used_v = {center}
    assigned_fix = [1 if center in fix_set else 0]
    moved_fix = [0]
    remaining = set(interiors)
    # capped extension counts (0, 1, or 2 meaning "at least 2") per assigned
    # unprocessed interior, recomputed lazily when a link node's image lands
    ext_cache: dict[int, int] = {}
    dirty = set(interiors)
    start = time.monotonic()

    def assign(x: int, tx: int, trail: list[int]) -> bool:
        if tx in used_v or colv[x] != colv[tx]:
            return False
        vmap[x] = tx
        used_v.add(tx)
        trail.append(x)
        for w in sk.adj[x]:
            dirty.add(w)
        dirty.add(x)
        if x in fix_set:
            assigned_fix[0] += 1
            if x != tx:
                moved_fix[0] += 1
        return True

    def unassign(trail: list[int]) -> None:
        for x in reversed(trail):
            tx = vmap.pop(x)
            used_v.discard(tx)
            for w in sk.adj[x]:
                dirty.add(w)
            dirty.add(x)
            if x in fix_set:
                assigned_fix[0] -= 1
                if x != tx:
                    moved_fix[0] -= 1

    def pins_of(p: int) -> dict[int, int] | None:
        q = vmap[p]
        lb = ladj[q]
        pin: dict[int, int] = {}
        for x in ladj[p]:
            tx = vmap.get(x)
            if tx is not None:
                if tx not in lb:
                    return None
                pin[x] = tx
        return pin

    def pick() -> tuple[int, int]:
        # most-constrained-first by real extension count: a vertex with none
        # refutes the branch outright, a single extension is forced into the
        # map without branching, and ties break toward the most pinned link
        best = None
        best_key = None
        for p in sorted(remaining):
            if p not in vmap:
                continue
            cnt = ext_cache.get(p)
            if cnt is None or p in dirty:
                pin = pins_of(p)
                if pin is None:
                    cnt = 0
                else:
                    cnt = 0
                    it = _link_iso_iter(ladj[p], ladj[vmap[p]], pin, colv, False)
                    for _ in it:
                        cnt += 1
                        if cnt >= 2:
                            break
                ext_cache[p] = cnt
                dirty.discard(p)
            if cnt == 0:
                return p, 0
            free = len(ladj[p]) - sum(1 for x in ladj[p] if x in vmap)
            key = (cnt, free, p)
            if best_key is None or key < best_key:
                best, best_key = p, key
                if key[0] == 1 and key[1] == 0:
                    break
        assert best is not None
        return best, best_key[0]

    def dfs() -> bool:
        if budget is not None and time.monotonic() - start > budget:
            raise BudgetExceeded("rigidity automorphism search exceeded budget")
        if assigned_fix[0] == nfix and moved_fix[0] == 0:
            return False
        if not remaining:
            assert len(vmap) == n
            return moved_fix[0] > 0
        p, cnt = pick()
        if cnt == 0:
            return False
        q = vmap[p]
        pin = pins_of(p)
        remaining.discard(p)
        for iso in _link_iso_iter(ladj[p], ladj[q], pin, colv, p == q):
            trail: list[int] = []
            ok = True
            for x, tx in iso.items():
                if x not in vmap and not assign(x, tx, trail):
                    ok = False
                    break
            if ok and dfs():
                return True
            unassign(trail)
        remaining.add(p)
        return False

    if not dfs():
        return None
    witness = dict(vmap)
    _validate_vertex_automorphism(c, witness)
    return witness


def _validate_vertex_automorphism(c: Complex2D, vmap: dict[int, int]) -> None:
    """Check a vertex bijection really is a complex automorphism."""
    edge_by_pair = {
        frozenset((p, q)): ei for ei, (_, p, q) in enumerate(c.edges)
    }
    cell_by_triple = {
        frozenset(c.cell_vertices(ci)): ci for ci in range(len(c.cells))
    }
    emap = {
        ei: edge_by_pair[frozenset((vmap[p], vmap[q]))]
        for ei, (_, p, q) in enumerate(c.edges)
    }
    cmap = {
        ci: cell_by_triple[frozenset(vmap[v] for v in c.cell_vertices(ci))]
        for ci in range(len(c.cells))
    }
    m = CellMap(source=c, target=c, vertex_map=dict(vmap), edge_map=emap, cell_map=cmap)
    validate_cell_map(m, require_angles=True)


def rigidity_check(
    base: Complex2D,
    center: int | str,
    r: int,
    fix_radius: int,
    time_budget: float | None = None,
) -> bool:
    """True iff every automorphism of the radius-r ball is the identity on
    the radius-fix_radius subcomplex.

    Any automorphism is determined by its vertex map (edges carry no
    multiplicity and cells are determined by their vertex triples, asserted
    during setup), and is equivalent to a compatible family of link
    isomorphisms at the vertices of depth below r, which the search
    enumerates layer by layer.  Raises BudgetExceeded when the optional
    wall-clock budget runs out.
    """
    if r <= fix_radius:
        raise ValueError("fix_radius must be smaller than the ball radius")
    ball = develop_ball(base, center, r)
    sk = _Skeleton(ball.complex, ball.depth, _full_link_sizes(base))
    fix = sorted(vi for vi, d in ball.depth.items() if d <= fix_radius)
    witness = _find_automorphism_moving(
        ball.complex, ball.depth, sk, fix, time_budget
    )
    return witness is None
