"""Completion search for link-prescribed triangle complexes.

`complete` grows a partial triangle complex depth-first into complexes all
of whose vertex links match prescribed spherical graphs (complete bipartite
or the GQ(2,2) incidence graph), emitting each completion exactly once with
a per-vertex link certificate.  `verify_completion` is the independent
checker; `replay_completion` pushes a known cell set through the same
legality checks.  `enumerate_data` streams dihedral square-complex gluing
data up to relabeling.  Everything here is deterministic.

Conventions baked into the search:

- the vertex set is fixed by the seed; growth happens on edges and cells;
- every edge belongs to a class, its alphabetic label prefix; new edges
  take the smallest unused numeric label in their class, so each abstract
  completion is produced with exactly one labeling;
- a class is used consistently at each vertex (same far-end target type),
  and a vertex carries at most two classes, matching the bipartition of
  its link target.  Completions violating this are relabelings of ones
  that satisfy it, up to the inventory caps.
"""

from __future__ import annotations

import re
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

from .builtins import builtin, embedding_t0_to_t
from .complexes import Complex2D, read_complex, validate
from .datum import Datum, Quad, rho_hat, sigma_hat, validate_datum
from .links import (
    is_complete_bipartite,
    is_generalized_quadrangle_incidence,
    link,
    reference_quadrangle,
)
from .morphisms import isomorphisms
from .presentations import BudgetExceeded

# -- link targets --------------------------------------------------------


@dataclass(frozen=True)
class TargetGraph:
    """A prescribed vertex link: a finite regular graph plus corner angle."""

    name: str
    weight: Fraction  # corner angle at vertices with this link
    nodes: tuple[str, ...]
    adj: dict[str, frozenset[str]]
    degree: int

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def arc_count(self) -> int:
        return sum(len(s) for s in self.adj.values()) // 2


def _complete_bipartite_target(k: int) -> TargetGraph:
    left = tuple(f"L{i}" for i in range(k))
    right = tuple(f"R{i}" for i in range(k))
    adj = {n: frozenset(right) for n in left}
    adj.update({n: frozenset(left) for n in right})
    return TargetGraph(f"K{k}{k}", Fraction(1, 2), left + right, adj, k)


def _quadrangle_target() -> TargetGraph:
    names, edges = reference_quadrangle()
    adj: dict[str, set[str]] = {n: set() for n in names}
    for p, l in edges:
        adj[p].add(l)
        adj[l].add(p)
    frozen = {n: frozenset(s) for n, s in adj.items()}
    return TargetGraph("GQ22", Fraction(1, 4), tuple(names), frozen, 3)


TARGETS: dict[str, TargetGraph] = {
    "K22": _complete_bipartite_target(2),
    "K33": _complete_bipartite_target(3),
    "GQ22": _quadrangle_target(),
}


@lru_cache(maxsize=None)
def _target_auts(name: str) -> tuple[dict[str, str], ...]:
    """All automorphisms of a target graph, as node maps.

    The targets are connected and regular, so an injective map placed in
    BFS order that respects every edge is automatically an automorphism.
    """
    tg = TARGETS[name]
    order: list[str] = []
    queued = {tg.nodes[0]}
    queue = [tg.nodes[0]]
    qi = 0
    while qi < len(queue):
        x = queue[qi]
        qi += 1
        order.append(x)
        for y in sorted(tg.adj[x]):
            if y not in queued:
                queued.add(y)
                queue.append(y)
    auts: list[dict[str, str]] = []
    img: dict[str, str] = {}
    used: set[str] = set()

    def rec(i: int) -> None:
        if i == len(order):
            auts.append(dict(img))
            return
        x = order[i]
        anchors = [img[y] for y in tg.adj[x] if y in img]
        if anchors:
            cand = set(tg.adj[anchors[0]])
            for a in anchors[1:]:
                cand &= tg.adj[a]
            pool = sorted(cand - used)
        else:
            pool = list(tg.nodes)
        for t in pool:
            img[x] = t
            used.add(t)
            rec(i + 1)
            del img[x]
            used.remove(t)

    rec(0)
    return tuple(auts)


def _embed_into(tg: TargetGraph, ids: list, adj: dict, capture: bool = False):
    """Subgraph embedding of (ids, adj) into tg.

    Returns a node map when capture is true (None if infeasible), else a
    bool.  Deterministic: nodes are placed in BFS order from the
    highest-degree root of each component, candidates tried sorted.
    Candidates equivalent under a target automorphism fixing every image
    placed so far are tried only once, which keeps unanchored component
    roots from multiplying the search.
    """
    fail = None if capture else False
    if len(ids) > tg.node_count:
        return fail
    if any(len(adj[x]) > tg.degree for x in ids):
        return fail
    if sum(len(adj[x]) for x in ids) // 2 > tg.arc_count:
        return fail
    # targets are bipartite, so odd cycles are hopeless; 2-color first
    color: dict = {}
    order = []
    for root in sorted(ids, key=lambda x: (-len(adj[x]), x)):
        if root in color or not adj[root]:
            continue
        color[root] = 0
        queue = [root]
        qi = 0
        while qi < len(queue):
            x = queue[qi]
            qi += 1
            order.append(x)
            for y in sorted(adj[x], key=lambda t: (-len(adj[t]), t)):
                if y not in color:
                    color[y] = 1 - color[x]
                    queue.append(y)
                elif color[y] == color[x]:
                    return fail
    img: dict = {}
    used: set[str] = set()
    stab: list[list[dict[str, str]]] = [list(_target_auts(tg.name))]

    def rec(i: int) -> bool:
        if i == len(order):
            return True
        x = order[i]
        anchors = [img[y] for y in adj[x] if y in img]
        if anchors:
            cand = set(tg.adj[anchors[0]])
            for a in anchors[1:]:
                cand &= tg.adj[a]
            pool = sorted(cand - used)
        else:
            pool = [n for n in tg.nodes if n not in used]
        live = stab[-1]
        tried: set[str] = set()
        for t in pool:
            if t in tried:
                continue
            if len(live) > 1:
                tried.update(h[t] for h in live)
                stab.append([h for h in live if h[t] == t])
            else:
                stab.append(live)
            img[x] = t
            used.add(t)
            if rec(i + 1):
                return True
            del img[x]
            used.remove(t)
            stab.pop()
        return False

    if not rec(0):
        return fail
    if not capture:
        return True
    spare = iter(n for n in tg.nodes if n not in used)
    for x in ids:
        if x not in img:
            img[x] = next(spare)
    return img


# -- search problem ------------------------------------------------------


@dataclass(frozen=True)
class Budget:
    nodes: int | None = None
    seconds: float | None = None


@dataclass(frozen=True)
class SearchSpec:
    """A completion problem: seed complex, link targets, edge inventory.

    vertex_targets maps every seed vertex label to a TARGETS key.
    inventory caps the total number of edges per class, seed included;
    classes not listed are frozen at their seed count.
    """

    seed: Complex2D
    vertex_targets: dict[str, str]
    inventory: dict[str, int] = field(default_factory=dict)
    budget: Budget = field(default_factory=Budget)
    symmetry_breaking: bool = True


@dataclass(frozen=True)
class Completion:
    """A finished complex plus, per vertex, a link-to-target node map."""

    complex: Complex2D
    certificate: dict[str, dict[str, str]]


@dataclass
class SearchStats:
    nodes: int = 0
    max_depth: int = 0
    prunes: int = 0
    emitted: int = 0
    symmetry_skips: int = 0
    witness: str | None = None
    detail: str | None = None
    elapsed: float = 0.0


class SearchBudgetExceeded(BudgetExceeded):
    def __init__(self, stats: SearchStats):
        super().__init__(
            "search budget exhausted: nodes={} max_depth={} prunes={}".format(
                stats.nodes, stats.max_depth, stats.prunes
            )
        )
        self.stats = stats


_CLASS_RE = re.compile(r"^(.*?)(\d*)$")


def edge_class(label: str) -> str:
    """The class of an edge label: everything before its numeric suffix."""
    return _CLASS_RE.match(label).group(1)


def _label_key(label: str) -> tuple[str, int]:
    m = _CLASS_RE.match(label)
    return m.group(1), int(m.group(2) or 0)


def _next_label(cls: str, used: set[str]) -> str:
    n = 1
    while f"{cls}{n}" in used:
        n += 1
    return f"{cls}{n}"


def _cyclic_equal(a: tuple, b: tuple) -> bool:
    if len(a) != len(b):
        return False
    for c in (b, tuple(reversed(b))):
        if any(c[i:] + c[:i] == a for i in range(len(c))):
            return True
    return False


# -- verifier (independent of the search path) ----------------------------


def verify_completion(spec: SearchSpec, candidate: Complex2D) -> bool:
    """True iff candidate extends the seed cell-for-cell and every vertex
    link is isomorphic to its prescribed target with the right weights."""
    if not validate(candidate):
        return False
    seed = spec.seed
    if set(candidate.vertices) != set(seed.vertices):
        return False
    edge_ends = {}
    for lab, p, q in candidate.edges:
        if lab in edge_ends:
            return False
        edge_ends[lab] = frozenset((candidate.vertices[p], candidate.vertices[q]))
    for lab, p, q in seed.edges:
        if edge_ends.get(lab) != frozenset((seed.vertices[p], seed.vertices[q])):
            return False
    cand_cells = {}
    for lab, cyc in candidate.cells:
        if lab in cand_cells:
            return False
        cand_cells[lab] = tuple(candidate.edges[e][0] for e in cyc)
    for lab, cyc in seed.cells:
        walk = tuple(seed.edges[e][0] for e in cyc)
        if lab not in cand_cells or not _cyclic_equal(walk, cand_cells[lab]):
            return False
    # inventory: unlisted classes are frozen at their seed count
    seed_counts: dict[str, int] = {}
    for lab, _, _ in seed.edges:
        cls = edge_class(lab)
        seed_counts[cls] = seed_counts.get(cls, 0) + 1
    counts: dict[str, int] = {}
    for lab, _, _ in candidate.edges:
        cls = edge_class(lab)
        counts[cls] = counts.get(cls, 0) + 1
    for cls, n in counts.items():
        if n > spec.inventory.get(cls, seed_counts.get(cls, 0)):
            return False
    for vlab in candidate.vertices:
        tname = spec.vertex_targets.get(vlab)
        if tname is None:
            return False
        g = link(candidate, vlab)
        tg = TARGETS[tname]
        if any(e.weight != tg.weight for e in g.edges):
            return False
        if tname == "GQ22":
            if is_generalized_quadrangle_incidence(g) is None:
                return False
        else:
            if not is_complete_bipartite(g, tg.degree):
                return False
    return True


# -- the completion search -------------------------------------------------


class _Search:
    """Mutable search state: a growing complex plus per-vertex links.

    Branching is by slot: a slot is an edge still short of its required
    triangle count, and one branch adds a full set of triangles closing it.
    Sets are enumerated as non-decreasing candidate-key sequences, new-edge
    candidates ordering before reused ones, which makes each completion
    reachable along exactly one path.
    """

    def __init__(self, spec: SearchSpec, stats: SearchStats):
        self.spec = spec
        self.stats = stats
        seed = spec.seed
        rep = validate(seed)
        if not rep:
            raise ValueError("seed does not validate: " + "; ".join(rep.failures))
        self.vlabels = seed.vertices
        self.n = len(self.vlabels)
        for lab in self.vlabels:
            if spec.vertex_targets.get(lab) not in TARGETS:
                raise ValueError(f"vertex {lab!r} lacks a known link target")
        self.targets = [TARGETS[spec.vertex_targets[lab]] for lab in self.vlabels]
        self.tname = [t.name for t in self.targets]

        self.edges: list[tuple[str, int, int]] = list(seed.edges)
        self.cells: list[tuple[str, tuple[int, ...]]] = [
            (lab, tuple(cyc)) for lab, cyc in seed.cells
        ]
        self.angles: list[tuple[int, int, Fraction]] = list(seed.angles)
        self.seed_ne = len(self.edges)
        self.seed_nc = len(self.cells)

        self.eclass = [edge_class(lab) for lab, _, _ in self.edges]
        self.used_elabels = {lab for lab, _, _ in self.edges}
        self.used_clabels = {lab for lab, _ in self.cells}
        self.cell_prefix = edge_class(self.cells[0][0]) if self.cells else "t"

        self.class_count: dict[str, int] = {}
        for cls in self.eclass:
            self.class_count[cls] = self.class_count.get(cls, 0) + 1
        self.cap = dict(self.class_count)
        self.cap.update(spec.inventory)
        for cls, n in self.class_count.items():
            if n > self.cap[cls]:
                raise ValueError(f"inventory for class {cls!r} is below the seed count")

        self.required: list[int] = []
        self.tri_count: list[int] = []
        self.nodes_at: list[list[int]] = [[] for _ in range(self.n)]
        self.arcs_at: list[set[frozenset[int]]] = [set() for _ in range(self.n)]
        self.epairs: dict[frozenset[int], list[int]] = {}
        # per (vertex, class): edge count and far-end target-name counts
        self.vclass: dict[tuple[int, str], int] = {}
        self.nclass = [0] * self.n
        self.fartype: dict[tuple[int, str, str], int] = {}
        self.memo: list[dict] = [dict() for _ in range(self.n)]
        self.emitted: list[Complex2D] = []
        self._stab: list | None = None
        self._deadline: float | None = None

        self._violation: tuple[str, str] | None = None
        for ei, (lab, p, q) in enumerate(self.edges):
            if p == q:
                self._violation = (self.vlabels[p], f"loop edge {lab!r}")
                return
            dp, dq = self.targets[p].degree, self.targets[q].degree
            if dp != dq:
                self._violation = (
                    self.vlabels[p],
                    f"edge {lab!r} joins targets needing {dp} and {dq} triangles",
                )
                return
            self.required.append(dp)
            self.tri_count.append(0)
            self._note_edge(ei, +1)
        for ci, (lab, cyc) in enumerate(self.cells):
            if len(cyc) != 3:
                raise ValueError(f"seed cell {lab!r} is not a triangle")
            walk = seed.cell_vertices(ci)
            for pos in range(3):
                arc = frozenset((cyc[pos - 1], cyc[pos]))
                if len(arc) != 2 or arc in self.arcs_at[walk[pos]]:
                    self._violation = (
                        self.vlabels[walk[pos]],
                        f"repeated corner in the link at cell {lab!r}",
                    )
                    return
                self.arcs_at[walk[pos]].add(arc)
            for e in cyc:
                self.tri_count[e] += 1
        for ei in range(len(self.edges)):
            if self.tri_count[ei] > self.required[ei]:
                lab, p, _ = self.edges[ei]
                self._violation = (
                    self.vlabels[p],
                    f"edge {lab!r} already exceeds its triangle quota",
                )
                return
        for v in range(self.n):
            if not self._embed_ok(v):
                self._violation = (
                    self.vlabels[v],
                    "seed link does not embed into its target",
                )
                return

    # -- bookkeeping -----------------------------------------------------

    def _note_edge(self, ei: int, sign: int) -> None:
        lab, p, q = self.edges[ei]
        cls = self.eclass[ei]
        pair = frozenset((p, q))
        if sign > 0:
            self.epairs.setdefault(pair, []).append(ei)
        else:
            self.epairs[pair].remove(ei)
        for a, b in ((p, q), (q, p)):
            if sign > 0:
                self.nodes_at[a].append(ei)
            else:
                self.nodes_at[a].remove(ei)
            cnt = self.vclass.get((a, cls), 0) + sign
            self.vclass[(a, cls)] = cnt
            if sign > 0 and cnt == 1:
                self.nclass[a] += 1
            elif sign < 0 and cnt == 0:
                self.nclass[a] -= 1
            key = (a, cls, self.tname[b])
            self.fartype[key] = self.fartype.get(key, 0) + sign

    def _new_edge_ok(self, p: int, r: int, cls: str) -> bool:
        if self.targets[p].degree != self.targets[r].degree:
            return False
        if self.class_count.get(cls, 0) >= self.cap.get(cls, 0):
            return False
        for a, b in ((p, r), (r, p)):
            if len(self.nodes_at[a]) >= self.targets[a].node_count:
                return False
            if self.vclass.get((a, cls), 0) > 0:
                if self.fartype.get((a, cls, self.tname[b]), 0) == 0:
                    return False
            elif self.nclass[a] >= 2:
                return False
        return True

    def _bare_blocked(self, r: int) -> bool:
        # bare vertices of the same target activate in seed order
        if self.nodes_at[r]:
            return False
        return any(
            not self.nodes_at[s] and self.tname[s] == self.tname[r]
            for s in range(r)
        )

    def _embed_ok(self, v: int) -> bool:
        ids = self.nodes_at[v]
        arcs = self.arcs_at[v]
        key = (
            tuple(sorted((ei, self.eclass[ei]) for ei in ids)),
            frozenset(arcs),
        )
        hit = self.memo[v].get(key)
        if hit is not None:
            return hit
        adj: dict[int, set[int]] = {i: set() for i in ids}
        for arc in arcs:
            i, j = tuple(arc)
            adj[i].add(j)
            adj[j].add(i)
        res = bool(_embed_into(self.targets[v], list(ids), adj))
        self.memo[v][key] = res
        return res

    def _certificate(self, v: int) -> dict[str, str]:
        ids = list(self.nodes_at[v])
        adj: dict[int, set[int]] = {i: set() for i in ids}
        for arc in self.arcs_at[v]:
            i, j = tuple(arc)
            adj[i].add(j)
            adj[j].add(i)
        m = _embed_into(self.targets[v], ids, adj, capture=True)
        assert m is not None, "emitted vertex link failed to certify"
        return {self.edges[i][0]: m[i] for i in ids}

    # -- candidate enumeration --------------------------------------------

    # A descriptor is (0, class) for a new edge or (1, edge index) for an
    # existing one; keys sort new-before-old so that a set member reusing
    # an edge created by an earlier member stays reachable.

    def _desc_key(self, desc: tuple) -> tuple:
        if desc[0] == 0:
            return (0, desc[1], 0)
        return (1,) + _label_key(self.edges[desc[1]][0])

    def _side_options(self, a: int, r: int, d: int) -> list[tuple]:
        out = []
        for cls in sorted(self.cap):
            if self._new_edge_ok(a, r, cls):
                out.append((0, cls))
        for ei in self.epairs.get(frozenset((a, r)), ()):
            if self.tri_count[ei] >= self.required[ei]:
                continue
            if frozenset((d, ei)) in self.arcs_at[a]:
                continue
            out.append((1, ei))
        return out

    def _candidates(self, d: int) -> list[tuple]:
        _, p, q = self.edges[d]
        out = []
        for r in range(self.n):
            if r in (p, q) or self._bare_blocked(r):
                continue
            if self.targets[r].degree != self.targets[p].degree:
                continue
            popts = self._side_options(p, r, d)
            if not popts:
                continue
            for prd in popts:
                for qrd in self._side_options(q, r, d):
                    if prd[0] == 1 and qrd[0] == 1:
                        if frozenset((prd[1], qrd[1])) in self.arcs_at[r]:
                            continue
                        if prd[1] == qrd[1]:
                            continue
                    if prd[0] == 0 and qrd[0] == 0:
                        need = 2 if prd[1] == qrd[1] else 1
                        if (
                            self.class_count.get(prd[1], 0) + need
                            > self.cap.get(prd[1], 0)
                        ):
                            continue
                        if len(self.nodes_at[r]) + 2 > self.targets[r].node_count:
                            continue
                    cand = (
                        (r, self._desc_key(prd), self._desc_key(qrd)),
                        r,
                        prd,
                        qrd,
                    )
                    out.append(cand)
        out.sort(key=lambda c: c[0])
        return out

    # -- mutation ---------------------------------------------------------

    def _make_edge(self, a: int, b: int, cls: str, label: str | None = None) -> int:
        lab = label or _next_label(cls, self.used_elabels)
        ei = len(self.edges)
        self.edges.append((lab, a, b))
        self.eclass.append(cls)
        self.used_elabels.add(lab)
        self.class_count[cls] = self.class_count.get(cls, 0) + 1
        self.required.append(self.targets[a].degree)
        self.tri_count.append(0)
        self._note_edge(ei, +1)
        return ei

    def _drop_edge(self) -> None:
        ei = len(self.edges) - 1
        self._note_edge(ei, -1)
        lab = self.edges[ei][0]
        cls = self.eclass[ei]
        self.class_count[cls] -= 1
        self.used_elabels.discard(lab)
        self.edges.pop()
        self.eclass.pop()
        self.required.pop()
        self.tri_count.pop()

    def _resolve(self, a: int, r: int, desc: tuple, made: list[int]) -> int:
        if desc[0] == 1:
            return desc[1]
        ei = self._make_edge(a, r, desc[1])
        made.append(ei)
        return ei

    def _add_cell(self, d: int, pr: int, qr: int, label: str | None = None):
        _, p, q = self.edges[d]
        r = next(iter({*self.edges[pr][1:]} - {p}))
        clab = label or _next_label(self.cell_prefix, self.used_clabels)
        ci = len(self.cells)
        self.cells.append((clab, (d, qr, pr)))
        self.used_clabels.add(clab)
        wt = [self.targets[p].weight, self.targets[q].weight, self.targets[r].weight]
        self.angles.extend(((ci, 0, wt[0]), (ci, 1, wt[1]), (ci, 2, wt[2])))
        for e in (d, pr, qr):
            self.tri_count[e] += 1
        self.arcs_at[p].add(frozenset((d, pr)))
        self.arcs_at[q].add(frozenset((d, qr)))
        self.arcs_at[r].add(frozenset((pr, qr)))
        return p, q, r

    def _drop_cell(self) -> None:
        ci = len(self.cells) - 1
        clab, (d, qr, pr) = self.cells.pop()
        self.used_clabels.discard(clab)
        del self.angles[-3:]
        for e in (d, pr, qr):
            self.tri_count[e] -= 1
        _, p, q = self.edges[d]
        r = next(iter({*self.edges[pr][1:]} - {p}))
        self.arcs_at[p].discard(frozenset((d, pr)))
        self.arcs_at[q].discard(frozenset((d, qr)))
        self.arcs_at[r].discard(frozenset((pr, qr)))

    def _apply(self, d: int, cand: tuple) -> tuple:
        _, r, prd, qrd = cand
        _, p, q = self.edges[d]
        made: list[int] = []
        pr = self._resolve(p, r, prd, made)
        qr = self._resolve(q, r, qrd, made)
        self._add_cell(d, pr, qr)
        return len(made)

    def _undo(self, nmade: int) -> None:
        self._drop_cell()
        for _ in range(nmade):
            self._drop_edge()

    # -- the DFS -----------------------------------------------------------

    def _tick(self) -> None:
        self.stats.nodes += 1
        b = self.spec.budget
        if b.nodes is not None and self.stats.nodes > b.nodes:
            raise SearchBudgetExceeded(self.stats)
        if b.seconds is not None and self.stats.nodes % 128 == 0:
            if time.monotonic() > self._deadline:
                raise SearchBudgetExceeded(self.stats)

    def _pick_slot(self) -> tuple[int, int, int] | None:
        best = None
        for d in range(len(self.edges)):
            need = self.required[d] - self.tri_count[d]
            if need <= 0:
                continue
            cnt = len(self._candidates(d))
            if cnt <= 1:
                return d, need, cnt
            if best is None or (cnt, need, d) < best:
                best = (cnt, need, d)
        if best is None:
            return None
        return best[2], best[1], best[0]

    def _expand(self, d: int, k: int, min_key: tuple) -> Iterator[Completion]:
        if k == 0:
            yield from self._dfs()
            return
        for cand in self._candidates(d):
            if cand[0] < min_key:
                continue
            nmade = self._apply(d, cand)
            self._tick()
            _, r, _, _ = cand
            _, p, q = self.edges[d]
            if self._embed_ok(p) and self._embed_ok(q) and self._embed_ok(r):
                yield from self._expand(d, k - 1, cand[0])
            else:
                self.stats.prunes += 1
            self._undo(nmade)

    def _dfs(self) -> Iterator[Completion]:
        depth = len(self.cells) - self.seed_nc
        if depth > self.stats.max_depth:
            self.stats.max_depth = depth
        slot = self._pick_slot()
        if slot is None:
            short = [
                v
                for v in range(self.n)
                if len(self.nodes_at[v]) < self.targets[v].node_count
            ]
            if not short:
                comp = self._emit()
                if comp is not None:
                    yield comp
                return
            yield from self._grow_edge(short[0])
            return
        d, need, cnt = slot
        if cnt == 0:
            self.stats.prunes += 1
            return
        yield from self._expand(d, need, ())

    def _grow_edge(self, v: int) -> Iterator[Completion]:
        # no open slot, but v still needs edges: branch on its next edge
        for r in range(self.n):
            if r == v or self._bare_blocked(r):
                continue
            for cls in sorted(self.cap):
                if not self._new_edge_ok(v, r, cls):
                    continue
                self._make_edge(v, r, cls)
                self._tick()
                yield from self._dfs()
                self._drop_edge()

    # -- emission and symmetry ---------------------------------------------

    def _emit(self) -> Completion | None:
        comp = Complex2D(
            self.vlabels,
            tuple(self.edges),
            tuple((lab, tuple(cyc)) for lab, cyc in self.cells),
            tuple(self.angles),
        )
        assert validate(comp).ok, "search produced an invalid complex"
        assert verify_completion(self.spec, comp), "search produced a non-completion"
        if self.spec.symmetry_breaking:
            for prior in self.emitted:
                if self._equivalent(prior, comp):
                    self.stats.symmetry_skips += 1
                    return None
            self.emitted.append(comp)
        cert = {
            self.vlabels[v]: self._certificate(v) for v in range(self.n)
        }
        self.stats.emitted += 1
        return Completion(comp, cert)

    def _stabilizer(self) -> list:
        if self._stab is None:
            self._stab = []
            tg = self.spec.vertex_targets
            seed = self.spec.seed
            for m in isomorphisms(seed, seed):
                if any(
                    tg[seed.vertices[a]] != tg[seed.vertices[b]]
                    for a, b in m.vertex_map.items()
                ):
                    continue
                cls_map: dict[str, str] = {}
                ok = True
                for a, b in m.edge_map.items():
                    ca = edge_class(seed.edges[a][0])
                    cb = edge_class(seed.edges[b][0])
                    if cls_map.setdefault(ca, cb) != cb:
                        ok = False
                        break
                if ok:
                    self._stab.append((m.vertex_map, m.edge_map, cls_map))
        return self._stab

    def _equivalent(self, c1: Complex2D, c2: Complex2D) -> bool:
        """True iff some seed symmetry carries completion c1 onto c2."""
        for vm, em, cls_map in self._stabilizer():
            if self._extends(vm, em, cls_map, c1, c2):
                return True
        return False

    def _extends(self, vm, em, cls_map, c1: Complex2D, c2: Complex2D) -> bool:
        if len(c1.edges) != len(c2.edges) or len(c1.cells) != len(c2.cells):
            return False
        ne = self.seed_ne
        # group the new edges of both sides into orbit families
        fam1: dict[tuple, list[int]] = {}
        for ei in range(ne, len(c1.edges)):
            lab, p, q = c1.edges[ei]
            cls = edge_class(lab)
            key = (frozenset((vm[p], vm[q])), cls_map.get(cls, cls))
            fam1.setdefault(key, []).append(ei)
        fam2: dict[tuple, list[int]] = {}
        for ei in range(ne, len(c2.edges)):
            lab, p, q = c2.edges[ei]
            key = (frozenset((p, q)), edge_class(lab))
            fam2.setdefault(key, []).append(ei)
        if set(fam1) != set(fam2):
            return False
        if any(len(fam1[k]) != len(fam2[k]) for k in fam1):
            return False
        cells2 = {frozenset(cyc) for _, cyc in c2.cells}

        keys = sorted(fam1, key=repr)
        ebij = dict(em)

        def place(i: int) -> bool:
            if i == len(keys):
                cells1 = {
                    frozenset(ebij[e] for e in cyc) for _, cyc in c1.cells
                }
                return cells1 == cells2
            k = keys[i]
            a, b = fam1[k], fam2[k]

            def assign(j: int, used: set[int]) -> bool:
                if j == len(a):
                    return place(i + 1)
                for t in b:
                    if t in used:
                        continue
                    ebij[a[j]] = t
                    if assign(j + 1, used | {t}):
                        return True
                    del ebij[a[j]]
                return False

            return assign(0, set())

        return place(0)

    # -- driver -------------------------------------------------------------

    def run(self) -> Iterator[Completion]:
        t0 = time.monotonic()
        if self.spec.budget.seconds is not None:
            self._deadline = t0 + self.spec.budget.seconds
        try:
            if self._violation is not None:
                self.stats.witness, self.stats.detail = self._violation
                return
            yield from self._dfs()
        finally:
            self.stats.elapsed += time.monotonic() - t0


def complete(spec: SearchSpec, stats: SearchStats | None = None) -> Iterator[Completion]:
    """Stream all completions of the spec, depth-first and deterministic.

    Every emitted Completion passes verify_completion.  With
    symmetry_breaking on, completions equivalent under a seed symmetry are
    emitted once.  Raises SearchBudgetExceeded when the node or time budget
    runs out; completions yielded before that point are unaffected.
    """
    return _Search(spec, stats if stats is not None else SearchStats()).run()


def replay_completion(
    spec: SearchSpec, reference: Complex2D
) -> tuple[Completion | None, list[str]]:
    """Push the reference's extra cells through the search's legality checks.

    Cells of the reference missing from the seed are applied in reference
    order, creating missing edges with the reference's own labels.  Returns
    (completion, conflicts); the completion is None unless every step was
    conflict-free and the result verifies.
    """
    s = _Search(spec, SearchStats())
    conflicts: list[str] = []
    if s._violation is not None:
        return None, [f"{s._violation[0]}: {s._violation[1]}"]
    if set(reference.vertices) != set(s.vlabels):
        return None, ["reference and seed vertex sets differ"]
    seed_cells = {lab for lab, _ in spec.seed.cells}
    eidx = {s.edges[i][0]: i for i in range(len(s.edges))}
    ref_v = {lab: i for i, lab in enumerate(reference.vertices)}
    inv_v = {ref_v[lab]: i for i, lab in enumerate(s.vlabels)}
    for clab, cyc in reference.cells:
        if clab in seed_cells:
            continue
        eis = []
        for e in cyc:
            lab, p, q = reference.edges[e]
            if lab not in eidx:
                a, b = inv_v[p], inv_v[q]
                cls = edge_class(lab)
                if not s._new_edge_ok(a, b, cls):
                    conflicts.append(f"cell {clab!r}: edge {lab!r} is not creatable")
                    break
                eidx[lab] = s._make_edge(a, b, cls, label=lab)
            eis.append(eidx[lab])
        if len(eis) != 3:
            break
        # orient: take the first cycle edge as the base and recover the
        # other two by shared endpoints
        d = eis[0]
        _, p, q = s.edges[d]
        rest = [e for e in eis[1:]]
        pr = next((e for e in rest if p in s.edges[e][1:]), None)
        qr = next((e for e in rest if e != pr and q in s.edges[e][1:]), None)
        if pr is None or qr is None:
            conflicts.append(f"cell {clab!r} is not a triangle over its edges")
            break
        for e in eis:
            if s.tri_count[e] >= s.required[e]:
                conflicts.append(f"cell {clab!r}: edge {s.edges[e][0]!r} is full")
        arcs = (
            (p, frozenset((d, pr))),
            (q, frozenset((d, qr))),
        )
        r = next(iter({*s.edges[pr][1:]} - {p}))
        arcs += ((r, frozenset((pr, qr))),)
        for v, arc in arcs:
            if arc in s.arcs_at[v]:
                conflicts.append(f"cell {clab!r}: repeated corner at {s.vlabels[v]!r}")
        if conflicts:
            break
        s._add_cell(d, pr, qr, label=clab)
        for v in (p, q, r):
            if not s._embed_ok(v):
                conflicts.append(
                    f"cell {clab!r}: link at {s.vlabels[v]!r} stops embedding"
                )
                break
        if conflicts:
            break
    if conflicts:
        return None, conflicts
    comp = Complex2D(
        s.vlabels,
        tuple(s.edges),
        tuple((lab, tuple(cyc)) for lab, cyc in s.cells),
        tuple(s.angles),
    )
    if not verify_completion(spec, comp):
        return None, ["replayed complex does not verify against the spec"]
    cert = {s.vlabels[v]: s._certificate(v) for v in range(s.n)}
    return Completion(comp, cert), []


# -- the built-in rediscovery problem ---------------------------------------


def seed_t0_in_t() -> Complex2D:
    """The squares-complex image inside T: 7 vertices, 21 edges, 18 cells."""
    t = builtin("T")
    m = embedding_t0_to_t()
    eidx = sorted(m.edge_map.values())
    cidx = sorted(m.cell_map.values())
    epos = {e: i for i, e in enumerate(eidx)}
    cells = [
        (t.cells[c][0], tuple(epos[e] for e in t.cells[c][1])) for c in cidx
    ]
    angles = [
        (cidx.index(ci), pos, a) for ci, pos, a in t.angles if ci in set(cidx)
    ]
    return Complex2D(
        t.vertices,
        tuple(t.edges[e] for e in eidx),
        tuple(cells),
        tuple(angles),
    )


def t_rediscovery_spec(
    budget: Budget | None = None, symmetry_breaking: bool = True
) -> SearchSpec:
    """The search problem whose completions rebuild T from its squares part."""
    targets = {f"u{i}": "K33" for i in range(1, 6)}
    targets.update({"v": "GQ22", "w": "GQ22"})
    return SearchSpec(
        seed=seed_t0_in_t(),
        vertex_targets=targets,
        inventory={"e": 15, "f": 15, "g": 15},
        budget=budget if budget is not None else Budget(),
        symmetry_breaking=symmetry_breaking,
    )


# -- spec files --------------------------------------------------------------


def read_search_spec(text: str, base_dir: str = ".") -> SearchSpec:
    """Parse a search spec file.

    Lines: `seed <path>|builtin:T0-in-T|builtin:<name>`, one
    `target <vertex> <K22|K33|GQ22>` per vertex, optional
    `inventory <class> <count> ...`, optional `budget nodes=N seconds=S`,
    optional `symmetry on|off`.  Blank lines and `#` comments are ignored.
    """
    import os

    seed: Complex2D | None = None
    targets: dict[str, str] = {}
    inventory: dict[str, int] = {}
    budget = Budget()
    symmetry = True
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        word, *rest = line.split()
        if word == "seed":
            (token,) = rest
            if token == "builtin:T0-in-T":
                seed = seed_t0_in_t()
            elif token.startswith("builtin:"):
                seed = builtin(token.split(":", 1)[1])
            else:
                path = os.path.join(base_dir, token)
                with open(path, encoding="utf-8") as fh:
                    seed = read_complex(fh.read())
        elif word == "target":
            vertex, tname = rest
            if tname not in TARGETS:
                raise ValueError(f"unknown link target {tname!r}")
            targets[vertex] = tname
        elif word == "inventory":
            if len(rest) % 2:
                raise ValueError("inventory wants class/count pairs")
            for cls, cnt in zip(rest[::2], rest[1::2]):
                inventory[cls] = int(cnt)
        elif word == "budget":
            kw = dict(item.split("=", 1) for item in rest)
            budget = Budget(
                nodes=int(float(kw["nodes"])) if "nodes" in kw else None,
                seconds=float(kw["seconds"]) if "seconds" in kw else None,
            )
        elif word == "symmetry":
            (flag,) = rest
            symmetry = flag == "on"
        else:
            raise ValueError(f"unknown spec line {raw!r}")
    if seed is None:
        raise ValueError("spec file names no seed")
    return SearchSpec(seed, targets, inventory, budget, symmetry)


# -- datum enumeration --------------------------------------------------------


def _involutions(n: int, trivial_only: bool) -> list[tuple[int, ...]]:
    if trivial_only:
        return [tuple(range(n))]
    out: list[tuple[int, ...]] = []

    def rec(perm: dict[int, int]) -> None:
        free = [i for i in range(n) if i not in perm]
        if not free:
            out.append(tuple(perm[i] for i in range(n)))
            return
        i = free[0]
        perm[i] = i
        rec(perm)
        del perm[i]
        for j in free[1:]:
            perm[i], perm[j] = j, i
            rec(perm)
            del perm[i], perm[j]

    rec({})
    return out


def _permutations(n: int) -> list[tuple[int, ...]]:
    from itertools import permutations

    return list(permutations(range(n)))


def canonical_datum_key(d: Datum) -> tuple:
    """Relabeling-invariant key: the least (R, phi_A, phi_X) over both
    symmetric groups, with R compared first."""
    best = None
    for sa in _permutations(d.d1):
        pa = tuple(sa[d.phi_a[_inv(sa, i)]] for i in range(d.d1))
        for sx in _permutations(d.d2):
            px = tuple(sx[d.phi_x[_inv(sx, i)]] for i in range(d.d2))
            quads = tuple(
                sorted((sa[a1], sx[x1], sa[a2], sx[x2]) for a1, x1, a2, x2 in d.quads)
            )
            key = (quads, pa, px)
            if best is None or key < best:
                best = key
    return best


def _inv(perm: tuple[int, ...], i: int) -> int:
    return perm.index(i)


_A_NAMES = ("a", "b", "c", "d", "e")
_X_NAMES = ("x", "y", "z", "s", "t")


def enumerate_data(
    d1: int, d2: int, require_trivial_involutions: bool
) -> Iterator[Datum]:
    """Stream all valid (d1, d2)-data up to relabeling of both label sets.

    Each datum is emitted in canonical form (least R over the relabeling
    group).  Guarded to d1, d2 <= 5.
    """
    if not (1 <= d1 <= 5 and 1 <= d2 <= 5):
        raise ValueError("d1 and d2 must be between 1 and 5")
    a_labels = _A_NAMES[:d1]
    x_labels = _X_NAMES[:d2]
    seen: set[tuple] = set()
    for phi_a in _involutions(d1, require_trivial_involutions):
        for phi_x in _involutions(d2, require_trivial_involutions):
            for quads in _complete_quads(d1, d2, phi_a, phi_x):
                d = Datum(a_labels, x_labels, phi_a, phi_x, quads)
                key = canonical_datum_key(d)
                if key in seen:
                    continue
                seen.add(key)
                canon = Datum(a_labels, x_labels, key[1], key[2], key[0])
                assert validate_datum(canon).ok
                yield canon


def _complete_quads(
    d1: int, d2: int, phi_a: tuple[int, ...], phi_x: tuple[int, ...]
) -> Iterator[tuple[Quad, ...]]:
    """All R making (phi_a, phi_x, R) a valid datum, by constraint DFS.

    R is the graph of a bijection F on A x X whose rows and columns are
    bijective; quads are placed orbit-by-orbit under the two symmetries.
    """
    fun: dict[tuple[int, int], tuple[int, int]] = {}
    used: set[tuple[int, int]] = set()
    col: dict[tuple[int, int], int] = {}  # (x1, a2) used per column
    row: dict[tuple[int, int], int] = {}  # (a1, x2) used per row
    d = Datum(_A_NAMES[:d1], _X_NAMES[:d2], phi_a, phi_x, ())

    def place(q: Quad) -> list[Quad] | None:
        placed: list[Quad] = []
        stack = [q]
        while stack:
            a1, x1, a2, x2 = cur = stack.pop()
            have = fun.get((a1, x1))
            if have is not None:
                if have != (a2, x2):
                    _unplace(placed)
                    return None
                continue
            if (
                (a2, x2) in used
                or (x1, a2) in col
                or (a1, x2) in row
            ):
                _unplace(placed)
                return None
            fun[(a1, x1)] = (a2, x2)
            used.add((a2, x2))
            col[(x1, a2)] = a1
            row[(a1, x2)] = x1
            placed.append(cur)
            stack.append(sigma_hat(d, cur))
            stack.append(rho_hat(cur))
        return placed

    def _unplace(placed: list[Quad]) -> None:
        for a1, x1, a2, x2 in reversed(placed):
            del fun[(a1, x1)]
            used.discard((a2, x2))
            del col[(x1, a2)]
            del row[(a1, x2)]

    domain = [(a, x) for a in range(d1) for x in range(d2)]

    def rec(i: int) -> Iterator[tuple[Quad, ...]]:
        while i < len(domain) and domain[i] in fun:
            i += 1
        if i == len(domain):
            yield tuple(
                sorted((a1, x1, a2, x2) for (a1, x1), (a2, x2) in fun.items())
            )
            return
        a1, x1 = domain[i]
        for a2 in range(d1):
            for x2 in range(d2):
                placed = place((a1, x1, a2, x2))
                if placed is None:
                    continue
                yield from rec(i + 1)
                _unplace(placed)

    yield from rec(0)
