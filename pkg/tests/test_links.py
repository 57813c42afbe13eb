import math
from fractions import Fraction

import pytest

from latticeforge.builtins import builtin, embedding_t0_to_t
from latticeforge.complexes import make_complex
from latticeforge.links import (
    certify_building_links,
    classify_link,
    is_complete_bipartite,
    is_generalized_quadrangle_incidence,
    link,
    local_isometry_check,
    metric_girth,
    reference_quadrangle,
)

F = Fraction

# e/f edge-ends meeting each u-vertex, straight from the triangle table
U_BIPARTITIONS = {
    "u1": ({"e1", "e2", "e3"}, {"f1", "f2", "f3"}),
    "u2": ({"e4", "e5", "e6"}, {"f4", "f5", "f6"}),
    "u3": ({"e7", "e8", "e9"}, {"f9", "f10", "f12"}),
    "u4": ({"e10", "e11", "e12"}, {"f8", "f13", "f15"}),
    "u5": ({"e13", "e14", "e15"}, {"f7", "f11", "f14"}),
}


def edge_label(c, lv):
    return c.edges[lv[0]][0]


def test_u_links_are_k33_with_right_angles():
    T = builtin("T")
    for u, (eside, fside) in U_BIPARTITIONS.items():
        g = link(T, u)
        assert is_complete_bipartite(g, 3)
        assert len(g.vertices) == 6
        assert len(g.edges) == 9
        assert all(e.weight == F(1, 2) for e in g.edges)
        labels = {edge_label(T, lv) for lv in g.vertices}
        assert labels == eside | fside
        # every corner joins one e-edge to one f-edge
        for e in g.edges:
            pair = {edge_label(T, e.ends[0]), edge_label(T, e.ends[1])}
            assert len(pair & eside) == 1 and len(pair & fside) == 1


def _graph_stats(adj):
    """(regular degree, girth, diameter) by BFS; tiny graphs only."""
    import collections

    nodes = sorted(adj)
    degs = {len(adj[n]) for n in nodes}
    assert len(degs) == 1
    ecc = {}
    girth = math.inf
    for s in nodes:
        dist = {s: 0}
        parent = {s: None}
        q = collections.deque([s])
        while q:
            x = q.popleft()
            for y in adj[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    parent[y] = x
                    q.append(y)
                elif parent[x] != y:
                    girth = min(girth, dist[x] + dist[y] + 1)
        ecc[s] = max(dist.values())
        assert len(dist) == len(nodes)  # connected
    return degs.pop(), girth, max(ecc.values())


def test_reference_quadrangle_parameters():
    names, edges = reference_quadrangle()
    assert len(names) == 30
    assert len(edges) == 45
    adj = {n: set() for n in names}
    for p, l in edges:
        adj[p].add(l)
        adj[l].add(p)
    deg, girth, diam = _graph_stats(adj)
    assert (deg, girth, diam) == (3, 8, 4)


def test_v_and_w_links_are_the_quadrangle():
    T = builtin("T")
    for label in ("v", "w"):
        g = link(T, label)
        assert len(g.vertices) == 30
        assert len(g.edges) == 45
        assert all(e.weight == F(1, 4) for e in g.edges)
        cert = is_generalized_quadrangle_incidence(g)
        assert cert is not None
        # certificate is a genuine graph isomorphism onto the reference
        names, edges = reference_quadrangle()
        ref = {frozenset(e) for e in edges}
        for e in g.edges:
            assert frozenset((cert[e.ends[0]], cert[e.ends[1]])) in ref


def test_metric_girth_is_two_pi_everywhere():
    T = builtin("T")
    for vlabel in T.vertices:
        assert metric_girth(link(T, vlabel)) == 2


def test_metric_girth_of_forest_is_infinite():
    c = make_complex(["p", "q", "r"], [("a", "p", "q"), ("b", "q", "r")])
    assert metric_girth(link(c, "q")) == math.inf


def test_classify_link():
    T = builtin("T")
    assert classify_link(link(T, "u1")) == "A1xA1"
    assert classify_link(link(T, "v")) == "C2"


def test_certify_building_links_on_t():
    cert = certify_building_links(builtin("T"))
    assert cert.ok
    assert sorted(cert.vertex_types.values()).count("A1xA1") == 5
    assert sorted(cert.vertex_types.values()).count("C2") == 2


def test_certify_rejects_t0():
    # T0's v10/v01 links are non-thick, so certification must fail
    cert = certify_building_links(builtin("T0"))
    assert not cert.ok
    assert cert.failures


def test_certify_rejects_t_minus_one_triangle():
    T = builtin("T")
    cut = make_complex(
        list(T.vertices),
        [(lab, T.vertices[p], T.vertices[q]) for lab, p, q in T.edges],
        [
            (lab, [T.edges[e][0] for e in cyc])
            for lab, cyc in T.cells
            if lab != "t45"
        ],
        [
            (T.cells[ci][0], pos, a)
            for (ci, pos), a in T.angle_map().items()
            if T.cells[ci][0] != "t45"
        ],
    )
    cert = certify_building_links(cut)
    assert not cert.ok
    # all three corners of t45 leave a hole
    assert len([t for t in cert.vertex_types.values() if t.startswith("FAIL")]) == 3


def test_local_isometry_of_the_embedding():
    assert local_isometry_check(embedding_t0_to_t())


def test_local_isometry_check_needs_injectivity():
    m = embedding_t0_to_t()
    from latticeforge.complexes import CellMap

    folded = dict(m.edge_map)
    folded[0] = folded[1]
    with pytest.raises(ValueError):
        local_isometry_check(CellMap(m.source, m.target, m.vertex_map, folded, m.cell_map))
