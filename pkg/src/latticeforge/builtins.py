"""Built-in reference complexes and their companion data.

Three complexes are provided by name:

* ``S``  — the square complex: 4 vertices, 12 edges, 9 squares.
* ``T0`` — its diagonal subdivision: 4 vertices, 21 edges, 18 triangles.
* ``T``  — the large triangle complex: 7 vertices, 45 edges, 45 triangles,
  with K33 links at the five u-vertices and generalized-quadrangle links
  at v and w.

Alongside the complexes: the gluing datum behind S, the cellular embedding
T0 -> T, the order-2 automorphism of T, and a two-generator presentation of
the fundamental group of T.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .complexes import CellMap, Complex2D, make_complex, subdivide_squares, validate
from .datum import Datum
from .presentations import Presentation, parse_word

RIGHT = Fraction(1, 2)
HALF_RIGHT = Fraction(1, 4)

# squares of S as (A-edge, X-edge, A-edge, X-edge); the second pair is
# attached along the primed copies
_S_SQUARES = (
    ("a", "x", "a", "x"),
    ("a", "y", "a", "y"),
    ("a", "z", "b", "z"),
    ("b", "x", "b", "x"),
    ("b", "y", "c", "y"),
    ("b", "z", "a", "z"),
    ("c", "x", "c", "z"),
    ("c", "y", "b", "y"),
    ("c", "z", "c", "x"),
)

# triangles of T as 1-based (e, f, g) index triples; the shared u-vertex is
# implied by the e-index (three e- and three f-edges per u)
_T_TRIANGLES = (
    (1, 1, 1), (4, 4, 1), (2, 1, 2), (4, 5, 2), (3, 1, 3), (5, 6, 3),
    (1, 2, 4), (5, 4, 4), (2, 2, 5), (6, 5, 5), (3, 2, 6), (4, 6, 6),
    (3, 3, 7), (6, 4, 7), (2, 3, 8), (5, 5, 8), (1, 3, 9), (6, 6, 9),
    (7, 9, 15), (7, 10, 13), (7, 12, 6),
    (8, 9, 13), (8, 10, 4), (8, 12, 12),
    (9, 9, 3), (9, 10, 14), (9, 12, 11),
    (10, 8, 14), (10, 13, 15), (10, 15, 9),
    (11, 8, 12), (11, 13, 7), (11, 15, 10),
    (12, 8, 2), (12, 13, 12), (12, 15, 14),
    (13, 7, 10), (13, 11, 15), (13, 14, 8),
    (14, 7, 11), (14, 11, 5), (14, 14, 13),
    (15, 7, 1), (15, 11, 10), (15, 14, 11),
)

_E_HOME = {i: (i - 1) // 3 + 1 for i in range(1, 16)}
_F_HOME = {
    1: 1, 2: 1, 3: 1,
    4: 2, 5: 2, 6: 2,
    9: 3, 10: 3, 12: 3,
    8: 4, 13: 4, 15: 4,
    7: 5, 11: 5, 14: 5,
}


def example_datum() -> Datum:
    """The 3x3 datum whose square complex is builtin S."""
    labels = ("a", "b", "c")
    xs = ("x", "y", "z")
    quads = tuple(
        (labels.index(a1), xs.index(x1), labels.index(a2), xs.index(x2))
        for a1, x1, a2, x2 in _S_SQUARES
    )
    return Datum(labels, xs, (0, 1, 2), (0, 1, 2), quads)


def _build_s() -> Complex2D:
    vertices = ["v00", "v10", "v11", "v01"]
    edges = (
        [(lab, "v00", "v10") for lab in ("a", "b", "c")]
        + [(lab, "v10", "v11") for lab in ("x", "y", "z")]
        + [(lab + "'", "v11", "v01") for lab in ("a", "b", "c")]
        + [(lab + "'", "v01", "v00") for lab in ("x", "y", "z")]
    )
    cells = []
    angles = []
    for k, (a1, x1, a2, x2) in enumerate(_S_SQUARES):
        lab = f"s{k + 1}"
        cells.append((lab, (a1, x1, a2 + "'", x2 + "'")))
        angles.extend((lab, pos, RIGHT) for pos in range(4))
    return make_complex(vertices, edges, cells, angles)


def _build_t() -> Complex2D:
    vertices = ["u1", "u2", "u3", "u4", "u5", "v", "w"]
    edges = (
        [(f"e{i}", f"u{_E_HOME[i]}", "w") for i in range(1, 16)]
        + [(f"f{i}", f"u{_F_HOME[i]}", "v") for i in range(1, 16)]
        + [(f"g{i}", "v", "w") for i in range(1, 16)]
    )
    cells = []
    angles = []
    for k, (e, f, g) in enumerate(_T_TRIANGLES):
        if _E_HOME[e] != _F_HOME[f]:
            raise AssertionError(f"triangle {k + 1} joins mismatched u-vertices")
        lab = f"t{k + 1}"
        cells.append((lab, (f"e{e}", f"f{f}", f"g{g}")))
        # boundary walk runs (w, u, v), so the right angle sits at corner 1
        angles.extend(((lab, 0, HALF_RIGHT), (lab, 1, RIGHT), (lab, 2, HALF_RIGHT)))
    return make_complex(vertices, edges, cells, angles)


@lru_cache(maxsize=None)
def builtin(name: str) -> Complex2D:
    """Return a built-in complex by name: 'S', 'T0', or 'T'."""
    if name == "S":
        c = _build_s()
    elif name == "T0":
        c, _ = subdivide_squares(builtin("S"))
    elif name == "T":
        c = _build_t()
    else:
        raise KeyError(f"unknown builtin {name!r} (expected S, T0, or T)")
    rep = validate(c)
    if not rep:
        raise AssertionError(f"builtin {name} invalid: " + "; ".join(rep.failures))
    return c


def embedding_t0_to_t() -> CellMap:
    """The cellular embedding of T0 into T (t_i -> t_i, s_i -> g_i)."""
    t0, t = builtin("T0"), builtin("T")
    vmap = {"v00": "u1", "v10": "v", "v11": "u2", "v01": "w"}
    emap = {
        "a": "f1", "b": "f2", "c": "f3",
        "x": "f4", "y": "f5", "z": "f6",
        "a'": "e4", "b'": "e5", "c'": "e6",
        "x'": "e1", "y'": "e2", "z'": "e3",
    }
    emap.update({f"s{i}": f"g{i}" for i in range(1, 10)})
    return CellMap(
        source=t0,
        target=t,
        vertex_map={t0.vertex_index(k): t.vertex_index(v) for k, v in vmap.items()},
        edge_map={t0.edge_index(k): t.edge_index(v) for k, v in emap.items()},
        cell_map={i: t.cell_index(t0.cells[i][0]) for i in range(len(t0.cells))},
    )


_SWAP_EDGE_PAIRS = (
    ("e1", "f4"), ("e2", "f5"), ("e3", "f6"),
    ("e4", "f1"), ("e5", "f2"), ("e6", "f3"),
    ("e7", "f9"), ("e8", "f10"), ("e9", "f12"),
    ("e10", "f13"), ("e11", "f15"), ("e12", "f8"),
    ("e13", "f11"), ("e14", "f14"), ("e15", "f7"),
    ("g3", "g6"), ("g5", "g8"), ("g7", "g9"), ("g12", "g14"),
)


def swap_automorphism() -> CellMap:
    """The unique nontrivial automorphism of T, as a self-map."""
    t = builtin("T")
    vmap = {"u1": "u2", "u2": "u1", "v": "w", "w": "v"}
    emap: dict[str, str] = {}
    for p, q in _SWAP_EDGE_PAIRS:
        emap[p] = q
        emap[q] = p
    edge_idx = {}
    for lab, p, q in t.edges:
        edge_idx[t.edge_index(lab)] = t.edge_index(emap.get(lab, lab))
    edge_sets = {frozenset(t.cells[ci][1]): ci for ci in range(len(t.cells))}
    cmap = {}
    for ci in range(len(t.cells)):
        image = frozenset(edge_idx[e] for e in t.cells[ci][1])
        cmap[ci] = edge_sets[image]
    return CellMap(
        source=t,
        target=t,
        vertex_map={
            t.vertex_index(k): t.vertex_index(vmap.get(k, k)) for k in t.vertices
        },
        edge_map=edge_idx,
        cell_map=cmap,
    )


# two-generator presentation of the fundamental group of T
_TWO_GEN_RELATORS = (
    "y x^3 y x^-1 y^-1 x y^2 (x^-1 y^-1)^2 x^-1 y x y^-1 x^-1 y",
    "x y^-1 x^-1 y^-1 x y x^-1 y^-1 (y^-1 x y^-1 x^-1)^2 y x y^-2 x^-1 y^-1",
    "x^-1 y^-1 x y x y^-1 x^-1 y^-1 x y x^-1 y^-1 (y^-1 x)^2 y^-1 x^-1 y x y^-1 x^-2",
    "y^-1 x y^-1 x^-1 y x y^-1 (y^-1 x^-1)^2 (y^-1 x^-1 y x)^2 y x^2 y x^-1 y^-1",
    "(y^-1 x^-1 y x)^2 y x^-2 y x y^-1 x^-1 y^2 x y^-1 x^-3 y^-1 x y^2 x",
    "y x y^2 x^-1 y^-2 x y^-1 x^-1 y x y^-2 x^-2 y^2 x y^-2 x^-1 y^-1 x y x^-1 y^-2 x",
    "x y^2 x^-1 y^-1 x y x^-1 y x^2 y x^-1 y^-1 x y^-1 x^-1 y x y^-1 x^-1 (x^-1 y^-1)^2 x y^-1 x^-1 y x",
    "(x y^2 x^-1 y^-1)^2 y^-1 x^3 y x^-1 y^-1 x y x^-1 y x^2 (x y x^-1 y^-2)^2 x",
)


def two_generator_presentation() -> Presentation:
    names = ("x", "y")
    return Presentation(2, tuple(parse_word(w, names) for w in _TWO_GEN_RELATORS))
