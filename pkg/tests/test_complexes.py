from fractions import Fraction

import pytest

from latticeforge.builtins import builtin, embedding_t0_to_t
from latticeforge.complexes import (
    ComplexFormatError,
    euler_characteristic,
    make_complex,
    read_complex,
    subdivide_squares,
    validate,
    validate_cell_map,
    write_complex,
)

F = Fraction


def triangle(angles=(F(1, 3), F(1, 3), F(1, 3))):
    return make_complex(
        ["p", "q", "r"],
        [("a", "p", "q"), ("b", "q", "r"), ("c", "r", "p")],
        [("t", ["a", "b", "c"])],
        [("t", i, a) for i, a in enumerate(angles)],
    )


def test_builtin_counts():
    for name, counts in (("S", (4, 12, 9)), ("T0", (4, 21, 18)), ("T", (7, 45, 45))):
        c = builtin(name)
        assert (len(c.vertices), len(c.edges), len(c.cells)) == counts


def test_validate_accepts_triangle():
    rep = validate(triangle())
    assert rep.ok
    assert rep.counts == (3, 3, 1)


def test_validate_rejects_duplicate_labels():
    c = make_complex(["p", "q"], [("a", "p", "q"), ("a", "q", "p")])
    rep = validate(c)
    assert not rep.ok
    assert any("duplicate edge labels" in f for f in rep.failures)


def test_validate_rejects_loop_edge():
    c = make_complex(["p"], [("a", "p", "p")])
    rep = validate(c)
    assert any("loop" in f for f in rep.failures)


def test_validate_rejects_open_boundary():
    # c runs p-q instead of r-p, so the walk cannot close
    c = make_complex(
        ["p", "q", "r"],
        [("a", "p", "q"), ("b", "q", "r"), ("c", "p", "q")],
        [("t", ["a", "b", "c"])],
    )
    rep = validate(c)
    assert any("does not close" in f for f in rep.failures)


def test_validate_rejects_bad_angle_sum():
    rep = validate(triangle((F(1, 2), F(1, 2), F(1, 2))))
    assert any("sum to" in f for f in rep.failures)


def test_validate_rejects_partial_angles():
    c = make_complex(
        ["p", "q", "r"],
        [("a", "p", "q"), ("b", "q", "r"), ("c", "r", "p")],
        [("t", ["a", "b", "c"])],
        [("t", 0, F(1, 2))],
    )
    rep = validate(c)
    assert any("partial angle" in f for f in rep.failures)


def test_cell_vertices_walk():
    c = triangle()
    # corner i sits between edges i-1 and i of the cycle (a,b,c):
    # corner 0 = a∩c = p, corner 1 = a∩b = q, corner 2 = b∩c = r
    assert [c.vertices[v] for v in c.cell_vertices(0)] == ["p", "q", "r"]


def test_euler_characteristics():
    assert euler_characteristic(triangle()) == 1  # a disk
    assert euler_characteristic(builtin("S")) == 4 - 12 + 9
    assert euler_characteristic(builtin("T")) == 7 - 45 + 45


def test_write_read_round_trip():
    for name in ("S", "T0", "T"):
        c = builtin(name)
        c2 = read_complex(write_complex(c))
        assert c2.vertices == c.vertices
        assert c2.edges == c.edges
        assert c2.cells == c.cells
        assert sorted(c2.angles) == sorted(c.angles)


def test_read_complex_rejects_garbage():
    with pytest.raises(ComplexFormatError):
        read_complex("vertex p\nfrobnicate q\n")
    with pytest.raises(ComplexFormatError):
        read_complex("edge a p q\n")  # endpoints never declared


def test_subdivide_squares_counts():
    sub, inclusion = subdivide_squares(builtin("S"))
    # 9 squares split along a diagonal: +9 edges, 9 -> 18 cells, no new vertices
    assert (len(sub.vertices), len(sub.edges), len(sub.cells)) == (4, 21, 18)
    assert validate(sub).ok
    rep = validate_cell_map(inclusion)
    assert rep.ok


def test_embedding_t0_to_t_validates():
    m = embedding_t0_to_t()
    rep = validate_cell_map(m, require_angles=True)
    assert rep.ok
    assert len(m.vertex_map) == 4
    assert len(m.edge_map) == 21
    assert len(m.cell_map) == 18


def test_validate_cell_map_catches_broken_incidence():
    m = embedding_t0_to_t()
    bad = dict(m.vertex_map)
    # v00 and v10 map to u1 and v; swapping them breaks edge incidence
    bad[0], bad[1] = bad[1], bad[0]
    from latticeforge.complexes import CellMap

    rep = validate_cell_map(CellMap(m.source, m.target, bad, m.edge_map, m.cell_map))
    assert not rep.ok
