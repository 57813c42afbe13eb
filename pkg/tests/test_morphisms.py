"""Isomorphism search between labeled complexes."""

from fractions import Fraction

from latticeforge.builtins import builtin
from latticeforge.complexes import make_complex, validate_cell_map
from latticeforge.morphisms import find_isomorphism, isomorphisms

F = Fraction


def triangle(angles=(F(1, 3), F(1, 3), F(1, 3)), prefix=""):
    p, q, r, a, b, c, t = (prefix + s for s in "pqrabct")
    return make_complex(
        [p, q, r],
        [(a, p, q), (b, q, r), (c, r, p)],
        [(t, [a, b, c])],
        [(t, i, ang) for i, ang in enumerate(angles)],
    )


def map_key(m):
    return (
        tuple(sorted(m.vertex_map.items())),
        tuple(sorted(m.edge_map.items())),
        tuple(sorted(m.cell_map.items())),
    )


def test_relabeled_copy_is_isomorphic():
    src, dst = triangle(), triangle(prefix="z")
    m = find_isomorphism(src, dst)
    assert m is not None
    # Maps are index -> index; the copy keeps declaration order.
    for i, (lab, _, _) in enumerate(src.edges):
        assert dst.edges[m.edge_map[i]][0] == "z" + lab
    for i, lab in enumerate(src.vertices):
        assert dst.vertices[m.vertex_map[i]] == "z" + lab
    assert m.cell_map == {0: 0}


def test_angle_multiset_obstructs_isomorphism():
    right = triangle((F(1, 2), F(1, 4), F(1, 4)))
    equilateral = triangle()
    assert find_isomorphism(right, equilateral) is None


def test_rotated_angles_stay_isomorphic():
    # Same shape listed from a different starting corner.
    t1 = triangle((F(1, 2), F(1, 4), F(1, 4)))
    t2 = triangle((F(1, 4), F(1, 2), F(1, 4)))
    assert find_isomorphism(t1, t2) is not None


def test_triangle_symmetry_counts():
    assert len(list(isomorphisms(triangle(), triangle()))) == 6
    iso = triangle((F(1, 2), F(1, 4), F(1, 4)))
    assert len(list(isomorphisms(iso, iso))) == 2
    scalene = triangle((F(1, 2), F(1, 3), F(1, 6)))
    assert len(list(isomorphisms(scalene, scalene))) == 1


def test_size_mismatch_is_rejected_fast():
    assert find_isomorphism(builtin("S"), builtin("T0")) is None


def test_results_are_validated_maps():
    for m in isomorphisms(builtin("S"), builtin("S")):
        assert validate_cell_map(m, require_angles=True).ok


def test_self_isomorphisms_form_a_group():
    autos = list(isomorphisms(builtin("S"), builtin("S")))
    assert len(autos) == 4
    keys = {map_key(m) for m in autos}
    ident = next(m for m in autos if all(k == v for k, v in m.vertex_map.items()))
    assert map_key(ident) in keys
    for m1 in autos:
        for m2 in autos:
            comp_v = {k: m2.vertex_map[v] for k, v in m1.vertex_map.items()}
            comp_e = {k: m2.edge_map[v] for k, v in m1.edge_map.items()}
            comp_c = {k: m2.cell_map[v] for k, v in m1.cell_map.items()}
            key = (
                tuple(sorted(comp_v.items())),
                tuple(sorted(comp_e.items())),
                tuple(sorted(comp_c.items())),
            )
            assert key in keys
    for m in autos:
        inv_key = (
            tuple(sorted((v, k) for k, v in m.vertex_map.items())),
            tuple(sorted((v, k) for k, v in m.edge_map.items())),
            tuple(sorted((v, k) for k, v in m.cell_map.items())),
        )
        assert inv_key in keys


def test_enumeration_is_deterministic():
    t0 = builtin("T0")
    first = [map_key(m) for m in isomorphisms(t0, t0)]
    second = [map_key(m) for m in isomorphisms(t0, t0)]
    assert first == second
    assert first  # at least the identity


def test_extra_color_restricts_matches():
    s = builtin("S")

    def pin(kind, i):
        return "pin" if kind == "v" and i == 0 else ""

    unrestricted = list(isomorphisms(s, s))
    fixing = [m for m in unrestricted if m.vertex_map[0] == 0]
    pinned = list(isomorphisms(s, s, extra1=pin, extra2=pin))
    assert {map_key(m) for m in pinned} == {map_key(m) for m in fixing}
    assert len(pinned) < len(unrestricted)


def test_extra_color_mismatch_blocks_everything():
    s = builtin("S")
    assert (
        find_isomorphism(s, s) is not None
    )  # sanity before coloring one side only
    one_sided = list(
        isomorphisms(s, s, extra1=lambda k, i: "x" if k == "v" else "")
    )
    assert one_sided == []
