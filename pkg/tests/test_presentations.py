import pytest

from latticeforge.builtins import builtin, two_generator_presentation
from latticeforge.complexes import make_complex
from latticeforge.presentations import (
    BudgetExceeded,
    Presentation,
    abelianization,
    cyclic_reduce,
    parse_word,
    pi1_presentation,
    read_presentation,
    tietze_simplify,
    word_str,
    write_presentation,
)

NAMES = ("x", "y")


def grid_torus():
    """2x2 grid torus: 4 vertices, 8 edges, 4 squares, no loops."""
    vs = ["p00", "p01", "p10", "p11"]
    edges = []
    for i in range(2):
        for j in range(2):
            edges.append((f"h{i}{j}", f"p{i}{j}", f"p{i}{1 - j}"))
            edges.append((f"v{i}{j}", f"p{i}{j}", f"p{1 - i}{j}"))
    cells = []
    for i in range(2):
        for j in range(2):
            cells.append(
                (f"s{i}{j}", [f"h{i}{j}", f"v{i}{1 - j}", f"h{1 - i}{j}", f"v{i}{j}"])
            )
    return make_complex(vs, edges, cells)


def octahedron():
    vs = ["n", "s", "a", "b", "c", "d"]
    ring = ["a", "b", "c", "d"]
    edges = []
    for i, x in enumerate(ring):
        edges.append((f"r{i}", x, ring[(i + 1) % 4]))
        edges.append((f"n{i}", "n", x))
        edges.append((f"s{i}", "s", x))
    cells = []
    for i in range(4):
        cells.append((f"N{i}", [f"n{i}", f"r{i}", f"n{(i + 1) % 4}"]))
        cells.append((f"S{i}", [f"s{i}", f"r{i}", f"s{(i + 1) % 4}"]))
    return make_complex(vs, edges, cells)


def test_parse_word_round_trip():
    for text in ("x", "x y", "x^3", "x^-2 y", "(x y)^2", "(x^-1 y^-1)^2 x"):
        w = parse_word(text, NAMES)
        assert parse_word(word_str(w, NAMES), NAMES) == w


def test_parse_word_rejects_unknown_generator():
    with pytest.raises(ValueError):
        parse_word("x q", NAMES)


def test_word_str_of_identity():
    assert word_str((), NAMES) == "1"


def test_cyclic_reduce():
    # x y x^-1 is cyclically reduced to y
    assert cyclic_reduce((1, 2, -1)) == (2,)
    assert cyclic_reduce((1, -1)) == ()


def test_theta_graph_is_free_of_rank_two():
    c = make_complex(["p", "q"], [("a", "p", "q"), ("b", "p", "q"), ("c", "p", "q")])
    p = pi1_presentation(c)
    assert p.ngens == 2
    assert p.relators == ()


def test_torus_abelianization():
    p = pi1_presentation(grid_torus())
    assert abelianization(p) == ((), 2)


def test_sphere_is_simply_connected():
    from latticeforge.coset import todd_coxeter

    p = pi1_presentation(octahedron())
    assert abelianization(p) == ((), 0)
    assert todd_coxeter(p).num_cosets == 1


def test_pi1_of_t_shape():
    p = pi1_presentation(builtin("T"))
    # spanning tree eats 6 of 45 edges; every triangle contributes a relator
    assert p.ngens == 39
    assert len(p.relators) == 45
    assert abelianization(p) == ((), 0)


def test_abelianization_cases():
    assert abelianization(Presentation(1, ((1,) * 6,))) == ((6,), 0)
    assert abelianization(Presentation(2, ((1, 2, -1, -2),))) == ((), 2)
    assert abelianization(Presentation(2, ((1, 1, -2, -2, -2),))) == ((), 1)
    assert abelianization(Presentation(0, ())) == ((), 0)


def test_abelianization_invariant_under_tietze():
    p = pi1_presentation(builtin("T"))
    for growth in (False, True):
        q = tietze_simplify(p, allow_growth=growth)
        assert abelianization(q) == abelianization(p)


def test_tietze_reduces_t_presentation():
    p = pi1_presentation(builtin("T"))
    q = tietze_simplify(p)
    assert q.ngens < p.ngens
    assert len(q.relators) <= len(p.relators)


def test_tietze_budget():
    p = pi1_presentation(builtin("T"))
    with pytest.raises(BudgetExceeded):
        tietze_simplify(p, budget=3)


def test_presentation_round_trip():
    p = two_generator_presentation()
    assert read_presentation(write_presentation(p)) == p


def test_read_presentation_accepts_bare_relator_lines():
    assert read_presentation("gens 2\n1 2 -1 -2\n") == Presentation(2, ((1, 2, -1, -2),))
    with pytest.raises(ValueError):
        read_presentation("1 2\ngens 2\n")  # relator before gens
    with pytest.raises(ValueError):
        read_presentation("gens 2\nrelate 1 2\n")


def test_two_generator_presentation_shape():
    p = two_generator_presentation()
    assert p.ngens == 2
    assert abelianization(p) == ((), 0)
