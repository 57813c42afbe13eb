import pytest

from latticeforge.builtins import builtin, example_datum
from latticeforge.datum import (
    Datum,
    complex_to_datum,
    datum_to_complex,
    extension_presentation,
    generator_names,
    read_datum,
    rho_hat,
    sigma_hat,
    validate_action,
    validate_datum,
    write_datum,
)
from latticeforge.morphisms import find_isomorphism
from latticeforge.presentations import abelianization, tietze_simplify


def test_example_datum_validates():
    d = example_datum()
    assert d.d1 == 3 and d.d2 == 3
    assert len(d.quads) == 9
    assert validate_datum(d).ok


def test_hats_are_involutions_on_the_quads():
    d = example_datum()
    quads = set(d.quads)
    for q in d.quads:
        assert sigma_hat(d, sigma_hat(d, q)) == q
        assert rho_hat(rho_hat(q)) == q
        # closure: both images are again squares of the datum
        assert sigma_hat(d, q) in quads
        assert rho_hat(q) in quads


def test_datum_to_complex_reproduces_s():
    d = example_datum()
    c, act = datum_to_complex(d)
    assert find_isomorphism(c, builtin("S")) is not None
    assert validate_action(act).ok


def test_complex_to_datum_round_trip():
    d = example_datum()
    c, act = datum_to_complex(d)
    assert complex_to_datum(c, act) == d


def test_extension_presentation_shape():
    d = example_datum()
    p = extension_presentation(d)
    assert p.ngens == 6
    assert len(p.relators) == 15
    assert generator_names(d) == ("a", "b", "c", "x", "y", "z")
    # trivial involutions make every generator an involution: 6 square
    # relators plus the 9 gluing relators
    squares = [r for r in p.relators if len(r) == 2]
    assert len(squares) == 6


def test_tietze_drops_redundant_square_relators():
    d = example_datum()
    p = extension_presentation(d)
    q = tietze_simplify(p)
    assert q.ngens == 6
    assert len(q.relators) == 12
    assert abelianization(q) == abelianization(p) == ((2, 2, 2), 0)


def test_write_read_round_trip():
    d = example_datum()
    assert read_datum(write_datum(d)) == d


def test_read_datum_parses_involution_lines():
    text = "datum 2 2\nphiA a b\nrel a x b x\nrel a y b y\nrel b x a x\nrel b y a y\n"
    d = read_datum(text)
    assert d.phi_a == (1, 0)
    assert d.phi_x == (0, 1)
    assert validate_datum(d).ok


def test_validate_datum_failures():
    d = example_datum()
    # drop one square: |R| and the projections both break
    broken = Datum(d.a_labels, d.x_labels, d.phi_a, d.phi_x, d.quads[1:])
    rep = validate_datum(broken)
    assert not rep.ok

    swapped = Datum(d.a_labels, d.x_labels, (1, 0, 2), d.phi_x, d.quads)
    rep = validate_datum(swapped)
    assert not rep.ok  # sigma-hat orbits leave the square set


def test_validate_datum_rejects_non_involution():
    d = example_datum()
    bad = Datum(d.a_labels, d.x_labels, (1, 2, 0), d.phi_x, d.quads)
    rep = validate_datum(bad)
    assert any("involution" in f for f in rep.failures)


def test_datum_rejects_label_collision():
    d = example_datum()
    bad = Datum(("a", "b", "x"), d.x_labels, d.phi_a, d.phi_x, d.quads)
    rep = validate_datum(bad)
    assert any("distinct" in f for f in rep.failures)
