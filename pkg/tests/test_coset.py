"""Coset enumeration against brute-force permutation closure."""

import pytest
from coset_fixtures import FIXTURES, eval_word
from latticeforge.coset import (
    MAX_LOW_INDEX,
    CosetOverflow,
    low_index_subgroups,
    todd_coxeter,
)
from latticeforge.permgroups import close, identity
from latticeforge.presentations import Presentation

IDS = [name for name, _, _ in FIXTURES]


@pytest.mark.parametrize("name,pres,gens", FIXTURES, ids=IDS)
def test_realization_satisfies_relators(name, pres, gens):
    e = identity(len(gens[0]))
    for rel in pres.relators:
        assert eval_word(rel, gens) == e, f"{name}: relator {rel} fails"


@pytest.mark.parametrize("name,pres,gens", FIXTURES, ids=IDS)
def test_index_matches_closure_order(name, pres, gens):
    # Enumerating cosets of the trivial subgroup counts group elements;
    # the permutation closure counts them without touching the table code.
    order = len(close(gens))
    assert todd_coxeter(pres).num_cosets == order


@pytest.mark.parametrize("name,pres,gens", FIXTURES, ids=IDS)
def test_completed_table_closes_all_relators(name, pres, gens):
    table = todd_coxeter(pres)
    for rel in pres.relators:
        for c in range(table.num_cosets):
            assert table.trace(c, rel) == c


def _s3():
    return Presentation(2, ((1, 1), (2, 2), (1, 2, 1, 2, 1, 2)))


def test_subgroup_indexes_in_s3():
    p = _s3()
    assert todd_coxeter(p, [(1,)]).num_cosets == 3
    assert todd_coxeter(p, [(1, 2)]).num_cosets == 2
    assert todd_coxeter(p, [(1,), (2,)]).num_cosets == 1


def test_subgroup_index_in_q8():
    q8 = next(pres for name, pres, _ in FIXTURES if name == "Q8")
    assert todd_coxeter(q8, [(1,)]).num_cosets == 2


def test_subgroup_coset_stays_home():
    p = _s3()
    table = todd_coxeter(p, [(1,)])
    assert table.trace(0, (1,)) == 0


def test_free_group_overflows():
    with pytest.raises(CosetOverflow):
        todd_coxeter(Presentation(2, ()), max_cosets=50)
    with pytest.raises(CosetOverflow):
        todd_coxeter(Presentation(1, ()), max_cosets=10)


def test_tight_limit_still_finishes_when_group_fits():
    # S3 needs exactly 6 live cosets but the enumerator may allocate
    # and coincidence-merge more; a generous-but-finite cap must work.
    assert todd_coxeter(_s3(), max_cosets=200).num_cosets == 6


def _index_histogram(tables):
    hist: dict[int, int] = {}
    for t in tables:
        hist[t.num_cosets] = hist.get(t.num_cosets, 0) + 1
    return hist


def test_low_index_a4():
    a4 = next(pres for name, pres, _ in FIXTURES if name == "A4")
    # A4: whole group, V4 at index 3, C3 at index 4, nothing at index 2.
    assert _index_histogram(low_index_subgroups(a4, 4)) == {1: 1, 3: 1, 4: 1}


def test_low_index_s3():
    assert _index_histogram(low_index_subgroups(_s3(), 3)) == {1: 1, 2: 1, 3: 1}


def test_low_index_free_rank_2():
    # Index-2 subgroups correspond to epimorphisms onto C2: 2^2 - 1 kernels.
    assert _index_histogram(low_index_subgroups(Presentation(2, ()), 2)) == {
        1: 1,
        2: 3,
    }


def test_low_index_tables_close_relators():
    a4 = next(pres for name, pres, _ in FIXTURES if name == "A4")
    for table in low_index_subgroups(a4, 4):
        for rel in a4.relators:
            for c in range(table.num_cosets):
                assert table.trace(c, rel) == c


def test_low_index_guard():
    with pytest.raises(ValueError):
        low_index_subgroups(_s3(), MAX_LOW_INDEX + 1)
    assert low_index_subgroups(_s3(), 0) == []
