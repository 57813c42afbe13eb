import itertools
import math
import random

import pytest

from latticeforge.permgroups import (
    MAX_EPI_GENERATORS,
    alternating_group,
    catalog,
    close,
    compose,
    cyclic_group,
    epimorphism_count,
    identity,
    invert,
    perm_group,
    psl2,
    symmetric_group,
)
from latticeforge.presentations import Presentation
from latticeforge.snf import smith_diagonal


# --- smith normal form against the determinantal-divisor oracle ----------


def _det(m):
    n = len(m)
    if n == 1:
        return m[0][0]
    total = 0
    for j in range(n):
        if m[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1 :] for row in m[1:]]
        total += (-1) ** j * m[0][j] * _det(minor)
    return total


def snf_oracle(matrix):
    """Invariant factors via determinantal divisors: d_k = gcd of all k-minors.

    A different route than elimination, so a genuine cross-check.
    """
    rows, cols = len(matrix), len(matrix[0])
    out = []
    prev = 1
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for ri in itertools.combinations(range(rows), k):
            for ci in itertools.combinations(range(cols), k):
                sub = [[matrix[r][c] for c in ci] for r in ri]
                g = math.gcd(g, abs(_det(sub)))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


SNF_CASES = [
    [[0]],
    [[1]],
    [[2, 0], [0, 3]],
    [[2, 4], [6, 8]],
    [[1, 2, 3], [4, 5, 6], [7, 8, 9]],
    [[2, 0, 0], [0, 0, 0]],
    [[6, 10], [15, 4]],
    [[-3, 1], [1, -3]],
]


@pytest.mark.parametrize("m", SNF_CASES)
def test_smith_diagonal_matches_oracle(m):
    assert smith_diagonal(m) == snf_oracle(m)


def test_smith_diagonal_random_matrices():
    rng = random.Random(20240817)
    for _ in range(60):
        rows = rng.randint(1, 4)
        cols = rng.randint(1, 4)
        m = [[rng.randint(-9, 9) for _ in range(cols)] for _ in range(rows)]
        got = smith_diagonal(m)
        assert got == snf_oracle(m), m
        for a, b in zip(got, got[1:]):
            assert b % a == 0


# --- permutation machinery ------------------------------------------------


def test_compose_is_left_to_right():
    p = (1, 2, 0)
    q = (0, 2, 1)
    # point 0: p sends it to 1, then q sends 1 to 2
    assert compose(p, q)[0] == 2
    assert compose(p, invert(p)) == identity(3)


def test_close_matches_exhaustive_subgroup():
    gens = [(1, 0, 2, 3), (0, 1, 3, 2)]
    got = set(close(gens))
    want = {identity(4)}
    frontier = [identity(4)]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = compose(x, g)
            if y not in want:
                want.add(y)
                frontier.append(y)
    assert got == want == {
        (0, 1, 2, 3),
        (1, 0, 2, 3),
        (0, 1, 3, 2),
        (1, 0, 3, 2),
    }


def test_standard_group_orders():
    assert cyclic_group(6).order == 6
    assert symmetric_group(4).order == 24
    assert alternating_group(4).order == 12
    assert alternating_group(5).order == 60
    assert alternating_group(6).order == 360


def test_psl2_orders():
    for q in (2, 3, 4, 5, 7, 8, 9, 11, 13):
        g = psl2(q)
        want = q * (q * q - 1) // math.gcd(2, q - 1)
        assert g.order == want
    with pytest.raises(ValueError):
        psl2(6)


def test_catalog():
    names = [g.name for g in catalog()]
    assert names == ["C2", "C3", "S3", "A4", "S4", "A5", "PSL(2,7)"]
    orders = [g.order for g in catalog()]
    assert orders == [2, 3, 6, 12, 24, 60, 168]


# --- epimorphism counting against hand counts ------------------------------


def test_epi_counts_from_cyclic_group():
    p = Presentation(1, ((1,) * 6,))  # Z/6
    assert epimorphism_count(p, cyclic_group(2)) == 1
    assert epimorphism_count(p, cyclic_group(3)) == 2
    assert epimorphism_count(p, cyclic_group(6)) == 2  # phi(6)
    assert epimorphism_count(p, cyclic_group(4)) == 0  # 4 does not divide 6


def test_epi_counts_from_free_group():
    f2 = Presentation(2, ())
    # generating pairs of S3: 36 total, 9 land in A3, 12 in the three C2s,
    # minus 3 for the identity pair counted four times
    assert epimorphism_count(f2, symmetric_group(3)) == 18


def test_epi_counts_from_s3_presentation():
    s3 = Presentation(2, ((1, 1), (2, 2), (1, 2, 1, 2, 1, 2)))
    assert epimorphism_count(s3, symmetric_group(3)) == 6  # = |Aut(S3)|
    # (ab)^3 forces the two C2-images to agree, so only a,b -> -1 survives
    assert epimorphism_count(s3, cyclic_group(2)) == 1
    assert epimorphism_count(s3, cyclic_group(3)) == 0


def test_epi_generator_guard():
    p = Presentation(MAX_EPI_GENERATORS + 1, ())
    with pytest.raises(ValueError):
        epimorphism_count(p, cyclic_group(2))


def test_perm_group_is_closed():
    g = perm_group("V4", [(1, 0, 3, 2), (2, 3, 0, 1)])
    assert g.order == 4
    for a in g.elements:
        for b in g.elements:
            assert compose(a, b) in g.elements
