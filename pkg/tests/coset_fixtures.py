"""Ten presentations of finite groups paired with permutation realizations.

Each entry is (title, presentation, generator permutations).  The
realizations are independent of the coset enumerator: the closure of the
permutation generators gives the group order by brute-force multiplication,
and the test layer checks the relators hold before trusting a realization.
"""

from latticeforge.permgroups import (
    alternating_group,
    close,
    compose,
    identity,
    invert,
    psl2,
)
from latticeforge.presentations import Presentation


def perm_order(p):
    n = 1
    q = p
    e = identity(len(p))
    while q != e:
        q = compose(q, p)
        n += 1
    return n


def eval_word(word, gens):
    """Apply a signed word left to right; gens[i] realizes generator i+1."""
    out = identity(len(gens[0]))
    for letter in word:
        g = gens[letter - 1] if letter > 0 else invert(gens[-letter - 1])
        out = compose(out, g)
    return out


def _search_two_generators(group, o1, o2, oprod, extra=None):
    """First (a, b) with the given element/product orders generating group."""
    for a in group.elements:
        if perm_order(a) != o1:
            continue
        for b in group.elements:
            if perm_order(b) != o2:
                continue
            if perm_order(compose(a, b)) != oprod:
                continue
            if extra is not None and not extra(a, b):
                continue
            if len(close([a, b])) == group.order:
                return a, b
    raise AssertionError("no generating pair found")


def _commutator_order_4(a, b):
    comm = compose(compose(invert(a), invert(b)), compose(a, b))
    return perm_order(comm) == 4


def build_fixtures():
    w = lambda *ls: tuple(ls)  # noqa: E731 - word literal
    a5 = _search_two_generators(alternating_group(5), 2, 3, 5)
    l27 = _search_two_generators(psl2(7), 2, 3, 7, extra=_commutator_order_4)
    comm4 = w(-1, -2, 1, 2) * 4
    return [
        ("C2", Presentation(1, (w(1, 1),)), [(1, 0)]),
        ("C6", Presentation(1, (w(1, 1, 1, 1, 1, 1),)), [(1, 2, 3, 4, 5, 0)]),
        (
            "V4",
            Presentation(2, (w(1, 1), w(2, 2), w(1, 2, 1, 2))),
            [(1, 0, 3, 2), (2, 3, 0, 1)],
        ),
        (
            "S3",
            Presentation(2, (w(1, 1), w(2, 2), w(1, 2) * 3)),
            [(1, 0, 2), (0, 2, 1)],
        ),
        (
            "D4",
            Presentation(2, (w(1, 1, 1, 1), w(2, 2), w(1, 2) * 2)),
            [(1, 2, 3, 0), (3, 2, 1, 0)],
        ),
        (
            "Q8",
            Presentation(2, (w(1, 1, 1, 1), w(2, 2, -1, -1), w(-2, 1, 2, 1))),
            # right multiplication on 1,-1,i,-i,j,-j,k,-k
            [(2, 3, 1, 0, 7, 6, 4, 5), (4, 5, 6, 7, 1, 0, 3, 2)],
        ),
        (
            "A4",
            Presentation(2, (w(1, 1), w(2, 2, 2), w(1, 2) * 3)),
            [(1, 0, 3, 2), (1, 2, 0, 3)],
        ),
        (
            "S4",
            Presentation(2, (w(1, 1), w(2, 2, 2), w(1, 2) * 4)),
            [(1, 0, 2, 3), (0, 2, 3, 1)],
        ),
        ("A5", Presentation(2, (w(1, 1), w(2, 2, 2), w(1, 2) * 5)), list(a5)),
        (
            "PSL(2,7)",
            Presentation(2, (w(1, 1), w(2, 2, 2), w(1, 2) * 7, comm4)),
            list(l27),
        ),
    ]


FIXTURES = build_fixtures()
