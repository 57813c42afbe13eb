"""Small concrete permutation groups and brute-force epimorphism counting.

Permutations are tuples: p[i] is the image of point i.  Products act on the
right (a word is applied to a point letter by letter, left to right), which
is all the identity/closure checks here need.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .presentations import Presentation, Word

Perm = tuple[int, ...]

CLOSURE_LIMIT = 10_000_000


def identity(degree: int) -> Perm:
    return tuple(range(degree))


def compose(p: Perm, q: Perm) -> Perm:
    """Right-action product: applying compose(p, q) is p then q."""
    return tuple(q[p[i]] for i in range(len(p)))


def invert(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def close(generators: list[Perm], limit: int = CLOSURE_LIMIT) -> list[Perm]:
    """All products of the generators, BFS order, deterministic."""
    if not generators:
        return []
    degree = len(generators[0])
    seen = {identity(degree)}
    frontier = [identity(degree)]
    while frontier:
        nxt = []
        for p in frontier:
            for g in generators:
                q = compose(p, g)
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
                    if len(seen) > limit:
                        raise OverflowError(f"closure exceeds {limit} elements")
        frontier = nxt
    return sorted(seen)


@dataclass(frozen=True)
class PermGroup:
    name: str
    degree: int
    generators: tuple[Perm, ...]
    elements: tuple[Perm, ...]

    @property
    def order(self) -> int:
        return len(self.elements)


def perm_group(name: str, generators: list[Perm]) -> PermGroup:
    els = close(generators)
    return PermGroup(name, len(generators[0]), tuple(generators), tuple(els))


def cyclic_group(n: int) -> PermGroup:
    return perm_group(f"C{n}", [tuple((i + 1) % n for i in range(n))])


def symmetric_group(n: int) -> PermGroup:
    cycle = tuple((i + 1) % n for i in range(n))
    swap = (1, 0) + tuple(range(2, n))
    return perm_group(f"S{n}", [swap, cycle])


def alternating_group(n: int) -> PermGroup:
    three = (1, 2, 0) + tuple(range(3, n))
    if n % 2:
        rest = tuple(range(1, n)) + (0,)  # n odd: the n-cycle is even
    else:
        rest = (0,) + tuple(range(2, n)) + (1,)  # (n-1)-cycle fixing 0
    return perm_group(f"A{n}", [three, rest])


# --- small finite fields --------------------------------------------------

_IRREDUCIBLE = {4: (1, 1, 1), 8: (1, 1, 0, 1), 9: (1, 0, 1)}  # low to high degree


class SmallField:
    """GF(q) for q = p^k <= 13, elements encoded 0..q-1 in base p digits."""

    def __init__(self, q: int):
        for p in (2, 3, 5, 7, 11, 13):
            k = 0
            n = q
            while n % p == 0:
                n //= p
                k += 1
            if n == 1 and k >= 1:
                self.p, self.k = p, k
                break
        else:
            raise ValueError(f"q = {q} is not a supported prime power")
        self.q = q
        self.add_table = [[self._add(a, b) for b in range(q)] for a in range(q)]
        self.mul_table = [[self._mul(a, b) for b in range(q)] for a in range(q)]
        self.neg_table = [self._neg(a) for a in range(q)]
        self.inv_table = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if self.mul_table[a][b] == 1:
                    self.inv_table[a] = b
                    break
            else:
                raise AssertionError(f"{a} has no inverse in GF({q})")

    def _digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.k):
            out.append(a % self.p)
            a //= self.p
        return out

    def _undigits(self, ds: list[int]) -> int:
        val = 0
        for d in reversed(ds):
            val = val * self.p + d
        return val

    def _add(self, a: int, b: int) -> int:
        return self._undigits(
            [(x + y) % self.p for x, y in zip(self._digits(a), self._digits(b))]
        )

    def _neg(self, a: int) -> int:
        return self._undigits([(-x) % self.p for x in self._digits(a)])

    def _mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a * b) % self.p
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * self.k - 1)
        for i, x in enumerate(da):
            for j, y in enumerate(db):
                prod[i + j] = (prod[i + j] + x * y) % self.p
        mod = _IRREDUCIBLE[self.q]
        # reduce modulo the irreducible polynomial (monic, degree k)
        for top in range(len(prod) - 1, self.k - 1, -1):
            coeff = prod[top]
            if coeff:
                prod[top] = 0
                for j in range(self.k):
                    prod[top - self.k + j] = (prod[top - self.k + j] - coeff * mod[j]) % self.p
        return self._undigits(prod[: self.k])

    def add(self, a: int, b: int) -> int:
        return self.add_table[a][b]

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a][b]

    def neg(self, a: int) -> int:
        return self.neg_table[a]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError
        return self.inv_table[a]

    def basis(self) -> list[int]:
        return [self.p**i for i in range(self.k)]


PSL2_SUPPORTED = (2, 3, 4, 5, 7, 8, 9, 11, 13)


def psl2(q: int) -> PermGroup:
    """PSL(2, q) acting on the projective line: points 0..q-1 and infinity=q.

    Built by enumerating all unimodular Mobius actions; generated by the
    elementary transvections, with the order checked against q(q^2-1)/gcd(2,q-1).
    """
    if q not in PSL2_SUPPORTED:
        raise ValueError(f"q = {q} not supported (want one of {PSL2_SUPPORTED})")
    F = SmallField(q)
    inf = q

    def moebius(a: int, b: int, c: int, d: int) -> Perm:
        img = []
        for z in range(q):
            den = F.add(F.mul(c, z), d)
            if den == 0:
                img.append(inf)
            else:
                img.append(F.mul(F.add(F.mul(a, z), b), F.inv(den)))
        img.append(F.mul(a, F.inv(c)) if c else inf)
        return tuple(img)

    elements = set()
    for a in range(q):
        for b in range(q):
            for c in range(q):
                for d in range(q):
                    if F.add(F.mul(a, d), F.neg(F.mul(b, c))) == 1:
                        elements.add(moebius(a, b, c, d))
    expected = q * (q * q - 1) // (2 if q % 2 else 1)
    if len(elements) != expected:
        raise AssertionError(f"PSL(2,{q}) size {len(elements)} != {expected}")

    gens = []
    for t in F.basis():
        gens.append(moebius(1, t, 0, 1))
        gens.append(moebius(1, 0, t, 1))
    generated = close(gens)
    if len(generated) != expected:
        raise AssertionError(f"transvections generate only {len(generated)} elements")
    return PermGroup(f"PSL(2,{q})", q + 1, tuple(gens), tuple(sorted(elements)))


# --- epimorphism counting --------------------------------------------------

MAX_EPI_GENERATORS = 4


def evaluate_word(word: Word, images: list[Perm], inverses: list[Perm], point: int) -> int:
    for letter in word:
        perm = images[letter - 1] if letter > 0 else inverses[-letter - 1]
        point = perm[point]
    return point


def satisfies_relators(p: Presentation, images: list[Perm], degree: int) -> bool:
    inverses = [invert(g) for g in images]
    for rel in p.relators:
        for s in range(degree):
            if evaluate_word(rel, images, inverses, s) != s:
                return False
    return True


def epimorphism_count(p: Presentation, target: PermGroup) -> int:
    """Number of surjections from the presented group onto the target.

    Exhaustive over all |G|^n generator-image tuples; a tuple counts when
    every relator evaluates to the identity and the images generate the
    whole group.  Not up to automorphism.
    """
    if p.ngens > MAX_EPI_GENERATORS:
        raise ValueError(
            f"presentation has {p.ngens} generators (guard allows {MAX_EPI_GENERATORS})"
        )
    if target.order > CLOSURE_LIMIT:
        raise ValueError("target group too large")
    els = list(target.elements)
    inv = [invert(g) for g in els]
    degree = target.degree
    relators = sorted(p.relators, key=len)
    order = target.order

    count = 0
    for idx in product(range(order), repeat=p.ngens):
        images = [els[i] for i in idx]
        inverses = [inv[i] for i in idx]
        ok = True
        for rel in relators:
            for s in range(degree):
                point = s
                for letter in rel:
                    perm = images[letter - 1] if letter > 0 else inverses[-letter - 1]
                    point = perm[point]
                if point != s:
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        if len(close(images, limit=order)) == order:
            count += 1
    return count


def catalog(names: list[str] | None = None) -> list[PermGroup]:
    """The fixed comparison catalog of small groups."""
    builders = {
        "C2": lambda: cyclic_group(2),
        "C3": lambda: cyclic_group(3),
        "S3": lambda: symmetric_group(3),
        "A4": lambda: alternating_group(4),
        "S4": lambda: symmetric_group(4),
        "A5": lambda: alternating_group(5),
        "PSL(2,7)": lambda: psl2(7),
    }
    if names is None:
        names = list(builders)
    return [builders[n]() for n in names]
