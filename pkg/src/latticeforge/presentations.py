"""Finite group presentations: words, fundamental groups, Tietze moves.

Words are tuples of nonzero ints: letter g > 0 is generator g, letter -g its
inverse (generators are numbered from 1).  Relator lists are kept sorted by
(length, letters) so that equal presentations compare equal.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .complexes import Complex2D
from .snf import smith_diagonal

Word = tuple[int, ...]


def free_reduce(word: Word) -> Word:
    out: list[int] = []
    for letter in word:
        if out and out[-1] == -letter:
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


def cyclic_reduce(word: Word) -> Word:
    w = list(free_reduce(word))
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
    return tuple(w)


def invert_word(word: Word) -> Word:
    return tuple(-letter for letter in reversed(word))


def _canon_key(word: Word) -> tuple:
    # positive letters sort before their inverses so canonical forms read
    # without redundant inversion
    return tuple((abs(l), l < 0) for l in word)


def canonical_relator(word: Word) -> Word:
    """Least rotation over the cyclic reduction of the word and its inverse.

    Two relators normalize equally iff they are equivalent up to cyclic
    rotation and inversion, which is the dedup notion used throughout.
    """
    w = cyclic_reduce(word)
    if not w:
        return ()
    best = None
    for base in (w, invert_word(w)):
        for i in range(len(base)):
            rot = base[i:] + base[:i]
            if best is None or _canon_key(rot) < _canon_key(best):
                best = rot
    return best


@dataclass(frozen=True)
class Presentation:
    ngens: int
    relators: tuple[Word, ...]

    def __post_init__(self) -> None:
        for rel in self.relators:
            for letter in rel:
                if letter == 0 or abs(letter) > self.ngens:
                    raise ValueError(f"letter {letter} out of range in {rel}")
        reduced = tuple(free_reduce(r) for r in self.relators)
        ordered = tuple(sorted(reduced, key=lambda w: (len(w), w)))
        object.__setattr__(self, "relators", ordered)

    def total_length(self) -> int:
        return sum(len(r) for r in self.relators)


# --- word text format ---------------------------------------------------

_TOKEN = re.compile(r"([A-Za-z][A-Za-z0-9_']*)(?:\^(-?\d+))?|(\()|(\))(?:\^(-?\d+))?")


def parse_word(text: str, names: list[str] | tuple[str, ...]) -> Word:
    """Parse `y x^3 (x^-1 y^-1)^2` style expressions into a word.

    Juxtaposition multiplies left to right; `^` takes an integer exponent and
    binds to the preceding generator or parenthesized group.
    """
    index = {name: i + 1 for i, name in enumerate(names)}
    pos = 0
    text = text.strip()

    def parse_seq(depth: int) -> Word:
        nonlocal pos
        out: list[int] = []
        while pos < len(text):
            if text[pos].isspace():
                pos += 1
                continue
            if text[pos] == ")":
                if depth == 0:
                    raise ValueError(f"unbalanced ')' at {pos} in {text!r}")
                return tuple(out)
            if text[pos] == "(":
                pos += 1
                inner = parse_seq(depth + 1)
                if pos >= len(text) or text[pos] != ")":
                    raise ValueError(f"missing ')' in {text!r}")
                pos += 1
                out.extend(_power(inner, _exponent()))
                continue
            m = re.match(r"[A-Za-z][A-Za-z0-9_']*", text[pos:])
            if not m:
                raise ValueError(f"bad character {text[pos]!r} at {pos} in {text!r}")
            name = m.group(0)
            if name not in index:
                raise ValueError(f"unknown generator {name!r} in {text!r}")
            pos += len(name)
            out.extend(_power((index[name],), _exponent()))
        if depth != 0:
            raise ValueError(f"missing ')' in {text!r}")
        return tuple(out)

    def _exponent() -> int:
        nonlocal pos
        if pos < len(text) and text[pos] == "^":
            m = re.match(r"\^(-?\d+)", text[pos:])
            if not m:
                raise ValueError(f"bad exponent at {pos} in {text!r}")
            pos += len(m.group(0))
            return int(m.group(1))
        return 1

    def _power(w: Word, e: int) -> Word:
        if e >= 0:
            return w * e
        return invert_word(w) * (-e)

    return parse_seq(0)


def word_str(word: Word, names: list[str] | tuple[str, ...]) -> str:
    if not word:
        return "1"
    parts = []
    i = 0
    while i < len(word):
        letter = word[i]
        j = i
        while j < len(word) and word[j] == letter:
            j += 1
        run = j - i
        name = names[abs(letter) - 1]
        exp = run if letter > 0 else -run
        parts.append(name if exp == 1 else f"{name}^{exp}")
        i = j
    return " ".join(parts)


def write_presentation(p: Presentation) -> str:
    lines = [f"gens {p.ngens}"]
    for rel in p.relators:
        lines.append("rel " + " ".join(str(letter) for letter in rel))
    return "\n".join(lines) + "\n"


def read_presentation(text: str) -> Presentation:
    ngens = None
    relators: list[Word] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if fields[0] == "gens":
            if ngens is not None or len(fields) != 2:
                raise ValueError(f"line {lineno}: bad gens line")
            ngens = int(fields[1])
        elif fields[0] == "rel":
            if ngens is None:
                raise ValueError(f"line {lineno}: rel before gens")
            relators.append(tuple(int(f) for f in fields[1:]))
        else:
            try:
                rel = tuple(int(f) for f in fields)
            except ValueError:
                raise ValueError(
                    f"line {lineno}: unknown directive {fields[0]!r}"
                ) from None
            # bare relator line: signed indices with no `rel` prefix
            if ngens is None:
                raise ValueError(f"line {lineno}: relator before gens")
            relators.append(rel)
    if ngens is None:
        raise ValueError("missing gens line")
    return Presentation(ngens, tuple(relators))


# --- fundamental group --------------------------------------------------


def pi1_presentation(c: Complex2D, basepoint: int | str = 0) -> Presentation:
    """Presentation of the fundamental group of a connected 2-complex.

    A BFS spanning tree is grown from the basepoint, visiting the edges at
    each vertex in lexicographic label order; non-tree edges become the
    generators (numbered in edge-list order) and each 2-cell contributes its
    boundary word with tree letters dropped.
    """
    if isinstance(basepoint, str):
        basepoint = c.vertex_index(basepoint)
    nv = len(c.vertices)
    if nv == 0:
        raise ValueError("empty complex has no fundamental group")

    in_tree = [False] * len(c.edges)
    seen = [False] * nv
    seen[basepoint] = True
    frontier = [basepoint]
    reached = 1
    by_vertex: dict[int, list[tuple[str, int, int]]] = {}
    for ei, (label, p, q) in enumerate(c.edges):
        by_vertex.setdefault(p, []).append((label, ei, q))
        by_vertex.setdefault(q, []).append((label, ei, p))
    for lst in by_vertex.values():
        lst.sort()
    while frontier:
        nxt: list[int] = []
        for v in frontier:
            for _, ei, other in by_vertex.get(v, ()):
                if not seen[other]:
                    seen[other] = True
                    in_tree[ei] = True
                    reached += 1
                    nxt.append(other)
        frontier = nxt
    if reached != nv:
        raise ValueError("complex is not connected")

    gen_of_edge: dict[int, int] = {}
    for ei in range(len(c.edges)):
        if not in_tree[ei]:
            gen_of_edge[ei] = len(gen_of_edge) + 1

    relators: list[Word] = []
    for ci in range(len(c.cells)):
        cycle = c.cells[ci][1]
        walk = c.cell_vertices(ci)
        word: list[int] = []
        for pos, ei in enumerate(cycle):
            if ei not in gen_of_edge:
                continue
            _, p, q = c.edges[ei]
            # traversed p->q iff the walk leaves the stored first endpoint
            word.append(gen_of_edge[ei] if walk[pos] == p else -gen_of_edge[ei])
        relators.append(free_reduce(tuple(word)))
    return Presentation(len(gen_of_edge), tuple(relators))


# --- Tietze simplification ----------------------------------------------


class BudgetExceeded(RuntimeError):
    pass


def _dedup(relators: list[Word]) -> list[Word]:
    seen = {}
    for rel in relators:
        key = canonical_relator(rel)
        if key and key not in seen:
            seen[key] = key
    return sorted(seen.values(), key=lambda w: (len(w), w))


def _substitute(rel: Word, gen: int, repl: Word) -> Word:
    """Replace every occurrence of generator `gen` in rel by the word repl."""
    out: list[int] = []
    for letter in rel:
        if letter == gen:
            out.extend(repl)
        elif letter == -gen:
            out.extend(invert_word(repl))
        else:
            out.append(letter)
    return free_reduce(tuple(out))


def _rewrite_with(rel: Word, other: Word) -> Word:
    """Shorten rel by replacing long substrings of the cyclic relator other.

    If more than half of (a rotation of) `other` or its inverse appears in
    rel as a contiguous block, the block is replaced by the inverse of the
    rest, which is strictly shorter.  One pass, first hit wins.
    """
    n = len(other)
    if n < 2:
        return rel
    half = n // 2 + 1
    variants = []
    for base in (other, invert_word(other)):
        for i in range(n):
            variants.append(base[i:] + base[:i])
    changed = True
    while changed:
        changed = False
        for var in variants:
            chunk = var[:half]
            m = len(rel)
            if m < half:
                continue
            for start in range(m - half + 1):
                if rel[start : start + half] == chunk:
                    repl = invert_word(var[half:])
                    rel = free_reduce(rel[:start] + repl + rel[start + half :])
                    changed = True
                    break
            if changed:
                break
    return rel


def _eliminate(ngens: int, relators: list[Word], gen: int, repl: Word) -> tuple[int, list[Word]]:
    """Remove generator gen, rewriting with gen = repl, and renumber."""
    remap = {}
    k = 0
    for g in range(1, ngens + 1):
        if g != gen:
            k += 1
            remap[g] = k
    out = []
    for rel in relators:
        w = _substitute(rel, gen, repl)
        out.append(tuple((1 if l > 0 else -1) * remap[abs(l)] for l in w))
    return ngens - 1, _dedup(out)


def tietze_simplify(
    p: Presentation, *, budget: int = 100_000, allow_growth: bool = False
) -> Presentation:
    """Simplify a presentation by elementary moves.

    Moves applied until a fixed point: free and cyclic reduction, removal of
    duplicate relators (up to rotation and inversion), substring rewriting
    using shorter relators, and elimination of a generator that some relator
    expresses in terms of the others.  By default an elimination is taken
    only when it does not increase the total relator length; allow_growth
    lifts that restriction (smallest blow-up first), which can reach fewer
    generators at the cost of longer relators.  budget caps the number of
    moves.
    """
    ngens = p.ngens
    relators = _dedup([cyclic_reduce(r) for r in p.relators])
    moves = 0

    def spend() -> None:
        nonlocal moves
        moves += 1
        if moves > budget:
            raise BudgetExceeded(f"tietze budget of {budget} moves exhausted")

    while True:
        # substring rewriting, shorter relators rewrite longer ones
        changed = True
        while changed:
            changed = False
            relators = _dedup(relators)
            for i, rel in enumerate(relators):
                for j, other in enumerate(relators):
                    if i == j or len(other) > len(rel) or len(other) < 2:
                        continue
                    newrel = _rewrite_with(rel, other)
                    if newrel != rel:
                        spend()
                        relators[i] = cyclic_reduce(newrel)
                        changed = True
                        break
                if changed:
                    break

        # pick an elimination: relator with a letter occurring exactly once
        best = None  # (growth, gen, repl, relator index)
        for ri, rel in enumerate(relators):
            counts: dict[int, int] = {}
            for letter in rel:
                counts[abs(letter)] = counts.get(abs(letter), 0) + 1
            for gen, cnt in counts.items():
                if cnt != 1:
                    continue
                pos = next(k for k, l in enumerate(rel) if abs(l) == gen)
                rest = rel[pos + 1 :] + rel[:pos]
                repl = invert_word(rest) if rel[pos] > 0 else rest
                occurrences = sum(
                    r.count(gen) + r.count(-gen) for k, r in enumerate(relators) if k != ri
                )
                growth = occurrences * (len(repl) - 1) - len(rel)
                cand = (growth, len(repl), gen, repl, ri)
                if best is None or cand < best:
                    best = cand
        if best is None:
            break
        growth, _, gen, repl, ri = best
        if growth > 0 and not allow_growth:
            break
        spend()
        del relators[ri]
        ngens, relators = _eliminate(ngens, relators, gen, repl)

    return Presentation(ngens, tuple(relators))


# --- abelianization -----------------------------------------------------


def abelianization(p: Presentation) -> tuple[tuple[int, ...], int]:
    """Invariant factors (>1, each dividing the next) and free rank."""
    if not p.relators:
        return (), p.ngens
    matrix = []
    for rel in p.relators:
        row = [0] * p.ngens
        for letter in rel:
            row[abs(letter) - 1] += 1 if letter > 0 else -1
        matrix.append(row)
    diag = smith_diagonal(matrix)
    torsion = tuple(d for d in diag if d > 1)
    rank = p.ngens - len(diag)
    return torsion, rank
