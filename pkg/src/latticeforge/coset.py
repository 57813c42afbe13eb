"""Coset enumeration (HLT style) and low-index subgroup search."""

from __future__ import annotations

from dataclasses import dataclass

from .presentations import Presentation, Word, invert_word


class CosetOverflow(Exception):
    """Raised when enumeration would exceed the coset table limit."""


@dataclass
class CosetTable:
    """Transition table over the 2*ngens column alphabet.

    Column 2i is generator i+1, column 2i+1 its inverse.  Row 0 is the
    subgroup itself.  A negative entry means undefined.
    """

    ngens: int
    table: list[list[int]]

    @property
    def num_cosets(self) -> int:
        return len(self.table)

    def column(self, letter: int) -> int:
        return 2 * (letter - 1) if letter > 0 else 2 * (-letter - 1) + 1

    def trace(self, coset: int, word: Word) -> int | None:
        for letter in word:
            coset = self.table[coset][self.column(letter)]
            if coset < 0:
                return None
        return coset


class _Enumerator:
    def __init__(self, ngens: int, max_cosets: int):
        self.ngens = ngens
        self.ncols = 2 * ngens
        self.max_cosets = max_cosets
        self.table: list[list[int]] = [[-1] * self.ncols]
        self.parent: list[int] = [0]  # union-find over live cosets
        self.live_count = 1
        self.queue: list[tuple[int, int]] = []  # pending coincidences

    def find(self, c: int) -> int:
        root = c
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[c] != root:
            self.parent[c], c = root, self.parent[c]
        return root

    def new_coset(self) -> int:
        if self.live_count >= self.max_cosets:
            raise CosetOverflow(f"more than {self.max_cosets} cosets required")
        self.table.append([-1] * self.ncols)
        self.parent.append(len(self.table) - 1)
        self.live_count += 1
        return len(self.table) - 1

    def column(self, letter: int) -> int:
        return 2 * (letter - 1) if letter > 0 else 2 * (-letter - 1) + 1

    def inv_column(self, col: int) -> int:
        return col ^ 1

    def set_edge(self, a: int, col: int, b: int) -> None:
        a, b = self.find(a), self.find(b)
        cur = self.table[a][col]
        if cur >= 0 and self.find(cur) != b:
            self.merge(self.find(cur), b)
            a, b = self.find(a), self.find(b)
        self.table[a][col] = b
        back = self.table[b][self.inv_column(col)]
        if back >= 0 and self.find(back) != a:
            self.merge(self.find(back), a)
            a, b = self.find(a), self.find(b)
        self.table[b][self.inv_column(col)] = a

    def merge(self, a: int, b: int) -> None:
        self.queue.append((a, b))
        while self.queue:
            x, y = self.queue.pop()
            x, y = self.find(x), self.find(y)
            if x == y:
                continue
            if y < x:
                x, y = y, x
            self.parent[y] = x
            self.live_count -= 1
            for col in range(self.ncols):
                t = self.table[y][col]
                if t < 0:
                    continue
                t = self.find(t)
                cur = self.table[x][col]
                if cur >= 0 and self.find(cur) != t:
                    self.queue.append((self.find(cur), t))
                else:
                    self.table[x][col] = t
                    back = self.table[t][self.inv_column(col)]
                    if back >= 0 and self.find(back) != x:
                        self.queue.append((self.find(back), x))
                    else:
                        self.table[t][self.inv_column(col)] = x

    def scan_and_fill(self, coset: int, word: Word) -> None:
        """Trace word from coset back to coset, defining cosets as needed."""
        f = self.find(coset)
        b = f
        i, j = 0, len(word) - 1
        while True:
            f, b = self.find(f), self.find(b)
            # forward as far as defined
            while i <= j:
                nxt = self.table[f][self.column(word[i])]
                if nxt < 0:
                    break
                f = self.find(nxt)
                i += 1
            if i > j:
                if f != b:
                    self.merge(f, b)
                return
            # backward as far as defined
            while j >= i:
                prv = self.table[b][self.column(-word[j])]
                if prv < 0:
                    break
                b = self.find(prv)
                j -= 1
            if j < i:
                if f != b:
                    self.merge(f, b)
                return
            if i == j:
                # one gap: close it with a coincidence-aware definition
                self.set_edge(f, self.column(word[i]), b)
                return
            # define a new coset to extend the forward scan
            c = self.new_coset()
            self.set_edge(f, self.column(word[i]), c)
            f = self.find(f)

    def compact(self) -> list[list[int]]:
        live = [c for c in range(len(self.table)) if self.find(c) == c]
        renum = {c: i for i, c in enumerate(live)}
        out = []
        for c in live:
            row = []
            for col in range(self.ncols):
                t = self.table[c][col]
                row.append(renum[self.find(t)] if t >= 0 else -1)
            out.append(row)
        return out


def todd_coxeter(
    p: Presentation,
    subgroup_gens: list[Word] | None = None,
    max_cosets: int = 200_000,
) -> CosetTable:
    """Enumerate cosets of the subgroup generated by subgroup_gens.

    Returns the completed table; its row count is the subgroup index.
    Raises CosetOverflow if more than max_cosets live cosets are ever needed.
    """
    subgroup_gens = subgroup_gens or []
    enum = _Enumerator(p.ngens, max_cosets)
    for w in subgroup_gens:
        enum.scan_and_fill(0, w)
    relators = sorted(p.relators, key=len)
    coset = 0
    while coset < len(enum.table):
        if enum.find(coset) != coset:
            coset += 1
            continue
        for rel in relators:
            enum.scan_and_fill(coset, rel)
            if enum.find(coset) != coset:
                break
        if enum.find(coset) == coset:
            for col in range(enum.ncols):
                if enum.table[coset][col] < 0:
                    c = enum.new_coset()
                    enum.set_edge(coset, col, c)
        coset += 1
    return CosetTable(p.ngens, enum.compact())


def _complete_and_canonical(
    p: Presentation, table: list[list[int]], relators: list[Word]
) -> bool:
    """Full check used at leaves of the low-index search."""
    n = len(table)
    for row in table:
        if any(t < 0 for t in row):
            return False
    for rel in relators:
        for c in range(n):
            cur = c
            for letter in rel:
                col = 2 * (letter - 1) if letter > 0 else 2 * (-letter - 1) + 1
                cur = table[cur][col]
            if cur != c:
                return False
    return True


def _first_seen_order(table: list[list[int]], start: int, ncols: int) -> list[int] | None:
    """Standardized coset order obtained by BFS from start; None if not transitive."""
    order = [start]
    pos = {start: 0}
    i = 0
    while i < len(order):
        row = table[order[i]]
        for col in range(ncols):
            t = row[col]
            if t >= 0 and t not in pos:
                pos[t] = len(order)
                order.append(t)
        i += 1
    if len(order) != len(table):
        return None
    return order


def _relabel(table: list[list[int]], order: list[int]) -> tuple[tuple[int, ...], ...]:
    pos = {c: i for i, c in enumerate(order)}
    return tuple(
        tuple(pos[table[c][col]] if table[c][col] >= 0 else -1 for col in range(len(table[0])))
        for c in order
    )


MAX_LOW_INDEX = 12


def low_index_subgroups(p: Presentation, max_index: int) -> list[CosetTable]:
    """All subgroups of index <= max_index, one table per conjugacy class.

    Backtracking over partial coset tables: repeatedly take the first
    undefined slot, try sending it to each existing coset or one new coset,
    then force all deductions from the relators.  A branch is pruned when a
    relator cannot close or the table would exceed max_index rows.  Canonical
    tables (new cosets appear in first-use order) avoid duplicate labelings;
    conjugates are deduped by standardizing the finished table from every
    start coset and keeping only the lexicographically least representative.
    """
    if max_index > MAX_LOW_INDEX:
        raise ValueError(f"max_index {max_index} exceeds guard {MAX_LOW_INDEX}")
    if max_index < 1:
        return []
    ncols = 2 * p.ngens
    relators = sorted(p.relators, key=len)
    scan_words: list[Word] = []
    for rel in relators:
        scan_words.append(rel)
        inv = invert_word(rel)
        if inv != rel:
            scan_words.append(inv)

    results: list[tuple[tuple[int, ...], ...]] = []
    seen: set[tuple[tuple[int, ...], ...]] = set()

    def force(table: list[list[int]]) -> bool:
        """Propagate relator deductions to a fixpoint.  False on conflict."""
        changed = True
        while changed:
            changed = False
            for rel in scan_words:
                for c in range(len(table)):
                    # scan rel from c; fill iff exactly one gap remains
                    f, i = c, 0
                    while i < len(rel):
                        letter = rel[i]
                        col = 2 * (letter - 1) if letter > 0 else 2 * (-letter - 1) + 1
                        nxt = table[f][col]
                        if nxt < 0:
                            break
                        f = nxt
                        i += 1
                    if i == len(rel):
                        if f != c:
                            return False
                        continue
                    b, j = c, len(rel) - 1
                    while j > i:
                        letter = -rel[j]
                        col = 2 * (letter - 1) if letter > 0 else 2 * (-letter - 1) + 1
                        prv = table[b][col]
                        if prv < 0:
                            break
                        b = prv
                        j -= 1
                    if j == i:
                        letter = rel[i]
                        col = 2 * (letter - 1) if letter > 0 else 2 * (-letter - 1) + 1
                        icol = col ^ 1
                        if table[f][col] < 0 and table[b][icol] < 0:
                            table[f][col] = b
                            table[b][icol] = f
                            changed = True
                        elif table[f][col] >= 0 and table[f][col] != b:
                            return False
                        elif table[b][icol] >= 0 and table[b][icol] != f:
                            return False
        return True

    def first_hole(table: list[list[int]]) -> tuple[int, int] | None:
        for c in range(len(table)):
            for col in range(ncols):
                if table[c][col] < 0:
                    return c, col
        return None

    def recurse(table: list[list[int]]) -> None:
        if not force(table):
            return
        hole = first_hole(table)
        if hole is None:
            tbl = _relabel(table, list(range(len(table))))
            if not _complete_and_canonical(p, [list(r) for r in tbl], relators):
                return
            best = min(
                _relabel([list(r) for r in tbl], order)
                for start in range(len(tbl))
                if (order := _first_seen_order([list(r) for r in tbl], start, ncols))
            )
            if best not in seen:
                seen.add(best)
                results.append(tbl)
            return
        c, col = hole
        icol = col ^ 1
        # try existing cosets whose inverse slot is open
        for target in range(len(table)):
            if table[target][icol] < 0:
                snap = [row[:] for row in table]
                snap[c][col] = target
                snap[target][icol] = c
                recurse(snap)
        if len(table) < max_index:
            snap = [row[:] for row in table] + [[-1] * ncols]
            target = len(table)
            snap[c][col] = target
            snap[target][icol] = c
            recurse(snap)

    recurse([[-1] * ncols])
    results.sort(key=lambda t: (len(t), t))
    return [CosetTable(p.ngens, [list(r) for r in t]) for t in results]
