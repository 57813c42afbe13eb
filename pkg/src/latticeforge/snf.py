"""Smith normal form over the integers, exact arithmetic only."""

from __future__ import annotations


def smith_diagonal(matrix: list[list[int]]) -> list[int]:
    """Nonzero diagonal of the Smith normal form of an integer matrix.

    Returns [d_1, ..., d_r] with d_i > 0, d_i | d_{i+1}, r = rank.  The input
    is not modified.  Plain Python integers throughout; no modular shortcuts.
    """
    m = [row[:] for row in matrix]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    diag: list[int] = []
    t = 0  # top-left corner of the active block

    def pivot_pos() -> tuple[int, int] | None:
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                v = m[i][j]
                if v and (best is None or abs(v) < abs(m[best[0]][best[1]])):
                    best = (i, j)
        return best

    while True:
        pos = pivot_pos()
        if pos is None:
            break
        pi, pj = pos
        m[t], m[pi] = m[pi], m[t]
        for row in m:
            row[t], row[pj] = row[pj], row[t]

        # Clear row and column t by Euclidean steps; the pivot shrinks, so
        # this terminates.
        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, rows):
                if m[i][t]:
                    q = m[i][t] // m[t][t]
                    for j in range(t, cols):
                        m[i][j] -= q * m[t][j]
                    if m[i][t]:
                        m[t], m[i] = m[i], m[t]
                        dirty = True
            for j in range(t + 1, cols):
                if m[t][j]:
                    q = m[t][j] // m[t][t]
                    for i in range(t, rows):
                        m[i][j] -= q * m[i][t]
                    if m[t][j]:
                        for i in range(t, rows):
                            m[i][t], m[i][j] = m[i][j], m[i][t]
                        dirty = True

        # Divisibility: fold any entry the pivot misses back into column t.
        offender = None
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if m[i][j] % m[t][t]:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            for j in range(t, cols):
                m[t][j] += m[offender][j]
            continue

        diag.append(abs(m[t][t]))
        t += 1
        if t == rows or t == cols:
            break

    # Any remaining nonzero block is impossible: the loop above only exits
    # via pivot exhaustion or running out of rows/columns after clearing.
    for i in range(t, rows):
        for j in range(t, cols):
            if m[i][j]:
                raise AssertionError("nonzero residue after elimination")
    return diag
