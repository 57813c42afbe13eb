"""Two-dimensional combinatorial cell complexes with exact corner angles.

A complex is a set of labelled vertices, labelled edges (unordered pairs of
distinct vertices), and labelled 2-cells whose boundary is a cyclic sequence
of three or four edge indices.  Corner angles are rational multiples of pi,
stored as ``fractions.Fraction`` in units of pi (so a right angle is 1/2).
Floats are never used.

Corner convention: walking the boundary cycle (e_0, ..., e_{k-1}) of a cell
visits vertices (w_0, ..., w_{k-1}) with e_i joining w_i to w_{i+1 mod k};
corner ``i`` sits at w_i, between e_{i-1 mod k} and e_i.  The walk starts at
whichever endpoint of e_0 makes the cycle close (trying the stored first
endpoint of e_0 first), which makes corner indices deterministic for a given
edge cycle.

Two stored cells are considered equal up to rotation and reflection of their
boundary cycle; nothing here is oriented.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

RIGHT = Fraction(1, 2)
HALF_RIGHT = Fraction(1, 4)


class ComplexFormatError(ValueError):
    """Raised for malformed complex text; carries a 1-based line number."""

    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class InvalidComplexError(ValueError):
    """Raised when a parsed or constructed complex fails validation."""


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    failures: tuple[str, ...]
    counts: tuple[int, int, int]  # (vertices, edges, cells)

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class Complex2D:
    """Immutable 2-complex.

    vertices: labels in storage order.
    edges:    (label, tail index, head index); the pair is unordered but the
              storage order matters for boundary-walk determinism.
    cells:    (label, tuple of edge indices) of length 3 or 4.
    angles:   sorted tuple of (cell index, corner position, Fraction).
    """

    vertices: tuple[str, ...]
    edges: tuple[tuple[str, int, int], ...]
    cells: tuple[tuple[str, tuple[int, ...]], ...]
    angles: tuple[tuple[int, int, Fraction], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "angles", tuple(sorted(self.angles)))

    # -- lookups ---------------------------------------------------------

    def vertex_index(self, label: str) -> int:
        try:
            return self.vertices.index(label)
        except ValueError:
            raise KeyError(f"no vertex {label!r}") from None

    def edge_index(self, label: str) -> int:
        for i, (lab, _, _) in enumerate(self.edges):
            if lab == label:
                return i
        raise KeyError(f"no edge {label!r}")

    def cell_index(self, label: str) -> int:
        for i, (lab, _) in enumerate(self.cells):
            if lab == label:
                return i
        raise KeyError(f"no cell {label!r}")

    def angle_map(self) -> dict[tuple[int, int], Fraction]:
        return {(ci, pos): a for ci, pos, a in self.angles}

    def edges_at(self, v: int) -> list[int]:
        return [i for i, (_, p, q) in enumerate(self.edges) if v in (p, q)]

    def cell_vertices(self, ci: int) -> tuple[int, ...]:
        """Vertex walk of cell ci; entry i is the vertex at corner i."""
        walk = _boundary_walk(self.edges, self.cells[ci][1])
        if walk is None:
            raise InvalidComplexError(
                f"cell {self.cells[ci][0]!r} has no closed boundary walk"
            )
        return walk

    def corners_at(self, v: int) -> list[tuple[int, int]]:
        """All (cell index, corner position) pairs sitting at vertex v."""
        out = []
        for ci in range(len(self.cells)):
            for pos, w in enumerate(self.cell_vertices(ci)):
                if w == v:
                    out.append((ci, pos))
        return out

    def corner_edges(self, ci: int, pos: int) -> tuple[int, int]:
        """The two boundary edges meeting at a corner, as (previous, next)."""
        cycle = self.cells[ci][1]
        return cycle[(pos - 1) % len(cycle)], cycle[pos]


def _boundary_walk(
    edges: Sequence[tuple[str, int, int]], cycle: Sequence[int]
) -> tuple[int, ...] | None:
    """Closed vertex walk of an edge cycle, or None.

    Tries the stored first endpoint of cycle[0] as the start, then the second;
    the first orientation that closes wins.
    """
    _, p0, q0 = edges[cycle[0]]
    for start in (p0, q0):
        cur = start
        seq = [start]
        ok = True
        for ei in cycle:
            _, p, q = edges[ei]
            if cur == p:
                cur = q
            elif cur == q:
                cur = p
            else:
                ok = False
                break
            seq.append(cur)
        if ok and cur == start:
            return tuple(seq[:-1])
    return None


def make_complex(
    vertices: Iterable[str],
    edges: Iterable[tuple[str, str, str]],
    cells: Iterable[tuple[str, Sequence[str]]] = (),
    angles: Mapping[tuple[str, int], Fraction] | Iterable[tuple[str, int, Fraction]] | None = None,
) -> Complex2D:
    """Label-based constructor.

    Angles may be a mapping {(cell label, corner position): angle} or an
    iterable of (cell label, corner position, angle) triples.
    """
    vs = tuple(vertices)
    vidx = {v: i for i, v in enumerate(vs)}
    es = tuple((lab, vidx[a], vidx[b]) for lab, a, b in edges)
    eidx = {lab: i for i, (lab, _, _) in enumerate(es)}
    cs = tuple((lab, tuple(eidx[e] for e in cyc)) for lab, cyc in cells)
    cidx = {lab: i for i, (lab, _) in enumerate(cs)}
    ang: tuple[tuple[int, int, Fraction], ...] = ()
    if angles:
        if isinstance(angles, Mapping):
            triples = [(lab, pos, a) for (lab, pos), a in angles.items()]
        else:
            triples = list(angles)
        ang = tuple((cidx[lab], pos, Fraction(a)) for lab, pos, a in triples)
    return Complex2D(vs, es, cs, ang)


# -- validation ----------------------------------------------------------


def validate(c: Complex2D) -> ValidationReport:
    """Check the structural invariants; never raises."""
    bad: list[str] = []
    nv, ne, nc = len(c.vertices), len(c.edges), len(c.cells)

    if len(set(c.vertices)) != nv:
        bad.append("duplicate vertex labels")
    elabels = [lab for lab, _, _ in c.edges]
    if len(set(elabels)) != ne:
        bad.append("duplicate edge labels")
    clabels = [lab for lab, _ in c.cells]
    if len(set(clabels)) != nc:
        bad.append("duplicate cell labels")

    for i, (lab, p, q) in enumerate(c.edges):
        if not (0 <= p < nv and 0 <= q < nv):
            bad.append(f"edge {lab!r} references a missing vertex")
        elif p == q:
            bad.append(f"edge {lab!r} is a loop")

    angle_map = c.angle_map()
    if len(angle_map) != len(c.angles):
        bad.append("duplicate angle assignments")
    for (ci, pos), a in angle_map.items():
        if not (0 <= ci < nc):
            bad.append(f"angle references missing cell index {ci}")
        elif not (0 <= pos < len(c.cells[ci][1])):
            bad.append(f"angle on cell {c.cells[ci][0]!r} has corner {pos} out of range")
        if a <= 0:
            bad.append(f"non-positive angle at cell index {ci}, corner {pos}")

    for ci, (lab, cycle) in enumerate(c.cells):
        if len(cycle) not in (3, 4):
            bad.append(f"cell {lab!r} has {len(cycle)} edges (want 3 or 4)")
            continue
        if not all(0 <= e < ne for e in cycle):
            bad.append(f"cell {lab!r} references a missing edge")
            continue
        if any(c.edges[e][1] == c.edges[e][2] for e in cycle):
            continue  # loop already reported
        walk = _boundary_walk(c.edges, cycle)
        if walk is None:
            bad.append(f"cell {lab!r} boundary does not close up")
            continue
        if len(cycle) == 3:
            corner_angles = [angle_map.get((ci, pos)) for pos in range(3)]
            if any(a is None for a in corner_angles):
                if any(a is not None for a in corner_angles):
                    bad.append(f"triangle {lab!r} carries a partial angle assignment")
            elif sum(corner_angles) != 1:
                bad.append(
                    f"triangle {lab!r} angles sum to {sum(corner_angles)} (want 1, in units of pi)"
                )

    return ValidationReport(not bad, tuple(bad), (nv, ne, nc))


def euler_characteristic(c: Complex2D) -> int:
    return len(c.vertices) - len(c.edges) + len(c.cells)


# -- cell maps -----------------------------------------------------------


@dataclass
class CellMap:
    """A (possibly partial) cellular map between complexes.

    Maps are index -> index dicts; an entry may be missing when the map is a
    partial assignment such as the 1-skeleton inclusion after subdivision.
    """

    source: Complex2D
    target: Complex2D
    vertex_map: dict[int, int]
    edge_map: dict[int, int]
    cell_map: dict[int, int]

    def edge_label_map(self) -> dict[str, str]:
        return {
            self.source.edges[e][0]: self.target.edges[f][0]
            for e, f in self.edge_map.items()
        }


def _cycle_alignments(
    src_cycle: Sequence[int],
    dst_cycle: Sequence[int],
    edge_map: Mapping[int, int],
) -> list[tuple[bool, int]]:
    """Dihedral alignments (reflected?, offset) making edge_map match cycles.

    Corner i of the source cell corresponds to corner (i + offset) mod k, or
    to (offset - i) mod k when reflected.
    """
    k = len(src_cycle)
    if len(dst_cycle) != k:
        return []
    try:
        mapped = [edge_map[e] for e in src_cycle]
    except KeyError:
        return []
    out = []
    for r in range(k):
        if all(mapped[i] == dst_cycle[(i + r) % k] for i in range(k)):
            out.append((False, r))
        if all(mapped[i] == dst_cycle[(r - 1 - i) % k] for i in range(k)):
            out.append((True, r))
    return out


def validate_cell_map(m: CellMap, require_angles: bool = False) -> ValidationReport:
    """Check that the maps commute with incidence (and optionally angles)."""
    bad: list[str] = []
    src, dst = m.source, m.target

    for e, f in m.edge_map.items():
        _, p, q = src.edges[e]
        if p not in m.vertex_map or q not in m.vertex_map:
            bad.append(f"edge {src.edges[e][0]!r} mapped but an endpoint is not")
            continue
        img = {m.vertex_map[p], m.vertex_map[q]}
        if img != {dst.edges[f][1], dst.edges[f][2]}:
            bad.append(f"edge {src.edges[e][0]!r} image has wrong endpoints")

    src_angles = src.angle_map()
    dst_angles = dst.angle_map()
    for ci, cj in m.cell_map.items():
        src_cycle = src.cells[ci][1]
        dst_cycle = dst.cells[cj][1]
        aligns = _cycle_alignments(src_cycle, dst_cycle, m.edge_map)
        if not aligns:
            bad.append(f"cell {src.cells[ci][0]!r} boundary does not map to its image's")
            continue
        src_walk = src.cell_vertices(ci)
        dst_walk = dst.cell_vertices(cj)
        k = len(src_cycle)

        def corner_image(i: int, align: tuple[bool, int]) -> int:
            refl, r = align
            return (r - i) % k if refl else (i + r) % k

        aligns = [
            al
            for al in aligns
            if all(
                m.vertex_map.get(src_walk[i]) == dst_walk[corner_image(i, al)]
                for i in range(k)
            )
        ]
        if not aligns:
            bad.append(f"cell {src.cells[ci][0]!r} corners do not map to its image's")
            continue
        if require_angles:
            if not any(
                all(
                    src_angles.get((ci, i)) == dst_angles.get((cj, corner_image(i, al)))
                    for i in range(k)
                )
                for al in aligns
            ):
                bad.append(f"cell {src.cells[ci][0]!r} corner angles not preserved")

    return ValidationReport(not bad, tuple(bad), (len(m.vertex_map), len(m.edge_map), len(m.cell_map)))


def corner_image_map(m: CellMap) -> dict[tuple[int, int], tuple[int, int]]:
    """The corner-to-corner map induced by a valid cell map.

    For each mapped cell the first boundary alignment consistent with the
    vertex map is used; cells whose boundary edges are distinct have exactly
    one, so the choice is forced in practice.
    """
    src, dst = m.source, m.target
    out: dict[tuple[int, int], tuple[int, int]] = {}
    for ci, cj in m.cell_map.items():
        src_cycle = src.cells[ci][1]
        dst_cycle = dst.cells[cj][1]
        src_walk = src.cell_vertices(ci)
        dst_walk = dst.cell_vertices(cj)
        k = len(src_cycle)
        chosen = None
        for refl, r in _cycle_alignments(src_cycle, dst_cycle, m.edge_map):
            images = [(r - i) % k if refl else (i + r) % k for i in range(k)]
            if all(m.vertex_map.get(src_walk[i]) == dst_walk[images[i]] for i in range(k)):
                chosen = images
                break
        if chosen is None:
            raise InvalidComplexError(
                f"cell {src.cells[ci][0]!r} has no boundary alignment onto its image"
            )
        for i in range(k):
            out[(ci, i)] = (cj, chosen[i])
    return out


# -- subdivision ---------------------------------------------------------


def subdivide_squares(c: Complex2D) -> tuple[Complex2D, CellMap]:
    """Replace every square by two right triangles across a diagonal.

    The diagonal of a square joins the 2nd and 4th corner of its stored
    boundary walk and inherits the square's label as a new edge label.  The
    two triangles of the i-th square (0-based, counting squares only) are
    named t<2i+1> and t<2i+2>; the first one contains the square's corner 0.
    New corner angles are 1/2 at the old corners kept off the diagonal and
    1/4 at the diagonal's endpoints.  Triangles of the input pass through
    unchanged, keeping their labels and angles.

    Returns the subdivided complex and the inclusion of the old 1-skeleton.
    """
    edge_labels = {lab for lab, _, _ in c.edges}
    angle_map = c.angle_map()

    new_edges = list(c.edges)
    new_cells: list[tuple[str, tuple[int, ...]]] = []
    new_angles: list[tuple[int, int, Fraction]] = []
    cell_map: dict[int, int] = {}
    square_no = 0

    for ci, (lab, cycle) in enumerate(c.cells):
        if len(cycle) == 3:
            pos = len(new_cells)
            new_cells.append((lab, cycle))
            cell_map[ci] = pos
            for p in range(3):
                a = angle_map.get((ci, p))
                if a is not None:
                    new_angles.append((pos, p, a))
            continue
        walk = c.cell_vertices(ci)
        w0, w1, w2, w3 = walk
        if w1 == w3:
            raise InvalidComplexError(
                f"square {lab!r} has coincident opposite corners; its diagonal would be a loop"
            )
        if lab in edge_labels:
            raise InvalidComplexError(
                f"square label {lab!r} already names an edge; cannot name its diagonal"
            )
        d = len(new_edges)
        new_edges.append((lab, w1, w3))
        e0, e1, e2, e3 = cycle
        for tri_no, (tri_cycle, right_at) in enumerate(
            (((e3, e0, d), w0), ((e2, e1, d), w2))
        ):
            pos = len(new_cells)
            new_cells.append((f"t{2 * square_no + 1 + tri_no}", tuple(tri_cycle)))
            tri_walk = _boundary_walk(new_edges, tri_cycle)
            assert tri_walk is not None
            for p, w in enumerate(tri_walk):
                new_angles.append((pos, p, RIGHT if w == right_at else HALF_RIGHT))
        square_no += 1

    out = Complex2D(c.vertices, tuple(new_edges), tuple(new_cells), tuple(new_angles))
    bad = validate(out)
    if not bad.ok:
        raise InvalidComplexError("; ".join(bad.failures))
    inclusion = CellMap(
        source=c,
        target=out,
        vertex_map={i: i for i in range(len(c.vertices))},
        edge_map={i: i for i in range(len(c.edges))},
        cell_map={},
    )
    return out, inclusion


# -- text format ---------------------------------------------------------


def write_complex(c: Complex2D) -> str:
    """Serialize in the line-oriented text format; inverse of read_complex."""
    lines = []
    for v in c.vertices:
        lines.append(f"vertex {v}")
    for lab, p, q in c.edges:
        lines.append(f"edge {lab} {c.vertices[p]} {c.vertices[q]}")
    for lab, cycle in c.cells:
        names = " ".join(c.edges[e][0] for e in cycle)
        lines.append(f"cell {lab} {names}")
    for ci, pos, a in c.angles:
        lines.append(f"angle {c.cells[ci][0]} {pos} {a.numerator}/{a.denominator}")
    return "\n".join(lines) + "\n"


def read_complex(text: str) -> Complex2D:
    """Parse the text format and validate the result.

    Raises ComplexFormatError with a line number on malformed input and
    InvalidComplexError when the parsed complex violates an invariant.
    """
    vertices: list[str] = []
    vidx: dict[str, int] = {}
    edges: list[tuple[str, int, int]] = []
    eidx: dict[str, int] = {}
    cells: list[tuple[str, tuple[int, ...]]] = []
    cidx: dict[str, int] = {}
    angles: list[tuple[int, int, Fraction]] = []

    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind, args = parts[0], parts[1:]
        if kind == "vertex":
            if len(args) != 1:
                raise ComplexFormatError(no, "vertex takes exactly one label")
            if args[0] in vidx:
                raise ComplexFormatError(no, f"duplicate vertex {args[0]!r}")
            vidx[args[0]] = len(vertices)
            vertices.append(args[0])
        elif kind == "edge":
            if len(args) != 3:
                raise ComplexFormatError(no, "edge takes a label and two vertices")
            lab, a, b = args
            if lab in eidx:
                raise ComplexFormatError(no, f"duplicate edge {lab!r}")
            if a not in vidx or b not in vidx:
                raise ComplexFormatError(no, f"edge {lab!r} references an unknown vertex")
            eidx[lab] = len(edges)
            edges.append((lab, vidx[a], vidx[b]))
        elif kind == "cell":
            if len(args) not in (4, 5):
                raise ComplexFormatError(no, "cell takes a label and 3 or 4 edges")
            lab = args[0]
            if lab in cidx:
                raise ComplexFormatError(no, f"duplicate cell {lab!r}")
            try:
                cycle = tuple(eidx[e] for e in args[1:])
            except KeyError as exc:
                raise ComplexFormatError(no, f"cell {lab!r} references unknown edge {exc.args[0]!r}")
            cidx[lab] = len(cells)
            cells.append((lab, cycle))
        elif kind == "angle":
            if len(args) != 3:
                raise ComplexFormatError(no, "angle takes a cell, a corner index, and num/den")
            lab, pos_s, frac_s = args
            if lab not in cidx:
                raise ComplexFormatError(no, f"angle references unknown cell {lab!r}")
            try:
                pos = int(pos_s)
            except ValueError:
                raise ComplexFormatError(no, f"bad corner index {pos_s!r}")
            if "/" not in frac_s:
                raise ComplexFormatError(no, "angle must be written num/den (units of pi)")
            num_s, den_s = frac_s.split("/", 1)
            try:
                frac = Fraction(int(num_s), int(den_s))
            except (ValueError, ZeroDivisionError):
                raise ComplexFormatError(no, f"bad angle fraction {frac_s!r}")
            angles.append((cidx[lab], pos, frac))
        else:
            raise ComplexFormatError(no, f"unknown directive {kind!r}")

    c = Complex2D(tuple(vertices), tuple(edges), tuple(cells), tuple(angles))
    report = validate(c)
    if not report.ok:
        raise InvalidComplexError("; ".join(report.failures))
    return c
