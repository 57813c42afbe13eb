"""Square-complex gluing data with dihedral symmetry.

A datum is (A, X, phi_A, phi_X, R): two label sets with involutions and a
set R of quadruples (a1, x1, a2, x2), one per square.  Quadruples are stored
as index tuples sorted lexicographically, so equal data compare equal.

The associated square complex lives on four vertices v00, v10, v11, v01 with
edge classes A (v00-v10), X (v10-v11), A' (v11-v01), X' (v01-v00); the square
for (a1, x1, a2, x2) has boundary (a1, x1, a2', x2').  The dihedral action is
returned as two self-maps: sigma (v00<->v01, v10<->v11) and rho
(v00<->v11, v10<->v01).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .complexes import (
    CellMap,
    Complex2D,
    InvalidComplexError,
    ValidationReport,
    make_complex,
    validate,
)
from .presentations import Presentation

Quad = tuple[int, int, int, int]

RIGHT = Fraction(1, 2)


@dataclass(frozen=True)
class Datum:
    a_labels: tuple[str, ...]
    x_labels: tuple[str, ...]
    phi_a: tuple[int, ...]  # images, index-based
    phi_x: tuple[int, ...]
    quads: tuple[Quad, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "quads", tuple(sorted(self.quads)))

    @property
    def d1(self) -> int:
        return len(self.a_labels)

    @property
    def d2(self) -> int:
        return len(self.x_labels)


def sigma_hat(d: Datum, q: Quad) -> Quad:
    a1, x1, a2, x2 = q
    return (d.phi_a[a2], d.phi_x[x1], d.phi_a[a1], d.phi_x[x2])


def rho_hat(q: Quad) -> Quad:
    a1, x1, a2, x2 = q
    return (a2, x2, a1, x1)


def validate_datum(d: Datum) -> ValidationReport:
    failures: list[str] = []
    d1, d2 = d.d1, d.d2
    labels = d.a_labels + d.x_labels
    if len(set(labels)) != len(labels):
        failures.append("A and X labels are not pairwise distinct")
    for name, phi, n in (("phiA", d.phi_a, d1), ("phiX", d.phi_x, d2)):
        if len(phi) != n or sorted(phi) != list(range(n)):
            failures.append(f"{name} is not a permutation")
        elif any(phi[phi[i]] != i for i in range(n)):
            failures.append(f"{name} is not an involution")
    quads = d.quads
    for q in quads:
        a1, x1, a2, x2 = q
        if not (0 <= a1 < d1 and 0 <= a2 < d1 and 0 <= x1 < d2 and 0 <= x2 < d2):
            failures.append(f"quadruple {q} out of range")
            return ValidationReport(False, tuple(failures), (d1, d2, len(quads)))
    if len(set(quads)) != len(quads):
        failures.append("duplicate quadruples in R")
    if len(quads) != d1 * d2:
        failures.append(f"|R| = {len(quads)}, expected d1*d2 = {d1 * d2}")

    def quad_name(q: Quad) -> str:
        return "({},{},{},{})".format(
            d.a_labels[q[0]], d.x_labels[q[1]], d.a_labels[q[2]], d.x_labels[q[3]]
        )

    projections = (
        ("first-two", lambda q: (q[0], q[1])),
        ("middle-two", lambda q: (q[1], q[2])),
        ("last-two", lambda q: (q[2], q[3])),
        ("outer-two", lambda q: (q[3], q[0])),
    )
    for name, proj in projections:
        if len({proj(q) for q in quads}) != d1 * d2:
            failures.append(f"projection to {name} coordinates not bijective")

    if not failures:
        quad_set = set(quads)
        for q in quads:
            for label, image in (("sigma", sigma_hat(d, q)), ("rho", rho_hat(q))):
                if image not in quad_set:
                    failures.append(
                        f"{label}-image of {quad_name(q)} missing from R"
                    )
    return ValidationReport(not failures, tuple(failures), (d1, d2, len(quads)))


# --- datum -> complex ----------------------------------------------------


@dataclass(frozen=True)
class D4Action:
    complex: Complex2D
    sigma: CellMap
    rho: CellMap


VERTEX_ORDER = ("v00", "v10", "v11", "v01")


def validate_action(act: D4Action) -> ValidationReport:
    c = act.complex
    failures: list[str] = []
    for name, m in (("sigma", act.sigma), ("rho", act.rho)):
        if m.source is not c or m.target is not c:
            failures.append(f"{name} is not a self-map of the complex")
            continue
        rep = _total_map_report(name, m, c)
        failures.extend(rep)
    if not failures:
        try:
            idx = [c.vertex_index(v) for v in VERTEX_ORDER]
        except KeyError:
            failures.append("complex lacks the four standard vertices")
            idx = None
        if idx is not None:
            v00, v10, v11, v01 = idx
            sv, rv = act.sigma.vertex_map, act.rho.vertex_map
            if not (sv[v00] == v01 and sv[v01] == v00 and sv[v10] == v11 and sv[v11] == v10):
                failures.append("sigma does not swap v00<->v01, v10<->v11")
            if not (rv[v00] == v11 and rv[v11] == v00 and rv[v10] == v01 and rv[v01] == v10):
                failures.append("rho does not swap v00<->v11, v10<->v01")
        for name, m in (("sigma", act.sigma), ("rho", act.rho)):
            if not _is_involution(m, c):
                failures.append(f"{name} squared is not the identity")
        if not _composite_is_involution(act.rho, act.sigma, c):
            failures.append("(rho sigma) squared is not the identity")
    return ValidationReport(not failures, tuple(failures), validate(c).counts)


def _total_map_report(name: str, m: CellMap, c: Complex2D) -> list[str]:
    from .complexes import validate_cell_map

    out = []
    if (
        len(m.vertex_map) != len(c.vertices)
        or len(m.edge_map) != len(c.edges)
        or len(m.cell_map) != len(c.cells)
    ):
        out.append(f"{name} is not total")
        return out
    rep = validate_cell_map(m, require_angles=True)
    out.extend(f"{name}: {f}" for f in rep.failures)
    return out


def _is_involution(m: CellMap, c: Complex2D) -> bool:
    return (
        all(m.vertex_map[m.vertex_map[i]] == i for i in range(len(c.vertices)))
        and all(m.edge_map[m.edge_map[i]] == i for i in range(len(c.edges)))
        and all(m.cell_map[m.cell_map[i]] == i for i in range(len(c.cells)))
    )


def _composite_is_involution(m2: CellMap, m1: CellMap, c: Complex2D) -> bool:
    def twice(mp2, mp1, i):
        one = mp2[mp1[i]]
        return mp2[mp1[one]]

    return (
        all(twice(m2.vertex_map, m1.vertex_map, i) == i for i in range(len(c.vertices)))
        and all(twice(m2.edge_map, m1.edge_map, i) == i for i in range(len(c.edges)))
        and all(twice(m2.cell_map, m1.cell_map, i) == i for i in range(len(c.cells)))
    )


def datum_to_complex(d: Datum) -> tuple[Complex2D, D4Action]:
    rep = validate_datum(d)
    if not rep:
        raise ValueError("invalid datum: " + "; ".join(rep.failures))
    d1, d2 = d.d1, d.d2
    primed_a = tuple(lab + "'" for lab in d.a_labels)
    primed_x = tuple(lab + "'" for lab in d.x_labels)
    all_edge_labels = d.a_labels + d.x_labels + primed_a + primed_x
    if len(set(all_edge_labels)) != len(all_edge_labels):
        raise ValueError("primed labels collide with existing labels")

    edges = (
        [(lab, "v00", "v10") for lab in d.a_labels]
        + [(lab, "v10", "v11") for lab in d.x_labels]
        + [(lab, "v11", "v01") for lab in primed_a]
        + [(lab, "v01", "v00") for lab in primed_x]
    )

    def edge_of(kind: str, i: int) -> str:
        if kind == "a":
            return d.a_labels[i]
        if kind == "x":
            return d.x_labels[i]
        if kind == "a'":
            return primed_a[i]
        return primed_x[i]

    cells = []
    angles = []
    for k, (a1, x1, a2, x2) in enumerate(d.quads):
        lab = f"s{k + 1}"
        cells.append((lab, (edge_of("a", a1), edge_of("x", x1), edge_of("a'", a2), edge_of("x'", x2))))
        for pos in range(4):
            angles.append((lab, pos, RIGHT))
    if any(lab in set(all_edge_labels) for lab, _ in cells):
        raise ValueError("square labels collide with edge labels")

    c = make_complex(list(VERTEX_ORDER), edges, cells, angles)
    rep = validate(c)
    if not rep:
        raise InvalidComplexError("; ".join(rep.failures))

    pos_of = {q: k for k, q in enumerate(d.quads)}
    na, nx = d1, d2

    def eidx(kind: str, i: int) -> int:
        return {"a": 0, "x": na, "a'": na + nx, "x'": 2 * na + nx}[kind] + i

    sigma_edges = {}
    rho_edges = {}
    for i in range(na):
        sigma_edges[eidx("a", i)] = eidx("a'", d.phi_a[i])
        sigma_edges[eidx("a'", i)] = eidx("a", d.phi_a[i])
        rho_edges[eidx("a", i)] = eidx("a'", i)
        rho_edges[eidx("a'", i)] = eidx("a", i)
    for j in range(nx):
        sigma_edges[eidx("x", j)] = eidx("x", d.phi_x[j])
        sigma_edges[eidx("x'", j)] = eidx("x'", d.phi_x[j])
        rho_edges[eidx("x", j)] = eidx("x'", j)
        rho_edges[eidx("x'", j)] = eidx("x", j)

    sigma = CellMap(
        source=c,
        target=c,
        vertex_map={0: 3, 1: 2, 2: 1, 3: 0},
        edge_map=sigma_edges,
        cell_map={k: pos_of[sigma_hat(d, q)] for k, q in enumerate(d.quads)},
    )
    rho = CellMap(
        source=c,
        target=c,
        vertex_map={0: 2, 1: 3, 2: 0, 3: 1},
        edge_map=rho_edges,
        cell_map={k: pos_of[rho_hat(q)] for k, q in enumerate(d.quads)},
    )
    act = D4Action(complex=c, sigma=sigma, rho=rho)
    arep = validate_action(act)
    if not arep:
        raise AssertionError("constructed action invalid: " + "; ".join(arep.failures))
    return c, act


# --- complex -> datum ----------------------------------------------------


def complex_to_datum(c: Complex2D, act: D4Action) -> Datum:
    arep = validate_action(act)
    if not arep:
        raise ValueError("invalid action: " + "; ".join(arep.failures))
    if len(c.vertices) != 4:
        raise ValueError(f"expected 4 vertices, found {len(c.vertices)}")
    idx = {v: c.vertex_index(v) for v in VERTEX_ORDER}

    def edge_class(ei: int) -> str | None:
        _, p, q = c.edges[ei]
        ends = {p, q}
        if ends == {idx["v00"], idx["v10"]}:
            return "a"
        if ends == {idx["v10"], idx["v11"]}:
            return "x"
        if ends == {idx["v11"], idx["v01"]}:
            return "a'"
        if ends == {idx["v01"], idx["v00"]}:
            return "x'"
        return None

    classes: dict[str, list[int]] = {"a": [], "x": [], "a'": [], "x'": []}
    for ei in range(len(c.edges)):
        cls = edge_class(ei)
        if cls is None:
            raise ValueError(f"edge {c.edges[ei][0]} joins no adjacent vertex pair")
        classes[cls].append(ei)
    d1, d2 = len(classes["a"]), len(classes["x"])
    if len(classes["a'"]) != d1 or len(classes["x'"]) != d2:
        raise ValueError("edge classes are unbalanced")

    a_pos = {ei: k for k, ei in enumerate(classes["a"])}
    x_pos = {ei: k for k, ei in enumerate(classes["x"])}

    # phi_A(a) = (rho sigma)(a), phi_X(x) = sigma(x): both preserve the
    # unprimed classes.
    sig, rho = act.sigma.edge_map, act.rho.edge_map
    phi_a = tuple(a_pos[rho[sig[ei]]] for ei in classes["a"])
    phi_x = tuple(x_pos[sig[ei]] for ei in classes["x"])

    quads = []
    for ci in range(len(c.cells)):
        cycle = c.cells[ci][1]
        if len(cycle) != 4:
            raise ValueError(f"cell {c.cells[ci][0]} is not a square")
        walk = c.cell_vertices(ci)
        # realign so the walk reads (v00, v10, v11, v01)
        target = tuple(idx[v] for v in VERTEX_ORDER)
        aligned = None
        for refl in (False, True):
            w = tuple(reversed(walk)) if refl else walk
            cyc = tuple(reversed(cycle)) if refl else cycle
            # reversed walk (w3, w2, w1, w0) leaves w3 along c2, so the
            # reversed edge list is additionally rotated left by one
            if refl:
                cyc = cyc[1:] + cyc[:1]
            for r in range(4):
                if tuple(w[(r + t) % 4] for t in range(4)) == target:
                    aligned = tuple(cyc[(r + t) % 4] for t in range(4))
                    break
            if aligned:
                break
        if aligned is None:
            raise ValueError(
                f"square {c.cells[ci][0]} does not traverse v00,v10,v11,v01"
            )
        ea, ex, eap, exp_ = aligned
        if edge_class(ea) != "a" or edge_class(ex) != "x" or edge_class(eap) != "a'" or edge_class(exp_) != "x'":
            raise ValueError(
                f"square {c.cells[ci][0]} boundary classes out of order"
            )
        quads.append((a_pos[ea], x_pos[ex], a_pos[rho[eap]], x_pos[rho[exp_]]))

    d = Datum(
        a_labels=tuple(c.edges[ei][0] for ei in classes["a"]),
        x_labels=tuple(c.edges[ei][0] for ei in classes["x"]),
        phi_a=phi_a,
        phi_x=phi_x,
        quads=tuple(quads),
    )
    rep = validate_datum(d)
    if not rep:
        raise ValueError("extracted datum invalid: " + "; ".join(rep.failures))
    return d


# --- extension group ------------------------------------------------------


def extension_presentation(d: Datum) -> Presentation:
    """Generators A then X; relators a phiA(a), x phiX(x), and a1 x1 a2 x2."""
    rep = validate_datum(d)
    if not rep:
        raise ValueError("invalid datum: " + "; ".join(rep.failures))
    d1 = d.d1
    relators: list[tuple[int, ...]] = []
    for i in range(d1):
        relators.append((i + 1, d.phi_a[i] + 1))
    for j in range(d.d2):
        relators.append((d1 + j + 1, d1 + d.phi_x[j] + 1))
    for a1, x1, a2, x2 in d.quads:
        relators.append((a1 + 1, d1 + x1 + 1, a2 + 1, d1 + x2 + 1))
    return Presentation(d1 + d.d2, tuple(relators))


def generator_names(d: Datum) -> tuple[str, ...]:
    return d.a_labels + d.x_labels


# --- text format ----------------------------------------------------------


def write_datum(d: Datum) -> str:
    lines = [f"datum {d.d1} {d.d2}"]
    for i in range(d.d1):
        if d.phi_a[i] > i:
            lines.append(f"phiA {d.a_labels[i]} {d.a_labels[d.phi_a[i]]}")
    for j in range(d.d2):
        if d.phi_x[j] > j:
            lines.append(f"phiX {d.x_labels[j]} {d.x_labels[d.phi_x[j]]}")
    for a1, x1, a2, x2 in d.quads:
        lines.append(
            f"rel {d.a_labels[a1]} {d.x_labels[x1]} {d.a_labels[a2]} {d.x_labels[x2]}"
        )
    return "\n".join(lines) + "\n"


def read_datum(text: str) -> Datum:
    d1 = d2 = None
    phi_a_pairs: list[tuple[str, str]] = []
    phi_x_pairs: list[tuple[str, str]] = []
    rels: list[tuple[str, str, str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if fields[0] == "datum" and len(fields) == 3:
            d1, d2 = int(fields[1]), int(fields[2])
        elif fields[0] == "phiA" and len(fields) == 3:
            phi_a_pairs.append((fields[1], fields[2]))
        elif fields[0] == "phiX" and len(fields) == 3:
            phi_x_pairs.append((fields[1], fields[2]))
        elif fields[0] == "rel" and len(fields) == 5:
            rels.append((fields[1], fields[2], fields[3], fields[4]))
        else:
            raise ValueError(f"line {lineno}: cannot parse {raw!r}")
    if d1 is None:
        raise ValueError("missing datum header line")

    a_labels: list[str] = []
    x_labels: list[str] = []

    def note(lab: str, pool: list[str]) -> None:
        if lab not in pool:
            pool.append(lab)

    for p, q in phi_a_pairs:
        note(p, a_labels)
        note(q, a_labels)
    for p, q in phi_x_pairs:
        note(p, x_labels)
        note(q, x_labels)
    for a1, x1, a2, x2 in rels:
        note(a1, a_labels)
        note(a2, a_labels)
        note(x1, x_labels)
        note(x2, x_labels)
    if len(a_labels) != d1 or len(x_labels) != d2:
        raise ValueError(
            f"header says {d1}+{d2} labels, found {len(a_labels)}+{len(x_labels)}"
        )

    phi_a = list(range(d1))
    for p, q in phi_a_pairs:
        i, j = a_labels.index(p), a_labels.index(q)
        phi_a[i], phi_a[j] = j, i
    phi_x = list(range(d2))
    for p, q in phi_x_pairs:
        i, j = x_labels.index(p), x_labels.index(q)
        phi_x[i], phi_x[j] = j, i
    quads = tuple(
        (a_labels.index(a1), x_labels.index(x1), a_labels.index(a2), x_labels.index(x2))
        for a1, x1, a2, x2 in rels
    )
    return Datum(tuple(a_labels), tuple(x_labels), tuple(phi_a), tuple(phi_x), quads)
