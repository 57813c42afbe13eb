"""Certification reports: named checks with witnesses, and the full suite.

verify_paper() re-runs every locally checkable claim about the builtin
complexes in a fixed order and returns a Report whose structured rendering
is byte-stable across runs (no timestamps or timings inside check bodies).
"""

from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass, field

from .builtins import (
    builtin,
    embedding_t0_to_t,
    example_datum,
    two_generator_presentation,
)
from .complexes import subdivide_squares, validate, validate_cell_map, write_complex
from .cover import automorphism_order, rigidity_check
from .datum import extension_presentation, validate_datum, write_datum
from .links import certify_building_links, local_isometry_check
from .morphisms import find_isomorphism
from .permgroups import catalog, epimorphism_count, psl2
from .presentations import (
    BudgetExceeded,
    abelianization,
    pi1_presentation,
    tietze_simplify,
    write_presentation,
)

# statuses a check can end in; FAIL always carries a witness
PASS = "PASS"
FAIL = "FAIL"
SKIPPED = "SKIPPED"
BUDGET = "BUDGET"

CATALOG_NAMES = ("C2", "C3", "S3", "A4", "S4", "A5", "PSL(2,7)")
PSL_FIELDS = (2, 3, 4, 5, 7, 8, 9, 11, 13)

# verify-paper runs rigidity under this wall-clock budget by default; the
# radius-3 search is the one check that can legitimately outlast a desktop
# session, and a BUDGET status (exit 3) keeps the report deterministic.
RIGIDITY_DEFAULT_BUDGET = 300.0


@dataclass
class Check:
    name: str
    status: str
    witness: str = ""  # non-empty whenever status is FAIL
    detail: str = ""


@dataclass
class Report:
    command: str
    inputs: str  # digest of the canonical serializations of all inputs
    checks: list[Check] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def ok(self) -> bool:
        return all(c.status != FAIL for c in self.checks)

    @property
    def exit_code(self) -> int:
        if any(c.status == FAIL for c in self.checks):
            return 1
        if any(c.status == BUDGET for c in self.checks):
            return 3
        return 0


def digest(*parts: str) -> str:
    h = hashlib.sha256()
    for p in parts:
        h.update(p.encode())
        h.update(b"\0")
    return "sha256:" + h.hexdigest()[:16]


def format_report(r: Report, fmt: str = "text") -> str:
    if fmt == "structured":
        lines = [f"command={r.command}", f"inputs={r.inputs}"]
        for c in r.checks:
            line = f"check={c.name} status={c.status}"
            if c.detail:
                line += f" detail={c.detail}"
            if c.witness:
                line += f" witness={c.witness}"
            lines.append(line)
        lines.append(f"result={'PASS' if r.ok else 'FAIL'}")
        return "\n".join(lines) + "\n"
    width = max((len(c.name) for c in r.checks), default=0)
    lines = [f"command: {r.command}", f"inputs:  {r.inputs}"]
    for c in r.checks:
        line = f"  {c.name:<{width}}  {c.status}"
        if c.detail:
            line += f"  ({c.detail})"
        lines.append(line)
        if c.witness:
            lines.append(f"  {'':<{width}}  witness: {c.witness}")
    lines.append(f"wall time: {r.wall_time:.2f}s")
    lines.append(f"result: {'PASS' if r.ok else 'FAIL'}")
    return "\n".join(lines) + "\n"


def _run(report: Report, name: str, skip, fn) -> None:
    """Append one check, turning exceptions into FAIL with their message."""
    if name in skip:
        report.checks.append(Check(name, SKIPPED))
        return
    try:
        report.checks.append(fn(name))
    except BudgetExceeded:
        report.checks.append(
            Check(name, BUDGET, detail="budget exhausted before completion")
        )
    except Exception as e:  # noqa: BLE001 - a report must survive any check
        report.checks.append(Check(name, FAIL, witness=f"{type(e).__name__}: {e}"))


def verify_paper(
    skip: tuple[str, ...] = (),
    rigidity_budget: float | None = RIGIDITY_DEFAULT_BUDGET,
) -> Report:
    """Run the full certification suite over the builtin complexes.

    Check order: validation of S, T0, T; the subdivision isomorphism; the
    example datum and its extension presentation; link certification of T;
    local isometry of the embedding T0 -> T; triviality of the abelianized
    fundamental group; the quotient catalog; the automorphism group order;
    and radius-3 rigidity.  Any name in skip is reported SKIPPED.
    """
    start = time.perf_counter()
    S = builtin("S")
    T0 = builtin("T0")
    T = builtin("T")
    d = example_datum()
    p2 = two_generator_presentation()
    report = Report(
        command="verify-paper",
        inputs=digest(
            write_complex(S),
            write_complex(T0),
            write_complex(T),
            write_datum(d),
            write_presentation(p2),
        ),
    )

    def check_validate(c, name):
        rep = validate(c)
        if rep.ok:
            v, e, f = rep.counts
            return Check(name, PASS, detail=f"{v}v/{e}e/{f}c")
        return Check(name, FAIL, witness=rep.failures[0])

    _run(report, "validate-S", skip, lambda n: check_validate(S, n))
    _run(report, "validate-T0", skip, lambda n: check_validate(T0, n))
    _run(report, "validate-T", skip, lambda n: check_validate(T, n))

    def check_subdivision(name):
        sub, _ = subdivide_squares(S)
        if find_isomorphism(sub, T0) is None:
            return Check(
                name, FAIL, witness="subdivided square complex is not isomorphic"
            )
        return Check(name, PASS, detail="subdivision isomorphic")

    _run(report, "subdivision", skip, check_subdivision)

    def check_datum(name):
        rep = validate_datum(d)
        if not rep.ok:
            return Check(name, FAIL, witness=rep.failures[0])
        p = extension_presentation(d)
        if p.ngens != 6 or len(p.relators) != 15:
            return Check(
                name,
                FAIL,
                witness=f"extension presentation has {p.ngens} generators"
                f" and {len(p.relators)} relators",
            )
        return Check(name, PASS, detail="6 generators, 15 relators")

    _run(report, "datum", skip, check_datum)

    def check_links(name):
        cert = certify_building_links(T)
        if not cert.ok:
            return Check(name, FAIL, witness=cert.failures[0])
        kinds = sorted(cert.vertex_types.values())
        a = kinds.count("A1xA1")
        c2 = kinds.count("C2")
        return Check(name, PASS, detail=f"{a} A1xA1, {c2} C2")

    _run(report, "links", skip, check_links)

    def check_local_isometry(name):
        m = embedding_t0_to_t()
        rep = validate_cell_map(m, require_angles=True)
        if not rep.ok:
            return Check(name, FAIL, witness=rep.failures[0])
        if not local_isometry_check(m):
            return Check(name, FAIL, witness="a sublink is not pi-convex")
        return Check(name, PASS, detail="embedding is a local isometry")

    _run(report, "local-isometry", skip, check_local_isometry)

    def check_abelianization(name):
        torsion, rank = abelianization(pi1_presentation(T))
        if torsion or rank:
            return Check(
                name, FAIL, witness=f"abelianization {torsion} rank {rank}"
            )
        return Check(name, PASS, detail="trivial")

    _run(report, "abelianization", skip, check_abelianization)

    def check_quotients(name):
        derived = tietze_simplify(pi1_presentation(T), allow_growth=True)
        for g in catalog(list(CATALOG_NAMES)):
            a = epimorphism_count(p2, g)
            b = epimorphism_count(derived, g)
            if a != b:
                return Check(
                    name,
                    FAIL,
                    witness=f"{g.name}: {a} from the reference presentation,"
                    f" {b} from the derived one",
                )
        for q in PSL_FIELDS:
            n = epimorphism_count(p2, psl2(q))
            if n != 0:
                return Check(
                    name, FAIL, witness=f"{n} epimorphisms onto PSL(2,{q})"
                )
        return Check(
            name,
            PASS,
            detail=f"catalog counts agree; no PSL(2,q) quotient for q in"
            f" {{{','.join(str(q) for q in PSL_FIELDS)}}}",
        )

    _run(report, "quotients", skip, check_quotients)

    def check_automorphisms(name):
        order = automorphism_order(T)
        if order != 2:
            return Check(name, FAIL, witness=f"group order {order}")
        return Check(name, PASS, detail="order 2")

    _run(report, "automorphisms", skip, check_automorphisms)

    def check_rigidity(name):
        if rigidity_check(T, "v", 3, 2, time_budget=rigidity_budget):
            return Check(name, PASS, detail="radius-2 ball fixed pointwise")
        return Check(
            name,
            FAIL,
            witness="an automorphism of the radius-3 ball moves the"
            " radius-2 subcomplex",
        )

    _run(report, "rigidity", skip, check_rigidity)

    report.wall_time = time.perf_counter() - start
    return report
