"""Command-line driver.

Subcommands cover every operation: link certification, fundamental group
presentations and their invariants, coset enumeration, quotient counting,
cover balls, rigidity, the completion search, square-complex data, and the
full `verify-paper` certification suite.

Exit codes: 0 success, 1 check failure, 2 usage or bad input, 3 budget or
table overflow.  `--format structured` selects line-oriented key=value
output that is byte-stable across runs (no timings); builtin complexes are
addressable as `builtin:S`, `builtin:T0`, `builtin:T`.
"""

from __future__ import annotations

import argparse
import os
import sys

from .builtins import builtin, example_datum
from .complexes import (
    ComplexFormatError,
    InvalidComplexError,
    read_complex,
    write_complex,
)
from .coset import CosetOverflow, todd_coxeter
from .cover import develop_ball, rigidity_check
from .datum import datum_to_complex, read_datum, validate_datum, write_datum
from .links import certify_building_links
from .permgroups import MAX_EPI_GENERATORS, catalog, epimorphism_count, psl2
from .presentations import (
    BudgetExceeded,
    abelianization,
    pi1_presentation,
    read_presentation,
    tietze_simplify,
    write_presentation,
)
from .report import CATALOG_NAMES, PSL_FIELDS, format_report, verify_paper
from .search import (
    SearchBudgetExceeded,
    SearchStats,
    complete,
    read_search_spec,
)

BUILTIN_PREFIX = "builtin:"


class UsageError(Exception):
    pass


def worker_cap() -> int:
    """Upper bound on worker counts, from LATTICEFORGE_THREADS.

    Every current algorithm is sequential, so the cap is advisory; it is
    parsed here so misconfiguration surfaces as a usage error.
    """
    raw = os.environ.get("LATTICEFORGE_THREADS")
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"LATTICEFORGE_THREADS={raw!r} is not an integer")
    if n < 1:
        raise UsageError("LATTICEFORGE_THREADS must be at least 1")
    return n


def _read_text(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def load_complex(path: str):
    """A complex from a file path or a `builtin:` pseudo-path."""
    if path.startswith(BUILTIN_PREFIX):
        name = path[len(BUILTIN_PREFIX) :]
        try:
            return builtin(name)
        except KeyError:
            raise UsageError(f"unknown builtin complex {name!r}") from None
    try:
        return read_complex(_read_text(path))
    except (ComplexFormatError, InvalidComplexError) as e:
        raise UsageError(f"{path}: {e}") from None


def load_presentation(path: str):
    """A presentation from a file, or pi1 of a builtin complex."""
    if path.startswith(BUILTIN_PREFIX):
        return pi1_presentation(load_complex(path))
    try:
        return read_presentation(_read_text(path))
    except ValueError as e:
        raise UsageError(f"{path}: {e}") from None


def load_datum(path: str):
    if path == BUILTIN_PREFIX + "S":
        return example_datum()
    if path.startswith(BUILTIN_PREFIX):
        raise UsageError("only builtin:S names a builtin datum")
    try:
        return read_datum(_read_text(path))
    except ValueError as e:
        raise UsageError(f"{path}: {e}") from None


# -- subcommands ---------------------------------------------------------


def cmd_links(args) -> int:
    c = load_complex(args.complex)
    cert = certify_building_links(c)
    for label in c.vertices:
        kind = cert.vertex_types[label]
        if args.format == "structured":
            print(f"vertex={label} type={kind}")
        else:
            print(f"{label} {kind}")
    return 0 if cert.ok else 1


def cmd_pi1(args) -> int:
    p = pi1_presentation(load_complex(args.complex))
    if args.simplify:
        p = tietze_simplify(p)
    sys.stdout.write(write_presentation(p))
    return 0


def _abelian_str(torsion: tuple[int, ...], rank: int) -> str:
    if not torsion and rank == 0:
        return "trivial"
    parts = [f"Z/{d}" for d in torsion]
    if rank == 1:
        parts.append("Z")
    elif rank > 1:
        parts.append(f"Z^{rank}")
    return " x ".join(parts)


def cmd_abel(args) -> int:
    torsion, rank = abelianization(load_presentation(args.presentation))
    s = _abelian_str(torsion, rank)
    if args.format == "structured":
        print(f"abelianization={s.replace(' ', '')}")
    else:
        print(s)
    return 0


def cmd_tc(args) -> int:
    p = load_presentation(args.presentation)
    sub = []
    for w in args.subgroup or []:
        try:
            sub.append(tuple(int(x) for x in w.split()))
        except ValueError:
            raise UsageError(f"bad subgroup word {w!r}") from None
    table = todd_coxeter(p, sub, max_cosets=args.max_cosets)
    if args.format == "structured":
        print(f"index={table.num_cosets}")
    else:
        print(f"index {table.num_cosets}")
    return 0


def cmd_quotients(args) -> int:
    p = load_presentation(args.presentation)
    if p.ngens > MAX_EPI_GENERATORS:
        # counts are invariants of the group, not the presentation
        p = tietze_simplify(p, allow_growth=True)
    if p.ngens > MAX_EPI_GENERATORS:
        raise UsageError(
            f"presentation keeps {p.ngens} generators after simplification;"
            f" the counter handles at most {MAX_EPI_GENERATORS}"
        )
    if args.catalog == "small":
        targets = [(g.name, g) for g in catalog(list(CATALOG_NAMES))]
    else:
        targets = [(f"PSL(2,{q})", psl2(q)) for q in PSL_FIELDS]
    for name, g in targets:
        n = epimorphism_count(p, g)
        if args.format == "structured":
            print(f"group={name} count={n}")
        else:
            print(f"{name} {n}")
    return 0


def _ball_text(ball) -> str:
    c = ball.complex
    base = ball.projection.target
    lines = [write_complex(c).rstrip("\n")]
    for i, lab in enumerate(c.vertices):
        lines.append(f"# proj vertex {lab} {base.vertices[ball.projection.vertex_map[i]]}")
    for i, (lab, _, _) in enumerate(c.edges):
        lines.append(f"# proj edge {lab} {base.edges[ball.projection.edge_map[i]][0]}")
    for i, (lab, _) in enumerate(c.cells):
        lines.append(f"# proj cell {lab} {base.cells[ball.projection.cell_map[i]][0]}")
    return "\n".join(lines) + "\n"


def cmd_ball(args) -> int:
    c = load_complex(args.complex)
    if args.center not in c.vertices:
        raise UsageError(f"no vertex {args.center!r} in the complex")
    ball = develop_ball(c, args.center, args.radius)
    text = _ball_text(ball)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(
            f"wrote {args.out}: {len(ball.complex.vertices)} vertices,"
            f" {len(ball.complex.edges)} edges, {len(ball.complex.cells)} cells"
        )
    else:
        sys.stdout.write(text)
    return 0


def cmd_rigidity(args) -> int:
    c = load_complex(args.complex)
    if args.center not in c.vertices:
        raise UsageError(f"no vertex {args.center!r} in the complex")
    res = rigidity_check(c, args.center, args.radius, args.fix, time_budget=args.budget)
    if args.format == "structured":
        print(f"rigid={'true' if res else 'false'}")
    else:
        print(f"rigid {'true' if res else 'false'}")
    return 0 if res else 1


def cmd_search(args) -> int:
    spec = read_search_spec(
        _read_text(args.spec), base_dir=os.path.dirname(args.spec) or "."
    )
    os.makedirs(args.out_dir, exist_ok=True)
    stats = SearchStats()
    code = 0
    n = 0
    try:
        for comp in complete(spec, stats):
            n += 1
            path = os.path.join(args.out_dir, f"completion-{n:03d}.complex2")
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(write_complex(comp.complex))
            print(f"solution {n}: {path}")
    except SearchBudgetExceeded:
        code = 3
    footer = (
        f"nodes={stats.nodes} prunes={stats.prunes} emitted={stats.emitted}"
        f" symmetry_skips={stats.symmetry_skips} max_depth={stats.max_depth}"
    )
    if args.format != "structured":
        footer += f" elapsed={stats.elapsed:.2f}s"
        if code == 3:
            footer += " (budget exhausted)"
    print(footer)
    return code


def cmd_datum(args) -> int:
    d = load_datum(args.datum)
    rep = validate_datum(d)
    if args.format == "structured":
        print(
            f"d1={d.d1} d2={d.d2} squares={len(d.quads)}"
            f" valid={'true' if rep.ok else 'false'}"
        )
    else:
        print(
            f"datum over {d.d1}+{d.d2} letters with {len(d.quads)} squares:"
            f" {'valid' if rep.ok else 'INVALID'}"
        )
    if not rep.ok:
        for f in rep.failures:
            print(f"  {f}" if args.format != "structured" else f"failure={f}")
        return 1
    if args.complex:
        c, _ = datum_to_complex(d)
        sys.stdout.write(write_complex(c))
    if args.presentation:
        from .datum import extension_presentation, generator_names

        p = extension_presentation(d)
        print("# generators: " + " ".join(generator_names(d)))
        sys.stdout.write(write_presentation(p))
    if args.write:
        sys.stdout.write(write_datum(d))
    return 0


def cmd_verify_paper(args) -> int:
    report = verify_paper(
        skip=tuple(args.skip or ()), rigidity_budget=args.rigidity_budget
    )
    sys.stdout.write(format_report(report, args.format))
    return report.exit_code


# -- parser --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format",
        choices=("text", "structured"),
        default="text",
        help="output style; structured is line-oriented key=value",
    )
    common.add_argument(
        "--seed",
        type=int,
        default=None,
        help="accepted and ignored (reserved; all commands are deterministic)",
    )

    ap = argparse.ArgumentParser(
        prog="latticeforge",
        description="Certify and search non-positively curved triangle complexes.",
        epilog="Complexes may be files or builtin:S, builtin:T0, builtin:T."
        " LATTICEFORGE_THREADS caps worker counts.",
    )
    sub = ap.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("links", parents=[common], help="classify every vertex link")
    p.add_argument("complex")
    p.set_defaults(fn=cmd_links)

    p = sub.add_parser("pi1", parents=[common], help="fundamental group presentation")
    p.add_argument("complex")
    p.add_argument("--simplify", action="store_true")
    p.set_defaults(fn=cmd_pi1)

    p = sub.add_parser("abel", parents=[common], help="abelianization of a presentation")
    p.add_argument("presentation")
    p.set_defaults(fn=cmd_abel)

    p = sub.add_parser("tc", parents=[common], help="coset enumeration index")
    p.add_argument("presentation")
    p.add_argument("--max-cosets", type=int, default=200_000)
    p.add_argument(
        "--subgroup",
        action="append",
        metavar="WORD",
        help="subgroup generator as signed indices, e.g. '1 2 -1'; repeatable",
    )
    p.set_defaults(fn=cmd_tc)

    p = sub.add_parser("quotients", parents=[common], help="epimorphism counts")
    p.add_argument("presentation")
    p.add_argument("--catalog", choices=("small", "psl2"), default="small")
    p.set_defaults(fn=cmd_quotients)

    p = sub.add_parser("ball", parents=[common], help="develop a universal-cover ball")
    p.add_argument("complex")
    p.add_argument("--center", required=True)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_ball)

    p = sub.add_parser("rigidity", parents=[common], help="ball rigidity check")
    p.add_argument("complex")
    p.add_argument("--center", required=True)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--fix", type=int, required=True)
    p.add_argument("--budget", type=float, default=None, help="wall-clock seconds")
    p.set_defaults(fn=cmd_rigidity)

    p = sub.add_parser("search", parents=[common], help="prescribed-link completion search")
    p.add_argument("--spec", required=True)
    p.add_argument("--out-dir", default=".")
    p.set_defaults(fn=cmd_search)

    p = sub.add_parser("datum", parents=[common], help="inspect a square-complex datum")
    p.add_argument("datum")
    p.add_argument("--complex", action="store_true", help="emit the square complex")
    p.add_argument(
        "--presentation", action="store_true", help="emit the extension presentation"
    )
    p.add_argument("--write", action="store_true", help="echo in the datum text format")
    p.set_defaults(fn=cmd_datum)

    p = sub.add_parser(
        "verify-paper", parents=[common], help="run the full certification suite"
    )
    p.add_argument(
        "--skip",
        action="append",
        metavar="CHECK",
        help="report a named check as SKIPPED instead of running it",
    )
    p.add_argument(
        "--rigidity-budget",
        type=float,
        default=300.0,
        metavar="SECONDS",
        help="wall-clock budget for the rigidity check (default 300)",
    )
    p.set_defaults(fn=cmd_verify_paper)
    return ap


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors and 0 on --help; pass both through
        return int(e.code or 0)
    try:
        worker_cap()
        return args.fn(args)
    except UsageError as e:
        print(f"latticeforge: {e}", file=sys.stderr)
        return 2
    except (BudgetExceeded, CosetOverflow) as e:
        print(f"latticeforge: {e}", file=sys.stderr)
        return 3


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
