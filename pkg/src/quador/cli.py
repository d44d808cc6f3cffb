"""Command-line interface.

Subcommands: ``verify`` (invariant suite + JSON report), ``mesh``
(STL/OBJ isosurface export), ``conics`` (tangency curves as OBJ
polylines), ``sample`` (point membership CSV) and ``classify``
(quadric/conic class table).

Exit codes: 0 success, 1 usage or validation failure, 2 I/O failure,
3 invariant failure from ``verify``.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

import numpy as np

from .algebra import classify_quadric
from .conics import ConicClass, sample_conic
from .errors import ParseError, QuadorError, ValidationError
from .fillet import PLANE_PAIR_CLASSES
from .latticefile import load_lattice
from .solid import auto_bounds, build_assembly, classify_point, marching_cubes
from .verify import run_verify
from .writers import format_value, write_obj_mesh, write_obj_polylines, write_stl

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_INVARIANT = 3


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; our contract reserves 2 for I/O.
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="quador", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[], help="run the invariant suite")
    p.add_argument("lattice", help="lattice JSON file")
    p.add_argument("--tol", type=float, default=1e-9, help="base tolerance")
    p.add_argument("--samples", type=int, default=10000, help="random sample count")
    p.add_argument("--seed", type=int, default=0, help="random seed")
    p.add_argument("--report", help="write the JSON report here")

    p = sub.add_parser("mesh", help="polygonize the solid and write STL/OBJ")
    p.add_argument("lattice")
    p.add_argument("--resolution", type=int, default=64, help="cells per axis (2..1024)")
    p.add_argument(
        "--bounds",
        default="auto",
        help="'auto' or x0,y0,z0,x1,y1,z1",
    )
    p.add_argument("--format", choices=("stl", "obj"), default="stl")
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("conics", help="export fillet tangency conics as OBJ polylines")
    p.add_argument("lattice")
    p.add_argument("--samples-per-curve", type=int, default=128)
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("sample", help="classify points from a CSV or grid")
    p.add_argument("lattice")
    p.add_argument("--points", help="CSV of x,y,z query points")
    p.add_argument("--grid", help="nx,ny,nz uniform grid over auto bounds")
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("classify", help="print quadric classes of beams and fillets")
    p.add_argument("lattice")
    return parser


def _load(path: str):
    try:
        text = Path(path).read_bytes()
    except OSError as exc:
        print(f"quador: cannot read {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_IO) from exc
    return load_lattice(text)


def _cmd_verify(args) -> int:
    lattice = _load(args.lattice)
    report = run_verify(lattice, tol=args.tol, samples=args.samples, seed=args.seed)
    if args.report:
        try:
            Path(args.report).write_text(report.to_json(), encoding="utf-8")
        except OSError as exc:
            print(f"quador: cannot write {args.report}: {exc}", file=sys.stderr)
            return EXIT_IO
    for check in report.checks:
        measured = "" if check.measured is None else f" measured={check.measured:.3e}"
        detail = f" ({check.detail})" if check.detail else ""
        print(f"[{check.status.upper():4s}] {check.name}{measured}{detail}")
    summary = report.summary()
    print(
        f"{summary['pass']} passed, {summary['fail']} failed, {summary['warn']} warnings"
    )
    return EXIT_OK if report.passed else EXIT_INVARIANT


def _parse_bounds(assembly, text: str):
    if text == "auto":
        return auto_bounds(assembly)
    parts = text.split(",")
    if len(parts) != 6:
        raise SystemExit(EXIT_USAGE)
    vals = [float(v) for v in parts]
    return np.array(vals[:3]), np.array(vals[3:])


def _cmd_mesh(args) -> int:
    if not 2 <= args.resolution <= 1024:
        print(
            f"quador: resolution must be in [2, 1024], got {args.resolution}",
            file=sys.stderr,
        )
        return EXIT_USAGE
    lattice = _load(args.lattice)
    assembly = build_assembly(lattice)
    try:
        bounds = _parse_bounds(assembly, args.bounds)
    except ValueError:
        print(f"quador: bad --bounds {args.bounds!r}", file=sys.stderr)
        return EXIT_USAGE
    mesh = marching_cubes(assembly, bounds, args.resolution)
    try:
        if args.format == "stl":
            count = write_stl(mesh, args.output)
        else:
            count = write_obj_mesh(mesh, args.output)
    except OSError as exc:
        print(f"quador: cannot write {args.output}: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"{count} triangles -> {args.output}")
    return EXIT_OK


def _cmd_conics(args) -> int:
    lattice = _load(args.lattice)
    if not lattice.fillets:
        print("quador: lattice has no fillets; nothing to export", file=sys.stderr)
        return EXIT_USAGE
    assembly = build_assembly(lattice)
    curves = []
    for fp in assembly.fillets:
        p = fp.patch
        for which, conic in (("stub1", p.conic1), ("stub2", p.conic2)):
            pts = sample_conic(conic, args.samples_per_curve)
            closed = conic.klass in (ConicClass.ELLIPSE, ConicClass.CIRCLE)
            comment = (
                f"fillet {p.hub_id}:{p.beam_ids[0]}+{p.beam_ids[1]} {which} "
                f"class={conic.klass.value}"
            )
            if not closed:
                comment += " param_range=[-4, 4] per branch"
            if conic.klass in (ConicClass.PARALLEL_LINES, ConicClass.CROSSING_LINES):
                # Two disjoint lines: emit one polyline each.
                half = len(pts) // 2
                curves.append((pts[:half], False, comment + " (line 1 of 2)"))
                curves.append((pts[half:], False, comment + " (line 2 of 2)"))
            else:
                curves.append((pts, closed, comment))
    try:
        count = write_obj_polylines(curves, args.output)
    except OSError as exc:
        print(f"quador: cannot write {args.output}: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"{count} polylines -> {args.output}")
    return EXIT_OK


def _read_points_csv(path: str) -> list[tuple[float, float, float]]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"quador: cannot read {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_IO) from exc
    points = []
    rows = list(csv.reader(text.splitlines()))
    for i, row in enumerate(rows):
        if not row or (i == 0 and [c.strip().lower() for c in row[:3]] == ["x", "y", "z"]):
            continue
        try:
            if len(row) != 3:
                raise ValueError("need exactly 3 fields")
            points.append(tuple(float(v) for v in row))
        except ValueError:
            print(f"quador: malformed point row {i + 1}: {row}", file=sys.stderr)
            raise SystemExit(EXIT_USAGE) from None
    return points


def _cmd_sample(args) -> int:
    if (args.points is None) == (args.grid is None):
        print("quador: exactly one of --points/--grid is required", file=sys.stderr)
        return EXIT_USAGE
    lattice = _load(args.lattice)
    assembly = build_assembly(lattice)
    if args.points:
        pts = _read_points_csv(args.points)
    else:
        try:
            nx, ny, nz = (int(v) for v in args.grid.split(","))
        except ValueError:
            print(f"quador: bad --grid {args.grid!r}", file=sys.stderr)
            return EXIT_USAGE
        lo, hi = auto_bounds(assembly)
        pts = [
            (x, y, z)
            for z in np.linspace(lo[2], hi[2], nz)
            for y in np.linspace(lo[1], hi[1], ny)
            for x in np.linspace(lo[0], hi[0], nx)
        ]
    lines = ["x,y,z,value,state,label"]
    for p in pts:
        res = classify_point(assembly, p)
        lines.append(
            ",".join(
                [format_value(p[0]), format_value(p[1]), format_value(p[2]),
                 format_value(res.value), res.state, str(res.label)]
            )
        )
    try:
        Path(args.output).write_text("\n".join(lines) + "\n", encoding="utf-8")
    except OSError as exc:
        print(f"quador: cannot write {args.output}: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"{len(pts)} points -> {args.output}")
    return EXIT_OK


def _cmd_classify(args) -> int:
    lattice = _load(args.lattice)
    assembly = build_assembly(lattice)
    print(f"{'kind':8s} {'id':24s} {'class':24s} notes")
    for bg in assembly.beams:
        cls = classify_quadric(bg.H)
        evals = ", ".join(f"{d:.6g}" for d in cls.diag)
        print(f"{'beam':8s} {bg.beam.id:24s} {cls.label.value:24s} eigenvalues [{evals}]")
    for fp in assembly.fillets:
        p = fp.patch
        cls = classify_quadric(p.Q)
        key = f"{p.hub_id}:{p.beam_ids[0]}+{p.beam_ids[1]}"
        notes = []
        if cls.label in PLANE_PAIR_CLASSES:
            notes.append("degenerate (chamfer)")
        notes.append(
            f"conics {p.conic1.klass.value}/{p.conic2.klass.value}"
        )
        print(f"{'fillet':8s} {key:24s} {cls.label.value:24s} {'; '.join(notes)}")
    return EXIT_OK


_COMMANDS = {
    "verify": _cmd_verify,
    "mesh": _cmd_mesh,
    "conics": _cmd_conics,
    "sample": _cmd_sample,
    "classify": _cmd_classify,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except ParseError as exc:
        print(f"quador: parse error at {exc.location}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValidationError as exc:
        print(f"quador: {exc}", file=sys.stderr)
        for entry in exc.report.errors:
            print(f"  [{entry.code}] {entry.subject}: {entry.message}", file=sys.stderr)
        return EXIT_USAGE
    except QuadorError as exc:
        print(f"quador: {exc.code}: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
