"""Command-line front end.

Subcommands stream designs through the design-file format on stdin/stdout,
so the construction steps compose as a pipeline:

    oamix generate --base lattice --m 3 --w 3 | oamix expand \
        | oamix cross --levels 0.75,1.5,3 | oamix evaluate --model eq6

`oamix demo` regenerates the bundled reference designs (table1, table2,
table3, table5) together with evaluation reports and FDS curves for the
two worked studies.  The default output directory can be set through the
OAMIX_OUT environment variable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .core import as_fraction
from .errors import OamixError
from .evaluate import (
    ContinuousAmounts,
    DiscreteAmounts,
    evaluate_design,
    fds_curve,
    power,
)
from .io import read_design, write_design
from .models import ModelKind, build_spec, coded_model_matrix, model_matrix
from .oofa import cross_amounts, oofa_expand, scale_amounts, validate_design
from .simplex import project_columns, simplex_centroid, simplex_lattice

_MODEL_HELP = (
    "model family: eq1 linear mixture-amount, eq2 quadratic mixture-amount, "
    "eq3 linear component-amount, eq4 quadratic component-amount, "
    "eq5 eq1 plus order factors, eq6 eq2 plus order factors and reduced "
    "order interactions, eq7 eq3 plus order factors, eq8 eq4 plus order "
    "factors and reduced order interactions"
)


def _read_stdin_design(args) -> "Design":
    text = Path(args.input).read_text() if args.input else sys.stdin.read()
    design = read_design(text)
    validate_design(design)
    return design


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _decimals(fmt: str) -> int | None:
    if fmt == "rational":
        return None
    if fmt.startswith("decimals:"):
        return int(fmt.split(":", 1)[1])
    raise argparse.ArgumentTypeError(f"format must be rational or decimals:K, got {fmt!r}")


def _add_io_args(p, with_input=True):
    if with_input:
        p.add_argument("--input", "-i", help="design file (default: stdin)")
    p.add_argument("--out", "-o", help="output path (default: stdout)")


def _add_format_arg(p):
    p.add_argument(
        "--format",
        default="rational",
        help="value rendering: rational (default, lossless) or decimals:K",
    )


def _spec_for(args, design):
    kind = ModelKind.parse(args.model)
    return build_spec(kind, design.m, reduction=args.reduction)


def cmd_generate(args) -> int:
    if args.base == "lattice":
        if args.w is None:
            raise OamixError("lattice base needs --w")
        design = simplex_lattice(args.m, args.w)
    else:
        design = simplex_centroid(args.m)
    _emit(write_design(design, decimals=_decimals(args.format)), args.out)
    return 0


def cmd_project(args) -> int:
    design = _read_stdin_design(args)
    drop = {int(tok) for tok in args.drop.split(",") if tok.strip()}
    out = project_columns(design, drop)
    _emit(write_design(out, decimals=_decimals(args.format)), args.out)
    return 0


def cmd_expand(args) -> int:
    design = _read_stdin_design(args)
    _emit(write_design(oofa_expand(design), decimals=_decimals(args.format)), args.out)
    return 0


def cmd_cross(args) -> int:
    design = _read_stdin_design(args)
    levels = [as_fraction(tok) for tok in args.levels.split(",") if tok.strip()]
    out = cross_amounts(design, levels)
    _emit(write_design(out, decimals=_decimals(args.format)), args.out)
    return 0


def cmd_scale(args) -> int:
    design = _read_stdin_design(args)
    out = scale_amounts(design, as_fraction(args.a_max))
    _emit(write_design(out, decimals=_decimals(args.format)), args.out)
    return 0


def cmd_matrix(args) -> int:
    design = _read_stdin_design(args)
    spec = _spec_for(args, design)
    mm = coded_model_matrix(design, spec) if args.coding == "coded" else model_matrix(design, spec)
    lines = [",".join(mm.col_labels)]
    for row in mm.X:
        lines.append(",".join(f"{v:.12g}" for v in row))
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_evaluate(args) -> int:
    design = _read_stdin_design(args)
    spec = _spec_for(args, design)
    report = evaluate_design(
        design, spec, signal_sd=args.signal, alpha=args.alpha, coding=args.coding
    )
    _emit(json.dumps(report.to_dict(), indent=2) + "\n", args.out)
    return 0


def _amount_policy(args, design):
    if args.amounts == "continuous":
        return None  # library default: continuous over the design's level range
    if args.amounts == "discrete":
        return DiscreteAmounts(tuple(float(a) for a in design.amount_levels))
    lo, hi = (float(tok) for tok in args.amounts.split(":", 1))
    return ContinuousAmounts(lo, hi)


def cmd_fds(args) -> int:
    design = _read_stdin_design(args)
    spec = _spec_for(args, design)
    curve = fds_curve(
        design,
        spec,
        n_samples=args.samples,
        seed=args.seed,
        amount_policy=_amount_policy(args, design),
        workers=args.workers,
        sign_policy=args.signs,
    )
    _emit(curve.to_text(), args.out)
    return 0


def cmd_power(args) -> int:
    design = _read_stdin_design(args)
    spec = _spec_for(args, design)
    mm = coded_model_matrix(design, spec) if args.coding == "coded" else model_matrix(design, spec)
    rows = {}
    for j, label in enumerate(mm.col_labels):
        if args.term and label != args.term:
            continue
        rows[label] = power(mm, j, signal_sd=args.signal, alpha=args.alpha)
    if args.term and not rows:
        raise OamixError(f"term {args.term!r} not in model ({', '.join(mm.col_labels)})")
    _emit(json.dumps({"signal_sd": args.signal, "alpha": args.alpha, "power": rows}, indent=2) + "\n", args.out)
    return 0


def cmd_demo(args) -> int:
    out_dir = Path(args.out or os.environ.get("OAMIX_OUT", "oamix-demo"))
    out_dir.mkdir(parents=True, exist_ok=True)

    table1 = oofa_expand(simplex_lattice(3, 3))
    table2 = oofa_expand(project_columns(simplex_centroid(4), {4}))
    table3 = cross_amounts(table1, [Fraction(3, 4), Fraction(3, 2), Fraction(3)])
    table5 = scale_amounts(table2, 500)

    (out_dir / "table1.csv").write_text(write_design(table1))
    (out_dir / "table2.csv").write_text(write_design(table2))
    (out_dir / "table3.csv").write_text(write_design(table3))
    (out_dir / "table5.csv").write_text(write_design(table5))
    (out_dir / "table1_display.csv").write_text(write_design(table1, decimals=2))
    (out_dir / "table3_display.csv").write_text(write_design(table3, decimals=2))
    (out_dir / "table5_display.csv").write_text(write_design(table5, decimals=1))

    spec6 = build_spec(ModelKind.OOFA_MA_FULL, 3)
    spec8 = build_spec(ModelKind.OOFA_CA_FULL, 3)
    report1 = evaluate_design(table3, spec6, signal_sd=0.5, alpha=0.05)
    report2 = evaluate_design(table5, spec8, signal_sd=2.0, alpha=0.05)
    (out_dir / "example1_report.json").write_text(json.dumps(report1.to_dict(), indent=2) + "\n")
    (out_dir / "example2_report.json").write_text(json.dumps(report2.to_dict(), indent=2) + "\n")

    curve1 = fds_curve(table3, spec6, n_samples=args.samples, seed=args.seed)
    curve2 = fds_curve(table5, spec8, n_samples=args.samples, seed=args.seed)
    (out_dir / "example1_fds.txt").write_text(curve1.to_text())
    (out_dir / "example2_fds.txt").write_text(curve2.to_text())

    print(f"# oamix demo {args.suite} --out {out_dir} --samples {args.samples} --seed {args.seed}")
    print(f"example1: N={report1.n_runs} p={report1.n_params} "
          f"max_pv={report1.max_pv:.4f} avg_pv={report1.avg_pv:.4f} "
          f"g_efficiency_pct={report1.g_efficiency_pct:.2f}")
    print(f"example2: N={report2.n_runs} p={report2.n_params} "
          f"max_pv={report2.max_pv:.4f} avg_pv={report2.avg_pv:.4f} "
          f"g_efficiency_pct={report2.g_efficiency_pct:.2f}")
    print(f"wrote {out_dir}/table1.csv table2.csv table3.csv table5.csv + reports + fds curves")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oamix",
        description="Construct and evaluate order-of-addition mixture-amount designs.",
    )
    parser.add_argument("--version", action="version", version=f"oamix {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="simplex-lattice or simplex-centroid base design")
    p.add_argument("--base", choices=("lattice", "centroid"), required=True)
    p.add_argument("--m", type=int, required=True, help="number of components")
    p.add_argument("--w", type=int, help="lattice degree (lattice base only)")
    _add_io_args(p, with_input=False)
    _add_format_arg(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("project", help="delete columns, reinterpreting rows as amounts")
    p.add_argument("--drop", required=True, help="comma-separated 1-based columns to delete")
    _add_io_args(p)
    _add_format_arg(p)
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("expand", help="expand each run over all orderings of its support")
    _add_io_args(p)
    _add_format_arg(p)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("cross", help="cross a proportion design with total-amount levels")
    p.add_argument("--levels", required=True, help="comma-separated exact levels, e.g. 0.75,1.5,3")
    _add_io_args(p)
    _add_format_arg(p)
    p.set_defaults(func=cmd_cross)

    p = sub.add_parser("scale", help="scale an amount design to a physical maximum")
    p.add_argument("--a-max", dest="a_max", required=True, help="positive exact scale, e.g. 500")
    _add_io_args(p)
    _add_format_arg(p)
    p.set_defaults(func=cmd_scale)

    p = sub.add_parser("matrix", help="materialize the model matrix as CSV")
    p.add_argument("--model", required=True, help=_MODEL_HELP)
    p.add_argument("--reduction", default="cyclic", choices=("cyclic", "keep_all"))
    p.add_argument("--coding", default="raw", choices=("raw", "coded"))
    _add_io_args(p)
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("evaluate", help="criteria report (JSON)")
    p.add_argument("--model", required=True, help=_MODEL_HELP)
    p.add_argument("--reduction", default="cyclic", choices=("cyclic", "keep_all"))
    p.add_argument("--coding", default="coded", choices=("coded", "raw"))
    p.add_argument("--signal", type=float, default=2.0, help="signal size in error SDs")
    p.add_argument("--alpha", type=float, default=0.05)
    _add_io_args(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("fds", help="fraction-of-design-space curve (two-column text)")
    p.add_argument("--model", required=True, help=_MODEL_HELP)
    p.add_argument("--reduction", default="cyclic", choices=("cyclic", "keep_all"))
    p.add_argument("--samples", type=int, default=100000)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument(
        "--amounts",
        default="continuous",
        help="continuous (design range), discrete (design levels), or LO:HI",
    )
    p.add_argument("--signs", default="orderings", choices=("orderings", "continuous"))
    p.add_argument("--workers", type=int, default=1)
    _add_io_args(p)
    p.set_defaults(func=cmd_fds)

    p = sub.add_parser("power", help="two-sided t-test power per term (JSON)")
    p.add_argument("--model", required=True, help=_MODEL_HELP)
    p.add_argument("--reduction", default="cyclic", choices=("cyclic", "keep_all"))
    p.add_argument("--coding", default="coded", choices=("coded", "raw"))
    p.add_argument("--term", help="report a single term label (default: all terms)")
    p.add_argument("--signal", type=float, required=True, help="signal size in error SDs")
    p.add_argument("--alpha", type=float, default=0.05)
    _add_io_args(p)
    p.set_defaults(func=cmd_power)

    p = sub.add_parser("demo", help="regenerate the bundled reference designs and reports")
    p.add_argument("suite", nargs="?", default="paper", choices=("paper",),
                   help="demo suite name (default: paper)")
    p.add_argument("--out", help="output directory (default: $OAMIX_OUT or ./oamix-demo)")
    p.add_argument("--samples", type=int, default=100000)
    p.add_argument("--seed", type=int, default=7)
    p.set_defaults(func=cmd_demo)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except OamixError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        return 0


if __name__ == "__main__":
    raise SystemExit(main())
