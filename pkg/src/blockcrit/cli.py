"""Command-line front end.

Subcommands:

* ``enumerate``  - build the exact coefficient tables and write the cache
* ``constants``  - evaluate c1, or c2 over a lambda grid
* ``simulate``   - Monte-Carlo runs of the largest-block statistic
* ``compare``    - theory vs simulation with a pass/fail ratio band

Exit codes: 0 success, 2 validation error, 3 numerical-guard failure
(truncation defect, quadrature budget, or a compare ratio outside the
band), 4 I/O error.  All output is deterministic given the full flag set;
``--figures DIR`` additionally renders PNG figures next to the delimited
output.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import analysis, enumeration, graphsim, report

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4

TABLES_ENV = "BLOCKCRIT_TABLES"


class ValidationError(ValueError):
    """Bad command-line input (exit code 2)."""


def _tables_path(explicit: str | None, rmax: int) -> Path:
    if explicit:
        return Path(explicit)
    base = Path(os.environ.get(TABLES_ENV, "."))
    return base / f"blockcrit-tables-rmax{rmax}.json"


def _load_or_build_tables(explicit: str | None, rmax: int) -> enumeration.CoeffTables:
    path = _tables_path(explicit, rmax)
    if path.exists():
        tables = enumeration.tables_load(path)
        if tables.rmax < rmax:
            raise ValidationError(
                f"{path} holds tables for rmax = {tables.rmax} < requested {rmax}"
            )
        return tables
    return enumeration.tables_build(rmax)


def _write_output(text: str, output: str | None) -> None:
    if output:
        Path(output).parent.mkdir(parents=True, exist_ok=True)
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _figures_dir(arg: str | None) -> Path | None:
    if arg is None:
        return None
    path = Path(arg)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _parse_lambdas(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise ValidationError(f"bad lambda grid {text!r}: {exc}") from None


def _parse_band(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(tok) for tok in text.split(":"))
    except ValueError:
        raise ValidationError(f"bad band {text!r}, expected LO:HI") from None
    if not lo < hi:
        raise ValidationError(f"band {text!r} must satisfy LO < HI")
    return lo, hi


def _analysis_config(args) -> analysis.AnalysisConfig:
    return analysis.AnalysisConfig(
        quad_tol=args.quad_tol,
        series_tol=args.series_tol,
        rmax=args.rmax,
        u_max=args.u_max,
    )


# ---------------------------------------------------------------------------
# enumerate
# ---------------------------------------------------------------------------

def cmd_enumerate(args) -> int:
    tables = enumeration.tables_build(args.rmax)
    path = _tables_path(args.tables, args.rmax)
    path.parent.mkdir(parents=True, exist_ok=True)
    enumeration.tables_save(tables, path)

    if args.format == "json":
        payload = {
            "kind": "tables-summary",
            "rmax": tables.rmax,
            "path": str(path),
            "b": [report.fmt_rational(x) for x in tables.b],
            "c": {
                f"{r},{d}": report.fmt_rational(v)
                for (r, d), v in sorted(tables.c.items())
            },
        }
        _write_output(report.payload_to_json(payload), args.output)
        return EXIT_OK
    if args.format == "csv":
        rows = [[r, d, report.fmt_rational(v)] for (r, d), v in sorted(tables.c.items())]
        _write_output(report.rows_to_csv(["r", "d", "c"], rows), args.output)
        return EXIT_OK

    lines = [f"tables written to {path}"]
    for r, value in enumerate(tables.b, start=1):
        lines.append(f"b_{r} = {report.fmt_rational(value)}")
    for (r, d), value in sorted(tables.c.items()):
        lines.append(f"c_{{{r},{d}}} = {report.fmt_rational(value)}")
    _write_output("\n".join(lines) + "\n", args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------
# constants
# ---------------------------------------------------------------------------

def cmd_constants(args) -> int:
    cfg = _analysis_config(args)
    figures = _figures_dir(args.figures)

    if args.mode == "c1":
        value = analysis.compute_c1(cfg)
        err = analysis.c1_error_estimate(cfg)
        if args.format == "json":
            payload = {"kind": "constants-c1", "value": value, "error_estimate": err}
            _write_output(report.payload_to_json(payload), args.output)
        elif args.format == "csv":
            text = report.rows_to_csv(
                ["constant", "value", "error_estimate"], [["c1", value, err]]
            )
            _write_output(text, args.output)
        else:
            _write_output(
                f"c1 = {report.fmt_float(value)} +- {report.fmt_float(err)}\n",
                args.output,
            )
        return EXIT_OK

    if args.lam is None:
        raise ValidationError("constants c2 requires --lambda")
    lams = _parse_lambdas(args.lam)
    tables = _load_or_build_tables(args.tables, args.rmax)
    rows = []
    for lam in lams:
        bd = analysis.compute_c2(lam, tables, cfg)
        rows.append(
            {
                "lambda": bd.lam,
                "alpha": bd.alpha,
                "c2": bd.value,
                "tail_mass": bd.tail_mass,
                "u_star": bd.u_star,
                "tail_sensitivity": bd.tail_sensitivity,
                "per_r_mass": list(bd.per_r_mass),
            }
        )
    if args.format == "json":
        payload = {"kind": "constants-c2", "rmax": args.rmax, "rows": rows}
        _write_output(report.payload_to_json(payload), args.output)
    else:
        csv_rows = [
            [row["lambda"], row["alpha"], row["c2"], row["tail_mass"]] for row in rows
        ]
        text = report.rows_to_csv(["lambda", "alpha", "c2", "tail_mass"], csv_rows)
        _write_output(text, args.output)
    if figures is not None and rows:
        report.figure_c2_curve(rows, figures / "constants-c2.png")
    return EXIT_OK


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------

def _resolve_m(args) -> int:
    if args.m is not None:
        return args.m
    return graphsim.lambda_to_m(args.n, float(args.lam))


def cmd_simulate(args) -> int:
    m = _resolve_m(args)
    result = graphsim.run_monte_carlo(
        args.n, m, args.trials, args.seed, parallelism=args.parallelism
    )
    if args.format == "json":
        payload = {"kind": "simulate", "results": [result.to_json_dict()]}
        _write_output(report.payload_to_json(payload), args.output)
    else:
        text = report.rows_to_csv(graphsim.SIM_CSV_COLUMNS, [result.to_csv_row()])
        _write_output(text, args.output)
    figures = _figures_dir(args.figures)
    if figures is not None:
        report.figure_histogram(
            result, figures / f"simulate-hist-n{result.n}-m{result.m}.png"
        )
    return EXIT_OK


# ---------------------------------------------------------------------------
# compare
# ---------------------------------------------------------------------------

def _check_regime(scenario: str, n: int, m: int) -> None:
    gap = n - 2 * m
    if scenario == "subcritical":
        if n < 10_000 or gap < 2.0 * n ** (2.0 / 3.0) or gap > n / 8:
            raise ValidationError(
                f"(n={n}, M={m}) is outside asymptotic regime for the "
                "subcritical comparison (need n >= 10^4 and "
                "2 n^(2/3) <= n - 2M <= n/8)"
            )
    else:
        lam = graphsim.lambda_of_m(n, m)
        if n < 10_000 or abs(lam) > 10.0:
            raise ValidationError(
                f"(n={n}, M={m}) is outside asymptotic regime for the "
                f"critical comparison (need n >= 10^4 and |lambda| <= 10, "
                f"got lambda = {lam:.3f})"
            )


def cmd_compare(args) -> int:
    if args.m is None and args.lam is None:
        raise ValidationError("compare requires --m or --lambda")
    m = _resolve_m(args)
    _check_regime(args.scenario, args.n, m)
    band_lo, band_hi = _parse_band(args.band)
    cfg = _analysis_config(args)

    if args.scenario == "subcritical":
        c1 = analysis.compute_c1(cfg)
        theory = c1 * args.n / (args.n - 2 * m)
    else:
        tables = _load_or_build_tables(args.tables, args.rmax)
        lam = graphsim.lambda_of_m(args.n, m)
        bd = analysis.compute_c2(lam, tables, cfg)
        theory = bd.value * args.n ** (1.0 / 3.0)

    result = graphsim.run_monte_carlo(
        args.n, m, args.trials, args.seed, parallelism=args.parallelism
    )
    ratio = result.mean / theory
    ci = (result.mean - 1.96 * result.stderr, result.mean + 1.96 * result.stderr)
    within = band_lo <= ratio <= band_hi
    payload = {
        "kind": "compare",
        "scenario": args.scenario,
        "n": args.n,
        "M": m,
        "lambda": result.lam,
        "trials": args.trials,
        "seed": args.seed,
        "theory": theory,
        "empirical": result.mean,
        "stderr": result.stderr,
        "ratio": ratio,
        "ci": [ci[0], ci[1]],
        "band": [band_lo, band_hi],
        "within_band": within,
    }
    if args.format == "json":
        _write_output(report.payload_to_json(payload), args.output)
    else:
        columns = [
            "scenario", "n", "M", "lambda", "trials", "theory", "empirical",
            "stderr", "ratio", "ci_lo", "ci_hi", "band_lo", "band_hi", "within_band",
        ]
        row = [
            args.scenario, args.n, m, result.lam, args.trials, theory,
            result.mean, result.stderr, ratio, ci[0], ci[1], band_lo, band_hi,
            within,
        ]
        _write_output(report.rows_to_csv(columns, [row]), args.output)
    figures = _figures_dir(args.figures)
    if figures is not None:
        report.figure_compare(payload, figures / f"compare-{args.scenario}.png")
    return EXIT_OK if within else EXIT_NUMERICAL


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_common_output(
    p: argparse.ArgumentParser, formats=("text", "csv", "json"), figures=True
):
    p.add_argument("--format", choices=formats, default=formats[0])
    p.add_argument("--output", help="write to this path instead of stdout")
    if figures:
        p.add_argument("--figures", help="render PNG figures into this directory")


def _add_analysis_flags(p: argparse.ArgumentParser):
    p.add_argument("--quad-tol", type=float, default=1e-8, dest="quad_tol")
    p.add_argument("--series-tol", type=float, default=1e-14, dest="series_tol")
    p.add_argument("--u-max", type=float, default=50.0, dest="u_max")
    p.add_argument("--rmax", type=int, default=6)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blockcrit",
        description="Largest-block statistics of near-critical uniform random graphs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="build and cache the exact coefficient tables")
    p.add_argument("--rmax", type=int, required=True)
    p.add_argument("--tables", help=f"cache file (default: ${TABLES_ENV} dir or cwd)")
    _add_common_output(p, figures=False)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("constants", help="evaluate the limit constants")
    p.add_argument("mode", choices=["c1", "c2"])
    p.add_argument("--lambda", dest="lam", help="comma-separated lambda grid (c2 mode)")
    p.add_argument("--tables", help="coefficient table cache to reuse")
    _add_analysis_flags(p)
    _add_common_output(p, formats=("csv", "json", "text"))
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("simulate", help="Monte-Carlo largest-block runs")
    p.add_argument("--n", type=int, required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--m", type=int)
    group.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--parallelism", type=int, default=None)
    _add_common_output(p, formats=("csv", "json"))
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="theory vs Monte-Carlo ratio report")
    p.add_argument("--scenario", choices=["subcritical", "critical"], required=True)
    p.add_argument("--n", type=int, required=True)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--m", type=int)
    group.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--parallelism", type=int, default=None)
    p.add_argument("--band", default="0.8:1.2", help="acceptance ratio band LO:HI")
    p.add_argument("--tables", help="coefficient table cache to reuse")
    _add_analysis_flags(p)
    _add_common_output(p, formats=("csv", "json"))
    p.set_defaults(func=cmd_compare)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad flags, 0 on --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (analysis.TailMassError, analysis.QuadratureError) as exc:
        print(f"numerical guard: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
