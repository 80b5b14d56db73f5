"""Command-line front end: cluster, sweep, scale, eval.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.
Reports are JSON (full float precision) or CSV (6 significant digits);
apart from the timings_ms block, output is byte-deterministic for a
fixed input file and flag set.
"""

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from .dataio import load_csv
from .errors import DataError, NumericalError, UsageError
from .pipeline import RunConfig, run_cluster, run_eval, run_scale, run_sweep


def _split_names(raw):
    names = [part.strip() for part in raw.split(",")]
    if any(not n for n in names):
        raise UsageError(f"empty column name in {raw!r}")
    return tuple(names)


def _add_data_flags(parser, label_required=False):
    parser.add_argument("--input", required=True, help="CSV file to load")
    parser.add_argument("--features", required=True,
                        help="comma-separated feature column names")
    parser.add_argument("--label", required=label_required,
                        help="class label column name")
    parser.add_argument("--no-header", action="store_true",
                        help="file has no header row (see --columns)")
    parser.add_argument("--columns",
                        help="comma-separated column names for headerless files")


def _add_model_flags(parser):
    parser.add_argument("--branching", type=int, default=8,
                        help="max entries per tree node (default 8)")
    parser.add_argument("--rho", type=float, default=0.1,
                        help="normalized-density split threshold (default 0.1)")
    parser.add_argument("--n-min", type=int, default=None,
                        help="min cluster size eligible for splitting (default d+2)")
    parser.add_argument("--epsilon-scale", type=float, default=1e-6,
                        help="covariance ridge strength (default 1e-6)")
    parser.add_argument("--no-refine", action="store_true",
                        help="stop after phase 1")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cfrefine",
        description="Two-phase clustering: a clustering-feature tree, then "
                    "density-based splitting of its leaf micro-clusters.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_cluster = sub.add_parser("cluster", help="run the pipeline once")
    _add_data_flags(p_cluster)
    _add_model_flags(p_cluster)
    p_cluster.add_argument("--threshold", type=float, required=True,
                           help="leaf diameter threshold T")
    p_cluster.add_argument("--output", help="write here instead of stdout")
    p_cluster.add_argument("--format", choices=("json", "csv"), default="json",
                           help="json report or row_id,cluster CSV")

    p_sweep = sub.add_parser("sweep", help="cluster across a threshold grid")
    _add_data_flags(p_sweep)
    _add_model_flags(p_sweep)
    p_sweep.add_argument("--t-min", type=float, default=0.1)
    p_sweep.add_argument("--t-max", type=float, default=1.0)
    p_sweep.add_argument("--t-step", type=float, default=0.1)
    p_sweep.add_argument("--output", help="write here instead of stdout")

    p_scale = sub.add_parser("scale", help="time the pipeline on replicated data")
    _add_data_flags(p_scale)
    _add_model_flags(p_scale)
    p_scale.add_argument("--threshold", type=float, required=True,
                         help="leaf diameter threshold T")
    p_scale.add_argument("--max-multiple", type=int, default=8,
                         help="largest replication factor (default 8)")
    p_scale.add_argument("--output", help="write here instead of stdout")

    p_eval = sub.add_parser("eval", help="score an assignment against labels")
    _add_data_flags(p_eval, label_required=True)
    p_eval.add_argument("--assignments", required=True,
                        help="row_id,cluster CSV or a cluster-report JSON")
    p_eval.add_argument("--output", help="write here instead of stdout")
    p_eval.add_argument("--format", choices=("json", "csv"), default="json",
                        help="json metrics or per-(cluster,class) CSV")

    return parser


def _validate_common(args):
    if args.no_header and not args.columns:
        raise UsageError("--no-header requires --columns")
    if args.columns and not args.no_header:
        raise UsageError("--columns only applies with --no-header")
    branching = getattr(args, "branching", None)
    if branching is not None and branching < 2:
        raise UsageError(f"--branching must be >= 2, got {branching}")
    rho = getattr(args, "rho", None)
    if rho is not None and not 0.0 <= rho <= 1.0:
        raise UsageError(f"--rho must be in [0, 1], got {rho}")
    n_min = getattr(args, "n_min", None)
    if n_min is not None and n_min < 2:
        raise UsageError(f"--n-min must be >= 2, got {n_min}")
    eps = getattr(args, "epsilon_scale", None)
    if eps is not None and not eps > 0:
        raise UsageError(f"--epsilon-scale must be positive, got {eps}")
    threshold = getattr(args, "threshold", None)
    if threshold is not None and not threshold > 0:
        raise UsageError(f"--threshold must be positive, got {threshold}")


def _load_dataset(args):
    return load_csv(
        args.input,
        _split_names(args.features),
        args.label,
        has_header=not args.no_header,
        column_names=_split_names(args.columns) if args.columns else None,
    )


def _config(args, threshold):
    return RunConfig(
        threshold=threshold,
        branching=args.branching,
        rho=args.rho,
        n_min=args.n_min,
        epsilon_scale=args.epsilon_scale,
        refine=not args.no_refine,
        input=args.input,
        features=_split_names(args.features),
        label=args.label,
        has_header=not args.no_header,
        columns=_split_names(args.columns) if args.columns else None,
        output=getattr(args, "output", None),
        format=getattr(args, "format", "json"),
    )


def _emit(text, output):
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _num(v):
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def _csv_table(rows, header):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_num(row[col]) for col in header])
    return buf.getvalue()


def cmd_cluster(args):
    _validate_common(args)
    dataset = _load_dataset(args)
    report = run_cluster(dataset, _config(args, args.threshold))
    if args.format == "csv":
        rows = [{"row_id": i, "cluster": c}
                for i, c in enumerate(report["assignment"])]
        _emit(_csv_table(rows, ["row_id", "cluster"]), args.output)
    else:
        _emit(json.dumps(report, indent=2) + "\n", args.output)
    return 0


def cmd_sweep(args):
    _validate_common(args)
    if not 0 < args.t_min <= args.t_max:
        raise UsageError(
            f"need 0 < --t-min <= --t-max, got {args.t_min}..{args.t_max}"
        )
    if not args.t_step > 0:
        raise UsageError(f"--t-step must be positive, got {args.t_step}")
    dataset = _load_dataset(args)
    rows = run_sweep(dataset, _config(args, args.t_min),
                     args.t_min, args.t_max, args.t_step)
    _emit(_csv_table(rows, ["T", "phase1_count", "phase2_count", "ratio"]),
          args.output)
    return 0


def cmd_scale(args):
    _validate_common(args)
    if args.max_multiple < 2:
        raise UsageError(f"--max-multiple must be >= 2, got {args.max_multiple}")
    dataset = _load_dataset(args)
    rows = run_scale(dataset, _config(args, args.threshold), args.max_multiple)
    _emit(_csv_table(rows, ["multiple", "rows", "wall_ms", "delta_ms"]),
          args.output)
    return 0


def _read_assignments(path):
    """Accept a row_id,cluster CSV or a JSON report with an assignment list."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    if text.lstrip().startswith("{"):
        try:
            report = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DataError(f"{path}: invalid JSON: {exc}") from exc
        assignment = report.get("assignment")
        if not isinstance(assignment, list):
            raise DataError(f"{path}: JSON report has no assignment list")
        return {i: int(c) for i, c in enumerate(assignment)}
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    if not rows:
        raise DataError(f"{path} is empty")
    if [c.strip() for c in rows[0]] != ["row_id", "cluster"]:
        raise DataError(f"{path}: expected header 'row_id,cluster'")
    out = {}
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != 2:
            raise DataError(f"{path} line {lineno}: expected 2 fields, got {len(row)}")
        try:
            rid, cluster = int(row[0]), int(row[1])
        except ValueError:
            raise DataError(f"{path} line {lineno}: non-integer value") from None
        if rid in out:
            raise DataError(f"{path} line {lineno}: duplicate row id {rid}")
        out[rid] = cluster
    return out


def cmd_eval(args):
    _validate_common(args)
    dataset = _load_dataset(args)
    assignments = _read_assignments(args.assignments)
    block, detail = run_eval(dataset, assignments)
    if args.format == "csv":
        _emit(_csv_table(detail, ["cluster", "class", "count", "precision", "recall"]),
              args.output)
    else:
        _emit(json.dumps({**block, "detail": detail}, indent=2) + "\n", args.output)
    return 0


_COMMANDS = {
    "cluster": cmd_cluster,
    "sweep": cmd_sweep,
    "scale": cmd_scale,
    "eval": cmd_eval,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad flags and 0 for --help; fold into our codes
        return 0 if exc.code == 0 else 1
    try:
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
