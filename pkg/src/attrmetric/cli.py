"""Command-line entry point.

Exit status is 0 on success, 2 on malformed input (with a file:line message)
and 1 when the convex-hull solver hits its iteration cap, unless
``--allow-unconverged`` is given.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from . import __version__
from .analyze import EvaluationConfig, cooccurrence, evaluate_method
from .calibrate import isotonic_fit
from .core import Kind, MeaningfulnessError
from .csvio import (
    atomic_write,
    fmt,
    json_text,
    matrix_text,
    read_matrix,
    read_names,
    table_text,
)
from .interpolate import default_grid, trace_curve
from .reconstruct import delta
from .select import DEFAULT_ALPHA, SelectionConfig, leave_one_out_errors, select_representation
from .synth import PlantSpec, plant_meaningful


class Unconverged(Exception):
    pass


def _grid(text: Optional[str]):
    if text is None:
        return None
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}; expected e.g. 0,2,4,8") from None


def _check(converged: bool, args) -> None:
    if not converged and not args.allow_unconverged:
        raise Unconverged("convex-hull solver hit its iteration cap; rerun with --allow-unconverged to keep the result")


def cmd_distance(args) -> int:
    A = read_matrix(args.meaningful, args.zero_one)
    B = read_matrix(args.discovered, args.zero_one)
    res = delta(A, B, args.kind)
    _check(res.converged, args)
    rows = [[name] + list(res.coefficients[j]) for j, name in enumerate(A.column_names())]
    atomic_write(args.out, table_text(["meaningful"] + B.column_names(), rows))
    print(fmt(res.distance))
    return 0


def cmd_select(args) -> int:
    S = read_matrix(args.meaningful, args.zero_one)
    forced = read_names(args.forced) if args.forced else []
    cfg = SelectionConfig(
        alpha=DEFAULT_ALPHA if args.alpha is None else args.alpha,
        alpha_percentile=args.alpha_percentile,
        forced_names=forced,
        s1_fraction=args.fraction,
        seed=args.seed,
        kind=args.kind,
    )
    scores = leave_one_out_errors(S, cfg.kind)
    split = select_representation(S, cfg, scores=scores)
    names = S.column_names()
    manifest = {
        "seed": args.seed,
        "s1_fraction": args.fraction,
        "kind": cfg.kind.value,
        "alpha_used": cfg.resolve_alpha(scores),
        "s1": [names[i] for i in split.s1_indices],
        "s2": [names[i] for i in split.s2_indices],
        "forced": [names[i] for i in sorted(split.forced_indices)],
        "scores": {n: float(s) for n, s in zip(names, scores.scores)},
    }
    atomic_write(args.out, json_text(manifest))
    print(f"s1={len(split.s1_indices)} s2={len(split.s2_indices)} forced={len(split.forced_indices)}")
    return 0


def cmd_interpolate(args) -> int:
    s1 = read_matrix(args.s1, args.zero_one)
    s2 = read_matrix(args.s2, args.zero_one)
    grid = args.grid if args.grid is not None else default_grid(s2.n_attributes)
    kinds = [Kind.CVX, Kind.JP] if args.kind == "both" else [Kind.parse(args.kind)]
    rows = []
    for kind in kinds:
        c = trace_curve(s1, s2, grid, args.trials, kind, args.seed)
        _check(c.converged, args)
        fit = isotonic_fit(c.mean_distance)
        rows += [[kind.value, int(n), m, s, f] for n, m, s, f in zip(c.grid, c.mean_distance, c.std_distance, fit)]
    atomic_write(args.out, table_text(["kind", "n_noise", "mean", "std", "fitted"], rows))
    print(f"wrote {len(rows)} curve points to {args.out}")
    return 0


def cmd_metric(args) -> int:
    S = read_matrix(args.meaningful, args.zero_one)
    D = read_matrix(args.discovered, args.zero_one)
    cfg = EvaluationConfig(
        splits=args.splits,
        trials=args.trials,
        grid=args.grid,
        seed=args.seed,
        alpha=DEFAULT_ALPHA if args.alpha is None else args.alpha,
        alpha_percentile=args.alpha_percentile,
        forced_names=read_names(args.forced) if args.forced else (),
        s1_fraction=args.fraction,
        selection_kind=args.selection_kind,
        max_grid_extensions=args.max_extensions,
        cvx_weight=args.cvx_weight,
    )
    report = evaluate_method(D, S, cfg, name=args.name)
    _check(report.converged, args)

    split_rows = []
    cvx, jp = report.kinds[Kind.CVX], report.kinds[Kind.JP]
    for i, seed in enumerate(report.split_seeds):
        split_rows.append(
            [i, seed, cvx.split_deltas[i], jp.split_deltas[i], cvx.split_gammas[i], jp.split_gammas[i],
             report.per_split_gamma_tilde[i]]
        )
    curve_rows = []
    for kind, s in report.kinds.items():
        for n, m, f, ss, ts in zip(s.grid, s.curve_mean, s.calibration.fitted, s.curve_split_std, s.curve_trial_std):
            curve_rows.append([kind.value, int(n), m, f, ss, ts])

    prefix = args.out_prefix
    outputs = {
        f"{prefix}.json": json_text(report.to_dict()),
        f"{prefix}_splits.csv": table_text(
            ["split", "seed", "delta_cvx", "delta_jp", "gamma_cvx", "gamma_jp", "gamma_tilde"], split_rows
        ),
        f"{prefix}_curve.csv": table_text(
            ["kind", "n_noise", "mean", "fitted", "split_std", "trial_std"], curve_rows
        ),
    }
    for path, text in outputs.items():
        atomic_write(path, text)
    print(f"gamma_cvx={fmt(report.gamma_cvx)} gamma_jp={fmt(report.gamma_jp)} gamma_tilde={fmt(report.gamma_tilde)}")
    return 0


def cmd_cooccur(args) -> int:
    A = read_matrix(args.a, args.zero_one)
    B = read_matrix(args.b, args.zero_one)
    C = cooccurrence(A, B, labels=[args.label_a, args.label_b])
    rows = [[name] + list(C.values[i]) for i, name in enumerate(C.names)]
    atomic_write(args.out, table_text([""] + list(C.names), rows))
    print(f"wrote {C.values.shape[0]}x{C.values.shape[1]} co-occurrence matrix to {args.out}")
    return 0


def cmd_synth(args) -> int:
    base = read_matrix(args.base, args.zero_one)
    planted = plant_meaningful(
        PlantSpec(
            base=base,
            n_meaningful=args.meaningful,
            n_noise=args.noise,
            flip_rate=args.flip_rate,
            combine_width=args.combine_width,
            seed=args.seed,
        )
    )
    names = planted.matrix.column_names()
    truth_rows = [
        [n, "1" if t else "0", " ".join(base.column_names()[i] for i in src) if t else ""]
        for n, t, src in zip(names, planted.meaningful, list(planted.sources) + [()] * args.noise)
    ]
    atomic_write(args.out, matrix_text(planted.matrix))
    atomic_write(args.truth, table_text(["attribute", "meaningful", "sources"], truth_rows))
    print(f"wrote {len(names)} attributes to {args.out}")
    return 0


def cmd_convert(args) -> int:
    if args.zero_one == args.to_zero_one:
        raise MeaningfulnessError("choose exactly one of --zero-one (0/1 -> ±1) or --to-zero-one (±1 -> 0/1)")
    M = read_matrix(args.input, zero_one=args.zero_one)
    atomic_write(args.output, matrix_text(M, zero_one=args.to_zero_one))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="attrmetric", description="Attribute-set meaningfulness metric.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, seed=False):
        sp.add_argument("--zero-one", action="store_true", help="input matrices use 0/1 instead of -1/+1")
        sp.add_argument("--allow-unconverged", action="store_true")
        if seed:
            sp.add_argument("--seed", type=int, default=0)

    def alpha_args(sp):
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--alpha", type=float, default=None, help=f"leave-one-out threshold (default {DEFAULT_ALPHA})")
        g.add_argument("--alpha-percentile", type=float, default=None,
                       help="threshold at this percentile of the leave-one-out scores")
        sp.add_argument("--forced", help="file with attribute names always placed in S1, one per line")
        sp.add_argument("--fraction", type=float, default=0.5, help="fraction of attributes in S1")

    sp = sub.add_parser("distance", help="reconstruction distance of a discovered set")
    sp.add_argument("--meaningful", required=True)
    sp.add_argument("--discovered", required=True)
    sp.add_argument("--kind", choices=["cvx", "jp"], default="cvx")
    sp.add_argument("--out", default="coefficients.csv", help="where to write the coefficient matrix")
    common(sp)
    sp.set_defaults(func=cmd_distance)

    sp = sub.add_parser("select", help="split a labelled set into S1/S2")
    sp.add_argument("--meaningful", required=True)
    sp.add_argument("--kind", choices=["cvx", "jp"], default="cvx")
    sp.add_argument("--out", default="split.json")
    alpha_args(sp)
    common(sp, seed=True)
    sp.set_defaults(func=cmd_select)

    sp = sub.add_parser("interpolate", help="noise-interpolation curve between S2 and S1")
    sp.add_argument("--s1", required=True)
    sp.add_argument("--s2", required=True)
    sp.add_argument("--grid", type=_grid, default=None, help="comma-separated noise counts starting at 0")
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--kind", choices=["cvx", "jp", "both"], default="both")
    sp.add_argument("--out", default="curve.csv")
    common(sp, seed=True)
    sp.set_defaults(func=cmd_interpolate)

    sp = sub.add_parser("metric", help="full meaningfulness report for a discovered set")
    sp.add_argument("--meaningful", required=True)
    sp.add_argument("--discovered", required=True)
    sp.add_argument("--name", default="discovered")
    sp.add_argument("--splits", type=int, default=100)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--grid", type=_grid, default=None)
    sp.add_argument("--selection-kind", choices=["cvx", "jp"], default="cvx")
    sp.add_argument("--max-extensions", type=int, default=2,
                    help="times the grid may double when a distance lies beyond the curve")
    sp.add_argument("--cvx-weight", type=float, default=0.5)
    sp.add_argument("--out-prefix", default="report")
    alpha_args(sp)
    common(sp, seed=True)
    sp.set_defaults(func=cmd_metric)

    sp = sub.add_parser("cooccur", help="joint-positive probability matrix over [A | B]")
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)
    sp.add_argument("--label-a", default="A")
    sp.add_argument("--label-b", default="B")
    sp.add_argument("--out", default="cooccurrence.csv")
    common(sp)
    sp.set_defaults(func=cmd_cooccur)

    sp = sub.add_parser("synth", help="plant meaningful and noise attributes from a base set")
    sp.add_argument("--base", required=True)
    sp.add_argument("--meaningful", type=int, required=True)
    sp.add_argument("--noise", type=int, default=0)
    sp.add_argument("--flip-rate", type=float, default=0.0)
    sp.add_argument("--combine-width", type=int, default=1)
    sp.add_argument("--out", default="planted.csv")
    sp.add_argument("--truth", default="truth.csv")
    common(sp, seed=True)
    sp.set_defaults(func=cmd_synth)

    sp = sub.add_parser("convert", help="convert between 0/1 and -1/+1 encodings")
    sp.add_argument("input")
    sp.add_argument("output")
    sp.add_argument("--zero-one", action="store_true", help="input is 0/1; write -1/+1")
    sp.add_argument("--to-zero-one", action="store_true", help="input is -1/+1; write 0/1")
    sp.set_defaults(func=cmd_convert)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Unconverged as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (MeaningfulnessError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
