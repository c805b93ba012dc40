"""Command-line entry point: ``treebias <command> ...``.

Exit status is 0 on success, 2 for bad arguments and 1 for runtime
failures such as unwritable output paths.
"""
from __future__ import annotations

import argparse
import logging
import sys
from fractions import Fraction
from pathlib import Path

from . import analytic, enumeration, report, simulation

DEFAULT_SEED = 20240101


class UsageError(Exception):
    pass


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _breakdown_lines(br: analytic.Theorem2Breakdown, precision: int) -> str:
    f = lambda x: report.fmt(x, max(precision, 4))  # noqa: E731
    return (f"P(positive is extreme)      {f(br.p_extreme)}\n"
            f"E[region | extreme]         {f(br.e_size_extreme)}\n"
            f"E[region | not extreme]     {f(br.e_size_not_extreme)}\n"
            f"E[region]                   {f(br.e_size_overall)}\n"
            f"ratio {report.fmt(br.ratio_to_true, precision)}\n")


def cmd_theorem1(args) -> str:
    return _breakdown_lines(analytic.theorem1_breakdown(args.n), args.precision)


def cmd_theorem2(args) -> str:
    br = analytic.theorem2_breakdown(args.n, args.p)
    text = _breakdown_lines(br, args.precision)
    return text + f"d/dp E[region]              {analytic.theorem2_derivative_in_p(args.n, args.p):.6g}\n"


def cmd_theorem3(args) -> str:
    s = analytic.SplitSummary(args.n, args.i, args.n - args.i, args.a, args.k)
    val = analytic.theorem3_expected_prevalence(s)
    exact = analytic.theorem3_expected_prevalence(s, exact=True)
    return f"{report.fmt(val, 4)}  (= {exact}, true prevalence {Fraction(s.m, s.n)})\n"


def cmd_logit_bias(args) -> str:
    return report.fmt(analytic.logistic_intercept_bias(args.n, args.pi), args.precision) + "\n"


def cmd_table1(args) -> str:
    rows = simulation.summarize_table1(args.n_values, args.p)
    render = report.table1_csv if args.format == "csv" else report.table1_markdown
    return render(rows, args.precision)


def cmd_chain(args) -> str:
    bits = tuple(int(c) for c in args.pattern if c in "01")
    s = enumeration.split_for_ordering(bits)
    pure = enumeration.pure_chain_expected_prevalence(bits)
    lines = [f"first split: i={s.i} a={s.a} k={s.k}",
             f"single split      {report.fmt(analytic.theorem3_expected_prevalence(s), 4)}",
             f"pure chain        {report.fmt(pure, 4)}"]
    if args.p_total is not None:
        ext, _, w = enumeration.chain_with_secondary_extreme(bits, args.p_total)
        lines += [f"lone positive extreme elsewhere  {report.fmt(ext, 4)}",
                  f"weighted (p={args.p_total})     {report.fmt(w, 4)}"]
    return "\n".join(lines) + "\n"


def cmd_enumerate(args) -> str:
    if args.grid:
        pairs = enumeration.table3_grid()
    elif args.n is None or args.m is None:
        raise UsageError("enumerate needs --n and --m, or --grid")
    else:
        pairs = [(args.n, args.m)]
    results = []
    for n, m in pairs:
        if args.exact:
            results.append(enumeration.enumerate_expected_prevalence_exact(n, m))
        else:
            results.append(enumeration.enumerate_expected_prevalence(n, m, workers=args.workers))
    render = report.enumeration_csv if args.format == "csv" else report.enumeration_markdown
    text = render(results, args.precision)
    if args.exact and args.format == "markdown":
        text += "".join(f"\nexact ratio n={r.n} m={r.m}: {r.ratio_to_true}" for r in results) + "\n"
    return text


def cmd_simulate(args) -> str:
    if args.experiment == "single_positive":
        iterations = simulation.PAPER_ITERATIONS if args.paper_scale else args.iterations
        cfg = simulation.SinglePositiveConfig(tuple(args.n_values), args.p, iterations, args.seed)
        rep = simulation.run_single_positive_experiment(cfg, workers=args.workers)
        csv_text = report.single_positive_csv(rep, args.precision)
        md_text = report.single_positive_markdown(rep, args.precision)
    else:
        b_values = tuple(args.b) if args.b else simulation.PAPER_B_VALUES[args.dgp]
        if args.paper_scale:
            cfg = simulation.AppendixConfig.paper_scale(args.dgp, b_values, args.seed)
        else:
            cfg = simulation.AppendixConfig(args.dgp, b_values, args.n_train, args.n_test,
                                            args.runs, args.seed)
        rows = simulation.run_appendix_experiment(cfg, workers=args.workers)
        csv_text = report.appendix_csv(rows, args.precision)
        md_text = report.appendix_markdown(rows, args.precision)
    if args.csv:
        Path(args.csv).write_text(csv_text)
    return csv_text if args.format == "csv" else md_text


def _positive_int(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {s}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("markdown", "csv"), default="markdown")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--precision", type=_positive_int, default=3)
    common.add_argument("--workers", type=_positive_int, default=None,
                        help="worker processes (default: $TREEBIAS_WORKERS or 1)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="treebias", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("theorem1", parents=[common], help="one predictor, one positive")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_theorem1)

    p = sub.add_parser("theorem2", parents=[common], help="p predictors, one positive")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, default=2)
    p.set_defaults(func=cmd_theorem2)

    p = sub.add_parser("theorem3", parents=[common], help="expected prevalence given one split")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--i", type=int, required=True, help="observations left of the split")
    p.add_argument("--a", type=int, required=True, help="positives left of the split")
    p.add_argument("--k", type=int, required=True, help="positives right of the split")
    p.set_defaults(func=cmd_theorem3)

    p = sub.add_parser("logit-bias", parents=[common], help="logistic intercept bias")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--pi", type=float, required=True)
    p.set_defaults(func=cmd_logit_bias)

    p = sub.add_parser("table1", parents=[common], help="analytic single-positive table")
    p.add_argument("--n-values", type=int, nargs="+", default=[10, 20, 30, 40, 50])
    p.add_argument("--p", type=int, default=2)
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("chain", parents=[common], help="split-to-purity chain for one ordering")
    p.add_argument("--pattern", required=True, help="labels in sorted order, e.g. 0110001000")
    p.add_argument("--p-total", type=int, default=None)
    p.set_defaults(func=cmd_chain)

    p = sub.add_parser("enumerate", parents=[common], help="exact enumeration over orderings")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--grid", action="store_true", help="n = 3..25, m = 1..ceil(n/2 - 1)")
    p.add_argument("--exact", action="store_true", help="rational arithmetic (small n)")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo experiments")
    p.add_argument("experiment", choices=("single_positive", "appendix"))
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--iterations", type=_positive_int, default=20_000)
    p.add_argument("--paper-scale", action="store_true")
    p.add_argument("--n-values", type=int, nargs="+", default=[10, 20, 30, 40, 50])
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--dgp", choices=("normal_a1", "lognormal_a1"), default="normal_a1")
    p.add_argument("--b", type=float, nargs="+")
    p.add_argument("--n-train", type=_positive_int, default=100_000)
    p.add_argument("--n-test", type=_positive_int, default=100_000)
    p.add_argument("--runs", type=int, default=10)
    p.add_argument("--csv", help="also write the CSV table to this path")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        text = args.func(args)
        _emit(text, args.out)
    except (UsageError, ValueError) as exc:
        parser.print_usage(sys.stderr)
        print(f"treebias {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"treebias {args.command}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
