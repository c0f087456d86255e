"""Command-line entry point: ``t2amp quantize | sweep | example``."""
from __future__ import annotations

import argparse
import logging
import sys

import numpy as np

from .amplitude import InvalidInput
from .estimators import Method, brute_force_oracle, evaluate_estimator, region_candidates
from .harness import DEFAULT_MIN_AMPLITUDES, DEFAULT_VARIANCES, SweepConfig, run_sweep, write_csv

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}")


def _float_list(text: str) -> list[float]:
    try:
        vals = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _seed(text: str) -> int:
    try:
        return int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {text!r}")


def _methods(text: str) -> list[Method]:
    try:
        return [Method.parse(x.strip()) for x in text.split(",") if x.strip()]
    except InvalidInput as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _fmt_vec(v) -> str:
    return "[" + ", ".join(f"{x:.9g}" for x in v) + "]"


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="t2amp", description="Type-2 CSI WB/SB amplitude quantization tools")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    q = sub.add_parser("quantize", help="quantize one beam's subband amplitudes")
    q.add_argument("--amplitudes", type=_float_list, required=True)
    q.add_argument("--method", choices=[m.value for m in Method], default="optimal")
    q.add_argument("--oracle", action="store_true",
                   help="also report the brute-force grid minimizer")
    q.add_argument("--oracle-grid", type=int, default=10**6)

    s = sub.add_parser("sweep", help="Monte-Carlo RMS-NSQE sweep to CSV")
    s.add_argument("--subbands", type=int, default=10)
    s.add_argument("--variances", type=_float_list, default=list(DEFAULT_VARIANCES))
    s.add_argument("--min-amplitudes", type=_float_list, default=list(DEFAULT_MIN_AMPLITUDES))
    s.add_argument("--trials", type=int, default=10_000)
    s.add_argument("--seed", type=_seed, default=0)
    s.add_argument("--methods", type=_methods, default=list(Method))
    s.add_argument("--out", required=True)
    s.add_argument("--oracle-check", action="store_true")
    s.add_argument("--oracle-grid", type=int, default=1000)
    s.add_argument("--workers", type=int, default=1)

    sub.add_parser("example", help="the (0.5, 1) two-subband worked example")
    return p


def _cmd_quantize(args) -> None:
    res = evaluate_estimator(args.amplitudes, args.method)
    print(f"method:          {args.method}")
    print(f"wb_amplitude:    {res.wb_amplitude:.9g}")
    print(f"r_vector:        {_fmt_vec(res.r_vector)}")
    print(f"reconstruction:  {_fmt_vec(res.sb_reconstruction)}")
    print(f"total_sq_error:  {res.total_sq_error:.9g}")
    print(f"rnsqe:           {res.rnsqe:.9g}")
    if args.oracle:
        wb, err = brute_force_oracle(args.amplitudes, args.oracle_grid)
        print(f"oracle_wb:       {wb:.9g}")
        print(f"oracle_error:    {err:.9g}")


def _cmd_sweep(args) -> None:
    cfg = SweepConfig(
        subband_count=args.subbands, variances=args.variances,
        min_amplitudes=args.min_amplitudes, trials=args.trials, seed=args.seed,
        methods=args.methods, oracle_check=args.oracle_check,
        oracle_grid_points=args.oracle_grid,
    )
    rows = run_sweep(cfg, workers=max(1, args.workers))
    write_csv(rows, args.out)
    print(f"wrote {len(rows)} rows to {args.out}")


def _cmd_example(args) -> None:
    amps = np.array([0.5, 1.0])
    print("subband amplitudes: (0.5, 1)")
    print(f"{'method':<12}{'wb':>10}{'reconstruction':>22}{'rnsqe':>10}")
    for m in Method:
        r = evaluate_estimator(amps, m)
        print(f"{m.value:<12}{r.wb_amplitude:>10.6g}{_fmt_vec(r.sb_reconstruction):>22}"
              f"{r.rnsqe:>10.6g}")
    print()
    print("optimal region search:")
    print(f"{'n':>3}{'region':>22}{'p*':>10}{'clamped':>10}{'g':>12}")
    for c in region_candidates(amps):
        region = f"[{c.lower:.4g}, {c.upper:.4g}]"
        print(f"{c.n:>3}{region:>22}{c.unconstrained_min:>10.6g}"
              f"{c.clamped_min:>10.6g}{c.objective:>12.6g}")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    handler = {"quantize": _cmd_quantize, "sweep": _cmd_sweep, "example": _cmd_example}
    try:
        handler[args.command](args)
    except (InvalidInput, OSError, RuntimeError) as exc:
        print(f"t2amp: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
