"""Command-line interface.

Subcommands:

    fit        fit a lasso path to a CSV file (first column ``y``)
    simulate   write a simulated data set in the same CSV layout
    bench      time full path fits on simulated data, one row per fit
    screenmap  look-ahead discards computed at the first path step

Exit codes: 0 success, 2 input error, 3 solver nonconvergence.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

import numpy as np

from . import io
from .data import DataError, Dataset, path_spec, standardize
from .path import Strategy, fit_path
from .screening import ScreenMask, lookahead_screen
from .simulate import SimSpec, generate, rng_for
from .solver import NonConvergenceError, Tolerances, null_state

log = logging.getLogger("lookahead_lasso")

EXIT_OK, EXIT_INPUT, EXIT_NONCONVERGENCE = 0, 2, 3
DEFAULT_SNRS = (0.1, 1.0, 6.0)


def _add_path_args(parser):
    parser.add_argument("--path-length", type=int, default=100, help="number of penalty values")
    parser.add_argument("--eps", type=float, default=None,
                        help="ratio of smallest to largest penalty (default 1e-2 if p > n else 1e-4)")
    parser.add_argument("--gap-tol", type=float, default=1e-6,
                        help="duality gap tolerance, relative to 0.5*||y||^2")
    parser.add_argument("--infeas-tol", type=float, default=1e-5,
                        help="infeasibility tolerance, relative to lambda_max")


def _add_sim_args(parser, multi_snr=False):
    parser.add_argument("--n", type=int, default=100)
    parser.add_argument("--p", type=int, default=2000)
    parser.add_argument("--k-signals", type=int, default=5)
    if multi_snr:
        parser.add_argument("--snr", type=float, nargs="+", default=list(DEFAULT_SNRS))
    else:
        parser.add_argument("--snr", type=float, default=1.0)
    parser.add_argument("--rho", type=float, default=0.0, help="AR(1) correlation (0 = identity)")
    parser.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lookahead-lasso", description="Lasso paths with Gap Safe and look-ahead screening."
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    fit = sub.add_parser("fit", help="fit a lasso path to a CSV file")
    fit.add_argument("input", help="CSV with header; first column y, predictors after")
    fit.add_argument("--strategy", choices=[s.value for s in Strategy],
                     default=Strategy.GAP_SAFE_AWS_LOOKAHEAD.value)
    _add_path_args(fit)
    fit.add_argument("--out", default=".", help="output directory")

    sim = sub.add_parser("simulate", help="write a simulated data set as CSV")
    _add_sim_args(sim)
    sim.add_argument("--out", required=True, help="output CSV file")

    bench = sub.add_parser("bench", help="benchmark strategies on simulated data")
    _add_sim_args(bench, multi_snr=True)
    bench.add_argument("--strategy", nargs="+", choices=[s.value for s in Strategy],
                       default=[Strategy.GAP_SAFE_AWS.value, Strategy.GAP_SAFE_AWS_LOOKAHEAD.value])
    bench.add_argument("--reps", type=int, default=20)
    _add_path_args(bench)
    bench.add_argument("--out", required=True, help="output CSV file")

    smap = sub.add_parser("screenmap", help="look-ahead discards from the first path step")
    smap.add_argument("input", nargs="?", help="CSV input; simulated data is used if omitted")
    _add_sim_args(smap)
    _add_path_args(smap)
    smap.add_argument("--subsample", type=int, default=None,
                      help="write only this many randomly chosen predictors")
    smap.add_argument("--out", required=True, help="output CSV file")
    return parser


def _tolerances(args) -> Tolerances:
    return Tolerances(gap_frac=args.gap_tol, infeas_frac=args.infeas_tol)


def _sim_spec(args, snr=None) -> SimSpec:
    return SimSpec(n=args.n, p=args.p, k_signals=args.k_signals,
                   snr=args.snr if snr is None else snr, rho=args.rho, seed=args.seed)


def cmd_fit(args) -> int:
    X, y, names = io.read_input_csv(args.input)
    data, info = standardize(X, y)
    spec = path_spec(data, K=args.path_length, eps=args.eps)
    t0 = time.monotonic()
    result = fit_path(data, spec, args.strategy, _tolerances(args))
    elapsed = time.monotonic() - t0

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    io.write_result_json(
        out / "path.json",
        result,
        predictors=[names[j] for j in info.kept],
        dropped=[names[j] for j in info.dropped],
    )
    io.write_steps_csv(out / "steps.csv", result)
    io.write_screenmap_csv(out / "screenmap.csv", result.mask, spec.lambdas, index_map=info.kept)
    print(f"stop_reason={result.stop_reason.value} steps={result.steps_done} "
          f"wall_time_s={elapsed:.6f}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    X, y, _, sigma2 = generate(_sim_spec(args))
    io.write_input_csv(args.out, X, y)
    log.info("wrote %s (sigma2=%g)", args.out, sigma2)
    return EXIT_OK


def run_bench(sim: dict, snrs, strategies, reps: int, seed: int, tol: Tolerances,
              K: int = 100, eps=None) -> list[dict]:
    """Time one path fit per (snr, repetition, strategy) cell.

    Each repetition uses its own random stream, shared by all strategies
    so they see the same data. A discarded warm-up fit precedes timing.
    """
    strategies = [Strategy(s) for s in strategies]
    rows = []
    warm = True
    for snr in snrs:
        for rep in range(reps):
            X, y, _, _ = generate(SimSpec(snr=snr, seed=seed, **sim), stream=rep)
            data, _ = standardize(X, y)
            spec = path_spec(data, K=K, eps=eps)
            if warm:
                fit_path(data, spec, strategies[0], tol)
                warm = False
            for strategy in strategies:
                t0 = time.monotonic()
                result = fit_path(data, spec, strategy, tol)
                elapsed = time.monotonic() - t0
                rows.append({
                    "snr": float(snr),
                    "strategy": strategy.value,
                    "repetition": rep,
                    "seed": seed,
                    "wall_time_s": elapsed,
                    "total_passes": int(result.passes.sum()),
                    "total_coord_updates": int(result.coord_updates.sum()),
                    "steps_done": result.steps_done,
                })
                log.info("snr=%g rep=%d %s: %.4fs", snr, rep, strategy.value, elapsed)
    return rows


def cmd_bench(args) -> int:
    if args.reps < 1:
        raise DataError("--reps must be at least 1")
    sim = dict(n=args.n, p=args.p, k_signals=args.k_signals, rho=args.rho)
    SimSpec(snr=1.0, **sim)  # validate early
    rows = run_bench(sim, args.snr, args.strategy, args.reps, args.seed,
                     _tolerances(args), K=args.path_length, eps=args.eps)
    io.write_bench_csv(args.out, rows)
    for snr in args.snr:
        for s in args.strategy:
            times = [r["wall_time_s"] for r in rows if r["snr"] == snr and r["strategy"] == s]
            print(f"snr={snr:g} strategy={s} median_wall_time_s={np.median(times):.6f}")
    return EXIT_OK


def first_step_screen(data: Dataset, K: int = 100, eps=None):
    """Null model at lambda_max followed by one look-ahead pass."""
    spec = path_spec(data, K=K, eps=eps)
    mask = ScreenMask(data.p, len(spec))
    lookahead_screen(null_state(data), spec, mask, data, step=0)
    return mask, spec


def discarded_through(mask: ScreenMask, step: int) -> float:
    """Fraction of predictors discarded at every step 1..``step`` (0-based)."""
    if step < 1:
        return 0.0
    return float(np.mean(mask.discard[:, 1 : step + 1].all(axis=1)))


def cmd_screenmap(args) -> int:
    if args.input is not None:
        X, y, _ = io.read_input_csv(args.input)
        rng = rng_for(args.seed)
    else:
        X, y, _, _ = generate(_sim_spec(args))
        rng = rng_for(args.seed, stream=1)
    data, info = standardize(X, y)
    mask, spec = first_step_screen(data, K=args.path_length, eps=args.eps)

    predictors = np.arange(data.p)
    if args.subsample is not None:
        if not 0 < args.subsample <= data.p:
            raise DataError(f"--subsample must lie in 1..{data.p}")
        predictors = np.sort(rng.choice(data.p, size=args.subsample, replace=False))
    io.write_screenmap_csv(args.out, mask, spec.lambdas, predictors, index_map=info.kept)
    # 1-based step m is index m - 1; step 1 is lambda_max
    for m in (5, 10, 15, 20):
        if m <= len(spec):
            print(f"step {m}: discarded_through={discarded_through(mask, m - 1):.4f} "
                  f"discarded_at={np.mean(mask.discard[:, m - 1]):.4f}")
    return EXIT_OK


COMMANDS = {
    "fit": cmd_fit,
    "simulate": cmd_simulate,
    "bench": cmd_bench,
    "screenmap": cmd_screenmap,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except NonConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except (DataError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
