"""Command-line front end.

Exit codes: 0 on success, 1 when a check fails, 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

import numpy as np

from . import data
from .br import BRModel, TrainConfig, train
from .core import CapacityError, InputError, Penalty
from .fmeasure import maximize_f_abstain
from .hamming import minimize_hamming
from .rank import minimize_rank
from .svgplot import render_sweep_svg
from .sweep import DEFAULT_GRIDS, LOSSES, PENALTIES, SweepConfig, parse_grid, run_sweep, summarize, write_rows
from .verify import random_trials

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE = 0, 1, 2


def _penalty_arg(text: str) -> str:
    kind = text.upper()
    if kind not in PENALTIES:
        raise argparse.ArgumentTypeError(f"penalty must be one of {', '.join(PENALTIES)}")
    return kind


def cmd_train(args) -> int:
    ds = data.load_csv(args.input)
    config = TrainConfig(c_reg=args.reg, max_iter=args.max_iter, tol=args.tol, seed=args.seed)
    model = train(ds.X, ds.Y, config)
    model.save(args.out)
    for j, fit in enumerate(model.fits):
        status = "converged" if fit.converged else "max-iter"
        print(f"label {j}: {status} after {fit.iterations} iterations, |grad|={fit.grad_norm:.3g}, objective={fit.objective:.6g}")
    return EXIT_OK


def _marginals_for_predict(args) -> np.ndarray:
    if args.marginals:
        return data.load_marginals(args.marginals)
    if not args.input:
        raise InputError("--model needs --input with the feature rows")
    model = BRModel.load(args.model)
    ds = data.load_csv(args.input, require_labels=False)
    return model.predict_proba(ds.X)


def predict_line(loss: str, p, f: Penalty) -> str:
    """One prediction-file line: symbols, a tab, the expected loss (F: expected value)."""
    if loss == "hamming":
        r = minimize_hamming(p, f)
        return f"{r.prediction}\t{r.expected_loss!r}"
    if loss == "rank":
        r = minimize_rank(p, f)
        return f"{r.ranking}\t{r.expected_loss!r}"
    r = maximize_f_abstain(p, f)
    return f"{r.prediction}\t{r.expected_value!r}"


def cmd_predict(args) -> int:
    P = _marginals_for_predict(args)
    lines = [predict_line(args.loss, p, Penalty.make(args.penalty, args.cost, P.shape[1])) for p in P]
    text = "\n".join(lines) + ("\n" if lines else "")
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_sweep(args) -> int:
    ds = data.load_csv(args.input)
    grid = parse_grid(args.grid or DEFAULT_GRIDS[(args.loss, args.penalty)])
    config = SweepConfig(
        args.loss,
        args.penalty,
        grid,
        folds=args.folds,
        seed=args.seed,
        train=TrainConfig(c_reg=args.reg, max_iter=args.max_iter, tol=args.tol),
        jobs=args.jobs,
    )
    marginals = data.load_marginals(args.marginals) if args.marginals else None
    rows = run_sweep(config, ds, marginals)
    write_rows(rows, args.out)
    summary = summarize(rows)
    if args.plot:
        Path(args.plot).write_text(render_sweep_svg(summary, args.loss, args.penalty), encoding="utf-8")
    part = summary["partial"]
    for c, loss, abst in zip(part["c"], part["gen_loss"], part["abstention_pct"]):
        print(f"c={c:<8g} loss={loss:.4f} abstention={abst:.1f}%")
    return EXIT_OK


def cmd_oracle_check(args) -> int:
    start = time.perf_counter()
    worst = 0.0
    for i, trial in enumerate(random_trials(args.loss, args.m, args.trials, args.seed, args.penalty)):
        worst = max(worst, trial.gap)
        if trial.gap > args.tol:
            print(f"FAIL trial {i}: |fast - brute| = {trial.gap:.3g} > {args.tol:g}")
            print(f"  p = {trial.p.tolist()!r}")
            print(f"  penalty = {trial.penalty.kind}, c = {trial.penalty.c!r}")
            print(f"  fast  = {trial.fast_prediction} value {trial.fast_value!r}")
            print(f"  brute = {trial.brute_prediction} value {trial.brute_value!r}")
            return EXIT_CHECK_FAILED
    elapsed = time.perf_counter() - start
    print(f"PASS {args.trials} trials, loss={args.loss}, m={args.m}, max gap {worst:.3g}, {elapsed:.2f}s")
    return EXIT_OK


def cmd_synth(args) -> int:
    ds = data.synth(args.m, args.n, args.d, args.seed)
    out = Path(args.out)
    data.write_csv(ds, out)
    data.write_marginals(ds.true_marginals, marginals_path(out))
    print(f"wrote {out} and {marginals_path(out)}")
    return EXIT_OK


def marginals_path(dataset_path) -> Path:
    """Companion file holding the true marginals of a synthetic dataset."""
    p = Path(dataset_path)
    return p.with_name(p.stem + ".marginals.csv")


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mlc-abstain", description="Multilabel prediction with partial abstention.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="fit a binary relevance logistic model")
    p.add_argument("--input", required=True, help="dataset CSV")
    p.add_argument("--out", required=True, help="model file to write")
    p.add_argument("--reg", type=float, default=1.0)
    p.add_argument("--max-iter", type=int, default=2000)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="Bayes-optimal partial predictions per instance")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--model", help="model file from `train`")
    src.add_argument("--marginals", help="CSV of marginals (p0..p{m-1})")
    p.add_argument("--input", help="feature CSV, needed with --model")
    p.add_argument("--loss", choices=LOSSES, required=True)
    p.add_argument("--penalty", type=_penalty_arg, default="SEP")
    p.add_argument("--cost", type=float, required=True)
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("sweep", help="cross-validated cost sweep")
    p.add_argument("--input", required=True, help="dataset CSV")
    p.add_argument("--marginals", help="use these marginals instead of training")
    p.add_argument("--loss", choices=LOSSES, required=True)
    p.add_argument("--penalty", type=_penalty_arg, required=True)
    p.add_argument("--grid", help="start:stop:step (inclusive)")
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--reg", type=float, default=1.0)
    p.add_argument("--max-iter", type=int, default=2000)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--jobs", type=_positive_int, default=1)
    p.add_argument("--out", required=True, help="results CSV")
    p.add_argument("--plot", help="optional SVG output")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("oracle-check", help="compare minimizers with brute force")
    p.add_argument("--loss", choices=LOSSES, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--trials", type=_positive_int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--penalty", type=_penalty_arg, help="fix the penalty kind (default: random per trial)")
    p.set_defaults(func=cmd_oracle_check)

    p = sub.add_parser("synth", help="write a synthetic dataset and its true marginals")
    p.add_argument("--m", type=_positive_int, required=True)
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--d", type=_positive_int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (InputError, CapacityError) as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
