"""Command line entry point: ``robustdesign run|compare|init-config``."""
from __future__ import annotations

import argparse
import csv
import logging
import sys
from pathlib import Path

from . import __version__
from ._accel import backend_name
from .config import (
    ExperimentConfig,
    dump_config,
    parse_config,
    parse_seeds,
    with_overrides,
)
from .errors import ConfigError, InvalidInputError
from .export import export_scatter, fmt_real
from .mosa import RunResult, run

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2

log = logging.getLogger("robustdesign")


def summary_line(result: RunResult) -> str:
    b = result.best
    head = f"seed={result.config.seed} mode={result.config.mode}"
    tail = f"feasible={result.n_feasible}/{len(result.trace)}"
    if b is None:
        return f"{head} best=none {tail}"
    coords = ",".join(f"{c:.5f}" for c in b.design.coords)
    return f"{head} best=({coords}) mean={b.moments.mean:.6f} std={b.moments.std:.6f} {tail}"


def run_experiment(cfg: ExperimentConfig, out_root: Path | None = None, stream=None) -> int:
    """Run every seed of ``cfg``, export per-seed files and a summary table.

    Returns a process exit status.
    """
    stream = stream or sys.stdout
    out_root = Path(out_root if out_root is not None else cfg.output)
    problem = cfg.build_problem()
    dim = problem.dim
    rows = []
    try:
        out_root.mkdir(parents=True, exist_ok=True)
        for seed in cfg.seeds:
            result = run(problem, cfg.run_config(seed))
            export_scatter(result, out_root / f"seed_{seed}",
                           extra={"experiment": cfg.to_dict(), "backend": backend_name()})
            print(summary_line(result), file=stream, flush=True)
            b = result.best
            if b is None:
                best = [""] * (dim + 2)
            else:
                best = [fmt_real(v) for v in (*b.design.coords, b.moments.mean, b.moments.std)]
            rows.append([seed, cfg.mode, *best, result.n_feasible, len(result.archive)])
        with open(out_root / "summary.csv", "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["seed", "mode", *[f"best_x{j + 1}" for j in range(dim)],
                        "best_mean", "best_std", "n_feasible", "archive_size"])
            w.writerows(rows)
    except OSError as exc:
        print(f"error: cannot write results under {out_root}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="robustdesign",
        description="Robust design optimisation with multi-objective simulated annealing.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True, type=Path, help="experiment config (YAML)")
        seeds = p.add_mutually_exclusive_group()
        seeds.add_argument("--seed", type=int, help="run a single seed")
        seeds.add_argument("--seeds", help="seed list: '0..19' or '1,5,9'")
        p.add_argument("--out", type=Path, help="output directory")
        p.add_argument("--estimator", choices=["empirical", "pce"])
        p.add_argument("--evals", type=int, help="design evaluations per run")
        p.add_argument("-v", "--verbose", action="store_true")

    p_run = sub.add_parser("run", help="run an experiment and export CSV/JSON per seed")
    common(p_run)
    p_run.add_argument("--mode", choices=["robust", "deterministic"])

    p_cmp = sub.add_parser("compare", help="run robust and deterministic modes on the same seeds")
    common(p_cmp)

    p_init = sub.add_parser("init-config", help="print a config holding every default")
    p_init.add_argument("path", nargs="?", type=Path, help="write here instead of stdout")
    return parser


def _load(args) -> ExperimentConfig:
    cfg = parse_config(args.config)
    seeds = None
    if args.seed is not None:
        seeds = parse_seeds(args.seed)
    elif args.seeds is not None:
        seeds = parse_seeds(args.seeds)
    return with_overrides(
        cfg, seeds=seeds, estimator=args.estimator, evals=args.evals,
        mode=getattr(args, "mode", None),
        output=str(args.out) if args.out is not None else None,
    )


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")

    if args.command == "init-config":
        text = dump_config(ExperimentConfig())
        if args.path is None:
            sys.stdout.write(text)
            return EXIT_OK
        try:
            args.path.write_text(text)
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_RUNTIME
        return EXIT_OK

    try:
        cfg = _load(args)
    except (ConfigError, InvalidInputError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    log.info("backend: %s", backend_name())

    if args.command == "run":
        return run_experiment(cfg)

    status = EXIT_OK
    root = Path(cfg.output)
    for mode in ("robust", "deterministic"):
        try:
            sub_cfg = with_overrides(cfg, mode=mode)
        except ConfigError as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        status = max(status, run_experiment(sub_cfg, root / mode))
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
