"""Command-line harness.

    laurentseries SUBCOMMAND [--config PATH] [--out DIR] [--seed U64] [--workers N]

Each subcommand starts from its built-in default config, overlays the JSON
file given with --config, then --seed.  Results go to OUT/SUBCOMMAND/ as
CSV tables plus verdict.json.  Exit status: 0 if every verdict passes, 1 if
one fails, 2 for an invalid config.
"""

from __future__ import annotations

import argparse
import csv
import filecmp
import io
import json
import logging
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .config import ExperimentConfig
from .errors import ConfigurationError, DomainError, LaurentError
from .experiments import DEFAULTS, EXPERIMENTS, Outcome, default_config, run_experiment

OUT_ENV = "LAURENT_OUT"
DEFAULT_OUT = "laurent-out"

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

log = logging.getLogger("laurentseries")


# -- output ---------------------------------------------------------------------

def _jsonable(x):
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, complex):
        return [x.real, x.imag]
    raise TypeError(f"cannot serialise {type(x).__name__}")


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def write_outcome(outcome: Outcome, cfg: ExperimentConfig, directory: Path) -> None:
    for name, (header, rows) in sorted(outcome.tables.items()):
        _atomic_write(directory / f"{name}.csv", _csv_text(header, rows))
    verdict = {**outcome.verdict, "config": cfg.to_dict()}
    verdict["config"]["out"] = None  # the location is not part of the result
    _atomic_write(directory / "verdict.json", json.dumps(verdict, indent=2, sort_keys=True, default=_jsonable) + "\n")


# -- report / determinism ----------------------------------------------------------

def _suite_member(args) -> tuple[str, Outcome, ExperimentConfig]:
    name, seed = args
    cfg = default_config(name, seed)
    return name, run_experiment(name, cfg), cfg


def run_suite(names, seed: int, out: Path, workers: int) -> list[Outcome]:
    """Every named experiment on its default config; one directory each."""
    jobs = [(name, seed) for name in names]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
            results = list(pool.map(_suite_member, jobs))
    else:
        results = [_suite_member(j) for j in jobs]
    outcomes = []
    for name, outcome, cfg in results:
        write_outcome(outcome, cfg, out / name)
        outcomes.append(outcome)
    return outcomes


def _headline(outcome: Outcome) -> str:
    v = outcome.verdict
    for key in ("max_oracle_error", "max_error", "max_residual", "corrected_violations", "failures",
                "sandwich_failures"):
        if key in v:
            return f"{key}={v[key]!r}"
    return ""


def report(cfg: ExperimentConfig, out: Path, workers: int) -> Outcome:
    names = cfg.option("experiments", list(EXPERIMENTS))
    unknown = [n for n in names if n not in EXPERIMENTS]
    if unknown:
        raise ConfigurationError(f"unknown experiments: {', '.join(unknown)}")
    outcomes = run_suite(names, cfg.seed, out, workers)
    rows = [[o.name, int(o.passed), _headline(o)] for o in outcomes]
    verdict = {"experiment": "report", "seed": cfg.seed, "results": {o.name: o.passed for o in outcomes},
               "passed": all(o.passed for o in outcomes)}
    return Outcome("report", verdict, {"summary": (["experiment", "passed", "headline"], rows)})


def determinism(cfg: ExperimentConfig, workers: int) -> Outcome:
    """Run the suite twice with one seed and compare every CSV byte for byte."""
    names = cfg.option("experiments", list(EXPERIMENTS))
    with tempfile.TemporaryDirectory() as a, tempfile.TemporaryDirectory() as b:
        run_suite(names, cfg.seed, Path(a), workers)
        run_suite(names, cfg.seed, Path(b), workers)
        files = sorted(p.relative_to(a) for p in Path(a).rglob("*.csv"))
        other = sorted(p.relative_to(b) for p in Path(b).rglob("*.csv"))
        rows = [[str(p), int(p in other and filecmp.cmp(Path(a) / p, Path(b) / p, shallow=False))] for p in files]
    same = files == other and all(r[1] for r in rows)
    verdict = {"experiment": "determinism", "seed": cfg.seed, "files": len(files), "identical": same,
               "passed": same}
    return Outcome("determinism", verdict, {"determinism": (["file", "identical"], rows)})


# -- entry point ---------------------------------------------------------------------

SUBCOMMANDS = {
    "enumeration": "sigma bijectivity and prefix/box sandwich",
    "coeffs": "coefficient tables, oracle errors, aliasing, radius independence",
    "monomials": "exact reproduction of Laurent polynomials",
    "kernels": "mu symmetry and kernel magnitudes",
    "bound-check": "coefficient bound certificates (literal and corrected constants)",
    "shift": "derivative-shift identity at random points",
    "seminorms": "seminorm reports and the C^k / box sandwich",
    "tails": "term-seminorm tails and the prefix/box sandwich",
    "net-cauchy": "threshold N0, random supersets and rearrangements",
    "permute": "rearrangement checks alone",
    "convergence": "box partial-sum errors and their decay rate",
    "summability": "partial sums of the global bound constants",
    "report": "run every experiment and write a summary table",
    "determinism": "run the suite twice and compare CSV bytes",
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="laurentseries",
                                description="Laurent series experiments on Reinhardt domains.")
    sub = p.add_subparsers(dest="command", required=True, metavar="SUBCOMMAND")
    for name, help_text in SUBCOMMANDS.items():
        s = sub.add_parser(name, help=help_text, description=help_text)
        s.add_argument("--config", type=Path, help="JSON config overlaid on the subcommand defaults")
        s.add_argument("--out", type=Path, help=f"output directory (default ${OUT_ENV} or ./{DEFAULT_OUT})")
        s.add_argument("--seed", type=int, help="random seed, unsigned 64-bit")
        s.add_argument("--workers", type=int, default=1, help="process budget (default 1)")
        s.add_argument("--print-config", action="store_true", help="print the effective config and exit")
    return p


def _config_for(args) -> ExperimentConfig:
    base = default_config(args.command) if args.command in DEFAULTS else ExperimentConfig()
    cfg = ExperimentConfig.load(args.config, base) if args.config else base
    if args.seed is not None:
        cfg = cfg.replace(seed=args.seed)
    if args.workers < 1:
        raise ConfigurationError("--workers must be at least 1")
    return cfg


def _out_dir(args, cfg: ExperimentConfig) -> Path:
    return Path(args.out or cfg.out or os.environ.get(OUT_ENV) or DEFAULT_OUT)


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s", stream=sys.stderr)
    args = build_parser().parse_args(argv)
    try:
        cfg = _config_for(args)
        if args.print_config:
            sys.stdout.write(cfg.to_json())
            return EXIT_OK
        out = _out_dir(args, cfg)
        if args.command == "report":
            outcome = report(cfg, out, args.workers)
        elif args.command == "determinism":
            outcome = determinism(cfg, args.workers)
        else:
            outcome = run_experiment(args.command, cfg, args.workers)
        write_outcome(outcome, cfg, out / args.command)
    except (ConfigurationError, DomainError) as exc:
        log.error("invalid configuration: %s", exc)
        return EXIT_CONFIG
    except LaurentError as exc:
        log.error("%s", exc)
        return EXIT_FAIL
    status = "PASS" if outcome.passed else "FAIL"
    log.info("%s %s -> %s", args.command, status, out / args.command)
    return EXIT_OK if outcome.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
