"""Command-line entry point: ``rmt-entanglement <subcommand> [options]``.

Exit codes: 0 success, 2 configuration error, 3 numerical-contract violation.
"""

import argparse
import logging
import sys

import numpy as np

from . import harness
from .config import EXPERIMENTS, load_config
from .errors import ConfigError, ContractViolation

EXIT_CONFIG = 2
EXIT_CONTRACT = 3


def _base(text):
    if text in ("2", "e"):
        return 2 if text == "2" else "e"
    raise argparse.ArgumentTypeError("base must be 2 or e")


def _floats(text):
    return tuple(float(v) for v in text.split(","))


def build_parser():
    parser = argparse.ArgumentParser(prog="rmt-entanglement", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in EXPERIMENTS:
        p = sub.add_parser(name)
        p.add_argument("--config")
        p.add_argument("--seed", type=int)
        p.add_argument("--out")
        p.add_argument("--workers", type=int)
        p.add_argument("--base", type=_base)
        p.add_argument("--plot-data", action="store_true",
                       help="emit (x, y, series) triples instead of the full table")
        p.add_argument("--N", type=int)
        p.add_argument("--K", type=int)
        p.add_argument("--L", type=int)
        p.add_argument("--kappa", type=float)
        p.add_argument("--lambda", dest="lam", type=float)
        p.add_argument("--eps0", type=float)
        p.add_argument("--realizations", type=int)
        p.add_argument("--dist")
        p.add_argument("--grid-step", type=float)
        p.add_argument("--fixed-kappa", type=_floats)
        p.add_argument("--fixed-lambda", type=_floats)
    return parser


def _plot_triples(experiment, rows):
    if experiment in ("gue-entropy", "haar-entropy"):
        return [(r["realization"], r["S_per_L"], "S_per_L") for r in rows]
    if experiment == "surface":
        return [(r["kappa"], r["lambda"], f"{k}={r[k]!r}")
                for r in rows for k in ("c_minus", "s", "c_plus", "c_sqrt")]
    if experiment == "table1":
        return [(r["value"], r[k], f"{r['fixed']}:{k}")
                for r in rows for k in ("d_cminus_s", "d_s_cplus", "d_cminus_cplus")]
    if experiment == "page":
        return [(r["lambda"], r["deficit"], "deficit")
                for r in harness.deficit_curve(np.linspace(0.02, 4.0, 200))]
    if experiment in ("mp-hist", "wachter-hist"):
        return [(0.5 * (r["bin_left"] + r["bin_right"]), r[k], k)
                for r in rows for k in ("empirical_density", "theory_density")]
    if experiment == "rank-one":
        return [(r["realization"], r["S"], "S") for r in rows]
    return [(r["L"], r["S"], "S") for r in rows]


def run(cfg):
    """Dispatch a validated config; returns ``(rows, columns)``."""
    e = cfg.experiment
    if e == "gue-entropy":
        return harness.run_gue_entropy(cfg), harness.ENTROPY_COLUMNS
    if e == "haar-entropy":
        return harness.run_haar_entropy(cfg), harness.ENTROPY_COLUMNS
    if e == "rank-one":
        return harness.run_rank_one(cfg), harness.RANK_ONE_COLUMNS
    if e == "surface":
        return harness.run_surface_sweep(cfg), harness.SURFACE_COLUMNS
    if e == "table1":
        return harness.run_table1(cfg), harness.TABLE1_COLUMNS
    if e == "page":
        return harness.run_page(cfg), harness.PAGE_COLUMNS
    if e == "kac":
        return harness.run_kac(cfg), harness.KAC_COLUMNS
    if e == "mp-hist":
        return harness.run_mp_hist(cfg)[0], harness.HIST_COLUMNS
    return harness.run_wachter_hist(cfg)[0], harness.HIST_COLUMNS


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    overrides = {k: v for k, v in vars(args).items()
                 if k not in ("config", "experiment", "verbose", "plot_data", "out", "seed")}
    overrides.update(master_seed=args.seed, output_path=args.out)
    try:
        cfg = load_config(args.config, args.experiment, **overrides)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        rows, columns = run(cfg)
    except ContractViolation as exc:
        print(f"numerical contract violation: {exc}", file=sys.stderr)
        return EXIT_CONTRACT
    out = cfg.output_path or sys.stdout
    if args.plot_data:
        harness.write_plot_data(_plot_triples(cfg.experiment, rows), out)
    else:
        harness.write_csv(rows, columns, out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
