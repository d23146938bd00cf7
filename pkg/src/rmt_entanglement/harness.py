"""Seeded ensemble runners producing CSV-ready rows.

Realization ``r`` of an experiment always draws from
``RngStream(master_seed, r)``. Workers only change where a realization is
computed, never its inputs, and rows are collected in realization order.
"""

import csv
import logging
import math
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import theory
from .ensembles import (RngStream, kac_fermi_projection, sample_gue, sample_haar_unitary,
                        sample_iid_matrix)
from .errors import ContractViolation
from .fermion import (FermiSea, binary_entropy, entanglement_entropy, fermi_projection,
                      projection_from_columns, rank_one_entropy, restricted_projection)
from .radiation import page_experiment
from .spectral import eigh, eigvalsh, gram

log = logging.getLogger(__name__)

ENTROPY_COLUMNS = ("realization", "N", "K", "L", "kappa", "lambda", "S", "S_per_L", "lower",
                   "upper", "c_minus", "s_theory", "c_plus", "seed")
RANK_ONE_COLUMNS = ("realization", "N", "K", "L", "S", "S_rank_one", "abs_diff", "seed")
SURFACE_COLUMNS = ("kappa", "lambda", "c_minus", "s", "c_plus", "c_sqrt")
TABLE1_COLUMNS = ("fixed", "value", "d_cminus_s", "d_s_cplus", "d_cminus_cplus")
PAGE_COLUMNS = ("sample", "L", "K", "dist", "S", "page_exact", "page_asymptotic", "seed")
DEFICIT_COLUMNS = ("lambda", "deficit")
KAC_COLUMNS = ("N", "L", "S", "closed_form", "abs_diff")
HIST_COLUMNS = ("bin_left", "bin_right", "empirical_density", "theory_density")

TABLE1_VALUES = tuple(round(0.1 * i, 1) for i in range(1, 10))


def _theory_columns(K, L, N, base):
    kappa, lam = K / N, L / N
    nan = math.nan
    if not 0 < kappa < 1 or not 0 <= lam < 1:
        return nan, nan, nan
    c = theory.coefficients(kappa, lam, base)
    return c.c_minus, c.s, c.c_plus


def _entropy_row(r, rep, seed, theory_cols):
    rep.check_sandwich()
    c_minus, s, c_plus = theory_cols
    return {"realization": r, "N": rep.N, "K": rep.K, "L": rep.L,
            "kappa": rep.K / rep.N, "lambda": rep.L / rep.N, "S": rep.S,
            "S_per_L": rep.S / rep.L, "lower": rep.lower, "upper": rep.upper,
            "c_minus": c_minus, "s_theory": s, "c_plus": c_plus, "seed": seed}


def gue_realization(cfg, r):
    N, K, L = cfg.N, cfg.n_filled, cfg.block_size
    M = sample_gue(RngStream(cfg.master_seed, r), N, cfg.eps0)
    P = fermi_projection(eigh(M), FermiSea(K=K))
    return entanglement_entropy(restricted_projection(P, L, K=K, seed=cfg.master_seed), cfg.base)


def haar_realization(cfg, r):
    N, K, L = cfg.N, cfg.n_filled, cfg.block_size
    U = sample_haar_unitary(RngStream(cfg.master_seed, r), N)
    P = projection_from_columns(U, K)
    return entanglement_entropy(restricted_projection(P, L, K=K, seed=cfg.master_seed), cfg.base)


def rank_one_realization(cfg, r):
    N, K = cfg.N, cfg.n_filled
    U = sample_haar_unitary(RngStream(cfg.master_seed, r), N)
    P = projection_from_columns(U, K)
    rep = entanglement_entropy(restricted_projection(P, N - 1, K=K, seed=cfg.master_seed),
                               cfg.base)
    return rep, rank_one_entropy(U, K, cfg.base)


def _limit_blas():
    try:
        from threadpoolctl import threadpool_limits
    except ImportError:
        return
    threadpool_limits(1)


def _run_one(args):
    fn, cfg, r = args
    return fn(cfg, r)


def map_realizations(fn, cfg, workers=None):
    """``[fn(cfg, r) for r in range(cfg.realizations)]``, optionally on a process pool."""
    workers = cfg.workers if workers is None else workers
    jobs = [(fn, cfg, r) for r in range(cfg.realizations)]
    if workers <= 1 or len(jobs) <= 1:
        return [_run_one(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers, initializer=_limit_blas) as pool:
        return list(pool.map(_run_one, jobs))


def _run_entropy(cfg, fn, workers):
    theory_cols = _theory_columns(cfg.n_filled, cfg.block_size, cfg.N, cfg.base)
    reports = map_realizations(fn, cfg, workers)
    return [_entropy_row(r, rep, cfg.master_seed, theory_cols) for r, rep in enumerate(reports)]


def run_gue_entropy(cfg, workers=None):
    """GUE Hamiltonian -> Fermi projection onto the K lowest levels -> block entropy."""
    return _run_entropy(cfg, gue_realization, workers)


def run_haar_entropy(cfg, workers=None):
    """Same pipeline with the eigenvector matrix drawn directly from the Haar measure."""
    return _run_entropy(cfg, haar_realization, workers)


def run_rank_one(cfg, workers=None):
    rows = []
    for r, (rep, s1) in enumerate(map_realizations(rank_one_realization, cfg, workers)):
        rep.check_sandwich()
        diff = abs(rep.S - s1)
        if diff > 1e-9:
            raise ContractViolation(f"rank-one identity off by {diff:g} in realization {r}")
        rows.append({"realization": r, "N": rep.N, "K": rep.K, "L": rep.L, "S": rep.S,
                     "S_rank_one": s1, "abs_diff": diff, "seed": cfg.master_seed})
    return rows


def _grid(step):
    n = int(round(1.0 / step))
    return np.arange(1, n) / n


def run_surface_sweep(cfg):
    """``(kappa, lambda, c_minus, s, c_plus, c_sqrt)`` on a square grid inside (0, 1)^2."""
    rows = []
    for kappa in _grid(cfg.step):
        for lam in _grid(cfg.step):
            c = theory.coefficients(kappa, lam, cfg.base)
            if not c.c_minus - 1e-9 <= c.s <= c.c_plus + 1e-9:
                raise ContractViolation(f"ordering c_minus <= s <= c_plus fails at {kappa}, {lam}")
            rows.append({"kappa": kappa, "lambda": lam, "c_minus": c.c_minus, "s": c.s,
                         "c_plus": c.c_plus, "c_sqrt": c.c_sqrt})
    return rows


def run_table1(cfg):
    """Maximal gaps between the coefficients, one row per fixed kappa and per fixed lambda."""
    kappas = cfg.fixed_kappa or TABLE1_VALUES
    lams = cfg.fixed_lambda or TABLE1_VALUES
    rows = []
    for name, values in (("kappa", kappas), ("lambda", lams)):
        for v in values:
            if name == "kappa":
                d = theory.table1_distances(kappa=v, grid_step=cfg.step, base=cfg.base)
            else:
                d = theory.table1_distances(lam=v, grid_step=cfg.step, base=cfg.base)
            rows.append({"fixed": name, "value": v, "d_cminus_s": d[0], "d_s_cplus": d[1],
                         "d_cminus_cplus": d[2]})
    return rows


def run_page(cfg):
    L, K = cfg.L, cfg.K
    res = page_experiment(cfg.master_seed, L, K, cfg.dist, cfg.realizations, cfg.base)
    scale = 1.0 if cfg.base == "e" else 1.0 / math.log(2.0)
    exact = theory.page_mean(L, K) * scale
    asym = (math.log(L) - theory.page_deficit(L / K)) * scale
    log.info("page L=%d K=%d: mean %.6f +- %.6f (exact %.6f)", L, K, res.mean, res.stderr, exact)
    return [{"sample": i, "L": L, "K": K, "dist": str(cfg.dist), "S": float(s),
             "page_exact": exact, "page_asymptotic": asym, "seed": cfg.master_seed}
            for i, s in enumerate(res.samples)]


def deficit_curve(lams):
    return [{"lambda": float(x), "deficit": theory.page_deficit(float(x))} for x in lams]


def run_kac(cfg):
    N, L = cfg.N, cfg.block_size
    rep = entanglement_entropy(restricted_projection(kac_fermi_projection(N), L), cfg.base)
    closed = binary_entropy(1.0 - L / N, cfg.base)
    return [{"N": N, "L": L, "S": rep.S, "closed_form": closed, "abs_diff": abs(rep.S - closed)}]


def _histogram_rows(values, law, bins):
    lo, hi = law.support
    edges = np.linspace(lo, hi, bins + 1)
    counts, _ = np.histogram(np.clip(values, lo, hi), bins=edges)
    dens = counts / (len(values) * np.diff(edges))
    mids = 0.5 * (edges[:-1] + edges[1:])
    theo = law.density(mids)
    return [{"bin_left": a, "bin_right": b, "empirical_density": d, "theory_density": t}
            for a, b, d, t in zip(edges[:-1], edges[1:], dens, theo)]


def mp_spectrum(cfg, r=0):
    """Eigenvalues of ``X X^* / K`` for an L x K matrix with i.i.d. entries."""
    X = sample_iid_matrix(RngStream(cfg.master_seed, r), cfg.L, cfg.K, cfg.dist)
    return eigvalsh(gram(X) / cfg.K)


def run_mp_hist(cfg, bins=40):
    w = mp_spectrum(cfg)
    law = theory.marchenko_pastur_law(cfg.L / cfg.K)
    ks = theory.law_ks_distance(w, law)
    log.info("MP L=%d K=%d: KS distance %.4f", cfg.L, cfg.K, ks)
    return _histogram_rows(w, law, bins), ks


def wachter_spectrum(cfg, r=0):
    rep = haar_realization(cfg, r)
    return rep.block_spectrum


def run_wachter_hist(cfg, bins=40):
    p = wachter_spectrum(cfg)
    law = theory.wachter_law(cfg.n_filled / cfg.N, cfg.block_size / cfg.N)
    ks = theory.law_ks_distance(p, law)
    log.info("Wachter N=%d: KS distance %.4f", cfg.N, ks)
    return _histogram_rows(p, law, bins), ks


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_csv(rows, columns, out):
    """Write rows as CSV with a header; ``out`` is a path or an open text file."""
    if hasattr(out, "write"):
        w = csv.writer(out, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_fmt(row[c]) for c in columns])
        return
    with open(out, "w", newline="") as fh:
        write_csv(rows, columns, fh)


def write_plot_data(triples, out):
    """Write ``(x, y, series)`` triples."""
    write_csv([{"x": x, "y": y, "series": s} for x, y, s in triples], ("x", "y", "series"), out)
