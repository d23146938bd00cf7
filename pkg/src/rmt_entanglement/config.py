"""Experiment configuration: JSON file plus command-line overrides."""

import json
import math
from dataclasses import dataclass, fields, replace

from .ensembles import EntryDistribution
from .errors import ConfigError

EXPERIMENTS = ("gue-entropy", "haar-entropy", "surface", "table1", "page", "kac",
               "rank-one", "mp-hist", "wachter-hist")

# experiments built on a Fermi projection of an N-site system
FERMION_EXPERIMENTS = ("gue-entropy", "haar-entropy", "rank-one", "wachter-hist")
SEEDED_EXPERIMENTS = ("gue-entropy", "haar-entropy", "rank-one", "page", "mp-hist",
                      "wachter-hist")


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    N: int | None = None
    K: int | None = None
    L: int | None = None
    kappa: float | None = None
    lam: float | None = None
    eps0: float = 2.0
    realizations: int = 1
    master_seed: int | None = None
    dist: str = EntryDistribution.GAUSSIAN.value
    base: object = None
    output_path: str | None = None
    grid_step: float | None = None
    fixed_kappa: tuple = ()
    fixed_lambda: tuple = ()
    workers: int = 1

    @property
    def n_filled(self):
        """Filling K; ``floor(kappa N)`` when only kappa is given."""
        return self.K if self.K is not None else math.floor(self.kappa * self.N)

    def __post_init__(self):
        if self.base is None:
            # entropies of random pure states are conventionally in nats
            object.__setattr__(self, "base", "e" if self.experiment == "page" else 2)

    @property
    def step(self):
        if self.grid_step is not None:
            return self.grid_step
        return 0.01 if self.experiment == "table1" else 0.05

    @property
    def block_size(self):
        return self.L if self.L is not None else math.floor(self.lam * self.N)

    def validate(self):
        e = self.experiment
        if e not in EXPERIMENTS:
            raise ConfigError("experiment", f"unknown experiment {e!r}")
        if self.realizations < 1:
            raise ConfigError("realizations", "must be >= 1")
        if self.workers < 1:
            raise ConfigError("workers", "must be >= 1")
        if not self.eps0 > 0:
            raise ConfigError("eps0", "must be positive")
        if self.base not in (2, "e"):
            raise ConfigError("base", "must be 2 or 'e'")
        try:
            EntryDistribution(self.dist)
        except ValueError:
            raise ConfigError("dist", f"unknown distribution {self.dist!r}") from None
        if e in SEEDED_EXPERIMENTS and self.master_seed is None:
            raise ConfigError("master_seed", "a seed is required (--seed)")
        if self.master_seed is not None and not 0 <= self.master_seed < 2**64:
            raise ConfigError("master_seed", "must be an unsigned 64-bit integer")
        if e in FERMION_EXPERIMENTS or e == "kac":
            self._validate_fermion(e)
        if e in ("page", "mp-hist"):
            for name in ("L", "K"):
                v = getattr(self, name)
                if v is None or v < 1:
                    raise ConfigError(name, "must be given and >= 1")
        if e in ("surface", "table1"):
            limit = 0.05 if e == "surface" else 0.01
            if not 0 < self.step <= limit:
                raise ConfigError("grid_step", f"must lie in (0, {limit}]")
            for name in ("fixed_kappa", "fixed_lambda"):
                if any(not 0 < v < 1 for v in getattr(self, name)):
                    raise ConfigError(name, "values must lie in (0, 1)")
        return self

    def _validate_fermion(self, e):
        if self.N is None or self.N < 1:
            raise ConfigError("N", "must be given and >= 1")
        if e != "kac":
            if (self.K is None) == (self.kappa is None):
                raise ConfigError("K", "give exactly one of K or kappa")
            if self.kappa is not None and not 0 < self.kappa < 1:
                raise ConfigError("kappa", "must lie in (0, 1)")
            if not 0 <= self.n_filled <= self.N:
                raise ConfigError("K", "must lie in [0, N]")
        if e == "rank-one":
            if self.L is not None and self.L != self.N - 1:
                raise ConfigError("L", "rank-one experiment uses L = N - 1")
            if self.lam is not None:
                raise ConfigError("lambda", "rank-one experiment uses L = N - 1")
            if self.N < 2:
                raise ConfigError("N", "must be >= 2")
            if self.n_filled < 1:
                raise ConfigError("K", "must be >= 1")
            return
        if (self.L is None) == (self.lam is None):
            raise ConfigError("L", "give exactly one of L or lambda")
        if self.lam is not None and not 0 < self.lam <= 1:
            raise ConfigError("lambda", "must lie in (0, 1]")
        if not 1 <= self.block_size <= self.N:
            raise ConfigError("L", "must lie in [1, N]")


_ALIASES = {"lambda": "lam", "seed": "master_seed", "out": "output_path"}


def config_from_mapping(data):
    names = {f.name for f in fields(ExperimentConfig)}
    kwargs = {}
    for key, value in data.items():
        key = _ALIASES.get(key, key)
        if key not in names:
            raise ConfigError(key, "unknown field")
        if key in ("fixed_kappa", "fixed_lambda"):
            value = tuple(value)
        kwargs[key] = value
    if "experiment" not in kwargs:
        raise ConfigError("experiment", "missing")
    return ExperimentConfig(**kwargs)


def load_config(path=None, experiment=None, **overrides):
    """Read a JSON config (optional), apply non-None overrides, and validate."""
    data = {}
    if path is not None:
        try:
            with open(path) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError("config", f"cannot read {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config", "top level must be a JSON object")
    if experiment is not None:
        data["experiment"] = experiment
    cfg = config_from_mapping(data)
    overrides = {_ALIASES.get(k, k): v for k, v in overrides.items() if v is not None}
    if overrides:
        cfg = replace(cfg, **overrides)
    return cfg.validate()
