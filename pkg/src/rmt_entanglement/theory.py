"""Closed-form limit laws and the asymptotic constants built from them.

Densities with square-root edges are integrated after the substitution
``x = mid + halfwidth * sin(theta)``, which turns the edge factor
``sqrt((b - x)(x - a))`` into ``halfwidth * cos(theta)`` and leaves a smooth
integrand for ``scipy.integrate.quad``.
"""

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate, optimize
from scipy.special import digamma

from .fermion import binary_entropy, h0

QUAD_EPSABS = 1e-10


@dataclass(frozen=True)
class LimitLaw:
    """Atoms plus an absolutely continuous part ``sqrt((b - x)(x - a)) * edge_weight(x)`` on [a, b]."""

    atoms: tuple
    support: tuple
    edge_weight: Callable[[float], float]

    @property
    def _mid_half(self):
        a, b = self.support
        return 0.5 * (a + b), 0.5 * (b - a)

    def _x_of_theta(self, theta):
        # cos^2 / (1 -+ sin) keeps x - a and b - x accurate near the edges
        a, b = self.support
        _, hw = self._mid_half
        s, c2 = math.sin(theta), math.cos(theta) ** 2
        if theta < 0:
            return a + hw * c2 / (1.0 - s)
        return b - hw * c2 / (1.0 + s)

    def _theta_integrand(self, f):
        _, hw = self._mid_half

        def g(theta):
            x = self._x_of_theta(theta)
            return f(x) * hw * hw * math.cos(theta) ** 2 * self.edge_weight(x)

        return g

    def density(self, x):
        a, b = self.support
        x = np.asarray(x, dtype=float)
        inside = (x > a) & (x < b)
        out = np.zeros_like(x)
        xi = x[inside]
        out[inside] = np.sqrt((b - xi) * (xi - a)) * np.vectorize(self.edge_weight)(xi)
        return out

    def integrate_ac(self, f, lo=-math.pi / 2, hi=math.pi / 2, epsabs=QUAD_EPSABS):
        """``int f(x) dnu_ac(x)`` between the angles ``lo`` and ``hi``."""
        val, err = integrate.quad(self._theta_integrand(f), lo, hi,
                                  epsabs=epsabs, epsrel=1e-12, limit=400)
        if not np.isfinite(val) or err > 100 * max(epsabs, 1e-12 * abs(val)):
            raise ArithmeticError(f"quadrature did not converge (error estimate {err:g})")
        return val

    def expect(self, f, f_atoms=None):
        """``int f dnu`` including atoms (``f_atoms`` defaults to ``f``)."""
        f_atoms = f if f_atoms is None else f_atoms
        return sum(m * f_atoms(x) for x, m in self.atoms if m > 0) + self.integrate_ac(f)

    def total_mass(self):
        return self.expect(lambda x: 1.0)

    def mean(self):
        return self.expect(lambda x: x)

    def cdf(self, x, left=False):
        """Cumulative distribution function, vectorized over ``x``.

        With ``left=True`` returns the left limit F(x-), which differs from
        F(x) only at atoms.
        """
        x = np.asarray(x, dtype=float)
        flat = x.ravel()
        a, b = self.support
        mid, hw = self._mid_half
        order = np.argsort(flat)
        out = np.empty_like(flat)
        g = self._theta_integrand(lambda _: 1.0)
        acc, prev = 0.0, -math.pi / 2
        for i in order:
            xi = flat[i]
            theta = math.asin(min(1.0, max(-1.0, (xi - mid) / hw)))
            if theta > prev:
                acc += integrate.quad(g, prev, theta, epsabs=1e-13, limit=200)[0]
                prev = theta
            atoms = sum(m for loc, m in self.atoms if loc < xi or (loc == xi and not left))
            out[i] = atoms + (acc if xi > a else 0.0)
        return out.reshape(x.shape) if x.ndim else float(out[0])


def ks_distance(samples, cdf, cdf_left=None):
    """Kolmogorov-Smirnov sup distance between an empirical sample and a CDF.

    For laws with atoms pass ``cdf_left`` (the left limit F(x-)); samples
    are then expected to sit exactly on the atom locations.
    """
    xs = np.sort(np.asarray(samples, dtype=float))
    n = len(xs)
    F = np.asarray(cdf(xs), dtype=float)
    F_left = F if cdf_left is None else np.asarray(cdf_left(xs), dtype=float)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - F), np.max(F_left - (i - 1) / n)))


def law_ks_distance(samples, law, snap=1e-9):
    """KS distance to a :class:`LimitLaw`; samples within ``snap`` of an atom are moved onto it."""
    xs = np.array(samples, dtype=float)
    for loc, m in law.atoms:
        if m > 0:
            xs[np.abs(xs - loc) <= snap] = loc
    return ks_distance(xs, law.cdf, lambda x: law.cdf(x, left=True))


def semicircle_law(eps0=2.0):
    c = 2.0 / (math.pi * eps0 * eps0)
    return LimitLaw(atoms=(), support=(-eps0, eps0), edge_weight=lambda _: c)


def semicircle_cdf(eps, eps0=2.0):
    """Closed-form CDF of the semicircle law on [-eps0, eps0]."""
    if not eps0 > 0:
        raise ValueError("eps0 must be positive")
    e = np.clip(np.asarray(eps, dtype=float), -eps0, eps0)
    out = 0.5 + e * np.sqrt(eps0 * eps0 - e * e) / (math.pi * eps0 * eps0) + np.arcsin(e / eps0) / math.pi
    return float(out) if out.ndim == 0 else out


def semicircle_quantile(kappa, eps0=2.0):
    """Energy ``eps`` with ``semicircle_cdf(eps) = kappa``."""
    if not 0.0 < kappa < 1.0:
        raise ValueError("kappa must lie in (0, 1)")
    if kappa == 0.5:
        return 0.0
    return optimize.brentq(lambda e: semicircle_cdf(e, eps0) - kappa, -eps0, eps0,
                           xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)


def wachter_edges(kappa, lam):
    r1, r2 = math.sqrt(kappa * (1 - lam)), math.sqrt(lam * (1 - kappa))
    return (r1 - r2) ** 2, (r1 + r2) ** 2


def wachter_law(kappa, lam):
    """Limiting spectral law of the L x L block of a rank-K projection, K/N -> kappa, L/N -> lam."""
    if not (0 < kappa < 1 and 0 < lam < 1):
        raise ValueError("kappa and lambda must lie in (0, 1)")
    m0 = max(lam - kappa, 0.0) / lam
    m1 = max(lam + kappa - 1, 0.0) / lam
    c = 1.0 / (2.0 * math.pi * lam)
    return LimitLaw(atoms=((0.0, m0), (1.0, m1)), support=wachter_edges(kappa, lam),
                    edge_weight=lambda p: c / (p * (1.0 - p)))


def marchenko_pastur_law(lam):
    """Spectral law of ``X X^* / K`` for an L x K matrix, L/K -> lam (L-normalized)."""
    if not lam > 0:
        raise ValueError("lambda must be positive")
    r = math.sqrt(lam)
    c = 1.0 / (2.0 * math.pi * lam)
    return LimitLaw(atoms=((0.0, max(1.0 - 1.0 / lam, 0.0)),),
                    support=((1 - r) ** 2, (1 + r) ** 2),
                    edge_weight=lambda w: c / w)


def specific_entropy(kappa, lam, base=2):
    """Volume-law coefficient ``int h(p) dnu_ac(p)`` of the Wachter law."""
    law = wachter_law(kappa, lam)
    return law.integrate_ac(lambda p: binary_entropy(p, base), epsabs=1e-11)


@dataclass(frozen=True)
class AsymptoticCoefficients:
    c_minus: float
    c_plus: float
    c_sqrt: float
    s: float


def coefficients(kappa, lam, base=2):
    """Lower/upper volume-law coefficients, the square-root bound, and ``s``.

    ``s`` is NaN when ``lam == 0`` (no Wachter law there).
    """
    if not 0 < kappa < 1:
        raise ValueError("kappa must lie in (0, 1)")
    if not 0 <= lam < 1:
        raise ValueError("lambda must lie in [0, 1)")
    y = kappa * (1 - kappa) * (1 - lam)
    # c_minus and c_sqrt are bit-valued bounds; rescale them for other bases
    to_base = 1.0 if base == 2 else math.log(2.0)
    s = specific_entropy(kappa, lam, base) if lam > 0 else math.nan
    return AsymptoticCoefficients(c_minus=4 * y * to_base, c_plus=h0(y, base),
                                  c_sqrt=math.sqrt(4 * y) * to_base, s=s)


def table1_distances(kappa=None, lam=None, grid_step=0.01, base=2):
    """Maxima of ``s - c_minus``, ``c_plus - s``, ``c_plus - c_minus`` over the free parameter.

    Exactly one of ``kappa``/``lam`` is fixed; the other runs over
    ``grid_step, 2 grid_step, ...`` strictly inside (0, 1).
    """
    if (kappa is None) == (lam is None):
        raise ValueError("fix exactly one of kappa or lam")
    if not 0 < grid_step <= 0.01:
        raise ValueError("grid_step must be in (0, 0.01]")
    n = int(round(1.0 / grid_step))
    grid = np.arange(1, n) / n
    rows = []
    for x in grid:
        k, l = (kappa, x) if lam is None else (x, lam)
        c = coefficients(k, l, base)
        rows.append((c.s - c.c_minus, c.c_plus - c.s, c.c_plus - c.c_minus))
    return tuple(float(v) for v in np.max(rows, axis=0))


def page_exact(L, K):
    """Mean entropy (nats) of an L-dim subsystem of a uniform random pure state in C^L (x) C^K."""
    if L < 1 or K < 1:
        raise ValueError("L and K must be >= 1")
    if L > K:
        raise ValueError("page_exact needs L <= K; use page_exact(K, L) for the larger subsystem")
    if K * L <= 10**6:
        harmonic = math.fsum(1.0 / t for t in range(K + 1, K * L + 1))
    else:
        harmonic = float(digamma(K * L + 1) - digamma(K + 1))
    return harmonic - (L - 1) / (2 * K)


def page_mean(L, K):
    """:func:`page_exact` extended to L > K by subsystem symmetry."""
    return page_exact(L, K) if L <= K else page_exact(K, L)


def page_deficit(lam):
    """Limiting gap ``log L - S`` (nats) at L/K -> lam."""
    if not lam > 0:
        raise ValueError("lambda must be positive")
    return 0.5 * min(lam, 1.0 / lam) + math.log(max(1.0, lam))


def mp_entropy_integral(lam):
    """``int w log w dnu_MP(w)``, evaluated by quadrature (the atom at 0 contributes nothing)."""
    law = marchenko_pastur_law(lam)
    return law.integrate_ac(lambda w: w * math.log(w) if w > 0 else 0.0, epsabs=1e-12)
