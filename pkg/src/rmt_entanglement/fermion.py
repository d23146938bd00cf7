"""Free-fermion entanglement entropy from restricted Fermi projections.

For a Fermi projection P on N sites and the block Λ = (1, ..., L), the
entropy is ``S = sum_a h(p_a)`` over the eigenvalues of the L x L block of P.
It is sandwiched between

* ``lower = 4 Tr Pb (1 - Pb)``, and
* ``upper = L h0(lower / 4L)``,

where ``h0(x (1 - x)) = h(x)``.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.special import entr

from .errors import ContractViolation
from .spectral import SpectralDecomposition, check_hermitian, eigvalsh

RANGE_TOL = 1e-9
IDEMPOTENT_TOL = 1e-8
DEGENERACY_TOL = 1e-12


def _log_base(base):
    if base == 2:
        return np.log(2.0)
    if base == "e" or base == np.e:
        return 1.0
    raise ValueError(f"base must be 2 or 'e', got {base!r}")


def _clamp(x, lo, hi, what):
    x = np.asarray(x, dtype=float)
    if np.any(x < lo - RANGE_TOL) or np.any(x > hi + RANGE_TOL) or np.any(np.isnan(x)):
        raise ValueError(f"{what} outside [{lo}, {hi}]")
    return np.clip(x, lo, hi)


def binary_entropy(x, base=2):
    """Binary Shannon entropy ``-x log x - (1-x) log(1-x)``, with h(0) = h(1) = 0.

    Accepts scalars or arrays; values within 1e-9 of [0, 1] are clamped.
    """
    x = _clamp(x, 0.0, 1.0, "argument of h")
    out = (entr(x) + entr(1.0 - x)) / _log_base(base)
    return float(out) if out.ndim == 0 else out


def h0(y, base=2):
    """``h0(y) = h((1 - sqrt(1 - 4y)) / 2)`` on [0, 1/4]."""
    y = _clamp(y, 0.0, 0.25, "argument of h0")
    # 2y / (1 + sqrt(1 - 4y)) avoids cancellation for small y
    x = 2.0 * y / (1.0 + np.sqrt(1.0 - 4.0 * y))
    return binary_entropy(x, base)


@dataclass(frozen=True)
class FermiSea:
    """Either a filling ``K`` (lowest K levels) or a Fermi energy (all levels <= it)."""

    K: int | None = None
    fermi_energy: float | None = None

    def __post_init__(self):
        if (self.K is None) == (self.fermi_energy is None):
            raise ValueError("give exactly one of K or fermi_energy")
        if self.K is not None and self.K < 0:
            raise ValueError("K must be >= 0")
        if self.fermi_energy is not None and not np.isfinite(self.fermi_energy):
            raise ValueError("fermi_energy must be finite")

    def filling(self, eigenvalues):
        if self.K is not None:
            if self.K > len(eigenvalues):
                raise ValueError(f"K={self.K} exceeds dimension {len(eigenvalues)}")
            return self.K
        gaps = np.abs(np.asarray(eigenvalues) - self.fermi_energy)
        if np.any(gaps <= DEGENERACY_TOL):
            raise ContractViolation(
                "eigenvalue at the Fermi energy; use the K form to resolve the tie")
        return int(np.count_nonzero(np.asarray(eigenvalues) <= self.fermi_energy))


def projection_from_columns(V, K):
    """``sum_{k<=K} v_k v_k^*`` for the first K columns of V."""
    Vk = V[:, :K]
    P = Vk @ Vk.conj().T
    P = 0.5 * (P + P.conj().T)
    np.fill_diagonal(P, P.diagonal().real)
    return P


def fermi_projection(dec: SpectralDecomposition, sea: FermiSea):
    """Spectral projection onto the occupied one-body levels."""
    K = sea.filling(dec.eigenvalues)
    return projection_from_columns(dec.eigenvectors, K)


@dataclass(frozen=True)
class RestrictedProjection:
    """Leading L x L block of a Fermi projection, with provenance metadata."""

    matrix: np.ndarray
    N: int | None = None
    K: int | None = None
    seed: int | None = None

    @property
    def L(self):
        return self.matrix.shape[0]


def restricted_projection(P, L, *, K=None, seed=None):
    """Restrict ``P`` to the block Λ = (1, ..., L)."""
    P = check_hermitian(P, atol=1e-10)
    N = P.shape[0]
    if not 1 <= L <= N:
        raise ValueError(f"L={L} out of range [1, {N}]")
    return RestrictedProjection(matrix=P[:L, :L].copy(), N=N, K=K, seed=seed)


@dataclass(frozen=True)
class EntropyReport:
    S: float
    lower: float
    upper: float
    block_spectrum: np.ndarray = field(repr=False)
    N: int | None
    K: int | None
    L: int
    seed: int | None
    base: object = 2

    def check_sandwich(self, slack=1e-9):
        if not (self.lower - slack <= self.S <= self.upper + slack):
            raise ContractViolation(
                f"bound violated: lower={self.lower!r} S={self.S!r} upper={self.upper!r}")
        return self


def block_spectrum(matrix):
    """Eigenvalues of a block of a projection, checked and clamped to [0, 1]."""
    p = eigvalsh(matrix)
    if p[0] < -RANGE_TOL or p[-1] > 1 + RANGE_TOL:
        raise ContractViolation(
            f"block eigenvalues [{p[0]!r}, {p[-1]!r}] outside [0, 1]")
    return np.clip(p, 0.0, 1.0)


def bounds_from_spectrum(p, base=2):
    """``(lower, upper)`` in units of ``base``; ``4 x (1 - x) <= h(x)`` holds in bits."""
    L = len(p)
    variance = float(np.sum(p * (1.0 - p)))
    lower = 4.0 * variance * np.log(2.0) / _log_base(base)
    upper = L * h0(min(variance / L, 0.25), base)
    return float(lower), float(upper)


def entanglement_entropy(Pb: RestrictedProjection, base=2):
    """Entropy ``Tr h(Pb)`` plus the two-sided bounds, as an :class:`EntropyReport`."""
    p = block_spectrum(Pb.matrix)
    S = float(np.sum(binary_entropy(p, base)))
    lower, upper = bounds_from_spectrum(p, base)
    return EntropyReport(S=S, lower=lower, upper=upper, block_spectrum=p,
                         N=Pb.N, K=Pb.K, L=Pb.L, seed=Pb.seed, base=base)


def offdiag_lower_bound(P, L):
    """``4 sum_{l<=L, k>L} |P_lk|^2``, which equals ``4 Tr Pb (1 - Pb)`` for a projection."""
    P = np.asarray(P, dtype=complex)
    N = P.shape[0]
    if not 1 <= L <= N:
        raise ValueError(f"L={L} out of range [1, {N}]")
    if np.max(np.abs(P @ P - P), initial=0.0) > IDEMPOTENT_TOL:
        raise ValueError("P is not idempotent")
    return float(4.0 * np.sum(np.abs(P[:L, L:]) ** 2))


def expected_lower_bound(N, K, L):
    """Haar average of the lower bound: ``4 K(N-K) L(N-L) / (N (N^2 - 1))``."""
    if N <= 1:
        raise ValueError("N must be >= 2")
    if not (0 <= K <= N and 1 <= L <= N):
        raise ValueError("need 0 <= K <= N and 1 <= L <= N")
    return 4 * K * (N - K) * L * (N - L) / (N * (N * N - 1))


def rank_one_entropy(U, K, base=2):
    """Entropy of the block L = N - 1 through its rank-one structure.

    For L = N - 1, ``Pb (1 - Pb)`` is the rank-one matrix ``v v^*`` with
    ``v = P[:N-1, N]``, so ``S = h0(|v|^2)``.
    """
    U = np.asarray(U, dtype=complex)
    N = U.shape[0]
    if N < 2:
        raise ValueError("dimension must be >= 2")
    if not 1 <= K <= N:
        raise ValueError(f"K={K} out of range [1, {N}]")
    col = U[:, :K] @ U[-1, :K].conj()
    q = float(np.sum(np.abs(col[:-1]) ** 2))
    return h0(q, base)
