"""Random bipartite pure states and the entropy of their reduced density matrices."""

from dataclasses import dataclass

import numpy as np

from .ensembles import EntryDistribution, RngStream, _generator, draw_entries
from .errors import ContractViolation
from .spectral import eigvalsh, gram


@dataclass(frozen=True)
class BipartiteState:
    """Unit-norm amplitudes ``psi[l, k]`` of a state in C^L (x) C^K."""

    amplitudes: np.ndarray

    @property
    def L(self):
        return self.amplitudes.shape[0]

    @property
    def K(self):
        return self.amplitudes.shape[1]


def random_pure_state(rng, L, K, dist=EntryDistribution.GAUSSIAN):
    """Normalize an L x K matrix of i.i.d. entries. Gaussian entries give the uniform sphere law."""
    if L < 1 or K < 1:
        raise ValueError("L and K must be >= 1")
    gen = _generator(rng)
    for _ in range(2):
        X = draw_entries(gen, (L, K), dist)
        norm = np.linalg.norm(X)
        if norm > 0:
            return BipartiteState(amplitudes=X / norm)
    raise ContractViolation("entry distribution produced a zero vector twice")


def reduced_density_matrix(psi: BipartiteState):
    """``rho = A A^*`` for the L x K amplitude array ``A``."""
    return gram(psi.amplitudes)


def von_neumann_entropy(rho, base="e"):
    """``-sum lambda log lambda`` over the eigenvalues of ``rho`` (natural log by default)."""
    w = eigvalsh(rho)
    if w[0] < -1e-8:
        raise ContractViolation(f"density matrix has eigenvalue {w[0]!r} < 0")
    return spectrum_entropy(w, base)


def spectrum_entropy(w, base="e"):
    w = np.clip(np.asarray(w, dtype=float), 0.0, None)
    nz = w[w > 0]
    S = float(-np.sum(nz * np.log(nz)))
    if base == 2:
        return S / np.log(2.0)
    if base == "e" or base == np.e:
        return S
    raise ValueError(f"base must be 2 or 'e', got {base!r}")


def state_entropy(psi: BipartiteState, base="e"):
    """Entropy from the smaller of the two Gram matrices (their nonzero spectra coincide)."""
    A = psi.amplitudes
    rho = gram(A) if psi.L <= psi.K else gram(A.T)
    return von_neumann_entropy(rho, base)


@dataclass(frozen=True)
class PageResult:
    mean: float
    stderr: float
    samples: np.ndarray


def page_experiment(master_seed, L, K, dist=EntryDistribution.GAUSSIAN, n_samples=1000,
                    base="e", first_index=0):
    """Mean entropy over ``n_samples`` independent states, one RNG stream per sample.

    Sample ``i`` uses ``RngStream(master_seed, first_index + i)``; results are
    reduced in sample order, so the output depends only on the arguments.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    dist = EntryDistribution(dist)
    S = np.empty(n_samples)
    small = min(L, K)
    if small <= 8:
        # stack the tiny Gram matrices and diagonalize them in one call
        grams = np.empty((n_samples, small, small), dtype=complex)
        for i in range(n_samples):
            A = random_pure_state(RngStream(master_seed, first_index + i), L, K, dist).amplitudes
            A = A if L <= K else A.T
            grams[i] = A @ A.conj().T
        w = np.linalg.eigvalsh(grams)
        if np.min(w) < -1e-8:
            raise ContractViolation("density matrix has a negative eigenvalue")
        for i in range(n_samples):
            S[i] = spectrum_entropy(w[i], base)
    else:
        for i in range(n_samples):
            psi = random_pure_state(RngStream(master_seed, first_index + i), L, K, dist)
            S[i] = state_entropy(psi, base)
    stderr = float(np.std(S, ddof=1) / np.sqrt(n_samples)) if n_samples > 1 else 0.0
    return PageResult(mean=float(np.mean(S)), stderr=stderr, samples=S)
