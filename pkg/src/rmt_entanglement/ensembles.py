"""Random matrix samplers and the deterministic Kac model.

Every sampler takes an :class:`RngStream` and is a pure function of it:
calling twice with the same stream gives bit-identical output.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np


@dataclass(frozen=True)
class RngStream:
    """A reproducible random stream keyed by ``(master_seed, stream_index)``.

    Distinct keys map to independent ``SeedSequence`` children, so realizations
    can be generated in any order or on any worker.
    """

    master_seed: int
    stream_index: int = 0

    def generator(self):
        seq = np.random.SeedSequence(self.master_seed, spawn_key=(self.stream_index,))
        return np.random.Generator(np.random.PCG64(seq))


class EntryDistribution(str, Enum):
    """Centered complex entry laws with E X^2 = 0 and E|X|^2 = 1."""

    GAUSSIAN = "complex-gaussian"
    RADEMACHER = "complex-rademacher"
    DISK = "complex-uniform-disk"


def _generator(rng):
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    raise TypeError(f"expected RngStream or numpy Generator, got {type(rng).__name__}")


def _complex_gaussian(gen, shape):
    return (gen.standard_normal(shape) + 1j * gen.standard_normal(shape)) / np.sqrt(2.0)


def draw_entries(gen, shape, dist):
    dist = EntryDistribution(dist)
    if dist is EntryDistribution.GAUSSIAN:
        return _complex_gaussian(gen, shape)
    if dist is EntryDistribution.RADEMACHER:
        phases = np.array([1, 1j, -1, -1j])
        return phases[gen.integers(0, 4, size=shape)]
    # uniform on the disk of radius sqrt(2), so E|X|^2 = r^2 / 2 = 1
    r = np.sqrt(2.0 * gen.random(shape))
    theta = 2.0 * np.pi * gen.random(shape)
    return r * np.exp(1j * theta)


def sample_iid_matrix(rng, rows, cols, dist=EntryDistribution.GAUSSIAN):
    """``rows x cols`` matrix with i.i.d. entries from ``dist``."""
    if rows < 1 or cols < 1:
        raise ValueError("rows and cols must be >= 1")
    return draw_entries(_generator(rng), (rows, cols), dist)


def sample_gue(rng, N, eps0=2.0):
    """GUE matrix ``eps0 (4N)^{-1/2} X`` with limiting spectrum [-eps0, eps0].

    ``X`` is Hermitian with real N(0, 1) diagonal and complex Gaussian
    off-diagonal entries of unit variance.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if not eps0 > 0:
        raise ValueError("eps0 must be positive")
    A = _complex_gaussian(_generator(rng), (N, N))
    X = (A + A.conj().T) / np.sqrt(2.0)
    np.fill_diagonal(X, X.diagonal().real)
    return (eps0 / np.sqrt(4.0 * N)) * X


def sample_haar_unitary(rng, N):
    """Haar-distributed unitary from QR of a Ginibre matrix.

    The columns of Q are rescaled by the phases of diag(R); without this
    correction the result is not Haar distributed.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    Z = _complex_gaussian(_generator(rng), (N, N))
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R)
    return Q * (d / np.abs(d))


def kac_hamiltonian(N, eps0=2.0):
    """``eps0 / N`` times the all-ones matrix, i.e. ``eps0`` times the projection on (1, ..., 1)/sqrt(N)."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if not eps0 > 0:
        raise ValueError("eps0 must be positive")
    return np.full((N, N), eps0 / N, dtype=complex)


def kac_fermi_projection(N):
    """Fermi projection of the Kac model with only the zero level filled: ``I - P_d``.

    Built analytically; the zero level is (N-1)-fold degenerate, so an
    eigensolver would return an arbitrary basis for it.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    return np.eye(N, dtype=complex) - np.full((N, N), 1.0 / N, dtype=complex)
