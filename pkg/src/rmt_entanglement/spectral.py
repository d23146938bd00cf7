"""Dense complex-Hermitian spectral primitives.

Matrices are plain ``numpy`` arrays. The ``check_*`` helpers enforce the
structural invariants (Hermiticity, unitarity) with the tolerances used
throughout the package.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ContractViolation

HERMITIAN_ATOL = 1e-12
UNITARY_ATOL = 1e-10


def as_matrix(M):
    """Return ``M`` as a finite 2-d complex array, raising ``ValueError`` otherwise."""
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2:
        raise ValueError(f"expected a 2-d array, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    return A


def check_hermitian(H, atol=HERMITIAN_ATOL):
    """Validate that ``H`` is square and Hermitian; return it as a complex array."""
    H = as_matrix(H)
    if H.shape[0] != H.shape[1]:
        raise ValueError(f"Hermitian matrix must be square, got {H.shape}")
    if np.max(np.abs(H - H.conj().T), initial=0.0) > atol:
        raise ValueError("matrix is not Hermitian")
    if np.max(np.abs(np.diag(H).imag), initial=0.0) > atol:
        raise ValueError("Hermitian matrix has non-real diagonal")
    return H


def unitarity_residual(U):
    U = as_matrix(U)
    return float(np.max(np.abs(U.conj().T @ U - np.eye(U.shape[1])), initial=0.0))


def check_unitary(U, atol=UNITARY_ATOL):
    U = as_matrix(U)
    if U.shape[0] != U.shape[1]:
        raise ValueError(f"unitary matrix must be square, got {U.shape}")
    if unitarity_residual(U) > atol:
        raise ValueError("matrix is not unitary")
    return U


@dataclass(frozen=True)
class SpectralDecomposition:
    """Ascending eigenvalues and matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self):
        return self.eigenvalues.shape[0]

    def reconstruct(self):
        V = self.eigenvectors
        return (V * self.eigenvalues) @ V.conj().T


def _fix_phases(V):
    # first non-negligible component of each column made real positive
    mags = np.abs(V)
    first = np.argmax(mags > 1e-12 * mags.max(axis=0, initial=0.0), axis=0)
    lead = V[first, np.arange(V.shape[1])]
    return V * (lead.conj() / np.abs(lead))


def eigh(H):
    """Eigendecomposition of a Hermitian matrix with a deterministic phase convention.

    Eigenvalues come back ascending. Each eigenvector is rotated so that its
    first nonzero component is real and positive.

    Raises
    ------
    ValueError
        If ``H`` is not Hermitian.
    ContractViolation
        If LAPACK fails to converge or returns non-finite values.
    """
    H = check_hermitian(H)
    try:
        w, V = scipy.linalg.eigh(H, driver="evr", check_finite=False)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise ContractViolation(f"eigensolver failed: {exc}") from exc
    if not (np.all(np.isfinite(w)) and np.all(np.isfinite(V))):
        raise ContractViolation("eigensolver returned non-finite values")
    return SpectralDecomposition(eigenvalues=w, eigenvectors=_fix_phases(V))


def eigvalsh(H):
    """Ascending eigenvalues only (no Hermiticity check, no eigenvectors)."""
    try:
        w = scipy.linalg.eigh(H, eigvals_only=True, driver="evr", check_finite=False)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise ContractViolation(f"eigensolver failed: {exc}") from exc
    if not np.all(np.isfinite(w)):
        raise ContractViolation("eigensolver returned non-finite values")
    return w


def block(M, row_range, col_range):
    """Copy of the sub-block of ``M`` on 1-based inclusive ranges.

    ``row_range=(1, L)`` selects the first ``L`` rows, matching the usual
    notation Λ = (1, ..., L).
    """
    M = as_matrix(M)
    slices = []
    for (lo, hi), n in zip((row_range, col_range), M.shape):
        if not (1 <= lo <= hi <= n):
            raise ValueError(f"range ({lo}, {hi}) out of bounds for dimension {n}")
        slices.append(slice(lo - 1, hi))
    return M[slices[0], slices[1]].copy()


def gram(A):
    """``A @ A*``, symmetrized so the result is exactly Hermitian."""
    A = as_matrix(A)
    G = A @ A.conj().T
    G = 0.5 * (G + G.conj().T)
    np.fill_diagonal(G, G.diagonal().real)
    return G
