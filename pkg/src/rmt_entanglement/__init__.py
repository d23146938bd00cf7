"""Entanglement entropy of free fermions with random-matrix one-body Hamiltonians.

Also covers the entropy of random bipartite pure states (Page's formula) and
the closed-form limit laws (semicircle, Wachter, Marchenko-Pastur) that the
Monte Carlo results are checked against.
"""

from .ensembles import (EntryDistribution, RngStream, kac_fermi_projection, kac_hamiltonian,
                        sample_gue, sample_haar_unitary, sample_iid_matrix)
from .errors import ConfigError, ContractViolation
from .fermion import (EntropyReport, FermiSea, RestrictedProjection, binary_entropy,
                      entanglement_entropy, expected_lower_bound, fermi_projection, h0,
                      offdiag_lower_bound, rank_one_entropy, restricted_projection)
from .radiation import (BipartiteState, page_experiment, random_pure_state,
                        reduced_density_matrix, von_neumann_entropy)
from .spectral import SpectralDecomposition, block, eigh, gram
from .theory import (AsymptoticCoefficients, LimitLaw, coefficients, ks_distance,
                     marchenko_pastur_law, page_deficit, page_exact, semicircle_cdf,
                     semicircle_quantile, specific_entropy, table1_distances, wachter_law)

__version__ = "0.1.0"
