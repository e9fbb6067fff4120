from .bessel import BesselZero, bessel_j, j0, j1, j1_prime, j1_zero, j1_zeros
from .exactdp import (
    exact_edge_probability,
    expected_path_length,
    visit_probabilities,
)
from .operators import (
    EigenfunctionK,
    OracleSpectrum,
    eigen_residual,
    k_eigenfunction,
    k_spectrum,
    k_spectrum_nystrom,
    limit_moment,
    m_spectrum_truncated,
    moment_tail_bound,
    psi,
    write_oracle_csv,
)

__all__ = [
    "BesselZero",
    "bessel_j",
    "j0",
    "j1",
    "j1_prime",
    "j1_zero",
    "j1_zeros",
    "exact_edge_probability",
    "expected_path_length",
    "visit_probabilities",
    "EigenfunctionK",
    "OracleSpectrum",
    "eigen_residual",
    "k_eigenfunction",
    "k_spectrum",
    "k_spectrum_nystrom",
    "limit_moment",
    "m_spectrum_truncated",
    "moment_tail_bound",
    "psi",
    "write_oracle_csv",
]
