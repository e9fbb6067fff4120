"""Winner-take-all charge-flow networks: simulation, spectra, and oracles."""

__version__ = "0.1.0"

from ._backend import BACKEND
from .errors import DomainError, NumericError, SpikeflowError
from .graph import ChargeFlowGraph, KernelKind, LeakSemantics, expected_adjacency
from .dynamics import (
    Engine,
    SimulationConfig,
    Trajectory,
    coupled_family,
    restrict_trajectory,
    sample_trajectory,
    sample_visit_counts,
    simulate,
)
from .spectra import (
    MomentEstimate,
    SpectralMeasure,
    eigenvalues_dense,
    spectral_measure_kappa,
    spectral_measure_mu,
    top_eigenvalues_iterative,
    trace_moment,
)
from .analysis import (
    ComparisonReport,
    EpsSchedule,
    PowerLawFit,
    RobustnessResult,
    SweepResult,
    compare_spectra,
    convergence_sweep,
    fit_power_law,
    robustness_experiment,
    visit_frequency_test,
)
from . import oracle

__all__ = [
    "__version__",
    "BACKEND",
    "SpikeflowError",
    "DomainError",
    "NumericError",
    "ChargeFlowGraph",
    "LeakSemantics",
    "KernelKind",
    "expected_adjacency",
    "Engine",
    "SimulationConfig",
    "Trajectory",
    "simulate",
    "sample_trajectory",
    "sample_visit_counts",
    "restrict_trajectory",
    "coupled_family",
    "SpectralMeasure",
    "MomentEstimate",
    "eigenvalues_dense",
    "top_eigenvalues_iterative",
    "spectral_measure_mu",
    "spectral_measure_kappa",
    "trace_moment",
    "EpsSchedule",
    "ComparisonReport",
    "PowerLawFit",
    "RobustnessResult",
    "SweepResult",
    "compare_spectra",
    "convergence_sweep",
    "fit_power_law",
    "robustness_experiment",
    "visit_frequency_test",
    "oracle",
]
