"""Hypervirial perturbation series with Padé summation for the oscillator
``V(x) = 1/2 w^2 x^2 + 1/2 lam x^2 + lam^2 x^3``."""
from .arith import DomainError, EXACT, FLOAT
from .pade import (
    DefectiveApproximant,
    PadeApproximant,
    PoleAtEvaluationPoint,
    build_pade,
    evaluate_pade,
    real_poles_in,
    taylor_residuals,
)
from .series import (
    CoefficientTable,
    EnergySeries,
    ModelSpec,
    SequencingError,
    compute_series,
    energy_coefficient,
    eq13_reference,
    harmonic_moment_table,
    moment_coefficient,
    partial_sum,
    seed_odd_moment,
    unperturbed_energy,
)
from .oracle import converged_energy, hamiltonian_matrix, lowest_eigenvalues, position_matrix, rspt_coefficients

__version__ = "0.1.0"

__all__ = [
    "CoefficientTable", "DefectiveApproximant", "DomainError", "EXACT", "EnergySeries", "FLOAT",
    "ModelSpec", "PadeApproximant", "PoleAtEvaluationPoint", "SequencingError", "build_pade",
    "compute_series", "converged_energy", "energy_coefficient", "eq13_reference", "evaluate_pade",
    "hamiltonian_matrix", "harmonic_moment_table", "lowest_eigenvalues", "moment_coefficient",
    "partial_sum", "position_matrix", "real_poles_in", "rspt_coefficients", "seed_odd_moment",
    "taylor_residuals", "unperturbed_energy",
]
