"""Entanglement criteria for conjugate multiport measurements on bright squeezed vacuum.

Modules
-------
fock     truncated Fock bases, sparse states, quadratic mode operators
mub      unbiased multiport unitaries and generalized Pauli matrices (prime p)
linop    brute-force Schrodinger-picture multiport transforms (oracle)
bsv      truncated multi-mode squeezed vacuum
loss     joint count distributions and binomial detector loss
witness  rate / intensity criteria, critical efficiencies, complementarity
"""
from .bsv import (
    INVERSE_DEGENERACY,
    STATE_NORM,
    BsvSpec,
    build_bsv,
    sector_weights,
    truncated_mass,
)
from .fock import (
    DEFAULT_CUTOFF,
    QuadraticOperator,
    StateVector,
    basis_upto,
    enumerate_basis,
    expect_quadratic,
    expect_quartic,
    normalize,
)
from .linop import joint_transform, transform_state
from .loss import OutcomeDistribution, apply_loss, ideal_joint_distribution, q
from .mub import ModeUnitary, build_mub, build_pauli, conjugate_pair
from .witness import (
    KINDS,
    NoBracketError,
    NotEvaluable,
    WitnessReport,
    complementarity_intensities,
    complementarity_rates,
    criterion,
    critical_eta,
    epr_deficit_numbers,
    epr_deficit_rates,
    rate_bound_max,
    rate_identity_deviation,
    rotated_number_ops,
    sample_separable,
    separable_rhs_rates,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_CUTOFF",
    "INVERSE_DEGENERACY",
    "KINDS",
    "STATE_NORM",
    "BsvSpec",
    "ModeUnitary",
    "NoBracketError",
    "NotEvaluable",
    "OutcomeDistribution",
    "QuadraticOperator",
    "StateVector",
    "WitnessReport",
    "__version__",
    "apply_loss",
    "basis_upto",
    "build_bsv",
    "build_mub",
    "build_pauli",
    "complementarity_intensities",
    "complementarity_rates",
    "conjugate_pair",
    "criterion",
    "critical_eta",
    "enumerate_basis",
    "epr_deficit_numbers",
    "epr_deficit_rates",
    "expect_quadratic",
    "expect_quartic",
    "ideal_joint_distribution",
    "joint_transform",
    "normalize",
    "q",
    "rate_bound_max",
    "rate_identity_deviation",
    "rotated_number_ops",
    "sample_separable",
    "sector_weights",
    "separable_rhs_rates",
    "transform_state",
    "truncated_mass",
]
