"""Relativistic alteration factors and numerical checks of separation of variables."""

__version__ = "0.1.0"

from .alterations import (
    Frame,
    MeasuredQuantity,
    QuantityKind,
    alter,
    alter_energy_gap,
    alter_frequency,
    alter_mass,
    alter_separation_constant,
    fractional_shift,
)
from .exceptions import *  # noqa: F401,F403
from .hamilton_jacobi import HJFamily, hj_closed_family, hj_mass_alteration, hj_residual, verify_mass_invariance
from .metric import (
    CODATA_2018,
    AlterationFactor,
    Constants,
    FactorKind,
    GravitationalSource,
    KinematicFrame,
    compose,
    schwarzschild_lambda,
    special_lambda,
    time_m_from_s,
    time_s_from_m,
)
from .sepvar import (
    Grid1D,
    OperatorKind,
    SeparatedSolution,
    SeparatingOperator,
    discretize,
    eigenmodes,
    eigenvalues,
    residual_operator_equation,
    separation_constant,
    temporal_factor,
    to_m_frame,
    verify_frame_scaling,
)
