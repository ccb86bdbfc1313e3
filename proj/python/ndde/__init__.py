"""Neutral delay dynamics of charged trajectories."""

from ._core import (
    ArgumentError,
    DomainError,
    IntegrationError,
    NddeError,
    SingularityError,
    Trajectory,
    crystal_integrate,
    crystal_kick,
    double_slit,
    far_fields,
    first_order_residual,
    pendulum_frequency,
    propagate_chain,
    recoil_factor,
    semi_sum_fields,
    solve_lightcone,
    solve_linear_delay,
    vonlaue_shift,
)

__version__ = "0.1.0"

__all__ = [
    "ArgumentError",
    "DomainError",
    "IntegrationError",
    "NddeError",
    "SingularityError",
    "Trajectory",
    "crystal_integrate",
    "crystal_kick",
    "double_slit",
    "far_fields",
    "first_order_residual",
    "pendulum_frequency",
    "propagate_chain",
    "recoil_factor",
    "semi_sum_fields",
    "solve_lightcone",
    "solve_linear_delay",
    "vonlaue_shift",
]
