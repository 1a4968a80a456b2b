"""Closed-form, modular and numerical evaluation of the lattice integral J(t).

J(t) is the mean of ``log(t - cos a - cos b - cos c + cos a cos b cos c)``
over the cube ``[0, pi]^3``.
"""

__version__ = "0.1.0"

from .greens import g_closed
from .hyperfun import HyperSeriesSpec, pfq
from .jformula import AlphaPoint, alpha_to_t, j_hyper, t_to_alpha
from .mahler import LaurentPolySpec, mahler_identity_residual, mahler_measure, mahler_to_j
from .modular import LatticeSumSpec, dirichlet_l, j_lattice, j_special, l_eta_product_3, u_of_q
from .numerics import (
    BudgetError,
    CutoffError,
    DivergenceError,
    DomainError,
    EvalResult,
    JIntegralError,
    NonConvergenceError,
    PrecisionConfig,
    ReflectionError,
    ZeroOnTorusError,
)
from .quadrature import CubatureGrid, g_direct, j_direct

__all__ = [
    "AlphaPoint",
    "BudgetError",
    "CubatureGrid",
    "CutoffError",
    "DivergenceError",
    "DomainError",
    "EvalResult",
    "HyperSeriesSpec",
    "JIntegralError",
    "LatticeSumSpec",
    "LaurentPolySpec",
    "NonConvergenceError",
    "PrecisionConfig",
    "ReflectionError",
    "ZeroOnTorusError",
    "alpha_to_t",
    "dirichlet_l",
    "g_closed",
    "g_direct",
    "j_direct",
    "j_hyper",
    "j_lattice",
    "j_special",
    "l_eta_product_3",
    "mahler_identity_residual",
    "mahler_measure",
    "mahler_to_j",
    "pfq",
    "t_to_alpha",
    "u_of_q",
]
