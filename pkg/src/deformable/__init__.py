"""Deformable derivative ``D^alpha f = (1 - alpha) f + alpha f'`` and its
fractional integral, over a small symbolic expression language."""

from .deform import (
    AlphaOrder,
    LimitSchedule,
    compose_coefficients,
    deform_closed,
    deform_limit,
    deform_power,
    deform_product,
)
from .expr import EvalDomainError, Expr, ParseError, differentiate, evaluate, lambdify, parse, simplify, to_text
from .integral import (
    DegenerateOrdersError,
    FracIntegralSpec,
    QuadratureConfig,
    QuadratureError,
    compose_integrals,
    frac_integral_closed,
    frac_integral_numeric,
)
from .family import UnsupportedFamilyError
from .ode import FracOdeComposed, FracOdeFirstOrder, OdeSolution, residual_check, solve_composed, solve_first_order
from .sweep import SweepSpec, write_sweep
from .theorems import (
    HypothesisError,
    Interval,
    RootNotFoundError,
    ftc_forward,
    ftc_inverse,
    mvt_point,
    rolle_point,
    taylor_theta,
)

__version__ = "0.1.0"

__all__ = [
    "AlphaOrder",
    "LimitSchedule",
    "compose_coefficients",
    "deform_closed",
    "deform_limit",
    "deform_power",
    "deform_product",
    "EvalDomainError",
    "Expr",
    "ParseError",
    "differentiate",
    "evaluate",
    "lambdify",
    "parse",
    "simplify",
    "to_text",
    "DegenerateOrdersError",
    "FracIntegralSpec",
    "QuadratureConfig",
    "QuadratureError",
    "compose_integrals",
    "frac_integral_closed",
    "frac_integral_numeric",
    "UnsupportedFamilyError",
    "FracOdeComposed",
    "FracOdeFirstOrder",
    "OdeSolution",
    "residual_check",
    "solve_composed",
    "solve_first_order",
    "SweepSpec",
    "write_sweep",
    "HypothesisError",
    "Interval",
    "RootNotFoundError",
    "ftc_forward",
    "ftc_inverse",
    "mvt_point",
    "rolle_point",
    "taylor_theta",
]
