"""Linear fractional differential equations reduced to classical ones.

``D^alpha y + P y = Q`` becomes ``alpha y' + (beta + P) y = Q``, and
``D^a2 (D^a1 y) = 0`` becomes the constant-coefficient equation
``a1 a2 y'' + (a1 b2 + a2 b1) y' + b1 b2 y = 0`` with roots ``-b1/a1`` and
``-b2/a2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .deform import AlphaOrder, compose_coefficients, deform_closed
from .expr import ONE, ZERO, Binary, Const, Expr, T, Unary, depends_on_t, lambdify, simplify, to_text
from .family import ExpPoly, exp_linear, UnsupportedFamilyError, from_expr, solve_linear
from .integral import QuadratureConfig, adaptive_simpson

__all__ = [
    "FracOdeFirstOrder",
    "FracOdeComposed",
    "OdeSolution",
    "solve_first_order",
    "solve_composed",
    "residual_check",
    "composed_coefficients",
    "fit_constants",
    "REPEATED_ROOT_TOL",
]

REPEATED_ROOT_TOL = 1e-12
DEFAULT_GRID = (0.0, 2.0, 101)


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    return alpha


@dataclass(frozen=True)
class FracOdeFirstOrder:
    """``D^alpha y + P(t) y = Q(t)``."""

    alpha: float
    P: Expr
    Q: Expr = ZERO

    def __post_init__(self):
        object.__setattr__(self, "alpha", _check_alpha(self.alpha))


@dataclass(frozen=True)
class FracOdeComposed:
    """``D^alpha2 (D^alpha1 y) = 0``."""

    alpha1: float
    alpha2: float

    def __post_init__(self):
        object.__setattr__(self, "alpha1", _check_alpha(self.alpha1))
        object.__setattr__(self, "alpha2", _check_alpha(self.alpha2))


@dataclass
class OdeSolution:
    """General solution ``particular + sum_i C_i * basis_i``.

    When the coefficients fall outside the closed-form family the solution
    is ``numeric``: ``basis`` and ``particular`` are empty and ``samples``
    holds arrays ``t``, ``basis`` (one row per constant) and ``particular``
    on ``grid``.
    """

    basis: tuple[Expr, ...]
    particular: Expr | None
    constants: tuple[str, ...]
    roots: tuple[float, float] | None = None
    residual_max: float | None = None
    grid: tuple[float, float, int] | None = None
    numeric: bool = False
    samples: dict[str, np.ndarray] = field(default_factory=dict)
    note: str = ""

    def bind(self, values: Sequence[float]) -> Expr:
        if self.numeric:
            raise TypeError("numeric solutions have no formula; use bind_samples")
        values = _values(self, values)
        out: Expr = self.particular
        for c, b in zip(values, self.basis):
            out = Binary("add", out, Binary("mul", Const(c), b))
        return simplify(out)

    def bind_samples(self, values: Sequence[float]) -> np.ndarray:
        values = _values(self, values)
        if not self.numeric:
            fn = lambdify(self.bind(values))
            return np.array([fn(float(x)) for x in self.samples.get("t", _grid(self.grid or DEFAULT_GRID))])
        return self.samples["particular"] + np.asarray(values) @ self.samples["basis"]

    def __str__(self) -> str:
        if self.numeric:
            return f"<numeric solution on {self.grid}: " + " + ".join(
                [f"{c}*y{i + 1}(t)" for i, c in enumerate(self.constants)] + ["y_p(t)"]
            ) + ">"
        parts = []
        for name, b in zip(self.constants, self.basis):
            if b == ONE:
                parts.append(name)
            elif isinstance(b, Binary) and b.op in ("add", "sub"):
                parts.append(f"{name}*({to_text(b)})")
            else:
                parts.append(f"{name}*{to_text(b)}")
        if self.particular is not None and self.particular != ZERO:
            parts.append(to_text(self.particular))
        return " + ".join(parts)


def _values(sol: OdeSolution, values: Sequence[float]) -> list[float]:
    values = [float(v) for v in values]
    if len(values) != len(sol.constants):
        raise ValueError(f"expected {len(sol.constants)} constants, got {len(values)}")
    return values


def _grid(grid: tuple[float, float, int]) -> np.ndarray:
    lo, hi, points = grid
    return np.linspace(lo, hi, int(points))


def solve_first_order(ode: FracOdeFirstOrder, grid: tuple[float, float, int] = DEFAULT_GRID) -> OdeSolution:
    """General solution of ``D^alpha y + P y = Q``.

    The homogeneous part is ``exp(-(beta t + int P)/alpha)``. The particular
    part comes from undetermined coefficients when ``P`` is constant and
    ``Q`` is exponential-polynomial-trig (the integrating factor is then
    itself an exponential). Otherwise the solution is sampled on ``grid``
    and flagged ``numeric``.
    """
    alpha = ode.alpha
    beta = 1.0 - alpha
    try:
        p_terms = from_expr(ode.P)
    except UnsupportedFamilyError as exc:
        return _numeric_first_order(ode, grid, f"P outside closed-form family ({exc})")
    phi = (ExpPoly({(1, 0j): beta}) + solve_linear(p_terms, 1.0, 0.0)).scale(-1.0 / alpha)
    basis = simplify(Unary("exp", phi.to_expr())) if phi else ONE

    if not depends_on_t(ode.Q) and lambdify(ode.Q)(0.0) == 0.0:
        return OdeSolution((basis,), ZERO, ("C",), grid=grid)
    if not p_terms.is_constant():
        return _numeric_first_order(ode, grid, "non-constant P with forcing has no closed-form particular")
    try:
        q_terms = from_expr(ode.Q)
    except UnsupportedFamilyError as exc:
        return _numeric_first_order(ode, grid, f"Q outside closed-form family ({exc})")
    p0 = p_terms.terms.get((0, 0j), 0j).real
    particular = solve_linear(q_terms, alpha, beta + p0).to_expr()
    return OdeSolution((basis,), particular, ("C",), grid=grid)


def _numeric_first_order(ode: FracOdeFirstOrder, grid, note: str) -> OdeSolution:
    """Sample ``y_h = exp(-Phi)`` and ``y_p = exp(-Phi) int e^Phi Q / alpha``
    with ``Phi(t) = (beta (t - t0) + int_t0^t P) / alpha``."""
    alpha = ode.alpha
    beta = 1.0 - alpha
    p, qf = lambdify(ode.P), lambdify(ode.Q)
    ts = _grid(grid)
    q = QuadratureConfig(1e-12, 1e-12)
    phi = np.zeros_like(ts)
    yp = np.zeros_like(ts)
    for i in range(1, len(ts)):
        t0, t1 = float(ts[i - 1]), float(ts[i])
        dphi = (beta * (t1 - t0) + adaptive_simpson(p, t0, t1, q)[0]) / alpha
        phi[i] = phi[i - 1] + dphi

        def weight(x: float, t0=t0, t1=t1) -> float:
            # Phi(x) - Phi(t1) for x in [t0, t1]
            rest = (beta * (t1 - x) + adaptive_simpson(p, x, t1, q)[0]) / alpha
            return math.exp(-rest) * qf(x) / alpha

        yp[i] = math.exp(-dphi) * yp[i - 1] + adaptive_simpson(weight, t0, t1, q)[0]
    samples = {"t": ts, "basis": np.exp(-phi)[None, :], "particular": yp}
    return OdeSolution((), None, ("C",), grid=grid, numeric=True, samples=samples, note=note)


def solve_composed(ode: FracOdeComposed) -> OdeSolution:
    """General solution of ``D^alpha2 (D^alpha1 y) = 0``."""
    # + 0.0 turns -0.0 into 0.0 for alpha = 1
    r1 = -(1.0 - ode.alpha1) / ode.alpha1 + 0.0
    r2 = -(1.0 - ode.alpha2) / ode.alpha2 + 0.0
    e1 = exp_linear(r1)
    if abs(r1 - r2) > REPEATED_ROOT_TOL:
        basis = (e1, exp_linear(r2))
    else:
        basis = (e1, simplify(Binary("mul", T, e1)))
    return OdeSolution(basis, ZERO, ("C1", "C2"), roots=(r1, r2))


def composed_coefficients(ode: FracOdeComposed) -> tuple[float, float, float]:
    """``(c0, c1, c2)`` of the equivalent ``c2 y'' + c1 y' + c0 y = 0``."""
    return compose_coefficients(AlphaOrder(ode.alpha1), AlphaOrder(ode.alpha2))


def residual_check(
    sol: OdeSolution,
    ode: FracOdeFirstOrder | FracOdeComposed,
    constants: Sequence[float],
    grid: tuple[float, float, int] = DEFAULT_GRID,
) -> float:
    """Max ``|L y - forcing|`` over ``grid``, with ``L`` the fractional operator.

    Applies ``deform_closed`` symbolically to the bound solution (twice for
    the composed equation). Numeric solutions are differentiated with
    second-order finite differences on their own grid instead.
    Stores the result in ``sol.residual_max``.
    """
    if sol.numeric:
        residual = _numeric_residual(sol, ode, constants)
    else:
        y = sol.bind(constants)
        if isinstance(ode, FracOdeComposed):
            lhs = deform_closed(deform_closed(y, ode.alpha1), ode.alpha2)
            forcing = ZERO
        else:
            lhs = simplify(Binary("add", deform_closed(y, ode.alpha), Binary("mul", ode.P, y)))
            forcing = ode.Q
        lf, ff = lambdify(lhs), lambdify(forcing)
        residual = max(abs(lf(float(x)) - ff(float(x))) for x in _grid(grid))
    sol.residual_max = float(residual)
    return sol.residual_max


def _numeric_residual(sol: OdeSolution, ode, constants) -> float:
    if not isinstance(ode, FracOdeFirstOrder):
        raise TypeError("numeric solutions only arise for first-order equations")
    ts = sol.samples["t"]
    y = sol.bind_samples(constants)
    dy = np.gradient(y, ts, edge_order=2)
    p, q = lambdify(ode.P), lambdify(ode.Q)
    beta = 1.0 - ode.alpha
    res = [ode.alpha * d + (beta + p(float(x))) * v - q(float(x)) for x, v, d in zip(ts, y, dy)]
    return float(np.max(np.abs(res)))


def fit_constants(sol: OdeSolution, conditions: Sequence[tuple[float, float]]) -> tuple[float, ...]:
    """Constants matching point values ``y(t_i) = y_i`` (one per constant)."""
    if sol.numeric:
        raise TypeError("fit constants on symbolic solutions only")
    if len(conditions) != len(sol.constants):
        raise ValueError(f"need {len(sol.constants)} conditions")
    basis = [lambdify(b) for b in sol.basis]
    part = lambdify(sol.particular)
    A = np.array([[b(t) for b in basis] for t, _ in conditions])
    rhs = np.array([y - part(t) for t, y in conditions])
    return tuple(float(c) for c in np.linalg.solve(A, rhs))
