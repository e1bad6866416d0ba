"""Constructive checkers for Rolle, mean-value, Taylor and the inverse property.

Points are located by a uniform 256-node sign scan followed by bisection to
a 1e-12 bracket; the leftmost root wins. A node where the target function
is already within tolerance counts as a root, which handles the plateau
case (e.g. Rolle for a constant function).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import bisect

from .deform import AlphaOrder, deform_closed, deform_power
from .expr import EvalDomainError, Expr, lambdify
from .integral import FracIntegralSpec, QuadratureConfig, frac_integral_fn, frac_integral_numeric

__all__ = [
    "Interval",
    "RootReport",
    "RootNotFoundError",
    "HypothesisError",
    "scan_root",
    "rolle_point",
    "mvt_point",
    "taylor_rhs",
    "taylor_theta",
    "ftc_forward",
    "ftc_inverse",
]

GRID_POINTS = 256
BRACKET_WIDTH = 1e-12
FTC_STEP = 5e-3
FTC_QUADRATURE = QuadratureConfig(1e-13, 1e-13)


@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b) and self.a < self.b):
            raise ValueError(f"need finite a < b, got [{self.a}, {self.b}]")


@dataclass(frozen=True)
class RootReport:
    c: float
    residual: float
    bracketing: tuple[float, float]
    sign_changes: int = 0


class RootNotFoundError(ArithmeticError):
    """No sign change (or near-zero node) on the scan grid.

    ``grid_min`` is the smallest ``|g|`` seen, at ``argmin``.
    """

    def __init__(self, message: str, grid_min: float, argmin: float):
        self.grid_min = grid_min
        self.argmin = argmin
        super().__init__(f"{message}; min |g| = {grid_min:.6g} at {argmin:.12g}")


class HypothesisError(ValueError):
    pass


def _alpha(alpha: float) -> AlphaOrder:
    order = AlphaOrder.of(alpha)
    if not 0.0 < order.alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {order.alpha}")
    return order


def _safe(g: Callable[[float], float], x: float) -> float:
    try:
        v = g(x)
    except (EvalDomainError, ZeroDivisionError, OverflowError, ValueError):
        return math.nan
    return v if math.isfinite(v) else math.nan


def scan_root(g: Callable[[float], float], lo: float, hi: float, tol: float) -> RootReport:
    """Leftmost point of the open interval ``(lo, hi)`` where ``|g| <= tol``.

    Raises:
        RootNotFoundError: if no interior node is within ``tol`` and no
            adjacent pair of nodes changes sign.
    """
    xs = np.linspace(lo, hi, GRID_POINTS)
    gs = np.array([_safe(g, float(x)) for x in xs])
    finite = np.isfinite(gs)
    changes = int(np.sum(finite[:-1] & finite[1:] & (gs[:-1] * gs[1:] < 0)))
    for i in range(GRID_POINTS - 1):
        x0, x1, g0, g1 = float(xs[i]), float(xs[i + 1]), gs[i], gs[i + 1]
        if i > 0 and finite[i] and abs(g0) <= tol:
            return RootReport(x0, float(abs(g0)), (float(xs[i - 1]), x1), changes)
        # a right node already within tol is returned next round instead
        right_hit = i + 1 < GRID_POINTS - 1 and abs(g1) <= tol
        if finite[i] and finite[i + 1] and g0 * g1 < 0 and not right_hit:
            c = bisect(g, x0, x1, xtol=BRACKET_WIDTH)
            residual = abs(g(c))
            if residual > tol:
                raise RootNotFoundError(f"bisection on [{x0}, {x1}] ended above tolerance", residual, c)
            return RootReport(c, residual, (x0, x1), changes)
    if not finite.any():
        raise RootNotFoundError("target undefined on the whole grid", math.nan, math.nan)
    k = int(np.nanargmin(np.abs(gs)))
    raise RootNotFoundError("no sign change on the grid", float(abs(gs[k])), float(xs[k]))


def rolle_point(f: Expr, alpha: float, interval: Interval, tol: float = 1e-9) -> RootReport:
    """Point ``c`` in ``(a, b)`` with ``D^alpha f(c) = beta f(c)``.

    Raises:
        HypothesisError: if ``|f(a) - f(b)| > 1e-9``.
        RootNotFoundError: if the scan finds nothing.
    """
    order = _alpha(alpha)
    fn, dfn = lambdify(f), lambdify(deform_closed(f, order))
    a, b = interval.a, interval.b
    if abs(fn(a) - fn(b)) > 1e-9:
        raise HypothesisError(f"f(a) = {fn(a)!r} differs from f(b) = {fn(b)!r}")
    beta = order.beta
    return scan_root(lambda x: dfn(x) - beta * fn(x), a, b, tol)


def mvt_point(f: Expr, alpha: float, interval: Interval, tol: float = 1e-9) -> RootReport:
    """Point ``c`` with ``D^alpha f(c) = beta f(c) + alpha (f(b) - f(a))/(b - a)``."""
    order = _alpha(alpha)
    fn, dfn = lambdify(f), lambdify(deform_closed(f, order))
    a, b = interval.a, interval.b
    slope = (fn(b) - fn(a)) / (b - a)
    alpha_, beta = order.alpha, order.beta
    return scan_root(lambda x: dfn(x) - beta * fn(x) - alpha_ * slope, a, b, tol)


def taylor_rhs(
    f: Expr,
    alpha: float,
    a: float,
    h: float,
    n: int,
    variant: str = "printed",
) -> Callable[[float], float]:
    """Right-hand side of the deformable Taylor formula as a function of theta.

    ``variant="printed"`` divides the last term by ``n! alpha``; ``"derived"``
    divides by ``n! alpha^n``, which is what re-assembling the Rolle argument
    gives. The two coincide for ``n = 1`` or ``alpha = 1``.
    """
    if variant not in ("printed", "derived"):
        raise ValueError(f"unknown variant {variant!r}")
    order = _alpha(alpha)
    al, be = order.alpha, order.beta
    ds = [lambdify(deform_power(f, order, k)) for k in range(n + 1)]
    at_a = [d(a) for d in ds[:n]]
    last = math.factorial(n) * (al if variant == "printed" else al**n)

    def rhs(theta: float) -> float:
        x = a + theta * h
        total = 0.0
        for k in range(n):
            weight = (1.0 - theta) ** (k - n + 1)
            total += h**k / (math.factorial(k) * al**k) * (
                at_a[k] - be * weight * h / (al * n) * ds[k](x)
            )
        return total + h**n / last * ds[n](x)

    return rhs


def taylor_theta(
    f: Expr,
    alpha: float,
    a: float,
    h: float,
    n: int,
    tol: float = 1e-9,
    variant: str = "printed",
) -> RootReport:
    """``theta`` in ``(0, 1)`` making the Taylor formula exact at ``a + h``.

    The report is in theta units, not ``t``.

    Raises:
        RootNotFoundError: carrying ``min |R(theta)|`` over the grid; for
            ``n >= 2`` this is evidence about the formula, not a crash.
    """
    if not h > 0:
        raise ValueError("h must be positive")
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    rhs = taylor_rhs(f, alpha, a, h, n, variant)
    target = lambdify(f)(a + h)
    return scan_root(lambda theta: rhs(theta) - target, 0.0, 1.0, tol)


def ftc_forward(
    f: Expr,
    alpha: float,
    a: float,
    t: float,
    q: QuadratureConfig | None = None,
) -> tuple[float, float]:
    """``(D^alpha u(t), f(t))`` for ``u = I^alpha_a f``.

    ``u'`` is a Richardson-extrapolated five-point central difference of the
    quadrature itself, so the check does not lean on the identity it is
    testing. The step scales with ``alpha/beta``, the decay length of the
    integral's kernel. The default quadrature tolerance keeps rounding in
    the difference near ``1e-10`` while ``|u|`` stays moderate; when
    ``t < a`` with small ``alpha`` the integral grows like
    ``exp(beta (a - t)/alpha)`` and absolute accuracy degrades with it.
    """
    order = _alpha(alpha)
    al, be = order.alpha, order.beta
    fn = lambdify(f)
    q = q or FTC_QUADRATURE
    h = FTC_STEP * (min(1.0, al / be) if be > 0 else 1.0)

    def u(s: float) -> float:
        return frac_integral_fn(fn, al, a, s, q)

    def stencil(h: float) -> float:
        return (u(t - 2 * h) - 8 * u(t - h) + 8 * u(t + h) - u(t + 2 * h)) / (12 * h)

    # one Richardson step lifts the fourth-order stencil to sixth order
    du = (16 * stencil(h / 2) - stencil(h)) / 15
    return be * u(t) + al * du, fn(t)


def ftc_inverse(
    f: Expr,
    alpha: float,
    a: float,
    t: float,
    q: QuadratureConfig | None = None,
) -> tuple[float, float]:
    """``(I^alpha_a D^alpha f (t), f(t) - exp(beta (a - t)/alpha) f(a))``."""
    order = _alpha(alpha)
    al, be = order.alpha, order.beta
    lhs = frac_integral_numeric(FracIntegralSpec(al, a, deform_closed(f, order)), t, q)
    fn = lambdify(f)
    rhs = fn(t) - math.exp(be * (a - t) / al) * fn(a)
    return lhs, rhs
