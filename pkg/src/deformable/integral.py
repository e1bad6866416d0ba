"""The alpha-fractional integral

    I^alpha_a f(t) = (1/alpha) exp(-beta t/alpha) int_a^t exp(beta x/alpha) f(x) dx

computed numerically (adaptive Simpson on a pre-scaled integrand) and in
closed form for exponential-polynomial-trigonometric integrands.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .expr import Binary, Const, Expr, T, Unary, lambdify, simplify
from .family import UnsupportedFamilyError, exp_linear, from_expr, solve_linear

__all__ = [
    "QuadratureConfig",
    "QuadratureError",
    "DegenerateOrdersError",
    "FracIntegralSpec",
    "UnsupportedFamilyError",
    "adaptive_simpson",
    "frac_integral_numeric",
    "frac_integral_fn",
    "frac_integral_closed",
    "compose_integrals",
]

_MIN_DEPTH = 3


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_depth: int = 50

    def __post_init__(self):
        for name in ("abs_tol", "rel_tol"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be finite and positive")
        if self.max_depth < 1:
            raise ValueError("max_depth must be a positive integer")


class QuadratureError(ArithmeticError):
    """Adaptive quadrature hit ``max_depth`` before meeting its tolerance."""

    def __init__(self, estimate: float, error: float):
        self.estimate = estimate
        self.error = error
        super().__init__(f"quadrature did not converge: estimate {estimate!r}, error ~{error:.3g}")


class DegenerateOrdersError(ValueError):
    pass


@dataclass(frozen=True)
class FracIntegralSpec:
    alpha: float
    a: float
    f: Expr

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")

    @property
    def beta(self) -> float:
        return 1.0 - self.alpha


def adaptive_simpson(
    func: Callable[[float], float],
    a: float,
    b: float,
    q: QuadratureConfig | None = None,
) -> tuple[float, float]:
    """Integrate ``func`` over ``[a, b]``; returns ``(value, error_estimate)``.

    Intervals are halved until the Simpson estimates on the two halves agree
    with the whole to ``15 * tol`` (tolerance split evenly between halves);
    accepted pieces carry the Richardson correction. ``b < a`` flips sign.

    Raises:
        QuadratureError: if some piece reaches ``max_depth`` unconverged.
    """
    q = q or QuadratureConfig()
    if a == b:
        return 0.0, 0.0
    sign = 1.0
    if b < a:
        a, b, sign = b, a, -1.0

    fa, fm, fb = func(a), func(0.5 * (a + b)), func(b)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    tol = max(q.abs_tol, q.rel_tol * abs(whole))

    pieces: list[float] = []
    err_total = 0.0
    failed = False
    stack = [(a, b, fa, fm, fb, whole, tol, 0)]
    while stack:
        lo, hi, flo, fmid, fhi, s, eps, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        lm, rm = 0.5 * (lo + mid), 0.5 * (mid + hi)
        flm, frm = func(lm), func(rm)
        h = hi - lo
        left = h / 12.0 * (flo + 4.0 * flm + fmid)
        right = h / 12.0 * (fmid + 4.0 * frm + fhi)
        delta = left + right - s
        converged = abs(delta) <= 15.0 * eps and depth >= _MIN_DEPTH
        exhausted = depth >= q.max_depth or not (lo < lm < mid < rm < hi)
        if converged or exhausted:
            if not converged:
                failed = True
            pieces.append(left + right + delta / 15.0)
            err_total += abs(delta) / 15.0
            continue
        stack.append((mid, hi, fmid, frm, fhi, right, 0.5 * eps, depth + 1))
        stack.append((lo, mid, flo, flm, fmid, left, 0.5 * eps, depth + 1))

    value = sign * math.fsum(pieces)
    if failed and err_total > max(q.abs_tol, q.rel_tol * abs(value)):
        raise QuadratureError(value, err_total)
    return value, err_total


def frac_integral_fn(
    func: Callable[[float], float],
    alpha: float,
    a: float,
    t: float,
    q: QuadratureConfig | None = None,
) -> float:
    """``I^alpha_a`` of a plain callable at ``t``.

    The factor ``exp(-beta t/alpha)`` is moved under the integral, so the
    weight ``exp(beta (x - t)/alpha)`` never exceeds 1 for ``a <= x <= t``.
    """
    if t == a:
        return 0.0
    beta = 1.0 - alpha
    if beta == 0.0:
        integrand = func
    else:
        rate = beta / alpha

        def integrand(x: float) -> float:
            return math.exp(rate * (x - t)) * func(x)

    value, _ = adaptive_simpson(integrand, a, t, q)
    return value / alpha


def frac_integral_numeric(spec: FracIntegralSpec, t: float, q: QuadratureConfig | None = None) -> float:
    """Numeric ``I^alpha_a f(t)``; zero at ``t = a``, sign-flipped for ``t < a``."""
    return frac_integral_fn(lambdify(spec.f), spec.alpha, spec.a, t, q)


def frac_integral_closed(spec: FracIntegralSpec) -> Expr:
    """Closed form of ``I^alpha_a f`` for exponential-polynomial-trig ``f``.

    Solves ``alpha g' + beta g = f`` by undetermined coefficients and adds
    the homogeneous term ``-g_p(a) exp(beta (a - t)/alpha)`` so ``g(a) = 0``.

    Raises:
        UnsupportedFamilyError: if ``f`` is outside the family.
    """
    alpha, beta, a = spec.alpha, spec.beta, spec.a
    particular = solve_linear(from_expr(spec.f), alpha, beta)
    at_a = particular(a)
    g = particular.to_expr()
    if at_a == 0.0:
        return g
    if beta == 0.0:
        return simplify(Binary("sub", g, Const(at_a)) if at_a > 0 else Binary("add", g, Const(-at_a)))
    rate = beta / alpha
    if a == 0.0:
        decay = exp_linear(-rate)
    else:
        decay = Unary("exp", Binary("mul", Const(rate), Binary("sub", Const(a), T)))
    op = "sub" if at_a > 0 else "add"
    return simplify(Binary(op, g, Binary("mul", Const(abs(at_a)), decay)))


def compose_integrals(
    f: Expr,
    alpha1: float,
    alpha2: float,
    a: float,
    t: float,
    q: QuadratureConfig | None = None,
) -> tuple[float, float]:
    """Both sides of ``I^a1 I^a2 f = (a2 I^a2 f - a1 I^a1 f) / (b1 a2 - b2 a1)``.

    The left side is a genuinely nested quadrature; the right side uses two
    single-layer integrals.

    Raises:
        DegenerateOrdersError: if ``|alpha1 - alpha2| < 1e-12``.
    """
    if abs(alpha1 - alpha2) < 1e-12:
        raise DegenerateOrdersError("orders must differ for the composition formula")
    for alpha in (alpha1, alpha2):
        if not 0.0 < alpha <= 1.0:
            raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    q = q or QuadratureConfig()
    inner_q = QuadratureConfig(q.abs_tol * 1e-2, q.rel_tol * 1e-2, q.max_depth)
    fn = lambdify(f)

    def inner(x: float) -> float:
        return frac_integral_fn(fn, alpha2, a, x, inner_q)

    lhs = frac_integral_fn(inner, alpha1, a, t, q)
    beta1, beta2 = 1.0 - alpha1, 1.0 - alpha2
    i1 = frac_integral_fn(fn, alpha1, a, t, q)
    i2 = frac_integral_fn(fn, alpha2, a, t, q)
    rhs = (alpha2 * i2 - alpha1 * i1) / (beta1 * alpha2 - beta2 * alpha1)
    return lhs, rhs
