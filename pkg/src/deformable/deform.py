"""The deformable derivative ``D^alpha f = beta*f + alpha*f'``.

Three routes to the same operator:

* :func:`deform_closed` -- symbolic, through the classical derivative,
  including the extended orders ``alpha in (n, n+1]``;
* :func:`deform_limit` -- numeric, from the defining difference quotient
  ``[(1 + eps*beta) f(t + eps*alpha) - f(t)] / eps``;
* :func:`deform_product` -- the modified product rule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

from .expr import Const, Expr, differentiate, lambdify, nth_derivative, simplify

__all__ = [
    "AlphaOrder",
    "LimitSchedule",
    "LimitStep",
    "LimitResult",
    "deform_closed",
    "deform_limit",
    "deform_power",
    "compose_coefficients",
    "deform_product",
]


@dataclass(frozen=True)
class AlphaOrder:
    """Derivative order ``alpha >= 0``.

    For ``alpha in (n, n+1]`` the fractional part is taken in ``(0, 1]`` so
    that integer orders give plain derivatives: ``alpha = 2`` has ``n = 1``
    and ``frac_alpha = 1``. Orders in ``[0, 1]`` have ``n = 0`` and
    ``frac_alpha = alpha``.
    """

    alpha: float
    n: int = field(init=False)
    frac_alpha: float = field(init=False)
    frac_beta: float = field(init=False)

    def __post_init__(self):
        alpha = float(self.alpha)
        if not math.isfinite(alpha) or alpha < 0.0:
            raise ValueError(f"order must be a finite number >= 0, got {self.alpha!r}")
        n = 0 if alpha <= 1.0 else math.ceil(alpha) - 1
        frac = alpha - n
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "frac_alpha", frac)
        object.__setattr__(self, "frac_beta", 1.0 - frac)

    @property
    def beta(self) -> float:
        return self.frac_beta

    @classmethod
    def of(cls, value: "AlphaOrder | float") -> "AlphaOrder":
        return value if isinstance(value, AlphaOrder) else cls(value)


@dataclass(frozen=True)
class LimitSchedule:
    """Geometric sequence ``eps_k = initial_eps * shrink**k``, ``k < steps``."""

    initial_eps: float = 1e-1
    shrink: float = 0.5
    steps: int = 20

    def __post_init__(self):
        if not self.initial_eps > 0.0:
            raise ValueError("initial_eps must be positive")
        if not 0.0 < self.shrink < 1.0:
            raise ValueError("shrink must lie in (0, 1)")
        if int(self.steps) != self.steps or self.steps < 1:
            raise ValueError("steps must be a positive integer")

    def epsilons(self) -> list[float]:
        return [self.initial_eps * self.shrink**k for k in range(self.steps)]


class LimitStep(NamedTuple):
    eps: float
    forward: float
    backward: float

    @property
    def central(self) -> float:
        return 0.5 * (self.forward + self.backward)


class LimitResult(NamedTuple):
    value: float
    eps_trace: list[LimitStep]


def _combine(c0: float, f: Expr, c1: float, df: Expr) -> Expr:
    # c0 + c1 = 1, so a function equal to its derivative is a fixed point
    if f == df:
        return f
    return simplify(Const(c0) * f + Const(c1) * df)


def deform_closed(f: Expr, order: AlphaOrder | float) -> Expr:
    """Symbolic ``D^alpha f``.

    ``alpha = 0`` returns ``f`` and ``alpha = 1`` returns ``f'``. For
    ``alpha in (n, n+1]`` the result is ``{beta} D^n f + {alpha} D^(n+1) f``.
    """
    order = AlphaOrder.of(order)
    if order.alpha == 0.0:
        return f
    if order.alpha == 1.0:
        return differentiate(f)
    base = nth_derivative(f, order.n)
    if order.frac_alpha == 1.0:
        return differentiate(base)
    return _combine(order.frac_beta, base, order.frac_alpha, differentiate(base))


def deform_power(f: Expr, order: AlphaOrder | float, k: int) -> Expr:
    """``k``-fold application of :func:`deform_closed`."""
    for _ in range(k):
        f = deform_closed(f, order)
    return f


def deform_limit(
    f: Expr,
    order: AlphaOrder | float,
    t: float,
    sched: LimitSchedule | None = None,
) -> LimitResult:
    """Estimate ``D^alpha f(t)`` from the limit of the difference quotient.

    Every step records the one-sided quotients at ``+eps`` and ``-eps``;
    the returned value is their mean at the smallest ``eps``, which cancels
    the first-order error term.

    Raises:
        ValueError: unless ``0 < alpha <= 1``.
        EvalDomainError: if ``t +- eps*alpha`` leaves the domain of ``f``.
    """
    order = AlphaOrder.of(order)
    if not 0.0 < order.alpha <= 1.0:
        raise ValueError(f"limit route needs 0 < alpha <= 1, got {order.alpha}")
    sched = sched or LimitSchedule()
    alpha, beta = order.alpha, order.beta
    fn = lambdify(f)
    ft = fn(t)

    def quotient(eps: float) -> float:
        return ((1.0 + eps * beta) * fn(t + eps * alpha) - ft) / eps

    trace = [LimitStep(eps, quotient(eps), quotient(-eps)) for eps in sched.epsilons()]
    return LimitResult(trace[-1].central, trace)


def compose_coefficients(o1: AlphaOrder | float, o2: AlphaOrder | float) -> tuple[float, float, float]:
    """Coefficients ``(c0, c1, c2)`` with ``D^a1 D^a2 f = c0 f + c1 f' + c2 f''``."""
    o1, o2 = AlphaOrder.of(o1), AlphaOrder.of(o2)
    for o in (o1, o2):
        if o.alpha > 1.0:
            raise ValueError("composition coefficients need orders in [0, 1]")
    a1, b1, a2, b2 = o1.alpha, o1.beta, o2.alpha, o2.beta
    return b1 * b2, a1 * b2 + a2 * b1, a1 * a2


def deform_product(f: Expr, g: Expr, order: AlphaOrder | float) -> Expr:
    """``(D^alpha f) g + alpha f g'``, which equals ``D^alpha (f g)``."""
    order = AlphaOrder.of(order)
    if order.alpha > 1.0:
        raise ValueError("product rule is stated for orders in [0, 1]")
    return simplify(deform_closed(f, order) * g + Const(order.alpha) * f * differentiate(g))
