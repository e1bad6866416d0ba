"""Exponential-polynomial-trigonometric functions in exact-term form.

A member of the family is a finite sum ``sum K * t**n * exp(lam * t)`` with
complex ``lam`` and ``K``; sines and cosines enter through conjugate pairs,
so every sum built from a real expression is real-valued. The family is
closed under differentiation and under solving ``p*g' + q*g = f``, which
is how closed-form fractional integrals and ODE particular solutions are
obtained.
"""

from __future__ import annotations

import cmath
import math
from collections import defaultdict

from .expr import (
    ONE,
    ZERO,
    Binary,
    Const,
    EvalDomainError,
    Expr,
    T,
    Unary,
    Var,
    depends_on_t,
    evaluate,
    simplify,
)

__all__ = ["UnsupportedFamilyError", "ExpPoly", "from_expr", "solve_linear", "linear_expr", "exp_linear", "polynomial_expr"]

# |p*lam + q| below this (relative) is treated as resonance
RESONANCE_TOL = 1e-12


class UnsupportedFamilyError(ValueError):
    """The expression is not a finite sum of ``t^n e^{ct} {sin, cos, 1}(wt)``."""


Key = tuple[int, complex]


class ExpPoly:
    """Immutable map ``(n, lam) -> K`` standing for ``sum K t^n e^{lam t}``."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[Key, complex] | None = None):
        clean = {}
        for (n, lam), k in (terms or {}).items():
            if k != 0:
                clean[(int(n), complex(lam))] = complex(k)
        self.terms = clean

    @classmethod
    def constant(cls, c: complex) -> "ExpPoly":
        return cls({(0, 0j): c})

    @classmethod
    def exponential(cls, lam: complex, coeff: complex = 1.0) -> "ExpPoly":
        return cls({(0, complex(lam)): coeff})

    def __repr__(self):
        return f"ExpPoly({self.terms!r})"

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other: "ExpPoly") -> "ExpPoly":
        out = defaultdict(complex, self.terms)
        for key, k in other.terms.items():
            out[key] += k
        return ExpPoly(out)

    def __neg__(self) -> "ExpPoly":
        return self.scale(-1.0)

    def __sub__(self, other: "ExpPoly") -> "ExpPoly":
        return self + (-other)

    def scale(self, c: complex) -> "ExpPoly":
        return ExpPoly({key: c * k for key, k in self.terms.items()})

    def __mul__(self, other: "ExpPoly") -> "ExpPoly":
        out: dict[Key, complex] = defaultdict(complex)
        for (n1, l1), k1 in self.terms.items():
            for (n2, l2), k2 in other.terms.items():
                out[(n1 + n2, l1 + l2)] += k1 * k2
        return ExpPoly(out)

    def __pow__(self, n: int) -> "ExpPoly":
        result = ExpPoly.constant(1.0)
        for _ in range(n):
            result = result * self
        return result

    def is_constant(self) -> bool:
        return all(key == (0, 0j) for key in self.terms)

    def affine(self) -> tuple[float, float] | None:
        """``(p, q)`` if this is the real function ``p*t + q``, else None."""
        if any(key not in ((0, 0j), (1, 0j)) for key in self.terms):
            return None
        p = self.terms.get((1, 0j), 0j)
        q = self.terms.get((0, 0j), 0j)
        scale = max(1.0, abs(p), abs(q))
        if abs(p.imag) > 1e-14 * scale or abs(q.imag) > 1e-14 * scale:
            return None
        return p.real, q.real

    def __call__(self, t: float) -> float:
        total = 0j
        for (n, lam), k in self.terms.items():
            total += k * t**n * cmath.exp(lam * t)
        return total.real

    def derivative(self) -> "ExpPoly":
        out: dict[Key, complex] = defaultdict(complex)
        for (n, lam), k in self.terms.items():
            out[(n, lam)] += k * lam
            if n > 0:
                out[(n - 1, lam)] += k * n
        return ExpPoly(out)

    def real_groups(self) -> dict[tuple[float, float], dict[int, complex]]:
        """Fold conjugate pairs: ``(c, w>=0) -> {n: K}`` meaning
        ``sum_n t^n e^{ct} (Re K cos wt - Im K sin wt)``."""
        groups: dict[tuple[float, float], dict[int, complex]] = defaultdict(lambda: defaultdict(complex))
        for (n, lam), k in self.terms.items():
            c, w = lam.real, lam.imag
            if w < 0:
                groups[(c, -w)][n] += k.conjugate()
            elif w == 0:
                groups[(c, 0.0)][n] += k.real
            else:
                groups[(c, w)][n] += k
        return groups

    def to_expr(self) -> Expr:
        pieces = []
        for (c, w), poly in sorted(self.real_groups().items(), key=lambda kv: (-kv[0][0], kv[0][1])):
            scale = max((abs(k) for k in poly.values()), default=0.0)
            cos_part = {n: k.real for n, k in poly.items() if abs(k.real) > 1e-15 * scale}
            sin_part = {n: -k.imag for n, k in poly.items() if abs(k.imag) > 1e-15 * scale}
            factor = exp_linear(c)
            if w == 0.0:
                pieces.append(_times(polynomial_expr(cos_part), factor))
                continue
            if cos_part:
                pieces.append(_times(_times(polynomial_expr(cos_part), Unary("cos", linear_expr(w))), factor))
            if sin_part:
                pieces.append(_times(_times(polynomial_expr(sin_part), Unary("sin", linear_expr(w))), factor))
        return _sum(pieces)


def linear_expr(c: float) -> Expr:
    """``c*t`` with ``t`` and ``-t`` for unit slopes."""
    if c == 1.0:
        return T
    if c == -1.0:
        return Unary("neg", T)
    return Binary("mul", Const(c), T)


def exp_linear(c: float) -> Expr:
    return ONE if c == 0.0 else Unary("exp", linear_expr(c))


def _times(a: Expr, b: Expr) -> Expr:
    if a == Const(-1.0):
        return Unary("neg", b)
    return simplify(Binary("mul", a, b))


def _sum(pieces: list[Expr]) -> Expr:
    pieces = [p for p in pieces if p != ZERO]
    if not pieces:
        return ZERO
    out = pieces[0]
    for p in pieces[1:]:
        out = Binary("add", out, p)
    return out


def polynomial_expr(coeffs: dict[int, float]) -> Expr:
    """Render ``sum c_n t^n`` with descending powers, e.g. ``t - 0.5``."""
    out: Expr | None = None
    for n in sorted(coeffs, reverse=True):
        c = float(coeffs[n])
        if c == 0.0:
            continue
        mono = ONE if n == 0 else (T if n == 1 else Binary("pow", T, Const(n)))
        mag = abs(c) if out is not None else c
        if n == 0:
            term = Const(mag)
        elif mag == 1.0:
            term = mono
        elif mag == -1.0:
            term = Unary("neg", mono)
        else:
            term = Binary("mul", Const(mag), mono)
        if out is None:
            out = term
        else:
            out = Binary("sub" if c < 0 else "add", out, term)
    return out if out is not None else ZERO


def _const_value(e: Expr) -> float:
    try:
        v = evaluate(e, 0.0)
    except EvalDomainError as exc:
        raise UnsupportedFamilyError(f"constant subexpression undefined: {exc}") from exc
    if not math.isfinite(v):
        raise UnsupportedFamilyError("constant subexpression is not finite")
    return v


def from_expr(e: Expr) -> ExpPoly:
    """Convert an expression to term form.

    Raises:
        UnsupportedFamilyError: for anything outside the family, e.g.
            ``log(t)``, ``1/t`` or ``exp(t^2)``.
    """
    if not depends_on_t(e):
        return ExpPoly.constant(_const_value(e))
    if isinstance(e, Var):
        return ExpPoly({(1, 0j): 1.0})
    if isinstance(e, Unary):
        if e.op == "neg":
            return -from_expr(e.child)
        if e.op in ("exp", "sin", "cos"):
            aff = from_expr(e.child).affine()
            if aff is None:
                raise UnsupportedFamilyError(f"{e.op} of a non-affine argument: {e}")
            p, q = aff
            if e.op == "exp":
                return ExpPoly.exponential(p, math.exp(q))
            plus = ExpPoly.exponential(1j * p, cmath.exp(1j * q))
            minus = ExpPoly.exponential(-1j * p, cmath.exp(-1j * q))
            if e.op == "cos":
                return (plus + minus).scale(0.5)
            return (plus - minus).scale(-0.5j)
        raise UnsupportedFamilyError(f"{e.op} is outside the family: {e}")
    op = e.op
    if op in ("add", "sub", "mul"):
        left, right = from_expr(e.left), from_expr(e.right)
        return left + right if op == "add" else (left - right if op == "sub" else left * right)
    if op == "div":
        if depends_on_t(e.right):
            raise UnsupportedFamilyError(f"division by a function of t: {e}")
        d = _const_value(e.right)
        if d == 0.0:
            raise UnsupportedFamilyError("division by zero")
        return from_expr(e.left).scale(1.0 / d)
    # pow
    if not depends_on_t(e.right):
        k = _const_value(e.right)
        if k < 0 or not k.is_integer():
            raise UnsupportedFamilyError(f"exponent must be a nonnegative integer: {e}")
        return from_expr(e.left) ** int(k)
    if not depends_on_t(e.left):
        base = _const_value(e.left)
        aff = from_expr(e.right).affine()
        if base <= 0 or aff is None:
            raise UnsupportedFamilyError(f"unsupported power: {e}")
        p, q = aff
        return ExpPoly.exponential(p * math.log(base), base**q)
    raise UnsupportedFamilyError(f"unsupported power: {e}")


def solve_linear(f: ExpPoly, p: float, q: float) -> ExpPoly:
    """Particular solution ``g`` of ``p*g' + q*g = f`` inside the family.

    Each term ``t^n e^{lam t}`` gets ``P(t) e^{lam t}`` with ``deg P <= n``,
    or ``deg P = n + 1`` when ``p*lam + q = 0`` (resonance).
    """
    if p == 0.0:
        if q == 0.0:
            raise ValueError("p and q cannot both vanish")
        return f.scale(1.0 / q)
    out: dict[Key, complex] = defaultdict(complex)
    for (n, lam), k in f.terms.items():
        mu = p * lam + q
        if abs(mu) <= RESONANCE_TOL * max(1.0, abs(p * lam), abs(q)):
            out[(n + 1, lam)] += k / ((n + 1) * p)
            continue
        falling = 1.0
        for j in range(n + 1):
            out[(n - j, lam)] += k * (-p) ** j * falling / mu ** (j + 1)
            falling *= n - j
    return ExpPoly(out)
