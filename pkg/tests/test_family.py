import math

import pytest

from deformable.corpus import FAMILY
from deformable.expr import differentiate, lambdify, parse, to_text
from deformable.family import ExpPoly, UnsupportedFamilyError, from_expr, solve_linear

TS = (-0.7, 0.0, 0.4, 1.3, 2.5)


@pytest.mark.parametrize("text", FAMILY)
def test_from_expr_roundtrip(text):
    f = lambdify(parse(text))
    poly = from_expr(parse(text))
    back = lambdify(poly.to_expr())
    for t in TS:
        assert poly(t) == pytest.approx(f(t), rel=1e-13, abs=1e-13)
        assert back(t) == pytest.approx(f(t), rel=1e-13, abs=1e-13)


@pytest.mark.parametrize("text", FAMILY)
def test_derivative_matches_symbolic(text):
    d = lambdify(differentiate(parse(text)))
    poly = from_expr(parse(text)).derivative()
    for t in TS:
        assert poly(t) == pytest.approx(d(t), rel=1e-13, abs=1e-13)


@pytest.mark.parametrize("text", ["log(t)", "1/t", "sqrt(t)", "t^0.5", "exp(t^2)", "sin(t*t)"])
def test_unsupported(text):
    with pytest.raises(UnsupportedFamilyError):
        from_expr(parse(text))


def test_powers_of_constant_base_are_exponentials():
    poly = from_expr(parse("2^t"))
    assert poly(1.5) == pytest.approx(2**1.5)


@pytest.mark.parametrize("text", FAMILY)
@pytest.mark.parametrize("p, q", [(0.5, 1.5), (1.0, 0.0), (0.3, -0.3), (0.0, 2.0), (0.25, 0.75)])
def test_solve_linear_satisfies_equation(text, p, q):
    f = from_expr(parse(text))
    g = solve_linear(f, p, q)
    dg = g.derivative()
    for t in TS:
        lhs = p * dg(t) + q * g(t)
        assert lhs == pytest.approx(f(t), rel=1e-11, abs=1e-11)


def test_resonance():
    # p*lambda + q = 0 for f = exp(-2t): 0.5*(-2) + 1 = 0
    f = from_expr(parse("t*exp(-2*t)"))
    g = solve_linear(f, 0.5, 1.0)
    dg = g.derivative()
    for t in TS:
        assert 0.5 * dg(t) + g(t) == pytest.approx(f(t), rel=1e-12, abs=1e-12)


def test_to_expr_text_is_real():
    text = to_text(from_expr(parse("exp(0.5*t)*cos(t) - 3*t")).to_expr())
    assert "j" not in text
    assert "cos(t)" in text


def test_arithmetic():
    a = ExpPoly.exponential(1.0, 2.0)
    b = from_expr(parse("t"))
    prod = (a * b) ** 2
    assert prod(0.7) == pytest.approx((2 * math.exp(0.7) * 0.7) ** 2)
    assert (a - a).is_constant() and not (a - a)
