import math

import numpy as np
import pytest

from deformable.expr import ONE, ZERO, lambdify, parse
from deformable.ode import (
    FracOdeComposed,
    FracOdeFirstOrder,
    OdeSolution,
    composed_coefficients,
    fit_constants,
    residual_check,
    solve_composed,
    solve_first_order,
)

GRID = np.linspace(0.0, 2.0, 101)


class TestFirstOrder:
    def test_forced_example(self):
        ode = FracOdeFirstOrder(0.5, parse("1"), parse("t*exp(-t)"))
        sol = solve_first_order(ode)
        assert str(sol) == "C*exp(-3*t) + (t - 0.5)*exp(-t)"
        for c in (-2.0, 0.0, 1.0, 3.5):
            y = lambdify(sol.bind([c]))
            for t in GRID:
                expected = c * math.exp(-3 * t) + (t - 0.5) * math.exp(-t)
                assert y(float(t)) == pytest.approx(expected, abs=1e-14)
            assert residual_check(sol, ode, [c], (0.0, 2.0, 101)) <= 1e-10

    @pytest.mark.parametrize("p", [0.0, 0.5, 2.0, -0.25])
    def test_homogeneous_constant_coefficient(self, p):
        ode = FracOdeFirstOrder(0.5, parse(repr(p)))
        sol = solve_first_order(ode)
        y = lambdify(sol.bind([1.0]))
        for t in (0.0, 0.7, 1.9):
            assert y(t) == pytest.approx(math.exp(-(1 + 2 * p) * t), rel=1e-14)

    def test_unit_order_trivial(self):
        sol = solve_first_order(FracOdeFirstOrder(1.0, ZERO))
        assert sol.basis == (ONE,)
        assert str(sol) == "C"

    def test_variable_coefficient_homogeneous(self):
        ode = FracOdeFirstOrder(0.4, parse("t"))
        sol = solve_first_order(ode)
        assert not sol.numeric
        assert residual_check(sol, ode, [2.0]) <= 1e-10

    def test_resonant_forcing(self):
        # alpha*lambda + beta + p = 0 for lambda = -3
        ode = FracOdeFirstOrder(0.5, parse("1"), parse("exp(-3*t)"))
        sol = solve_first_order(ode)
        assert residual_check(sol, ode, [0.3]) <= 1e-10

    def test_numeric_fallback(self):
        ode = FracOdeFirstOrder(0.5, parse("t"), parse("1"))
        sol = solve_first_order(ode)
        assert sol.numeric and sol.note
        with pytest.raises(TypeError):
            sol.bind([1.0])
        # reference: integrate alpha y' + (beta + t) y = 1 with y(0) = C
        from scipy.integrate import solve_ivp

        ref = solve_ivp(lambda t, y: (1 - (0.5 + t) * y) / 0.5, (0, 2), [1.0], t_eval=sol.samples["t"], rtol=1e-12, atol=1e-12)
        assert np.max(np.abs(sol.bind_samples([1.0]) - ref.y[0])) <= 1e-9
        assert residual_check(sol, ode, [1.0]) <= 1e-3

    def test_wrong_solution_has_large_residual(self):
        ode = FracOdeFirstOrder(0.5, parse("1"), parse("t*exp(-t)"))
        wrong = OdeSolution((ONE,), parse("exp(t)"), ("C",))
        assert residual_check(wrong, ode, [0.0]) > 1.0

    def test_alpha_validation(self):
        with pytest.raises(ValueError):
            FracOdeFirstOrder(0.0, ZERO)
        with pytest.raises(ValueError):
            FracOdeComposed(1.5, 0.5)


class TestComposed:
    def test_repeated_half(self):
        ode = FracOdeComposed(0.5, 0.5)
        sol = solve_composed(ode)
        assert sol.roots == (-1.0, -1.0)
        assert str(sol) == "C1*exp(-t) + C2*t*exp(-t)"
        assert residual_check(sol, ode, [1.0, 2.0], (0.0, 1.0, 51)) <= 1e-10

    def test_mixed(self):
        sol = solve_composed(FracOdeComposed(1.0, 0.5))
        assert sol.roots == (0.0, -1.0)
        assert str(sol) == "C1 + C2*exp(-t)"

    def test_double_unit(self):
        sol = solve_composed(FracOdeComposed(1.0, 1.0))
        assert str(sol) == "C1 + C2*t"

    @pytest.mark.parametrize("a1, a2", [(0.3, 0.8), (0.9, 0.2), (0.25, 0.25), (0.6, 1.0)])
    def test_roots_exact(self, a1, a2):
        ode = FracOdeComposed(a1, a2)
        sol = solve_composed(ode)
        assert sol.roots == (-(1 - a1) / a1, -(1 - a2) / a2)
        assert residual_check(sol, ode, [1.5, -0.5], (0.0, 1.0, 51)) <= 1e-10
        c0, c1, c2 = composed_coefficients(ode)
        for r in sol.roots:
            assert c2 * r * r + c1 * r + c0 == pytest.approx(0.0, abs=1e-12)

    def test_fit_constants(self):
        sol = solve_composed(FracOdeComposed(0.5, 0.5))
        c = fit_constants(sol, [(0.0, 1.0), (1.0, 0.0)])
        y = lambdify(sol.bind(c))
        assert y(0.0) == pytest.approx(1.0) and y(1.0) == pytest.approx(0.0, abs=1e-15)

    def test_wrong_constant_count(self):
        with pytest.raises(ValueError):
            solve_composed(FracOdeComposed(0.5, 0.5)).bind([1.0])
