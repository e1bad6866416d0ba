import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deformable.corpus import EXPRESSIONS, SAMPLE_POINTS
from deformable.expr import (
    Binary,
    Const,
    EvalDomainError,
    ParseError,
    T,
    Unary,
    differentiate,
    evaluate,
    format_number,
    lambdify,
    nth_derivative,
    parse,
    simplify,
    to_text,
)


class TestParse:
    def test_power_node(self):
        assert parse("t^2") == Binary("pow", T, Const(2))

    def test_precedence(self):
        assert parse("sin(t) + 3*t") == Binary("add", Unary("sin", T), Binary("mul", Const(3), T))

    def test_power_is_right_associative(self):
        assert evaluate(parse("2^3^2"), 0.0) == 512.0

    def test_unary_minus_binds_looser_than_power(self):
        assert evaluate(parse("-t^2"), 3.0) == -9.0
        assert evaluate(parse("2^-1"), 0.0) == 0.5

    def test_constants(self):
        assert evaluate(parse("pi"), 0.0) == math.pi
        assert evaluate(parse("e"), 0.0) == math.e

    def test_scientific_numbers(self):
        assert evaluate(parse("1.5e-3*t"), 2.0) == pytest.approx(3e-3)

    @pytest.mark.parametrize(
        "text, offset",
        [("t^", 2), ("sin t", 4), ("(t + 1", 6), ("t $ 2", 2), ("", 0), ("t t", 2), ("foo(t)", 0)],
    )
    def test_errors_report_offset(self, text, offset):
        with pytest.raises(ParseError) as info:
            parse(text)
        assert info.value.offset == offset
        assert info.value.expected

    def test_sin_without_parens_expects_paren(self):
        with pytest.raises(ParseError) as info:
            parse("sin t")
        assert "(" in info.value.expected


class TestEvaluate:
    def test_examples(self):
        assert evaluate(parse("t^2"), 3) == 9
        assert evaluate(parse("exp(t)"), 0) == 1

    @pytest.mark.parametrize(
        "text, t, cause",
        [
            ("log(t)", -1.0, "log-nonpositive"),
            ("log(t)", 0.0, "log-nonpositive"),
            ("sqrt(t)", -0.5, "sqrt-negative"),
            ("1/t", 0.0, "division-by-zero"),
            ("t^0.5", -2.0, "pow-undefined"),
        ],
    )
    def test_domain_errors(self, text, t, cause):
        with pytest.raises(EvalDomainError) as info:
            evaluate(parse(text), t)
        assert info.value.cause == cause
        assert info.value.t == t
        with pytest.raises(EvalDomainError):
            lambdify(parse(text))(t)

    def test_overflow_is_infinite(self):
        assert evaluate(parse("exp(t)"), 1000.0) == math.inf

    def test_negative_base_integer_power(self):
        assert evaluate(parse("t^3"), -2.0) == -8.0

    @pytest.mark.parametrize("sample", EXPRESSIONS, ids=lambda s: s.text)
    def test_corpus_against_hand_semantics(self, sample):
        e = parse(sample.text)
        fn = lambdify(e)
        for t in SAMPLE_POINTS:
            assert evaluate(e, t) == pytest.approx(sample.f(t), rel=1e-12, abs=1e-12)
            assert fn(t) == evaluate(e, t)


class TestSimplify:
    def test_examples(self):
        assert simplify(Binary("add", Const(2), Const(3))) == Const(5)
        assert simplify(Binary("mul", Const(0), Unary("sin", T))) == Const(0)
        assert simplify(Binary("pow", T, Const(1))) == T

    def test_identities(self):
        assert simplify(Binary("add", T, Const(0))) == T
        assert simplify(Binary("mul", Const(1), T)) == T
        assert simplify(Binary("pow", T, Const(0))) == Const(1)
        assert simplify(Binary("sub", T, Const(0))) == T
        assert simplify(Binary("div", Const(0), T)) == Const(0)
        assert simplify(Binary("pow", Const(0), Const(0))) == Const(1)

    def test_only_listed_rewrites(self):
        e = Unary("neg", Unary("neg", T))
        assert simplify(e) == e
        assert simplify(Binary("sub", T, T)) == Binary("sub", T, T)

    def test_domain_errors_stay_symbolic(self):
        e = Unary("log", Const(-1))
        assert simplify(e) == e


class TestDifferentiate:
    def test_examples(self):
        assert differentiate(parse("t^2")) == parse("2*t")
        assert differentiate(parse("sin(t)")) == parse("cos(t)")
        assert to_text(differentiate(parse("t*exp(t)"))) == "exp(t) + t*exp(t)"

    def test_product_against_finite_difference(self):
        d = lambdify(differentiate(parse("t*exp(t)")))
        f = lambdify(parse("t*exp(t)"))
        h, t = 1e-6, 0.7
        fd = (f(t + h) - f(t - h)) / (2 * h)
        assert abs(d(t) - fd) <= 1e-6 * abs(d(t))

    @pytest.mark.parametrize("sample", EXPRESSIONS, ids=lambda s: s.text)
    def test_corpus_derivatives(self, sample):
        d = lambdify(differentiate(parse(sample.text)))
        for t in SAMPLE_POINTS:
            assert d(t) == pytest.approx(sample.df(t), rel=1e-10, abs=1e-10)

    def test_nth_derivative(self):
        assert lambdify(nth_derivative(parse("t^3"), 2))(2.0) == 12.0
        assert nth_derivative(parse("sin(t)"), 0) == parse("sin(t)")


class TestPrint:
    @pytest.mark.parametrize("v, s", [(4.0, "4"), (4.5, "4.5"), (-0.5, "-0.5"), (1e-20, "1e-20")])
    def test_format_number(self, v, s):
        assert format_number(v) == s

    @pytest.mark.parametrize(
        "text",
        ["t - (t - 1)", "(t^2)^3", "t^2^3", "-(t + 1)", "(-t)^2", "t/(2*t)", "2*(t/3)", "exp(-t)*sin(t)", "-t^2 + 4"],
    )
    def test_roundtrip_structure(self, text):
        e = parse(text)
        assert parse(to_text(e)) == e


# --- property tests -------------------------------------------------------

leaves = st.one_of(st.just(T), st.sampled_from([0.0, 1.0, 2.0, 0.5, -1.5, 3.0]).map(Const))


def _extend(children):
    unary = st.builds(Unary, st.sampled_from(["neg", "sin", "cos", "exp", "log", "sqrt"]), children)
    binary = st.builds(Binary, st.sampled_from(["add", "sub", "mul", "div"]), children, children)
    power = st.builds(lambda b, k: Binary("pow", b, Const(k)), children, st.sampled_from([0.0, 1.0, 2.0, 3.0, 0.5]))
    return st.one_of(unary, binary, power)


exprs = st.recursive(leaves, _extend, max_leaves=8)


def _value(e, t):
    try:
        v = evaluate(e, t)
    except EvalDomainError:
        return None
    return v if math.isfinite(v) else None


@settings(max_examples=200, deadline=None)
@given(exprs, st.sampled_from([0.3, 1.1, 2.7]))
def test_print_parse_roundtrip(e, t):
    again = parse(to_text(e))
    a, b = _value(e, t), _value(again, t)
    assert (a is None) == (b is None)
    if a is not None:
        assert a == b


@settings(max_examples=200, deadline=None)
@given(exprs, st.sampled_from([0.3, 1.1, 2.7]))
def test_simplify_preserves_value(e, t):
    a, b = _value(e, t), _value(simplify(e), t)
    if a is not None and b is not None:
        assert abs(a - b) <= 2 * math.ulp(max(abs(a), abs(b)))


@settings(max_examples=100, deadline=None)
@given(exprs)
def test_simplify_idempotent(e):
    s = simplify(e)
    assert simplify(s) == s


@settings(max_examples=150, deadline=None)
@given(exprs, st.sampled_from([0.4, 1.3, 2.2]))
def test_derivative_matches_finite_difference(e, t):
    h = 1e-6
    vals = [_value(e, t + k * h) for k in (-2, -1, 1, 2)]
    dv = _value(differentiate(e), t)
    if any(v is None for v in vals) or dv is None or max(abs(v) for v in vals) > 1e6:
        return
    fd = (vals[2] - vals[1]) / (2 * h)
    # skip kinks and near-singular points where the difference itself is unreliable
    fd2 = (vals[3] - vals[0]) / (4 * h)
    if abs(fd - fd2) > 1e-6 * (1 + abs(fd)):
        return
    assert abs(dv - fd) <= 1e-5 * (1 + abs(dv)) + 1e-8 * max(abs(v) for v in vals) / h
