import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from retarded_sl.errors import EvalDomainError, ExprSyntaxError, UnknownIdentifier
from retarded_sl.expr import (
    BinOp,
    Call,
    Const,
    FUNCTIONS,
    NamedConst,
    Neg,
    Var,
    eval_expr,
    is_constant,
    parse_expr,
    unparse,
)


def test_literal_zero():
    assert parse_expr("0") == Const(0.0)


def test_single_call():
    assert parse_expr("cos(x)") == Call("cos", Var())


def test_precedence_of_sum_of_quotients():
    expected = BinOp("+", BinOp("/", Var(), Const(2.0)), BinOp("/", NamedConst("pi"), Const(4.0)))
    assert parse_expr("x/2 + pi/4") == expected


def test_power_is_right_associative_and_binds_tighter_than_unary_minus():
    assert parse_expr("2^3^2") == BinOp("^", Const(2.0), BinOp("^", Const(3.0), Const(2.0)))
    assert eval_expr(parse_expr("-2^2"), 0.0) == -4.0


@pytest.mark.parametrize(
    "src, x, expected",
    [
        ("x/2", math.pi, math.pi / 2),
        ("cos(x)", 0.0, 1.0),
        ("(x-pi/2)/2", math.pi, math.pi / 4),
        ("sqrt(abs(x)) + exp(0) * log(e)", -4.0, 3.0),
        ("1.5e1 - x", 5.0, 10.0),
    ],
)
def test_evaluation(src, x, expected):
    assert eval_expr(parse_expr(src), x) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize(
    "src, x",
    [("1/x", 0.0), ("log(x)", 0.0), ("sqrt(x)", -1.0), ("x^0.5", -2.0), ("x^(-1)", 0.0), ("exp(x)", 1e4)],
)
def test_domain_errors(src, x):
    with pytest.raises(EvalDomainError):
        eval_expr(parse_expr(src), x)


def test_array_evaluation_matches_scalar():
    e = parse_expr("sin(x)^2 + x/3")
    xs = np.linspace(0, 3, 7)
    np.testing.assert_allclose(eval_expr(e, xs), [eval_expr(e, float(v)) for v in xs], rtol=0, atol=1e-15)


def test_array_evaluation_of_constant_broadcasts():
    assert eval_expr(parse_expr("pi"), np.zeros(3)).shape == (3,)


@pytest.mark.parametrize("src", ["", "  ", "x +", "(x", "x)", "cos x", "2 3", "x $ 2", "1..2"])
def test_syntax_errors(src):
    with pytest.raises(ExprSyntaxError):
        parse_expr(src)


def test_syntax_error_reports_position():
    with pytest.raises(ExprSyntaxError, match="position 4"):
        parse_expr("x + )")


@pytest.mark.parametrize("src", ["y", "t + 1", "floor(x)", "PI"])
def test_unknown_identifiers(src):
    with pytest.raises(UnknownIdentifier):
        parse_expr(src)


def test_is_constant():
    assert is_constant(parse_expr("pi/2 + sin(1)"))
    assert not is_constant(parse_expr("pi/2 + sin(x)"))


leaves = st.one_of(
    st.floats(min_value=0, max_value=1e12, allow_nan=False).map(Const),
    st.just(Var()),
    st.sampled_from([NamedConst("pi"), NamedConst("e")]),
)


def _extend(children):
    return st.one_of(
        children.map(Neg),
        st.builds(BinOp, st.sampled_from(["+", "-", "*", "/", "^"]), children, children),
        st.builds(Call, st.sampled_from(sorted(FUNCTIONS)), children),
    )


trees = st.recursive(leaves, _extend, max_leaves=12)


@given(trees)
def test_unparse_parse_round_trip(tree):
    assert parse_expr(unparse(tree)) == tree


finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)


@given(finite, finite, st.sampled_from(["+", "-", "*", "/"]))
def test_binary_arithmetic_matches_host(a, b, op):
    assume(op != "/" or b != 0)
    tree = BinOp(op, Const(abs(a)), Const(abs(b)))
    if a < 0:
        tree = BinOp(op, Neg(Const(-a)), tree.right)
    if b < 0:
        tree = BinOp(op, tree.left, Neg(Const(-b)))
    host = {"+": a + b, "-": a - b, "*": a * b, "/": a / b if b else None}[op]
    if not math.isfinite(host):
        with pytest.raises(EvalDomainError):
            eval_expr(parse_expr(unparse(tree)), 0.0)
        return
    assert eval_expr(parse_expr(unparse(tree)), 0.0) == host


@given(trees, st.floats(min_value=-5, max_value=5))
def test_evaluation_is_deterministic(tree, x):
    try:
        first = eval_expr(tree, x)
    except EvalDomainError:
        with pytest.raises(EvalDomainError):
            eval_expr(tree, x)
        return
    assert eval_expr(tree, x) == first
