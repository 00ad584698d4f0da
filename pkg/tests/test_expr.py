import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gdalab.expr import (BinOp, Call, Const, DomainError, ExpressionSyntaxError, MalformedNumberError, Neg, Pow,
                         UndeclaredVariableError, Var, evaluate, parse, to_source)

VARS = ["x1", "x2", "y1"]


def ev(src, **env):
    return evaluate(parse(src, VARS), env)


def test_precedence_power_over_unary_minus():
    assert ev("-x1^2", x1=3.0) == -9.0
    assert ev("(-x1)^2", x1=3.0) == 9.0


def test_power_right_associative():
    assert ev("2^3^2") == 512.0
    assert ev("2**3**2") == 512.0


def test_left_associative_subtraction_and_division():
    assert ev("8 - 4 - 2") == 2.0
    assert ev("8 / 4 / 2") == 1.0


def test_mul_binds_tighter_than_add():
    assert ev("1 + 2*3") == 7.0
    assert ev("-2*3 + 1") == -5.0


def test_spec_examples():
    assert ev("x1^2/2 - y1^2/2", x1=1.0, y1=2.0) == -1.5
    assert ev("x1*y1", x1=1.0, y1=0.0) == 0.0


def test_functions():
    assert ev("sin(0) + cos(0) + exp(0) + log(1)") == 2.0


def test_undeclared_variable():
    with pytest.raises(UndeclaredVariableError) as exc:
        parse("x1*z9", ["x1", "y1"])
    assert "z9" in str(exc.value)
    assert exc.value.position == 3


def test_unknown_function_is_syntax_error():
    with pytest.raises(ExpressionSyntaxError):
        parse("tan(x1)", VARS)


@pytest.mark.parametrize("src", ["1.2.3", "1e", "1e+"])
def test_malformed_numbers(src):
    with pytest.raises(MalformedNumberError):
        parse(src, VARS)


@pytest.mark.parametrize("src,pos", [("x1 +", 4), ("(x1", 3), ("x1 y1", 3), ("x1 $ 2", 3)])
def test_syntax_error_position(src, pos):
    with pytest.raises(ExpressionSyntaxError) as exc:
        parse(src, VARS)
    assert exc.value.position == pos


def test_exponent_must_be_constant():
    with pytest.raises(ExpressionSyntaxError):
        parse("x1^y1", VARS)


@pytest.mark.parametrize("src,env", [("log(x1)", {"x1": 0.0}), ("1/x1", {"x1": 0.0}),
                                     ("x1^0.5", {"x1": -1.0}), ("x1^-1", {"x1": 0.0})])
def test_domain_errors(src, env):
    with pytest.raises(DomainError):
        ev(src, **env)


def test_integer_power_of_negative_base():
    assert ev("x1^3", x1=-2.0) == -8.0


def test_literals_are_doubles():
    assert ev("0.1") == 0.1
    assert ev("1e-3") == 1e-3


consts = st.floats(min_value=0.0, max_value=1e6, allow_nan=False).map(Const)
leaves = st.one_of(consts, st.sampled_from(VARS).map(Var))


def _extend(children):
    return st.one_of(
        children.map(Neg),
        st.builds(BinOp, st.sampled_from("+-*/"), children, children),
        st.builds(Pow, children, st.one_of(consts, consts.map(Neg))),
        st.builds(Call, st.sampled_from(["sin", "cos", "exp", "log"]), children),
    )


trees = st.recursive(leaves, _extend, max_leaves=12)


@settings(max_examples=300, deadline=None)
@given(trees)
def test_print_parse_round_trip(tree):
    assert parse(to_source(tree), VARS) == tree


@settings(max_examples=100, deadline=None)
@given(trees)
def test_printed_text_is_stable(tree):
    text = to_source(tree)
    assert to_source(parse(text, VARS)) == text


def test_round_trip_handles_nested_negation_and_powers():
    for src in ["-(-x1)", "(x1^2)^3", "x1^(-2.0)", "x1 - (y1 - x2)", "x1 / (y1 * x2)", "-x1^2", "(-2.0)^2.0"]:
        tree = parse(src, VARS)
        assert parse(to_source(tree), VARS) == tree
