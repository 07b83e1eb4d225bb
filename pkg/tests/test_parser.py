import pytest
from hypothesis import given, settings

from guarded.parser import (
    E_ARITY,
    E_DUPLICATE,
    E_SYNTAX,
    E_UNDEFINED_VAR,
    E_UNGUARDED,
    E_UNKNOWN_SYMBOL,
    ParseError,
    parse_equation_file,
    parse_term,
)
from guarded.trees import RationalTree, Signature, render, prefix

from .strategies import SIG, terms

G, OP = RationalTree.gen, RationalTree.op

HEADER = "sig *: 2, sigma: 1, c: 0\nvars x\nparams y\n"


def error(text):
    with pytest.raises(ParseError) as info:
        parse_equation_file(text)
    return info.value


def test_both_signature_forms_agree():
    a, sys_a = parse_equation_file("sig */2, c/0; vars x; params y; x = x * y")
    b, sys_b = parse_equation_file("sig *: 2, c: 0\nvars x\nparams y\nx = (x) * (y)")
    assert a == b
    assert sys_a.rhs == sys_b.rhs


def test_infix_is_left_associative():
    _, s = parse_equation_file("sig */2, c/0; vars x; params a b; x = a * b * x")
    assert s.rhs["x"] == OP("*", OP("*", G("a"), G("b")), G("x"))


def test_comments_and_blank_lines():
    _, s = parse_equation_file("# header\n\nsig c/0  # constants only\nvars x\n\nx = c\n")
    assert s.rhs["x"] == OP("c")


def test_locations_are_recorded():
    _, s = parse_equation_file(HEADER + "  x = sigma(x)\n")
    assert s.locations["x"] == (4, 3)


def test_empty_vars_section():
    _, s = parse_equation_file("sig c/0\nvars\n")
    assert s.variables == () and s.rhs == {}


@pytest.mark.parametrize("text, code, line, col", [
    (HEADER + "x = sigma(x", E_SYNTAX, 4, 12),
    (HEADER + "x = *(x)", E_SYNTAX, 4, 5),
    (HEADER + "x = sigma(x) y", E_SYNTAX, 4, 14),
    ("sig * 2\nvars x\nx = c", E_SYNTAX, 1, 5),
    (HEADER + "x = $", E_SYNTAX, 4, 5),
    (HEADER + "x = tau(y)", E_UNKNOWN_SYMBOL, 4, 5),
    (HEADER + "x = z", E_UNKNOWN_SYMBOL, 4, 5),
    ("sig c/0, sigma/1\nvars x\nparams y\nx = y * y", E_UNKNOWN_SYMBOL, 4, 7),
    (HEADER + "x = sigma(x, y)", E_ARITY, 4, 5),
    (HEADER + "x = sigma", E_ARITY, 4, 5),
    (HEADER + "x = c(y)", E_ARITY, 4, 5),
    (HEADER + "x = c\nx = c", E_DUPLICATE, 5, 1),
    ("sig c/0, c/0\nvars x\nx = c", E_DUPLICATE, 1, 10),
    ("sig c/0\nvars x\nparams x\nx = c", E_DUPLICATE, 3, 8),
    ("sig c/0\nvars x\nvars z\nx = c", E_DUPLICATE, 3, 1),
    (HEADER + "z = c\nx = c", E_UNDEFINED_VAR, 4, 1),
    (HEADER, E_UNDEFINED_VAR, 2, 6),
    (HEADER + "x = x", E_UNGUARDED, 4, 1),
])
def test_error_codes_and_positions(text, code, line, col):
    e = error(text)
    assert (e.code, e.line, e.col) == (code, line, col)
    assert str(e).startswith(f"{line}:{col}: {code}: ")


def test_unguarded_through_a_chain_of_variables():
    e = error("sig c/0\nvars a b\nparams y\na = b\nb = a")
    assert e.code == E_UNGUARDED and e.line in (4, 5)


def test_unguarded_check_can_be_skipped():
    _, s = parse_equation_file(HEADER + "x = x", check=False)
    assert s.rhs["x"] == G("x")


def test_parse_term_rejects_trailing_tokens():
    assert parse_term("sigma(c)", SIG) == OP("sigma", OP("c"))
    with pytest.raises(ParseError) as info:
        parse_term("c c", SIG)
    assert info.value.code == E_SYNTAX


def test_infix_needs_binary_star():
    sig = Signature.of(c=0)
    with pytest.raises(ParseError) as info:
        parse_term("c * c", sig)
    assert info.value.code == E_UNKNOWN_SYMBOL


@settings(max_examples=200, deadline=None)
@given(terms(["a", "b"]))
def test_render_then_parse_round_trips(t):
    text = render(prefix(t, 50))
    assert parse_term(text, SIG, params=("a", "b")) == t
