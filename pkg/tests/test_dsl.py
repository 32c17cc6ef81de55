"""The alpha/beta input language."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kleinbench.cyclo import ONE, ZERO, CycloNum
from kleinbench.dsl import DSLError, format_form, parse_dsl, tokenize

Z = CycloNum.zeta


def test_simplest():
    d = parse_dsl("alpha = u; beta = v;")
    assert d["n"] == 1
    assert d["alpha"] == [(ONE, ZERO)] and d["beta"] == [(ZERO, ONE)]


def test_duplicate_root_accepted():
    d = parse_dsl("alpha = (u)(u); beta = (v)(u+v);")
    assert d["n"] == 2 and d["alpha"] == [(ONE, ZERO), (ONE, ZERO)]
    assert d["beta"][1] == (ONE, ONE)


def test_cyclotomic_and_fraction_coefficients():
    d = parse_dsl("alpha = (2u + zeta^3 v)(1/2 u - (1+zeta)*v); beta = u v;")
    assert d["alpha"][0] == (CycloNum.from_int(2), Z(3))
    assert d["alpha"][1] == (CycloNum.from_int(Fraction(1, 2)), -(ONE + Z(1)))
    assert d["beta"] == [(ONE, ZERO), (ZERO, ONE)]


def test_empty_products():
    assert parse_dsl("alpha = 1; beta = 1;")["n"] == 0


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("alpha = u*u + v; beta = u;", "not a product of linear forms"),
        ("alpha = u^2; beta = v;", "not linear"),
        ("alpha = (u*v); beta = u;", "not linear"),
        ("alpha = (u + 1); beta = v;", "constant term"),
        ("alpha = u; beta = (v)(u);", "degree"),
        ("alpha = u beta = v;", "expected ;"),
        ("alpha = u; gamma = v;", "unknown name"),
        ("alpha = u;", "missing definition of beta"),
        ("alpha = u; alpha = v; beta = u;", "defined twice"),
        ("alpha = (u - u); beta = v;", "zero linear form"),
        ("alpha = 1/0 u; beta = v;", "zero denominator"),
    ],
)
def test_errors_carry_positions(text, fragment):
    with pytest.raises(DSLError) as exc:
        parse_dsl(text)
    assert fragment in str(exc.value)
    assert 0 <= exc.value.pos <= len(text)
    assert "position" in str(exc.value)


def test_error_position_points_at_problem():
    text = "alpha = u; beta = v*v + u;"
    with pytest.raises(DSLError) as exc:
        parse_dsl(text)
    assert text[exc.value.pos] == "+"


def test_tokens():
    kinds = [t.kind for t in tokenize("alpha = 2 zeta^3 u;")]
    assert kinds == ["name", "op", "int", "zeta", "op", "int", "var", "op", "end"]


small = st.integers(-5, 5)


@settings(max_examples=80, deadline=None)
@given(st.lists(st.tuples(small, small).filter(lambda p: p != (0, 0)), min_size=1, max_size=4))
def test_format_parse_roundtrip(pairs):
    forms = [(CycloNum.from_int(a), CycloNum.from_int(b)) for a, b in pairs]
    text = "alpha = " + "".join(f"({format_form(f)})" for f in forms) + ";"
    text += " beta = " + "".join("(v)" for _ in forms) + ";"
    d = parse_dsl(text)
    assert d["alpha"] == forms and d["n"] == len(forms)


@settings(max_examples=80, deadline=None)
@given(st.text(alphabet="uv()+-*^;= 0123zetaalphb", max_size=30))
def test_fuzz_never_crashes(text):
    try:
        parse_dsl(text)
    except DSLError:
        pass
