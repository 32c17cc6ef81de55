"""Q(zeta_7) arithmetic, checked against sympy reduction modulo Phi_7."""

import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from kleinbench.cyclo import ONE, ZERO, ZETA, CycloNum, CycloZeroDivisionError, rank, solve_linear

z = sp.symbols("z")
PHI7 = sp.Poly(sum(z**k for k in range(7)), z, domain="QQ")

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=9)
elements = st.lists(fractions, min_size=6, max_size=6).map(CycloNum)


def to_sympy(a: CycloNum) -> sp.Poly:
    return sp.Poly(sum(sp.Rational(c.numerator, c.denominator) * z**k for k, c in enumerate(a.coeffs)), z, domain="QQ")


def from_sympy(p: sp.Poly) -> CycloNum:
    r = p.rem(PHI7)
    coeffs = [Fraction(0)] * 6
    for (k,), c in r.terms():
        coeffs[k] = Fraction(int(c.p), int(c.q))
    return CycloNum(coeffs)


@settings(max_examples=60, deadline=None)
@given(elements, elements)
def test_ring_operations_match_oracle(a, b):
    assert a + b == from_sympy(to_sympy(a) + to_sympy(b))
    assert a * b == from_sympy(to_sympy(a) * to_sympy(b))
    assert a - b == from_sympy(to_sympy(a) - to_sympy(b))


@settings(max_examples=60, deadline=None)
@given(elements)
def test_inverse(a):
    if not a:
        with pytest.raises(CycloZeroDivisionError):
            a.inverse()
        return
    assert a * a.inverse() == ONE
    assert (ONE / a) * a == ONE


@settings(max_examples=40, deadline=None)
@given(elements, elements)
def test_galois_is_ring_automorphism(a, b):
    for k in range(1, 7):
        assert (a * b).galois(k) == a.galois(k) * b.galois(k)
        assert (a + b).galois(k) == a.galois(k) + b.galois(k)


@settings(max_examples=40, deadline=None)
@given(elements, elements)
def test_norm_is_multiplicative_and_rational(a, b):
    assert (a * b).norm() == a.norm() * b.norm()
    assert isinstance(a.norm(), Fraction)


def test_zeta_relations():
    assert ZETA ** 7 == ONE
    assert sum((ZETA ** k for k in range(7)), ZERO) == ZERO
    assert CycloNum.zeta(6) == -sum((ZETA ** k for k in range(6)), ZERO)
    assert CycloNum.zeta(-1) == ZETA.conj()


def test_sqrt_minus_7():
    s = CycloNum.sqrt_minus_7()
    assert s * s == CycloNum.from_int(-7)
    # up to sign it is the Gauss sum over quadratic residues
    gauss = sum((ZETA ** k for k in (1, 2, 4)), ZERO) - sum((ZETA ** k for k in (3, 5, 6)), ZERO)
    assert s in (gauss, -gauss)


def test_division_by_zero_raises():
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO


@settings(max_examples=25, deadline=None)
@given(st.lists(elements, min_size=6, max_size=6))
def test_json_roundtrip(xs):
    for a in xs:
        data = a.to_json()
        assert len(data) == 6 and all("/" in c for c in data)
        assert CycloNum.from_json(data) == a


def test_json_rejects_wrong_length():
    with pytest.raises(ValueError):
        CycloNum.from_json(["1/1"] * 5)


def test_hash_consistent_with_eq():
    a = CycloNum([1, Fraction(1, 2)])
    b = CycloNum([2, 1], den=2)
    assert a == b and hash(a) == hash(b)


def test_linear_algebra():
    rng = random.Random(3)
    from kleinbench.cyclo import random_cyclo

    for _ in range(5):
        A = [[random_cyclo(rng) for _ in range(3)] for _ in range(3)]
        x = [random_cyclo(rng) for _ in range(3)]
        rhs = [sum((A[i][j] * x[j] for j in range(3)), ZERO) for i in range(3)]
        if rank(A) == 3:
            assert solve_linear(A, rhs) == x
    sing = [[ONE, ZETA], [ZETA, ZETA * ZETA]]
    assert rank(sing) == 1
    assert solve_linear(sing, [ONE, ONE]) is None
