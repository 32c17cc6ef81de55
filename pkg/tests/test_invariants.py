"""Invariant theory of the order-168 group on C[x, y, z]."""

import random

import sympy as sp

from kleinbench.cyclo import CycloNum
from kleinbench.invariants import (
    XYZ,
    act_on_poly,
    hessian,
    is_invariant,
    klein_hessian,
    klein_quartic,
    molien_coefficients,
    molien_dimension,
    reynolds,
    reynolds_rank,
)


def classical_molien(d: int) -> list[int]:
    # (1 + t^21) / ((1 - t^4)(1 - t^6)(1 - t^14)), the classical closed form
    t = sp.symbols("t")
    s = sp.series((1 + t**21) / ((1 - t**4) * (1 - t**6) * (1 - t**14)), t, 0, d + 1).removeO()
    return [int(s.coeff(t, k)) for k in range(d + 1)]


def test_quartic_is_invariant(G):
    f = klein_quartic()
    assert is_invariant(G, f)
    assert reynolds(G, f) == f


def test_molien_low_degrees(G):
    assert [molien_dimension(G, d) for d in range(7)] == [1, 0, 0, 0, 1, 0, 1]


def test_molien_matches_closed_form(G):
    assert [int(c) for c in molien_coefficients(G, 24)] == classical_molien(24)


def test_reynolds_ranks_agree_with_molien(G):
    for d in range(7):
        assert reynolds_rank(G, d) == molien_dimension(G, d)


def test_hessian(G):
    h = klein_hessian()
    assert h.total_degree() == 6 and h.is_homogeneous()
    assert is_invariant(G, h)
    # classically the Hessian is a multiple of 5 x^2 y^2 z^2 - (x^5 z + y^5 x + z^5 y)
    x, y, z = XYZ.gens()
    h0 = 5 * x**2 * y**2 * z**2 - (x**5 * z + y**5 * x + z**5 * y)
    ratio = h.leading_coefficient() / h0.leading_coefficient()
    assert h == h0 * ratio


def test_hessian_is_covariant():
    """Hess(f o A) = det(A)^2 (Hess f) o A for any linear substitution A."""
    rng = random.Random(5)
    f = klein_quartic()
    for _ in range(3):
        ints = [[rng.randint(-2, 2) for _ in range(3)] for _ in range(3)]
        A = [[CycloNum.from_int(v) for v in r] for r in ints]
        det = int(sp.Matrix(ints).det())
        lhs = hessian(f.linear_substitution(("x", "y", "z"), A))
        rhs = hessian(f).linear_substitution(("x", "y", "z"), A) * CycloNum.from_int(det**2)
        assert lhs == rhs


def test_action_convention(G):
    """g acts by p -> p o rho(g)^-1, which makes it a left action."""
    x, y, z = XYZ.gens()
    p = x**2 * y + CycloNum.zeta(3) * z**3
    a, b = 5, 77
    assert act_on_poly(G, G.mul(a, b), p) == act_on_poly(G, a, act_on_poly(G, b, p))


def test_non_invariant_detected(G):
    x, y, z = XYZ.gens()
    assert not is_invariant(G, x**4 + y**4 + z**4)
    assert reynolds(G, x**2).is_zero()
