"""Action of the Klein group on ternary forms: Reynolds operator, Molien
dimensions and the Hessian."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import TYPE_CHECKING, Sequence

from .cyclo import ONE, ZERO, CycloNum, rank
from .poly import MultiPoly, Ring, determinant

if TYPE_CHECKING:
    from .group import GroupTable, Matrix3

XYZ = Ring.standard("xyz")

# Left action: (g.p)(X) = p(rho(g)^-1 X).  Recorded in every report.
ACTION_CONVENTION = "(g.p)(X) = p(rho(g)^-1 X)"


def klein_quartic(ring: Ring = XYZ) -> MultiPoly:
    x, y, z = (ring.var(n) for n in ("x", "y", "z"))
    return x**3 * y + y**3 * z + z**3 * x


def substitute_matrix(p: MultiPoly, m: "Matrix3", names: Sequence[str] = ("x", "y", "z")) -> MultiPoly:
    """p(M X): replace each coordinate by the matching row of M applied to X."""
    return p.linear_substitution(names, m)


def act_on_poly(g: "GroupTable", index: int, p: MultiPoly) -> MultiPoly:
    return substitute_matrix(p, g.elements[g.inverse[index]])


def is_invariant(g: "GroupTable", p: MultiPoly, indices: Sequence[int] | None = None) -> bool:
    idx = range(len(g)) if indices is None else indices
    return all(act_on_poly(g, i, p) == p for i in idx)


def reynolds(g: "GroupTable", p: MultiPoly) -> MultiPoly:
    """(1/|G|) sum_g g.p"""
    acc = p.ring.zero
    for i in range(len(g)):
        acc = acc + act_on_poly(g, i, p)
    return acc * CycloNum.from_int(Fraction(1, len(g)))


def _series_inverse_coeff(c1: CycloNum, c2: CycloNum, c3: CycloNum, d: int) -> list[CycloNum]:
    """Coefficients up to t^d of 1 / (1 + c1 t + c2 t^2 + c3 t^3)."""
    out = [ONE]
    for k in range(1, d + 1):
        v = ZERO
        if k >= 1:
            v = v - c1 * out[k - 1]
        if k >= 2:
            v = v - c2 * out[k - 2]
        if k >= 3:
            v = v - c3 * out[k - 3]
        out.append(v)
    return out


def molien_coefficients(g: "GroupTable", d: int) -> list[Fraction]:
    """Dimensions of the invariant spaces in degrees 0..d, from the Molien
    series summed over conjugacy classes."""
    from .group import conjugacy_classes

    total = [ZERO] * (d + 1)
    for cls in conjugacy_classes(g):
        m = g.elements[cls.representative]
        tr = m[0][0] + m[1][1] + m[2][2]
        e2 = (
            m[0][0] * m[1][1] - m[0][1] * m[1][0]
            + m[0][0] * m[2][2] - m[0][2] * m[2][0]
            + m[1][1] * m[2][2] - m[1][2] * m[2][1]
        )
        det = (
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        )
        # det(1 - tM) = 1 - tr t + e2 t^2 - det t^3
        series = _series_inverse_coeff(-tr, e2, -det, d)
        for k in range(d + 1):
            total[k] = total[k] + series[k] * cls.size
    return [(t * CycloNum.from_int(Fraction(1, len(g)))).rational() for t in total]


def molien_dimension(g: "GroupTable", d: int) -> int:
    if d < 0:
        raise ValueError("degree must be non-negative")
    value = molien_coefficients(g, d)[d]
    if value.denominator != 1:
        raise ArithmeticError(f"Molien coefficient {value} is not an integer")
    return int(value)


def reynolds_rank(g: "GroupTable", d: int, ring: Ring = XYZ) -> int:
    """Rank of the span of the Reynolds images of all degree-d monomials."""
    monos = ring.monomials_of_degree(d)
    acc = [ring.zero for _ in monos]
    for i in range(len(g)):
        m = g.elements[g.inverse[i]]
        forms = [sum((ring.var(n) * m[r][c] for c, n in enumerate(ring.names) if m[r][c]), ring.zero)
                 for r in range(ring.nvars)]
        powers = [[ring.one] for _ in forms]
        for r, lf in enumerate(forms):
            for _ in range(d):
                powers[r].append(powers[r][-1] * lf)
        for k, e in enumerate(monos):
            img = ring.one
            for r, a in enumerate(e):
                if a:
                    img = img * powers[r][a]
            acc[k] = acc[k] + img
    return rank([[img.terms.get(e, ZERO) for e in monos] for img in acc])


def hessian(p: MultiPoly, names: Sequence[str] = ("x", "y", "z")) -> MultiPoly:
    rows = [[p.derivative(a).derivative(b) for b in names] for a in names]
    return determinant(rows)


@lru_cache(maxsize=None)
def klein_hessian() -> MultiPoly:
    return hessian(klein_quartic())
