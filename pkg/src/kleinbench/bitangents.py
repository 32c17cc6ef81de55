"""Exact bitangent certificates for the Klein quartic."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

from .cyclo import ONE, ZERO, CycloNum
from .group import GroupTable
from .invariants import XYZ, klein_quartic
from .poly import MultiPoly, Ring
from .presentation import presentation_of
from .subgroups import SubgroupRecord, conjugate_subgroup, subgroups_up_to_conjugacy

BINARY = Ring.standard(("s", "u"))

Line = tuple[CycloNum, CycloNum, CycloNum]


class DegenerateLineError(ValueError):
    """The restricted form vanishes identically: the line lies on the curve."""


def canonical_line(coeffs: Sequence[CycloNum]) -> Line:
    first = next((c for c in coeffs if c), None)
    if first is None:
        raise ValueError("the zero covector is not a line")
    inv = first.inverse()
    return tuple(c * inv for c in coeffs)


def line_sort_key(line: Line) -> tuple:
    return tuple(c.sort_key() for c in line)


def act_on_line(g: GroupTable, index: int, line: Line) -> Line:
    """Image of {l.X = 0} under X -> rho(g) X, i.e. the covector l rho(g)^-1."""
    m = g.elements[g.inverse[index]]
    return canonical_line([sum((line[r] * m[r][c] for r in range(3)), ZERO) for c in range(3)])


def restrict_to_line(f: MultiPoly, line: Line) -> tuple[MultiPoly, str]:
    """Eliminate the first variable with nonzero coefficient along the line.

    Returns the binary form in (s, u) standing for the two remaining
    variables in order, and the eliminated variable's name.
    """
    names = XYZ.names
    k = next(i for i, c in enumerate(line) if c)
    rest = [n for i, n in enumerate(names) if i != k]
    s, u = BINARY.gens()
    params = {rest[0]: s, rest[1]: u}
    others = [i for i in range(3) if i != k]
    # line[k] == 1 after canonicalisation
    elim = -(s * line[others[0]] + u * line[others[1]]) * line[k].inverse()
    mapping = {names[k]: elim, **params}
    return f.substitute(mapping, target=BINARY), names[k]


def _sqrt_coeffs(h: list[CycloNum]) -> list[CycloNum] | None:
    """Monic r with r^2 = h / lc(h), solved from the top coefficient down
    (h[k] is the coefficient of s^k).  None when no such r exists."""
    deg = len(h) - 1
    if deg % 2:
        return None
    m = deg // 2
    lc_inv = h[deg].inverse()
    t = [c * lc_inv for c in h]
    r = [ZERO] * (m + 1)
    r[m] = ONE
    half = CycloNum.from_int(Fraction(1, 2))
    for k in range(1, m + 1):
        acc = t[deg - k]
        for i in range(1, k):
            acc = acc - r[m - i] * r[m - k + i]
        r[m - k] = acc * half
    return r


def is_perfect_square(q: MultiPoly) -> tuple[CycloNum, MultiPoly] | None:
    """(c, r) with q = c r^2 and r monic in s, for a binary form q in (s, u).

    The square root is solved coefficient by coefficient and the identity
    q = c r^2 is then checked exactly, so a returned pair is a certificate.
    """
    if q.ring != BINARY:
        raise ValueError("expected a binary form in s, u")
    if q.is_zero():
        raise DegenerateLineError("restriction vanishes identically")
    if not q.is_homogeneous():
        raise ValueError("binary form must be homogeneous")
    total = q.total_degree()
    if total % 2:
        return None
    top = max(e[0] for e in q.terms)
    h = [ZERO] * (top + 1)
    for e, c in q.terms.items():
        h[e[0]] = c
    r = _sqrt_coeffs(h)
    if r is None:
        return None
    half = total // 2
    root = MultiPoly(BINARY, {(k, half - k): c for k, c in enumerate(r) if c})
    c = h[top]
    if root * root * c != q:
        return None
    return c, root


@dataclass(frozen=True)
class BitangentCertificate:
    line: Line
    eliminated: str
    restriction: MultiPoly
    square_root: MultiPoly
    scalar: CycloNum

    def verify(self, f: MultiPoly | None = None) -> bool:
        f = klein_quartic() if f is None else f
        restr, elim = restrict_to_line(f, self.line)
        return (
            elim == self.eliminated
            and restr == self.restriction
            and restr == self.square_root * self.square_root * self.scalar
        )

    def to_json(self) -> dict:
        return {
            "line": [c.to_json() for c in self.line],
            "eliminated": self.eliminated,
            "restriction": self.restriction.to_json(),
            "square_root": self.square_root.to_json(),
            "scalar": self.scalar.to_json(),
        }


def certify_line(f: MultiPoly, line: Line) -> BitangentCertificate | None:
    line = canonical_line(line)
    restr, elim = restrict_to_line(f, line)
    sq = is_perfect_square(restr)
    if sq is None:
        return None
    c, root = sq
    return BitangentCertificate(line, elim, restr, root, c)


def sign_character(g: GroupTable, sub: SubgroupRecord) -> dict[int, int]:
    """The nontrivial character to {+1, -1}, read off from a presentation:
    generator signs are chosen so every relator evaluates to +1."""
    pres = presentation_of(g, sub)
    for signs in product((1, -1), repeat=pres.generator_count):
        if all(v == 1 for v in signs):
            continue
        ok = True
        for r in pres.relators:
            v = 1
            for a in r:
                v *= signs[abs(a) - 1]
            if v != 1:
                ok = False
                break
        if ok:
            break
    else:
        raise ValueError(f"{sub.class_id} has no nontrivial sign character")
    chi = {g.identity: 1}
    frontier = [g.identity]
    while frontier:
        nxt = []
        for h in frontier:
            for k, s in enumerate(pres.generators):
                t = g.mul(h, s)
                if t not in chi:
                    chi[t] = chi[h] * signs[k]
                    nxt.append(t)
        frontier = nxt
    return chi


def _projector(g: GroupTable, chi: dict[int, int]) -> list[list[CycloNum]]:
    acc = [[ZERO] * 3 for _ in range(3)]
    for h, sgn in chi.items():
        m = g.elements[h]
        for r in range(3):
            for c in range(3):
                if m[r][c]:
                    acc[r][c] = acc[r][c] + m[r][c] * sgn
    scale = CycloNum.from_int(Fraction(1, len(chi)))
    return [[v * scale for v in row] for row in acc]


@dataclass
class BitangentSearch:
    certificates: list[BitangentCertificate]
    orbits: list[list[int]]            # positions into certificates
    candidates_tested: int
    complete: bool
    strategy: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "count": len(self.certificates),
            "complete": self.complete,
            "candidates_tested": self.candidates_tested,
            "strategy": self.strategy,
            "orbit_sizes": [len(o) for o in self.orbits],
            "orbits": self.orbits,
            "certificates": [c.to_json() for c in self.certificates],
        }


def s3_candidates(g: GroupTable, subgroups: Sequence[SubgroupRecord] | None = None) -> list[Line]:
    """One candidate line per S3 subgroup: the row space of its sign projector
    is the covector of the invariant line complementary to the sign part."""
    subgroups = subgroups_up_to_conjugacy(g) if subgroups is None else subgroups
    lines: list[Line] = []
    for rep in subgroups:
        if rep.structure != "S3":
            continue
        base = frozenset(rep.element_indices)
        chi_rep = sign_character(g, rep)
        seen = set()
        for c in range(len(g)):
            conj = conjugate_subgroup(g, base, c)
            if conj in seen:
                continue
            seen.add(conj)
            chi = {g.conj(h, c): v for h, v in chi_rep.items()}
            P = _projector(g, chi)
            row = next((r for r in P if any(r)), None)
            if row is None:
                continue
            lines.append(canonical_line(row))
    return lines


def find_bitangents(g: GroupTable, f: MultiPoly | None = None, expected: int = 28) -> BitangentSearch:
    f = klein_quartic() if f is None else f
    strategy = ["s3-sign-projector"]
    candidates = s3_candidates(g)
    certified: dict[Line, BitangentCertificate] = {}
    tested = 0
    for line in candidates:
        tested += 1
        cert = certify_line(f, line)
        if cert is not None:
            certified[cert.line] = cert
    _close_under_group(g, f, certified)
    if len(certified) < expected:
        strategy.append("involution-eigencovectors")
        for line in involution_candidates(g):
            tested += 1
            cert = certify_line(f, line)
            if cert is not None:
                certified[cert.line] = cert
        _close_under_group(g, f, certified)
    ordered = sorted(certified.values(), key=lambda c: line_sort_key(c.line))
    position = {c.line: k for k, c in enumerate(ordered)}
    orbits: list[list[int]] = []
    assigned: set[int] = set()
    for k, cert in enumerate(ordered):
        if k in assigned:
            continue
        orbit = sorted({position[act_on_line(g, i, cert.line)] for i in range(len(g))})
        assigned.update(orbit)
        orbits.append(orbit)
    stable = all(
        act_on_line(g, i, c.line) in position for i in g.generator_indices for c in ordered
    )
    return BitangentSearch(ordered, orbits, tested, complete=stable and len(ordered) == expected, strategy=strategy)


def _close_under_group(g: GroupTable, f: MultiPoly, certified: dict) -> None:
    frontier = list(certified)
    while frontier:
        nxt = []
        for line in frontier:
            for i in g.generator_indices:
                img = act_on_line(g, i, line)
                if img not in certified:
                    cert = certify_line(f, img)
                    if cert is None:
                        raise ArithmeticError("group image of a bitangent failed certification")
                    certified[img] = cert
                    nxt.append(img)
        frontier = nxt


def involution_candidates(g: GroupTable) -> list[Line]:
    """Fallback candidates: eigen-covectors of each involution (the fixed
    line and the lines through the isolated fixed point along eigenvectors)."""
    lines = []
    for i in range(len(g)):
        if g.element_orders[i] != 2:
            continue
        m = g.elements[i]
        for sign in (1, -1):
            # rows of (M + sign I) span the annihilator of the opposite eigenspace
            rows = [[m[r][c] + (sign if r == c else 0) for c in range(3)] for r in range(3)]
            for row in rows:
                if any(row):
                    lines.append(canonical_line(row))
    return lines
