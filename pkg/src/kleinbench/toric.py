"""Multi-graded toric spaces in Cox coordinates and rational maps between them."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .cyclo import ONE, ZERO, CycloNum, cyclo
from .group import Matrix3
from .poly import MultiPoly, Ring, gcd_list

ACTED = ("x", "y", "z")


class DegreeError(ValueError):
    pass


class UndefinedMapError(ValueError):
    """The map has no defined value (at a point, or anywhere)."""


class EquivalenceError(ValueError):
    pass


@dataclass(frozen=True)
class ToricSpace:
    """Cox ring with one weight vector per variable and an irrelevant locus:
    a point is invalid iff every variable of some subset vanishes.  The group
    acts by its 3x3 matrices on (x, y, z) and fixes every other variable."""

    name: str
    ring: Ring
    irrelevant: tuple[tuple[str, ...], ...]

    @property
    def names(self) -> tuple[str, ...]:
        return self.ring.names

    @property
    def ngradings(self) -> int:
        return self.ring.ngradings

    def weight(self, name: str) -> tuple[int, ...]:
        return self.ring.weights[self.ring.index(name)]

    def check(self) -> None:
        k = self.ngradings
        for j in range(k):
            col = [w[j] for w in self.ring.weights]
            g = 0
            for v in col:
                g = _igcd(g, v)
            if g != 1:
                raise DegreeError(f"{self.name}: grading {j} is not surjective onto Z")
        for block in self.irrelevant:
            for n in block:
                self.ring.index(n)

    def in_irrelevant_locus(self, point: Sequence[CycloNum]) -> bool:
        vals = dict(zip(self.names, point))
        return any(all(not vals[n] for n in block) for block in self.irrelevant)

    def act_point(self, m: Matrix3, point: Sequence[CycloNum]) -> tuple[CycloNum, ...]:
        vals = dict(zip(self.names, point))
        xyz = [vals[n] for n in ACTED]
        for i, n in enumerate(ACTED):
            vals[n] = sum((m[i][j] * xyz[j] for j in range(3) if m[i][j]), ZERO)
        return tuple(vals[n] for n in self.names)

    def act_components(self, m: Matrix3, comps: Mapping[str, MultiPoly]) -> dict[str, MultiPoly]:
        """gamma after a tuple of coordinate functions."""
        out = dict(comps)
        for i, n in enumerate(ACTED):
            acc = None
            for j, src in enumerate(ACTED):
                if m[i][j]:
                    term = comps[src] * m[i][j]
                    acc = term if acc is None else acc + term
            out[n] = acc if acc is not None else comps[n].ring.zero
        return out

    def normalize(self, point: Sequence[CycloNum]) -> tuple[CycloNum, ...]:
        """Canonical representative of a torus orbit.

        Grading by grading, the first nonzero coordinate with weight 1 in
        that grading is scaled to 1 (by the torus factor of that grading
        alone).  If the only nonzero coordinate seen by a grading has a
        larger weight, it is set to 1: any root of the scaling gives the
        same point because nothing else moves.
        """
        if self.in_irrelevant_locus(point):
            raise UndefinedMapError(f"point lies in the irrelevant locus of {self.name}")
        vals = [cyclo(v) for v in point]
        weights = self.ring.weights
        for j in range(self.ngradings):
            seen = [i for i, v in enumerate(vals) if v and weights[i][j]]
            if not seen:
                continue
            pivot = next((i for i in seen if abs(weights[i][j]) == 1), None)
            if pivot is None:
                if len(seen) > 1:
                    raise NotImplementedError(f"{self.name}: no unit-weight pivot in grading {j}")
                vals[seen[0]] = ONE
                continue
            lam = vals[pivot].inverse() if weights[pivot][j] == 1 else vals[pivot]
            for i in seen:
                vals[i] = vals[i] * lam ** weights[i][j]
        return tuple(vals)

    def same_point(self, p: Sequence[CycloNum], q: Sequence[CycloNum]) -> bool:
        return self.normalize(p) == self.normalize(q)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "variables": [{"name": n, "degree": list(w)} for n, w in zip(self.names, self.ring.weights)],
            "irrelevant": [list(b) for b in self.irrelevant],
            "acted_on": list(ACTED),
        }


def _igcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


# catalog ---------------------------------------------------------------------

def space_catalog(name: str, n: int | None = None) -> ToricSpace:
    """P1xP1112, T(n), P(n) (the bundle P(O + O(n)) over P2), P2xP1, P1112."""
    if name == "P1xP1112":
        ring = Ring(("u", "v", "x", "y", "z", "t"), ((1, 0), (1, 0), (0, 1), (0, 1), (0, 1), (0, 2)))
        space = ToricSpace(name, ring, (("u", "v"), ("x", "y", "z", "t")))
    elif name == "T":
        if n is None or n < 0:
            raise ValueError("T(n) needs n >= 0")
        ring = Ring(("u", "v", "x", "y", "z", "t"), ((1, 0), (1, 0), (0, 1), (0, 1), (0, 1), (-n, 2)))
        space = ToricSpace(f"T({n})", ring, (("u", "v"), ("x", "y", "z", "t")))
    elif name == "P":
        if n is None or n < 0:
            raise ValueError("P(n) needs n >= 0")
        ring = Ring(("x", "y", "z", "a", "b"), ((1, 0), (1, 0), (1, 0), (0, 1), (n, 1)))
        space = ToricSpace(f"P({n})", ring, (("x", "y", "z"), ("a", "b")))
    elif name == "P2xP1":
        ring = Ring(("x", "y", "z", "a", "b"), ((1, 0), (1, 0), (1, 0), (0, 1), (0, 1)))
        space = ToricSpace(name, ring, (("x", "y", "z"), ("a", "b")))
    elif name == "P1112":
        ring = Ring(("x", "y", "z", "t"), ((1,), (1,), (1,), (2,)))
        space = ToricSpace(name, ring, (("x", "y", "z", "t"),))
    else:
        # accept "T(3)" and "P(2)" spellings
        for prefix in ("T", "P"):
            if name.startswith(prefix + "(") and name.endswith(")"):
                return space_catalog(prefix, int(name[len(prefix) + 1:-1]))
        raise KeyError(f"unknown space {name!r}")
    space.check()
    return space


# rational maps ------------------------------------------------------------------

def _solve_rational(rows: list[list[int]], rhs: list[int]) -> list[Fraction]:
    """Unique exact solution of an overdetermined consistent system."""
    ncols = len(rows[0]) if rows else 0
    a = [[Fraction(v) for v in r] + [Fraction(b)] for r, b in zip(rows, rhs)]
    piv_cols = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][col]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][col]
        a[r] = [v / p for v in a[r]]
        for i in range(len(a)):
            if i != r and a[i][col]:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        piv_cols.append(col)
        r += 1
    if any(row[-1] for row in a[r:]):
        raise DegreeError("component degrees are inconsistent with the target weights")
    if r < ncols:
        raise DegreeError("twist is not determined by the nonzero components")
    out = [Fraction(0)] * ncols
    for i, col in enumerate(piv_cols):
        out[col] = a[i][-1]
    return out


@dataclass
class RationalMap:
    source: ToricSpace
    target: ToricSpace
    components: dict[str, MultiPoly]
    name: str = ""
    note: str = ""
    factored_components: dict[str, "Factored"] | None = field(default=None, repr=False)
    twist: tuple[tuple[int, ...], ...] = field(default=(), init=False)

    def __post_init__(self):
        missing = set(self.target.names) - set(self.components)
        if missing:
            raise DegreeError(f"{self.name}: no component for {sorted(missing)}")
        for w, c in self.components.items():
            if c.ring != self.source.ring:
                raise DegreeError(f"{self.name}: component {w} is not in the source Cox ring")
        self.twist = self.compute_twist()

    def compute_twist(self) -> tuple[tuple[int, ...], ...]:
        """Per target grading j a source degree tau_j with
        deg(component w) = sum_j weight_j(w) tau_j."""
        nz = [w for w in self.target.names if self.components[w]]
        if not nz:
            raise UndefinedMapError(f"{self.name}: every component vanishes; map undefined on the source")
        degs = {}
        for w in nz:
            c = self.components[w]
            if not c.is_homogeneous():
                raise DegreeError(f"{self.name}: component {w} = {c} is not homogeneous")
            degs[w] = c.multidegree()
        rows = [list(self.target.weight(w)) for w in nz]
        k_src = self.source.ngradings
        cols = []
        for c in range(k_src):
            try:
                sol = _solve_rational(rows, [degs[w][c] for w in nz])
            except DegreeError as e:
                detail = ", ".join(f"{w}: {degs[w]}" for w in nz)
                raise DegreeError(f"{self.name}: {e} (component degrees {detail})") from None
            if any(s.denominator != 1 for s in sol):
                raise DegreeError(f"{self.name}: twist is not integral")
            cols.append([int(s) for s in sol])
        return tuple(tuple(cols[c][j] for c in range(k_src)) for j in range(self.target.ngradings))

    @property
    def factored(self) -> dict[str, "Factored"]:
        if self.factored_components is None:
            self.factored_components = {w: Factored.of(c) for w, c in self.components.items()}
        return self.factored_components

    def __call__(self, point: Sequence[CycloNum]) -> tuple[CycloNum, ...]:
        return self.evaluate(point)

    def evaluate(self, point: Sequence[CycloNum]) -> tuple[CycloNum, ...]:
        vals = dict(zip(self.source.names, point))
        image = tuple(self.components[w].evaluate(vals) for w in self.target.names)
        if self.target.in_irrelevant_locus(image):
            raise UndefinedMapError(f"{self.name}: point is in the base locus")
        return image

    def pullback(self, p: MultiPoly) -> MultiPoly:
        return p.substitute(self.components, target=self.source.ring)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "source": self.source.name,
            "target": self.target.name,
            "components": {w: self.components[w].to_json() for w in self.target.names},
            "twist": [list(t) for t in self.twist],
            "note": self.note,
        }

    def describe(self) -> str:
        return f"{self.source.name} -> {self.target.name}: (" + ", ".join(
            repr(self.components[w]) for w in self.target.names
        ) + ")"


def identity_map(space: ToricSpace) -> RationalMap:
    return RationalMap(space, space, {n: space.ring.var(n) for n in space.names}, name=f"id_{space.name}")


@dataclass
class Factored:
    """unit * prod F^e over monic atoms F."""

    unit: CycloNum
    factors: dict[MultiPoly, int] = field(default_factory=dict)

    @classmethod
    def of(cls, p: MultiPoly) -> "Factored":
        if p.is_zero():
            return cls(ZERO, {})
        if p.is_constant():
            return cls(p.constant_value(), {})
        lc = p.leading_coefficient()
        return cls(lc, {p.monic(): 1})

    @classmethod
    def product(cls, *parts: MultiPoly) -> "Factored":
        out = cls(ONE, {})
        for p in parts:
            out = out * cls.of(p)
        return out

    def is_zero(self) -> bool:
        return not self.unit

    def __mul__(self, other: "Factored") -> "Factored":
        if self.is_zero() or other.is_zero():
            return Factored(ZERO, {})
        f = dict(self.factors)
        for k, e in other.factors.items():
            f[k] = f.get(k, 0) + e
        return Factored(self.unit * other.unit, f)

    def __pow__(self, n: int) -> "Factored":
        return Factored(self.unit ** n, {k: e * n for k, e in self.factors.items()}) if n else Factored(ONE, {})

    def exponent(self, atom: MultiPoly) -> int:
        return self.factors.get(atom, 0)

    def expand(self, ring: Ring) -> MultiPoly:
        out = ring.const(self.unit)
        for k in sorted(self.factors, key=repr):
            out = out * k ** self.factors[k]
        return out


def coprime_refine(items: Sequence[Factored]) -> list[Factored]:
    """Rewrite all items over one pairwise coprime set of atoms."""
    items = [Factored(it.unit, {k: e for k, e in it.factors.items() if e}) for it in items]
    while True:
        atoms = sorted({k for it in items for k in it.factors}, key=repr)
        split = None
        for i in range(len(atoms)):
            for j in range(i + 1, len(atoms)):
                g = gcd_list([atoms[i], atoms[j]])
                if not g.is_constant():
                    split = (atoms[i], atoms[j], g)
                    break
            if split:
                break
        if split is None:
            return items
        A, B, g = split
        out = []
        for it in items:
            f = dict(it.factors)
            unit = it.unit
            for atom in (A, B):
                e = f.pop(atom, 0)
                if not e:
                    continue
                rest = atom.exact_divide(g)
                f[g] = f.get(g, 0) + e
                if rest.is_constant():
                    unit = unit * rest.constant_value() ** e
                else:
                    lc = rest.leading_coefficient()
                    unit = unit * lc ** e
                    m = rest.monic()
                    f[m] = f.get(m, 0) + e
            out.append(Factored(unit, f))
        items = out


def _substitute_atom(atom: MultiPoly, middle: ToricSpace, inner: Mapping[str, Factored], source: Ring) -> Factored:
    """atom(inner), pulling common factors out grading by grading first:
    if every variable v of the atom has inner component D^(w_j(v)) c_v,
    then atom(inner) = D^(deg_j atom) atom(c)."""
    names = sorted(atom.variables(), key=middle.names.index)
    if len(atom.terms) == 1:
        (e, c), = atom.terms.items()
        out = Factored(c, {})
        for v in names:
            out = out * inner[v] ** e[middle.ring.index(v)]
        return out
    if not names:
        return Factored.of(source.const(atom.constant_value()))
    comps = {v: Factored(inner[v].unit, dict(inner[v].factors)) for v in names}
    live = [v for v in names if not comps[v].is_zero()]
    deg = atom.multidegree()
    pulled: dict[MultiPoly, int] = {}
    for j in range(middle.ngradings):
        S = [v for v in live if middle.weight(v)[j]]
        if not S or any(middle.weight(v)[j] < 0 for v in S) or deg[j] <= 0:
            continue
        atoms = set.intersection(*(set(comps[v].factors) for v in S))
        for F in atoms:
            d = min(comps[v].exponent(F) // middle.weight(v)[j] for v in S)
            if d <= 0:
                continue
            for v in S:
                comps[v].factors[F] -= middle.weight(v)[j] * d
            pulled[F] = pulled.get(F, 0) + d * deg[j]
    mapping = {v: comps[v].expand(source) for v in names}
    value = Factored.of(atom.substitute(mapping, target=source))
    return value * Factored(ONE, pulled)


def _substitute(g: Factored, middle: ToricSpace, inner: Mapping[str, Factored], source: Ring) -> Factored:
    out = Factored(g.unit, {})
    for atom, e in g.factors.items():
        out = out * _substitute_atom(atom, middle, inner, source) ** e
    return out


def reduce_factored(target: ToricSpace, comps: Mapping[str, Factored]) -> dict[str, Factored]:
    """Strip common factors grading by grading: dividing by D in grading j
    divides component w by D^(weight_j(w)) (multiplies if negative)."""
    names = list(target.names)
    refined = dict(zip(names, coprime_refine([comps[w] for w in names])))
    changed = True
    while changed:
        changed = False
        for j in range(target.ngradings):
            pos = [w for w in names if target.weight(w)[j] > 0 and not refined[w].is_zero()]
            if not pos:
                continue
            for F in set.intersection(*(set(refined[w].factors) for w in pos)):
                d = min(refined[w].exponent(F) // target.weight(w)[j] for w in pos)
                if d <= 0:
                    continue
                for w in names:
                    if refined[w].is_zero():
                        continue
                    m = target.weight(w)[j]
                    if m:
                        refined[w].factors[F] = refined[w].exponent(F) - m * d
                changed = True
    return refined


def reduce_components(target: ToricSpace, comps: Mapping[str, MultiPoly]) -> dict[str, MultiPoly]:
    red = reduce_factored(target, {w: Factored.of(c) for w, c in comps.items()})
    ring = next(iter(comps.values())).ring
    return {w: red[w].expand(ring) for w in target.names}


def compose(f: RationalMap, g: RationalMap, name: str = "") -> RationalMap:
    """g after f, followed by removal of common factors per grading."""
    if f.target.name != g.source.name or f.target.ring != g.source.ring:
        raise DegreeError(f"cannot compose: {f.target.name} is not {g.source.name}")
    inner = dict(zip(f.target.names, coprime_refine([f.factored[w] for w in f.target.names])))
    comps = {w: _substitute(g.factored[w], f.target, inner, f.source.ring) for w in g.target.names}
    if all(c.is_zero() for c in comps.values()):
        raise UndefinedMapError("map undefined on the source: every component vanishes")
    comps = reduce_factored(g.target, comps)
    expanded = {w: comps[w].expand(f.source.ring) for w in g.target.names}
    return RationalMap(f.source, g.target, expanded, name=name or f"{g.name}*{f.name}", factored_components=comps)


def compose_chain(maps: Sequence[RationalMap], name: str = "") -> RationalMap:
    out = maps[0]
    for m in maps[1:]:
        out = compose(out, m)
    if name:
        out.name = name
    return out


def tuples_equivalent(space: ToricSpace, a: Mapping[str, MultiPoly], b: Mapping[str, MultiPoly]) -> bool:
    """Do two component tuples define the same rational map?

    For each grading a pivot variable of weight e_j with nonzero component
    fixes lambda_j = b_p / a_p; the remaining components are compared after
    clearing denominators.
    """
    names = space.names
    for w in names:
        if bool(a[w]) != bool(b[w]):
            return False
    k = space.ngradings
    pivots = []
    for j in range(k):
        unit = tuple(int(i == j) for i in range(k))
        p = next((w for w in names if space.weight(w) == unit and a[w]), None)
        if p is None:
            raise EquivalenceError(f"{space.name}: no pivot for grading {j}")
        pivots.append(p)
    for w in names:
        if w in pivots or not a[w]:
            continue
        lhs, rhs = b[w], a[w]
        for j, p in enumerate(pivots):
            m = space.weight(w)[j]
            if m > 0:
                lhs = lhs * a[p] ** m
                rhs = rhs * b[p] ** m
            elif m < 0:
                lhs = lhs * b[p] ** (-m)
                rhs = rhs * a[p] ** (-m)
        if lhs != rhs:
            return False
    return True


def maps_equivalent(f: RationalMap, g: RationalMap) -> bool:
    return f.target.name == g.target.name and tuples_equivalent(f.target, f.components, g.components)
