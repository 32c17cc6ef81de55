"""Sparse multivariate polynomials over Q(zeta_7) with multi-degree bookkeeping.

Term order everywhere is graded lexicographic in the declared variable order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .cyclo import ONE, ZERO, CycloNum, cyclo


class NotDivisibleError(ArithmeticError):
    """Exact division left a nonzero remainder (kept on ``.remainder``)."""

    def __init__(self, remainder: "MultiPoly"):
        super().__init__(f"division is not exact; remainder {remainder}")
        self.remainder = remainder


@dataclass(frozen=True)
class Ring:
    """Ordered variable names, each with a multi-degree vector."""

    names: tuple[str, ...]
    weights: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.names) != len(self.weights):
            raise ValueError("one weight vector per variable")
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names")
        if len({len(w) for w in self.weights}) > 1:
            raise ValueError("all weight vectors need the same number of gradings")

    @classmethod
    def standard(cls, names: Iterable[str]) -> "Ring":
        names = tuple(names)
        return cls(names, tuple((1,) for _ in names))

    @property
    def nvars(self) -> int:
        return len(self.names)

    @property
    def ngradings(self) -> int:
        return len(self.weights[0]) if self.weights else 0

    def index(self, name: str) -> int:
        return self.names.index(name)

    def var(self, name: str) -> "MultiPoly":
        e = [0] * self.nvars
        e[self.index(name)] = 1
        return MultiPoly(self, {tuple(e): ONE})

    def gens(self) -> tuple["MultiPoly", ...]:
        return tuple(self.var(n) for n in self.names)

    def const(self, c) -> "MultiPoly":
        c = cyclo(c)
        if c.is_zero():
            return MultiPoly(self, {})
        return MultiPoly(self, {(0,) * self.nvars: c})

    @property
    def zero(self) -> "MultiPoly":
        return MultiPoly(self, {})

    @property
    def one(self) -> "MultiPoly":
        return self.const(ONE)

    def monomial(self, exp: Sequence[int], coeff=ONE) -> "MultiPoly":
        return MultiPoly(self, {tuple(exp): cyclo(coeff)})

    def degree_of(self, exp: Sequence[int]) -> tuple[int, ...]:
        k = self.ngradings
        return tuple(sum(e * w[j] for e, w in zip(exp, self.weights)) for j in range(k))

    def monomials_of_degree(self, d: int) -> list[tuple[int, ...]]:
        """Exponent vectors of total degree d, in decreasing grlex order."""
        out: list[tuple[int, ...]] = []

        def rec(prefix, left, slots):
            if slots == 1:
                out.append(prefix + (left,))
                return
            for a in range(left, -1, -1):
                rec(prefix + (a,), left - a, slots - 1)

        if self.nvars == 0:
            return [()] if d == 0 else []
        rec((), d, self.nvars)
        return out


def _grlex(e: tuple[int, ...]):
    return (sum(e), e)


class MultiPoly:
    __slots__ = ("ring", "terms")

    def __init__(self, ring: Ring, terms: Mapping[tuple[int, ...], CycloNum]):
        self.ring = ring
        self.terms = {e: c for e, c in terms.items() if not c.is_zero()}

    # structure ------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or list(self.terms) == [(0,) * self.ring.nvars]

    def constant_value(self) -> CycloNum:
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return next(iter(self.terms.values()), ZERO)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def multidegrees(self) -> set[tuple[int, ...]]:
        return {self.ring.degree_of(e) for e in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.multidegrees()) <= 1

    def multidegree(self) -> tuple[int, ...]:
        degs = self.multidegrees()
        if len(degs) != 1:
            raise ValueError(f"polynomial is not homogeneous (degrees {sorted(degs)})")
        return next(iter(degs))

    def variables(self) -> set[str]:
        used = set()
        for e in self.terms:
            for i, a in enumerate(e):
                if a:
                    used.add(self.ring.names[i])
        return used

    def degree_in(self, name: str) -> int:
        i = self.ring.index(name)
        return max((e[i] for e in self.terms), default=-1)

    def leading_exponent(self) -> tuple[int, ...]:
        return max(self.terms, key=_grlex)

    def leading_coefficient(self) -> CycloNum:
        return self.terms[self.leading_exponent()]

    def monic(self) -> "MultiPoly":
        if not self.terms:
            return self
        return self * self.leading_coefficient().inverse()

    # arithmetic -----------------------------------------------------------
    def _check(self, other: "MultiPoly"):
        if other.ring != self.ring:
            raise ValueError("polynomials live in different rings")

    def _lift(self, other):
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._lift(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t[e] + c if e in t else c
        return MultiPoly(self.ring, t)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            c = cyclo(other)
            return MultiPoly(self.ring, {e: v * c for e, v in self.terms.items()})
        self._check(other)
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = c1 * c2
                if e in t:
                    t[e] = t[e] + v
                else:
                    t[e] = v
        return MultiPoly(self.ring, t)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = self.ring.one
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, CycloNum)):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    # calculus / substitution --------------------------------------------------
    def derivative(self, name: str) -> "MultiPoly":
        i = self.ring.index(name)
        t = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                t[tuple(ne)] = c * e[i]
        return MultiPoly(self.ring, t)

    def substitute(self, mapping: Mapping[str, "MultiPoly"], target: Ring | None = None) -> "MultiPoly":
        """Replace variables by polynomials of ``target`` (default: same ring).

        Unmapped variables are sent to the same-named variable of the target.
        """
        target = target or self.ring
        images = []
        for name in self.ring.names:
            if name in mapping:
                img = mapping[name]
                if img.ring != target:
                    raise ValueError(f"image of {name} is in the wrong ring")
            elif name in target.names:
                img = target.var(name)
            else:
                img = None   # only an error if the variable actually occurs
            images.append(img)
        powers: dict = {}

        def power(i, k):
            key = (i, k)
            if key not in powers:
                if images[i] is None:
                    raise ValueError(f"no image for variable {self.ring.names[i]}")
                if k == 0:
                    powers[key] = target.one
                elif k == 1:
                    powers[key] = images[i]
                else:
                    powers[key] = power(i, k - 1) * images[i]
            return powers[key]

        acc: dict = {}
        for e, c in self.terms.items():
            term = None
            for i, k in enumerate(e):
                if k:
                    p = power(i, k)
                    term = p if term is None else term * p
            if term is None:
                term = target.one
            for te, tc in term.terms.items():
                v = tc * c
                acc[te] = acc[te] + v if te in acc else v
        return MultiPoly(target, acc)

    def linear_substitution(self, names: Sequence[str], matrix: Sequence[Sequence[CycloNum]]) -> "MultiPoly":
        """names[i] -> sum_j matrix[i][j] * names[j]."""
        ring = self.ring
        gens = [ring.var(n) for n in names]
        mapping = {}
        for i, n in enumerate(names):
            img = ring.zero
            for j, g in enumerate(gens):
                if matrix[i][j]:
                    img = img + g * matrix[i][j]
            mapping[n] = img
        return self.substitute(mapping)

    def evaluate(self, point: Mapping[str, CycloNum]) -> CycloNum:
        vals = [cyclo(point[n]) for n in self.ring.names]
        cache: dict = {}
        total = ZERO
        for e, c in self.terms.items():
            v = c
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in cache:
                        cache[key] = vals[i] ** k
                    v = v * cache[key]
            total = total + v
        return total

    def rename(self, target: Ring) -> "MultiPoly":
        """Reinterpret in a ring with the same variable count (positional)."""
        if target.nvars != self.ring.nvars:
            raise ValueError("variable count mismatch")
        return MultiPoly(target, self.terms)

    # division -------------------------------------------------------------
    def divmod(self, d: "MultiPoly") -> tuple["MultiPoly", "MultiPoly"]:
        self._check(d)
        if d.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        ld = d.leading_exponent()
        lc_inv = d.terms[ld].inverse()
        r = dict(self.terms)
        q: dict = {}
        rem: dict = {}
        while r:
            lt = max(r, key=_grlex)
            c = r[lt]
            if all(a >= b for a, b in zip(lt, ld)):
                s = tuple(a - b for a, b in zip(lt, ld))
                f = c * lc_inv
                q[s] = f
                for e, dc in d.terms.items():
                    ne = tuple(a + b for a, b in zip(e, s))
                    v = r.get(ne, ZERO) - f * dc
                    if v.is_zero():
                        r.pop(ne, None)
                    else:
                        r[ne] = v
            else:
                rem[lt] = c
                del r[lt]
        return MultiPoly(self.ring, q), MultiPoly(self.ring, rem)

    def exact_divide(self, d: "MultiPoly") -> "MultiPoly":
        q, r = self.divmod(d)
        if not r.is_zero():
            raise NotDivisibleError(r)
        return q

    def divides(self, other: "MultiPoly") -> bool:
        return other.divmod(self)[1].is_zero()

    # presentation -------------------------------------------------------
    def sorted_terms(self) -> list[tuple[tuple[int, ...], CycloNum]]:
        return sorted(self.terms.items(), key=lambda t: _grlex(t[0]), reverse=True)

    def to_json(self) -> dict:
        return {
            "variables": list(self.ring.names),
            "terms": [{"exp": list(e), "coeff": c.to_json()} for e, c in self.sorted_terms()],
        }

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                (n if k == 1 else f"{n}^{k}") for n, k in zip(self.ring.names, e) if k
            )
            cs = repr(c)
            if not mono:
                parts.append(cs)
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"({cs})*{mono}" if " " in cs or "/" in cs else f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


# ---------------------------------------------------------------------------
# gcd machinery: view p as univariate in one variable over the others.

def _coeffs_in(p: MultiPoly, i: int) -> list[MultiPoly]:
    deg = max((e[i] for e in p.terms), default=-1)
    buckets: list[dict] = [dict() for _ in range(deg + 1)]
    for e, c in p.terms.items():
        ne = e[:i] + (0,) + e[i + 1:]
        buckets[e[i]][ne] = c
    return [MultiPoly(p.ring, b) for b in buckets]


def _from_coeffs(coeffs: Sequence[MultiPoly], i: int, ring: Ring) -> MultiPoly:
    t: dict = {}
    for k, c in enumerate(coeffs):
        for e, v in c.terms.items():
            t[e[:i] + (k,) + e[i + 1:]] = v
    return MultiPoly(ring, t)


def _strip(a: list[MultiPoly]) -> list[MultiPoly]:
    while a and a[-1].is_zero():
        a.pop()
    return a


def _prem(a: list[MultiPoly], b: list[MultiPoly]) -> list[MultiPoly]:
    """Pseudo-remainder lc(b)^(deg a - deg b + 1) * a mod b."""
    r = list(a)
    db = len(b) - 1
    lcb = b[-1]
    e = len(a) - len(b) + 1
    while r and len(r) - 1 >= db:
        lcr = r[-1]
        s = len(r) - 1 - db
        r = [x * lcb for x in r]
        for k in range(len(b)):
            r[k + s] = r[k + s] - lcr * b[k]
        r = _strip(r[:-1] if r[-1].is_zero() else r)
        e -= 1
    if e > 0 and r:
        f = lcb ** e
        r = [x * f for x in r]
    return r


def _content(coeffs: Sequence[MultiPoly]) -> MultiPoly:
    g = None
    for c in coeffs:
        if c.is_zero():
            continue
        if c.is_constant():
            return c.ring.one
        g = c if g is None else _gcd_core(g, c)
        if g.is_constant():
            return g.ring.one
    return g if g is not None else coeffs[0].ring.zero


def _subresultant_last(a: list[MultiPoly], b: list[MultiPoly]) -> list[MultiPoly]:
    """Last nonzero remainder of the subresultant PRS of a, b (deg a >= deg b)."""
    ring = a[0].ring
    g = ring.one
    h = ring.one
    while True:
        delta = len(a) - len(b)
        r = _prem(a, b)
        if not r:
            return b
        if len(r) == 1:
            return r
        a = b
        div = g * h ** delta
        b = [x.exact_divide(div) for x in r]
        g = a[-1]
        if delta == 0:
            h = h
        elif delta == 1:
            h = g
        else:
            h = (g ** delta).exact_divide(h ** (delta - 1))


def _gcd_core(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    """gcd of two nonzero polynomials, up to a unit."""
    if p.is_constant() or q.is_constant():
        return p.ring.one
    used = p.variables() | q.variables()
    i = next(k for k, n in enumerate(p.ring.names) if n in used)
    name = p.ring.names[i]
    pc = _coeffs_in(p, i)
    qc = _coeffs_in(q, i)
    if len(qc) == 1:
        return _gcd_core(_content(pc), q)
    if len(pc) == 1:
        return _gcd_core(p, _content(qc))
    cp, cq = _content(pc), _content(qc)
    c = _gcd_core(cp, cq)
    pp = [x.exact_divide(cp) for x in pc]
    qq = [x.exact_divide(cq) for x in qc]
    if len(pp) < len(qq):
        pp, qq = qq, pp
    last = _subresultant_last(pp, qq)
    if len(last) == 1:
        return c
    prim = [x.exact_divide(_content(last)) for x in last]
    return c * _from_coeffs(prim, i, p.ring)


def _monomial_content(p: MultiPoly) -> tuple[int, ...]:
    return tuple(min(e[i] for e in p.terms) for i in range(p.ring.nvars))


def gcd(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    """Monic (grlex leading coefficient 1) greatest common divisor."""
    p._check(q)
    if p.is_zero():
        return q.monic()
    if q.is_zero():
        return p.monic()
    ring = p.ring
    mp, mq = _monomial_content(p), _monomial_content(q)
    common = tuple(min(a, b) for a, b in zip(mp, mq))
    p1 = p.exact_divide(ring.monomial(mp))
    q1 = q.exact_divide(ring.monomial(mq))
    return (ring.monomial(common) * _gcd_core(p1, q1)).monic()


def gcd_list(polys: Iterable[MultiPoly]) -> MultiPoly:
    g = None
    for p in polys:
        g = p if g is None else gcd(g, p)
    if g is None:
        raise ValueError("gcd of an empty list")
    return g.monic()


def resultant(p: MultiPoly, q: MultiPoly, name: str) -> MultiPoly:
    """Resultant with respect to ``name`` (Sylvester determinant, Bareiss)."""
    p._check(q)
    i = p.ring.index(name)
    a, b = _coeffs_in(p, i), _coeffs_in(q, i)
    if not a or not b:
        return p.ring.zero
    m, n = len(a) - 1, len(b) - 1
    if m == 0:
        return a[0] ** n
    if n == 0:
        return b[0] ** m
    size = m + n
    zero = p.ring.zero
    rows = []
    for k in range(n):
        row = [zero] * size
        for j, c in enumerate(reversed(a)):
            row[k + j] = c
        rows.append(row)
    for k in range(m):
        row = [zero] * size
        for j, c in enumerate(reversed(b)):
            row[k + j] = c
        rows.append(row)
    return _bareiss(rows)


def _bareiss(rows: list[list[MultiPoly]]) -> MultiPoly:
    n = len(rows)
    a = [list(r) for r in rows]
    ring = a[0][0].ring
    sign = 1
    prev = ring.one
    for k in range(n - 1):
        if a[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not a[i][k].is_zero()), None)
            if swap is None:
                return ring.zero
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]).exact_divide(prev)
        prev = a[k][k]
    return a[n - 1][n - 1] * sign


def determinant(rows: list[list[MultiPoly]]) -> MultiPoly:
    if not rows:
        raise ValueError("empty matrix")
    return _bareiss(rows)
