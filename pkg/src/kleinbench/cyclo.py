"""Exact arithmetic in the cyclotomic field Q(zeta_7).

Elements are stored in the power basis 1, z, ..., z^5; the relation
1 + z + ... + z^6 = 0 eliminates z^6.  Internally the six rational
coefficients share one positive denominator, which keeps multiplication in
plain integer arithmetic.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from numbers import Rational
from typing import Iterable, Sequence

DEGREE = 6


class CycloZeroDivisionError(ZeroDivisionError):
    """Raised when inverting the zero element of Q(zeta_7)."""


def _fold(raw: Sequence[int]) -> list[int]:
    # exponents mod 7, then z^6 = -(1 + z + ... + z^5)
    c = [0] * 7
    for k, v in enumerate(raw):
        if v:
            c[k % 7] += v
    top = c[6]
    if top:
        return [c[i] - top for i in range(6)]
    return c[:6]


class CycloNum:
    """An element c0 + c1 z + ... + c5 z^5 of Q(zeta_7)."""

    __slots__ = ("_num", "_den", "_hash")

    def __init__(self, coeffs: Iterable = (), den: int | None = None):
        # accepts any number of rational coefficients for powers of zeta
        if den is not None:
            nums = list(coeffs)
            self._set(_fold(nums), den)
            return
        fr = [Fraction(c) for c in coeffs]
        if not fr:
            self._set([0] * 6, 1)
            return
        d = 1
        for f in fr:
            d = d * f.denominator // gcd(d, f.denominator)
        self._set(_fold([f.numerator * (d // f.denominator) for f in fr]), d)

    def _set(self, num: list[int], den: int) -> None:
        if den < 0:
            num = [-v for v in num]
            den = -den
        g = den
        for v in num:
            if v:
                g = gcd(g, v)
                if g == 1:
                    break
        if g != 1:
            num = [v // g for v in num]
            den //= g
        if not any(num):
            den = 1
        self._num = tuple(num)
        self._den = den
        self._hash = None

    @classmethod
    def _raw(cls, num: list[int], den: int) -> "CycloNum":
        obj = cls.__new__(cls)
        obj._set(num, den)
        return obj

    # constructors -------------------------------------------------------
    @classmethod
    def zeta(cls, k: int = 1) -> "CycloNum":
        raw = [0] * 7
        raw[k % 7] = 1
        return cls._raw(_fold(raw), 1)

    @classmethod
    def from_int(cls, n) -> "CycloNum":
        f = Fraction(n)
        return cls._raw([f.numerator, 0, 0, 0, 0, 0], f.denominator)

    @classmethod
    def sqrt_minus_7(cls) -> "CycloNum":
        """z + z^2 + z^4 - z^3 - z^5 - z^6, whose square is -7."""
        return cls([0, 1, 1, -1, 1, -1, -1])

    # accessors ------------------------------------------------------------
    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(v, self._den) for v in self._num)

    @property
    def numerators(self) -> tuple[int, ...]:
        return self._num

    @property
    def denominator(self) -> int:
        return self._den

    def is_zero(self) -> bool:
        return not any(self._num)

    def is_rational(self) -> bool:
        return not any(self._num[1:])

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self._num[0], self._den)

    # arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "CycloNum":
        if isinstance(other, CycloNum):
            return other
        if isinstance(other, (int, Rational)):
            return CycloNum.from_int(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, da, b, db = self._num, self._den, o._num, o._den
        if da == db:
            return CycloNum._raw([a[i] + b[i] for i in range(6)], da)
        return CycloNum._raw([a[i] * db + b[i] * da for i in range(6)], da * db)

    __radd__ = __add__

    def __neg__(self):
        return CycloNum._raw([-v for v in self._num], self._den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b = self._num, o._num
        if not any(b[1:]):
            s = b[0]
            return CycloNum._raw([v * s for v in a], self._den * o._den)
        if not any(a[1:]):
            s = a[0]
            return CycloNum._raw([v * s for v in b], self._den * o._den)
        c = [0] * 11
        for i in range(6):
            ai = a[i]
            if ai:
                for j in range(6):
                    bj = b[j]
                    if bj:
                        c[i + j] += ai * bj
        return CycloNum._raw(_fold(c), self._den * o._den)

    __rmul__ = __mul__

    def galois(self, k: int) -> "CycloNum":
        """Image under the automorphism z -> z^k (k coprime to 7)."""
        if k % 7 == 0:
            raise ValueError("k must be coprime to 7")
        raw = [0] * 7
        for i, v in enumerate(self._num):
            raw[(i * k) % 7] += v
        return CycloNum._raw(_fold(raw), self._den)

    def conj(self) -> "CycloNum":
        return self.galois(6)

    def norm(self) -> Fraction:
        """Field norm down to Q: the product of all six conjugates."""
        p = self
        for k in range(2, 7):
            p = p * self.galois(k)
        return p.rational()

    def inverse(self) -> "CycloNum":
        if self.is_zero():
            raise CycloZeroDivisionError("inverse of 0 in Q(zeta_7)")
        others = self.galois(2)
        for k in range(3, 7):
            others = others * self.galois(k)
        n = (self * others).rational()
        return others * Fraction(n.denominator, n.numerator)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.is_rational():
            r = o.rational()
            if r == 0:
                raise CycloZeroDivisionError("division by 0 in Q(zeta_7)")
            return CycloNum._raw([v * r.denominator for v in self._num], self._den * r.numerator)
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = ONE
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # comparison / hashing -------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, CycloNum):
            return self._den == other._den and self._num == other._num
        if isinstance(other, (int, Rational)):
            return self.is_rational() and Fraction(self._num[0], self._den) == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._num, self._den))
        return self._hash

    def __bool__(self):
        return not self.is_zero()

    def sort_key(self) -> tuple:
        return tuple(self.coeffs)

    def __lt__(self, other: "CycloNum") -> bool:
        return self.sort_key() < other.sort_key()

    # presentation -----------------------------------------------------------
    def to_json(self) -> list[str]:
        return [f"{c.numerator}/{c.denominator}" for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> "CycloNum":
        if len(data) != 6:
            raise ValueError("a CycloNum serializes to exactly 6 rationals")
        return cls([Fraction(s) for s in data])

    def __repr__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
            if k == 0:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                cs = str(c)
                terms.append(f"({cs})*{mono}" if "/" in cs else f"{cs}*{mono}")
        if not terms:
            return "0"
        return " + ".join(terms).replace("+ -", "- ")


ZERO = CycloNum()
ONE = CycloNum.from_int(1)
ZETA = CycloNum.zeta(1)


def cyclo(x) -> CycloNum:
    return x if isinstance(x, CycloNum) else CycloNum.from_int(x)


def random_cyclo(rng, bound: int = 5, den_bound: int = 3) -> CycloNum:
    """A seeded random element with small rational coefficients."""
    return CycloNum(
        [Fraction(rng.randint(-bound, bound), rng.randint(1, den_bound)) for _ in range(6)]
    )


def solve_linear(rows: list[list[CycloNum]], rhs: list[CycloNum]) -> list[CycloNum] | None:
    """Solve a square system exactly; None if singular."""
    n = len(rows)
    a = [list(r) + [rhs[i]] for i, r in enumerate(rows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        inv = a[col][col].inverse()
        a[col] = [v * inv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]


def rank(rows: list[list[CycloNum]]) -> int:
    """Rank of a matrix over Q(zeta_7) by exact Gaussian elimination."""
    a = [list(r) for r in rows if any(r)]
    if not a:
        return 0
    ncols = len(a[0])
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][col]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = a[r][col].inverse()
        a[r] = [v * inv for v in a[r]]
        for i in range(r + 1, len(a)):
            if a[i][col]:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == len(a):
            break
    return r
