"""Integer matrices with Smith normal form and lattice kernels."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class IntMatrix:
    """Dense row-major matrix of Python ints (arbitrary precision)."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Iterable[Sequence[int]], cols: int | None = None):
        rows = tuple(tuple(int(v) for v in r) for r in data)
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("IntMatrix rows must have equal length")
        self._data = rows
        self.rows = len(rows)
        self.cols = cols

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls([[0] * cols for _ in range(rows)], cols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "IntMatrix":
        return cls([[c[i] for c in columns] for i in range(rows)], len(columns))

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._data]

    def row(self, i: int) -> tuple[int, ...]:
        return self._data[i]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self._data)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def __getitem__(self, ij):
        i, j = ij
        return self._data[i][j]

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix([self.column(j) for j in range(self.cols)], self.rows)

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            ocols = other.columns()
            return IntMatrix(
                [[sum(a * b for a, b in zip(r, c)) for c in ocols] for r in self._data],
                other.cols,
            )
        vec = tuple(other)
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(r, vec)) for r in self._data)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        return IntMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)], self.cols)

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return IntMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)], self.cols)

    def __neg__(self) -> "IntMatrix":
        return IntMatrix([[-a for a in r] for r in self._data], self.cols)

    def __pow__(self, e: int) -> "IntMatrix":
        if e < 0:
            raise ValueError("negative powers need inverse()")
        out = IntMatrix.identity(self.rows)
        base = self
        while e:
            if e & 1:
                out = out @ base
            base = base @ base
            e >>= 1
        return out

    def __eq__(self, other):
        return isinstance(other, IntMatrix) and self.cols == other.cols and self._data == other._data

    def __hash__(self):
        return hash((self.cols, self._data))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def is_diagonal(self) -> bool:
        return all(v == 0 for i, r in enumerate(self._data) for j, v in enumerate(r) if i != j)

    def trace(self) -> int:
        return sum(self._data[i][i] for i in range(min(self.rows, self.cols)))

    def det(self) -> int:
        """Bareiss fraction-free determinant."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        a = self.tolist()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k]), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1] if n else 1

    def stack(self, other: "IntMatrix") -> "IntMatrix":
        """Vertical concatenation."""
        if self.rows and other.rows and self.cols != other.cols:
            raise ValueError("column mismatch in stack")
        cols = self.cols if self.rows else other.cols
        return IntMatrix(list(self._data) + list(other._data), cols)

    def __repr__(self):
        return f"IntMatrix({self.tolist()})"

    def to_json(self) -> list[list[int]]:
        return self.tolist()


@dataclass(frozen=True)
class SmithForm:
    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i, i] for i in range(min(self.D.rows, self.D.cols))]


def smith_normal_form(m: IntMatrix, transforms: bool = True) -> SmithForm:
    """Return U, D, V with U m V = D, D diagonal with d1 | d2 | ... and d_i >= 0.

    The pivot is always the entry of least absolute value in the active
    block.  With ``transforms=False`` only D is computed and U, V are None.
    """
    r, c = m.rows, m.cols
    a = m.tolist()
    U = [[int(i == j) for j in range(r)] for i in range(r)] if transforms else None
    V = [[int(i == j) for j in range(c)] for i in range(c)] if transforms else None

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        if V is not None:
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row dst -= q * row src
        rs, rd = a[src], a[dst]
        for k in range(c):
            if rs[k]:
                rd[k] -= q * rs[k]
        if U is not None:
            us, ud = U[src], U[dst]
            for k in range(r):
                if us[k]:
                    ud[k] -= q * us[k]

    def add_col(dst, src, q):  # col dst -= q * col src
        for row in a:
            if row[src]:
                row[dst] -= q * row[src]
        if V is not None:
            for row in V:
                if row[src]:
                    row[dst] -= q * row[src]

    for t in range(min(r, c)):
        while True:
            best = None
            for i in range(t, r):
                row = a[i]
                for j in range(t, c):
                    v = row[j]
                    if v and (best is None or abs(v) < best[0]):
                        best = (abs(v), i, j)
                        if best[0] == 1:
                            break
                if best is not None and best[0] == 1:
                    break
            if best is None:
                break
            _, i, j = best
            if i != t:
                swap_rows(t, i)
            if j != t:
                swap_cols(t, j)
            p = a[t][t]
            dirty = False
            for i in range(t + 1, r):
                if a[i][t]:
                    add_row(i, t, a[i][t] // p)
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, c):
                if a[t][j]:
                    add_col(j, t, a[t][j] // p)
                    if a[t][j]:
                        dirty = True
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, r) if any(a[i][j] % p for j in range(t + 1, c))),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, -1)
        if a[t][t] < 0:
            a[t] = [-v for v in a[t]]
            if U is not None:
                U[t] = [-v for v in U[t]]
        if best is None:
            break
    D = IntMatrix(a, c)
    if not transforms:
        return SmithForm(None, D, None)
    return SmithForm(IntMatrix(U, r), D, IntMatrix(V, c))


def elementary_divisors(m: IntMatrix) -> list[int]:
    """Diagonal of the Smith form, zeros included, length min(rows, cols)."""
    return smith_normal_form(m, transforms=False).diagonal


def rank(m: IntMatrix) -> int:
    return sum(1 for d in elementary_divisors(m) if d)


def kernel(m: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Saturated integer kernel of ``m`` (as column basis K) and an integer
    left inverse L with L K = I.

    Column operations reduce m to echelon form while the same operations act
    on an identity V; the columns of V opposite zero columns span the kernel.
    """
    r, c = m.rows, m.cols
    a = [list(m.column(j)) for j in range(c)]      # work on columns
    V = [[int(i == j) for i in range(c)] for j in range(c)]   # V columns
    Vinv = [[int(i == j) for j in range(c)] for i in range(c)]  # rows of V^-1

    def col_sub(dst, src, q):  # col dst -= q col src
        if not q:
            return
        cs, cd = a[src], a[dst]
        for k in range(r):
            if cs[k]:
                cd[k] -= q * cs[k]
        vs, vd = V[src], V[dst]
        for k in range(c):
            if vs[k]:
                vd[k] -= q * vs[k]
        # inverse: row src += q row dst
        ri, rd = Vinv[src], Vinv[dst]
        for k in range(c):
            if rd[k]:
                ri[k] += q * rd[k]

    def col_swap(i, j):
        a[i], a[j] = a[j], a[i]
        V[i], V[j] = V[j], V[i]
        Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    pivot_col = 0
    for row in range(r):
        if pivot_col >= c:
            break
        while True:
            nz = [j for j in range(pivot_col, c) if a[j][row]]
            if not nz:
                break
            j = min(nz, key=lambda k: abs(a[k][row]))
            if j != pivot_col:
                col_swap(pivot_col, j)
            p = a[pivot_col][row]
            done = True
            for k in range(pivot_col + 1, c):
                if a[k][row]:
                    col_sub(k, pivot_col, a[k][row] // p)
                    if a[k][row]:
                        done = False
            if done:
                pivot_col += 1
                break
    K = IntMatrix.from_columns([V[j] for j in range(pivot_col, c)], c)
    L = IntMatrix([Vinv[j] for j in range(pivot_col, c)], c)
    return K, L


@dataclass(frozen=True)
class QuotientInvariants:
    torsion: list[int]   # elementary divisors > 1
    free_rank: int


def quotient_invariants(basis: IntMatrix, left_inverse: IntMatrix, relations: Sequence[Sequence[int]]) -> QuotientInvariants:
    """Structure of L / span(relations) for a saturated sublattice L.

    ``basis`` holds L's basis as columns, ``left_inverse`` satisfies
    left_inverse @ basis = I; every relation vector must lie in L.
    """
    rk = basis.cols
    if rk == 0:
        return QuotientInvariants([], 0)
    coords = []
    for vec in relations:
        y = left_inverse @ vec
        if basis @ y != tuple(vec):
            raise ValueError("relation vector does not lie in the sublattice")
        coords.append(y)
    if not coords:
        return QuotientInvariants([], rk)
    C = IntMatrix.from_columns(coords, rk)
    diag = elementary_divisors(C)
    nonzero = [d for d in diag if d]
    return QuotientInvariants(sorted(d for d in nonzero if d > 1), rk - len(nonzero))


def unimodular_inverse(m: IntMatrix) -> IntMatrix:
    """Exact inverse of a unimodular matrix."""
    if m.rows != m.cols or abs(m.det()) != 1:
        raise ValueError("matrix is not unimodular")
    n = m.rows
    from fractions import Fraction

    a = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m.tolist())]
    for col in range(n):
        piv = next(i for i in range(col, n) if a[i][col])
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [v / p for v in a[col]]
        for i in range(n):
            if i != col and a[i][col]:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return IntMatrix([[int(v) for v in row[n:]] for row in a], n)
