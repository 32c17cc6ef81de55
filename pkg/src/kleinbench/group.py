"""PSL_2(F_7) as 168 exact 3x3 matrices over Q(zeta_7)."""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .cyclo import ONE, ZERO, CycloNum

Matrix3 = tuple[tuple[CycloNum, ...], ...]


class GroupClosureError(RuntimeError):
    pass


# 3x3 matrix helpers ---------------------------------------------------------

def mat(rows: Sequence[Sequence]) -> Matrix3:
    return tuple(tuple(v if isinstance(v, CycloNum) else CycloNum.from_int(v) for v in r) for r in rows)


def mat_mul(a: Matrix3, b: Matrix3) -> Matrix3:
    n, m, p = len(a), len(b), len(b[0])
    return tuple(
        tuple(sum((a[i][k] * b[k][j] for k in range(m) if a[i][k] and b[k][j]), ZERO) for j in range(p))
        for i in range(n)
    )


def mat_vec(a: Matrix3, v: Sequence[CycloNum]) -> tuple[CycloNum, ...]:
    return tuple(sum((a[i][k] * v[k] for k in range(len(v)) if a[i][k] and v[k]), ZERO) for i in range(len(a)))


def mat_det(a: Matrix3) -> CycloNum:
    return (
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    )


def mat_identity(n: int = 3) -> Matrix3:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def mat_trace(a: Matrix3) -> CycloNum:
    return a[0][0] + a[1][1] + a[2][2]


def mat_scale(a: Matrix3, c: CycloNum) -> Matrix3:
    return tuple(tuple(v * c for v in r) for r in a)


def projective_key(a: Matrix3) -> Matrix3:
    """Scale so the first nonzero entry is 1."""
    first = next(v for r in a for v in r if v)
    return mat_scale(a, first.inverse())


def mat_key(a: Matrix3) -> tuple:
    return tuple(v.sort_key() for r in a for v in r)


# Klein generators -------------------------------------------------------------

def klein_generators() -> tuple[Matrix3, Matrix3, Matrix3]:
    """S (cyclic shift), T (diagonal of 7th roots), R (order-2 generator).

    R is fixed up to sign by the classical formula; the sign with
    determinant 1 is selected here and the whole triple is self-checked.
    """
    z = CycloNum.zeta
    S = mat([[0, 1, 0], [0, 0, 1], [1, 0, 0]])
    T = mat([[z(4), 0, 0], [0, z(2), 0], [0, 0, z(1)]])
    a = (1, 2, 4)
    s = CycloNum.sqrt_minus_7()
    R = tuple(tuple((z(a[i] * a[j]) - z(-a[i] * a[j])) / s for j in range(3)) for i in range(3))
    if mat_det(R) != ONE:
        R = mat_scale(R, CycloNum.from_int(-1))
    _self_check(S, T, R)
    return S, T, R


def _matrix_order(a: Matrix3, bound: int = 50) -> int:
    ident = mat_identity(len(a))
    p = a
    for k in range(1, bound + 1):
        if p == ident:
            return k
        p = mat_mul(p, a)
    raise GroupClosureError("element order exceeds bound")


def _self_check(S: Matrix3, T: Matrix3, R: Matrix3) -> None:
    from .invariants import klein_quartic, substitute_matrix

    for name, g, order in (("S", S, 3), ("T", T, 7), ("R", R, 2)):
        if mat_det(g) != ONE:
            raise GroupClosureError(f"generator {name} does not have determinant 1")
        if _matrix_order(g) != order:
            raise GroupClosureError(f"generator {name} does not have order {order}")
        f = klein_quartic()
        if substitute_matrix(f, g) != f:
            raise GroupClosureError(f"generator {name} does not fix the Klein quartic")


# group table --------------------------------------------------------------------

@dataclass(frozen=True)
class GroupElement:
    index: int
    matrix: Matrix3


@dataclass(frozen=True)
class ConjugacyClass:
    representative: int
    size: int
    order: int
    members: tuple[int, ...]
    trace: CycloNum


@dataclass
class GroupTable:
    elements: list[Matrix3]
    product: list[list[int]]
    inverse: list[int]
    generator_indices: list[int]
    words: list[tuple[int, ...]] = field(repr=False)   # BFS word (generator positions) per element

    identity: int = 0

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def element(self, i: int) -> GroupElement:
        return GroupElement(i, self.elements[i])

    def mul(self, i: int, j: int) -> int:
        return self.product[i][j]

    def inv(self, i: int) -> int:
        return self.inverse[i]

    def conj(self, i: int, c: int) -> int:
        """c i c^-1"""
        return self.product[self.product[c][i]][self.inverse[c]]

    def power(self, i: int, k: int) -> int:
        if k < 0:
            return self.power(self.inverse[i], -k)
        out = self.identity
        for _ in range(k):
            out = self.product[out][i]
        return out

    @cached_property
    def element_orders(self) -> list[int]:
        orders = []
        for i in range(len(self)):
            k, p = 1, i
            while p != self.identity:
                p = self.product[p][i]
                k += 1
            orders.append(k)
        return orders

    def closure(self, gens: Sequence[int]) -> frozenset[int]:
        seen = {self.identity}
        queue = deque([self.identity])
        while queue:
            g = queue.popleft()
            for s in gens:
                h = self.product[g][s]
                if h not in seen:
                    seen.add(h)
                    queue.append(h)
        return frozenset(seen)

    def index_of(self, m: Matrix3) -> int:
        return self._lookup[m]

    @cached_property
    def _lookup(self) -> dict:
        return {m: i for i, m in enumerate(self.elements)}

    def word_to_index(self, word: Sequence[int], gens: Sequence[int]) -> int:
        """Evaluate a signed word (1-based letters, negative = inverse)."""
        out = self.identity
        for letter in word:
            g = gens[abs(letter) - 1]
            out = self.product[out][g if letter > 0 else self.inverse[g]]
        return out

    def to_json(self) -> dict:
        return {
            "order": len(self),
            "generator_indices": list(self.generator_indices),
            "elements": [[[v.to_json() for v in r] for r in m] for m in self.elements],
            "product": self.product,
            "inverse": self.inverse,
        }


def build_group(generators: Sequence[Matrix3], bound: int = 1000) -> GroupTable:
    """Breadth-first closure of ``generators`` under right multiplication."""
    gens = [mat(g) for g in generators]
    for k, g in enumerate(gens):
        if mat_det(g) != ONE:
            raise GroupClosureError(f"generator {k} does not have determinant 1")
    ident = mat_identity(len(gens[0]) if gens else 3)
    elements = [ident]
    lookup = {ident: 0}
    words: list[tuple[int, ...]] = [()]
    right: list[list[int]] = []
    queue = deque([0])
    while queue:
        i = queue.popleft()
        row = []
        for k, s in enumerate(gens):
            h = mat_mul(elements[i], s)
            j = lookup.get(h)
            if j is None:
                j = len(elements)
                if j >= bound:
                    raise GroupClosureError(
                        f"not the expected finite group: closure exceeds {bound} elements"
                    )
                elements.append(h)
                lookup[h] = j
                words.append(words[i] + (k,))
                queue.append(j)
            row.append(j)
        right.append(row)

    n = len(elements)
    product = []
    for i in range(n):
        row = []
        for j in range(n):
            p = i
            for k in words[j]:
                p = right[p][k]
            row.append(p)
        product.append(row)
    inverse = [row.index(0) for row in product]
    gen_idx = [right[0][k] for k in range(len(gens))]

    keys = {projective_key(m) for m in elements}
    if len(keys) != n:
        raise GroupClosureError("two stored matrices differ by a scalar: lift is not unique")
    table = GroupTable(elements, product, inverse, gen_idx, words)
    table._lookup = lookup
    return table


_KLEIN: GroupTable | None = None


def klein_group() -> GroupTable:
    """The order-168 group generated by S, T, R (built once, then shared)."""
    global _KLEIN
    if _KLEIN is None:
        table = build_group(klein_generators())
        if len(table) != 168:
            raise GroupClosureError(f"expected 168 elements, got {len(table)}")
        _KLEIN = table
    return _KLEIN


def check_associativity(g: GroupTable, samples: int = 10_000, seed: int = 0) -> bool:
    rng = random.Random(seed)
    n = len(g)
    P = g.product
    for _ in range(samples):
        a, b, c = rng.randrange(n), rng.randrange(n), rng.randrange(n)
        if P[P[a][b]][c] != P[a][P[b][c]]:
            return False
    return True


def conjugacy_classes(g: GroupTable) -> list[ConjugacyClass]:
    seen: set[int] = set()
    classes = []
    for i in range(len(g)):
        if i in seen:
            continue
        members = sorted({g.conj(i, c) for c in range(len(g))})
        seen.update(members)
        classes.append(
            ConjugacyClass(
                representative=members[0],
                size=len(members),
                order=g.element_orders[i],
                members=tuple(members),
                trace=mat_trace(g.elements[i]),
            )
        )
    classes.sort(key=lambda c: (c.order, c.representative))
    return classes
