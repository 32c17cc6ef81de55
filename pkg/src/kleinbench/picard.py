"""Picard lattices as integer G-modules.

Pic(dP2) has basis h, e1..e7 with h^2 = 1, ei^2 = -1 and K = -3h + sum ei.
Its 56 exceptional classes are labelled by ordered pairs of {1..8}: a pair
(a, b) with a < b is the "+" copy of the unordered pair {a, b}, and (b, a)
the "-" copy.  Relabelling 1..8 through a permutation acts on the unordered
pair and keeps the sign; this is the restriction of W(E7) to W(A7) = S8.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, permutations
from typing import Callable, Sequence

from .group import GroupTable
from .intmat import IntMatrix, kernel, smith_normal_form, unimodular_inverse
from .subgroups import SubgroupRecord

Label = tuple[int, int]
Perm = tuple[int, ...]   # perm[k-1] is the image of point k

POINTS = tuple(range(1, 9))


class LabelingError(ValueError):
    """A relabelling of the eight points does not extend to a lattice isometry."""

    def __init__(self, message: str, label: Label | None = None, perm: Perm | None = None):
        super().__init__(message)
        self.label = label
        self.perm = perm


class ModuleError(RuntimeError):
    pass


@dataclass(frozen=True)
class ExcClass:
    label: Label
    vector: tuple[int, ...]

    def to_json(self) -> dict:
        return {"label": list(self.label), "vector": list(self.vector)}


@dataclass
class PicModule:
    name: str
    rank: int
    gram: IntMatrix
    canonical_class: tuple[int, ...]
    action: dict[int, IntMatrix] = field(repr=False)
    classes: list[ExcClass] = field(default_factory=list, repr=False)
    convention: str = ""

    def pair(self, u: Sequence[int], v: Sequence[int]) -> int:
        return sum(a * b for a, b in zip(u, self.gram @ tuple(v)))

    def matrix(self, g: int) -> IntMatrix:
        return self.action[g]

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "rank": self.rank,
            "gram": self.gram.to_json(),
            "canonical_class": list(self.canonical_class),
            "convention": self.convention,
            "classes": [c.to_json() for c in self.classes],
            "action": {str(k): m.to_json() for k, m in sorted(self.action.items())},
        }


# the lattice ------------------------------------------------------------------

def dp2_gram() -> IntMatrix:
    return IntMatrix([[1 if i == j == 0 else (-1 if i == j else 0) for j in range(8)] for i in range(8)])


DP2_K = (-3, 1, 1, 1, 1, 1, 1, 1)


def _vec(h: int, es: dict[int, int]) -> tuple[int, ...]:
    return (h,) + tuple(es.get(i, 0) for i in range(1, 8))


def _line(i: int, j: int) -> tuple[int, ...]:
    return _vec(1, {i: -1, j: -1})


def _conic(i: int, j: int) -> tuple[int, ...]:
    return _vec(2, {k: -1 for k in range(1, 8) if k not in (i, j)})


def _point(i: int) -> tuple[int, ...]:
    return _vec(0, {i: 1})


def _cubic(i: int) -> tuple[int, ...]:
    return _vec(3, {k: (-2 if k == i else -1) for k in range(1, 8)})


ORIENTATIONS = ("standard", "swapped-octad")


def exceptional_classes(orientation: str = "standard") -> list[ExcClass]:
    """The 56 labelled classes.

    ``standard``: (i,j) -> h-ei-ej and (j,i) -> the conic through the other
    five points, for i < j <= 7; (i,8) -> 3h-2ei-sum_{j!=i} ej and (8,i) -> ei.
    ``swapped-octad`` exchanges the last two; it is kept as a negative control
    because it is not compatible with any S8 action.
    """
    if orientation not in ORIENTATIONS:
        raise ValueError(f"unknown orientation {orientation!r}")
    out = []
    for i, j in combinations(range(1, 8), 2):
        out.append(ExcClass((i, j), _line(i, j)))
        out.append(ExcClass((j, i), _conic(i, j)))
    for i in range(1, 8):
        first, second = (_cubic(i), _point(i)) if orientation == "standard" else (_point(i), _cubic(i))
        out.append(ExcClass((i, 8), first))
        out.append(ExcClass((8, i), second))
    out.sort(key=lambda c: c.label)
    return out


def build_dp2_lattice(orientation: str = "standard") -> tuple[IntMatrix, tuple[int, ...], list[ExcClass]]:
    gram = dp2_gram()
    classes = exceptional_classes(orientation)
    for c in classes:
        v = c.vector
        if _pair(gram, v, v) != -1 or _pair(gram, DP2_K, v) != -1:
            raise ModuleError(f"class {c.label} is not a (-1)-class")
    by_label = {c.label: c.vector for c in classes}
    for a, b in combinations(POINTS, 2):
        s = tuple(x + y for x, y in zip(by_label[(a, b)], by_label[(b, a)]))
        if s != tuple(-k for k in DP2_K):
            raise ModuleError(f"classes of pair {{{a},{b}}} do not sum to -K")
    return gram, DP2_K, classes


def _pair(gram: IntMatrix, u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, gram @ tuple(v)))


# relabelling actions ------------------------------------------------------------

def oriented_image(perm: Perm, label: Label) -> Label:
    """{a,b}^sign -> {pa,pb}^sign, written back as an ordered pair."""
    a, b = label
    pa, pb = perm[a - 1], perm[b - 1]
    lo, hi = min(pa, pb), max(pa, pb)
    return (lo, hi) if a < b else (hi, lo)


def ordered_image(perm: Perm, label: Label) -> Label:
    """The naive action (a,b) -> (pa,pb); kept as a negative control."""
    return perm[label[0] - 1], perm[label[1] - 1]


LABEL_ACTIONS: dict[str, Callable[[Perm, Label], Label]] = {
    "oriented": oriented_image,
    "ordered": ordered_image,
}

# e1..e7 and h-e1-e2 form a Z-basis
_BASIS_LABELS: tuple[Label, ...] = tuple((8, i) for i in range(1, 8)) + ((1, 2),)


def _basis_labels(classes: Sequence[ExcClass]) -> tuple[Label, ...]:
    by_label = {c.label: c.vector for c in classes}
    for cand in (_BASIS_LABELS, tuple((i, 8) for i in range(1, 8)) + ((1, 2),)):
        m = IntMatrix.from_columns([by_label[l] for l in cand], 8)
        if abs(m.det()) == 1:
            return cand
    raise ModuleError("no unimodular basis among the reference labels")


def induced_matrix(
    perm: Perm,
    classes: Sequence[ExcClass],
    gram: IntMatrix,
    K: Sequence[int],
    action: str = "oriented",
) -> IntMatrix:
    """The integer matrix sending each class vector to the vector of its
    relabelled class; LabelingError names the first label where this fails."""
    image = LABEL_ACTIONS[action]
    by_label = {c.label: c.vector for c in classes}
    basis = _basis_labels(classes)
    B = IntMatrix.from_columns([by_label[l] for l in basis], 8)
    C = IntMatrix.from_columns([by_label[image(perm, l)] for l in basis], 8)
    A = C @ unimodular_inverse(B)
    for c in classes:
        target = image(perm, c.label)
        if A @ c.vector != by_label[target]:
            raise LabelingError(
                f"relabelling {perm} sends {c.label} to {target}, which is not linear on classes",
                label=c.label, perm=perm,
            )
    if A.T @ gram @ A != gram:
        raise LabelingError(f"relabelling {perm} does not preserve the intersection form", perm=perm)
    if A @ tuple(K) != tuple(K):
        raise LabelingError(f"relabelling {perm} does not fix K", perm=perm)
    return A


def transposition(a: int, b: int) -> Perm:
    p = list(POINTS)
    p[a - 1], p[b - 1] = b, a
    return tuple(p)


@dataclass
class CompatibilityReport:
    orientation: str
    action: str
    checked: int
    matrices: dict[tuple[int, int], IntMatrix] = field(repr=False)

    def to_json(self) -> dict:
        return {"orientation": self.orientation, "action": self.action, "transpositions_checked": self.checked}


def verify_s8_compatibility(orientation: str = "standard", action: str = "oriented") -> CompatibilityReport:
    """Every transposition of {1..8} must induce a lattice isometry fixing K.
    Raises LabelingError at the first failure."""
    gram, K, classes = build_dp2_lattice(orientation)
    mats = {}
    for a, b in combinations(POINTS, 2):
        mats[(a, b)] = induced_matrix(transposition(a, b), classes, gram, K, action)
    ident = induced_matrix(POINTS, classes, gram, K, action)
    if ident != IntMatrix.identity(8):
        raise LabelingError("identity permutation does not induce the identity matrix")
    return CompatibilityReport(orientation, action, len(mats), mats)


def intersection_pattern(a: Label, b: Label) -> str:
    if a == b:
        return "equal"
    if a == (b[1], b[0]):
        return "reversed"
    if a[0] == b[0]:
        return "share-first"
    if a[1] == b[1]:
        return "share-second"
    if a[0] == b[1] or a[1] == b[0]:
        return "crossed"
    return "disjoint"


def intersection_table(classes: Sequence[ExcClass], gram: IntMatrix) -> dict[tuple[str, bool, bool], set[int]]:
    """Intersection numbers grouped by label pattern and the two orientations
    (whether each label is increasing)."""
    out: dict[tuple[str, bool, bool], set[int]] = {}
    for c in classes:
        for d in classes:
            key = (intersection_pattern(c.label, d.label), c.label[0] < c.label[1], d.label[0] < d.label[1])
            out.setdefault(key, set()).add(_pair(gram, c.vector, d.vector))
    return out


# PSL(2,7) on the projective line over F7 ----------------------------------------

INFINITY = 7   # index of the point at infinity; F7 points are 0..6


def _mobius_perm(a: int, b: int, c: int, d: int) -> Perm:
    """z -> (az+b)/(cz+d) on P1(F7) as a permutation of 1..8
    (label k <-> field element k-1, label 8 <-> infinity)."""
    out = []
    for z in range(8):
        if z == INFINITY:
            num, den = a, c
        else:
            num, den = (a * z + b) % 7, (c * z + d) % 7
        if den == 0:
            out.append(INFINITY + 1)
        else:
            out.append(num * pow(den, -1, 7) % 7 + 1)
    return tuple(out)


def compose_perm(p: Perm, q: Perm) -> Perm:
    """p after q."""
    return tuple(p[q[k] - 1] for k in range(len(q)))


def perm_order(p: Perm) -> int:
    k, q = 1, p
    while q != POINTS:
        q = compose_perm(q, p)
        k += 1
    return k


@lru_cache(maxsize=None)
def psl27_permutations() -> frozenset[Perm]:
    gens = [_mobius_perm(1, 1, 0, 1), _mobius_perm(0, 6, 1, 0), _mobius_perm(2, 0, 0, 4)]
    seen = {POINTS}
    frontier = [POINTS]
    while frontier:
        nxt = []
        for p in frontier:
            for s in gens:
                q = compose_perm(p, s)
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    if len(seen) != 168:
        raise ModuleError(f"Mobius group has {len(seen)} elements, expected 168")
    return frozenset(seen)


def _extend(g: GroupTable, images: Sequence[Perm]) -> list[Perm] | None:
    """Extend generator images along the BFS words; None if some Cayley-graph
    edge is inconsistent (then no homomorphism exists)."""
    n = len(g)
    perm_of: list[Perm | None] = [None] * n
    perm_of[g.identity] = POINTS
    # words are BFS words over generator positions, so prefixes come first
    for i in sorted(range(n), key=lambda i: len(g.words[i])):
        w = g.words[i]
        if not w:
            continue
        prefix = g.identity
        for k in w[:-1]:
            prefix = g.mul(prefix, g.generator_indices[k])
        perm_of[i] = compose_perm(perm_of[prefix], images[w[-1]])
    for i in range(n):
        for k, s in enumerate(g.generator_indices):
            if perm_of[g.mul(i, s)] != compose_perm(perm_of[i], images[k]):
                return None
    if len(set(perm_of)) != n:
        return None
    return perm_of  # type: ignore[return-value]


def permutation_representation(g: GroupTable) -> list[Perm]:
    """An isomorphism G -> PSL(2,7) < S8, found by trying generator images:
    the order-7 generator goes to z -> z+1 (all order-7 elements are
    conjugate under Aut), the others range over elements of matching order."""
    perms = sorted(psl27_permutations())
    orders = [g.element_orders[s] for s in g.generator_indices]
    shift = _mobius_perm(1, 1, 0, 1)
    pools = []
    for o in orders:
        pools.append([shift] if o == 7 else [p for p in perms if perm_order(p) == o])
    # product over pools, smallest first
    def search(k: int, chosen: list[Perm]) -> list[Perm] | None:
        if k == len(pools):
            return _extend(g, chosen)
        for p in pools[k]:
            found = search(k + 1, chosen + [p])
            if found is not None:
                return found
        return None

    result = search(0, [])
    if result is None:
        raise ModuleError("no isomorphism onto the Mobius group of P1(F7)")
    return result


# modules ------------------------------------------------------------------------

def build_g_action(g: GroupTable, orientation: str = "standard", action: str = "oriented") -> PicModule:
    verify_s8_compatibility(orientation, action)
    gram, K, classes = build_dp2_lattice(orientation)
    perms = permutation_representation(g)
    mats = {i: induced_matrix(perms[i], classes, gram, K, action) for i in range(len(g))}
    module = PicModule(
        name="dP2",
        rank=8,
        gram=gram,
        canonical_class=K,
        action=mats,
        classes=classes,
        convention=(
            f"orientation={orientation}; relabelling={action}; "
            "points 1..7 = 0..6 in F7, 8 = infinity"
        ),
    )
    check_module(g, module)
    return module


def trivial_module(g: GroupTable) -> PicModule:
    one = IntMatrix.identity(1)
    return PicModule(
        name="P2",
        rank=1,
        gram=one,
        canonical_class=(-3,),
        action={i: one for i in range(len(g))},
        convention="trivial action on Z h",
    )


def check_module(g: GroupTable, m: PicModule, samples: int | None = 500, seed: int = 0) -> None:
    """Isometry, K, class permutation and homomorphism checks; raises ModuleError.

    ``samples=None`` checks the homomorphism property on every pair."""
    vectors = {c.vector for c in m.classes}
    K = tuple(m.canonical_class)
    for i, A in m.action.items():
        if A.T @ m.gram @ A != m.gram:
            raise ModuleError(f"element {i} does not preserve the Gram matrix")
        if A @ K != K:
            raise ModuleError(f"element {i} does not fix K")
        if vectors and {A @ v for v in vectors} != vectors:
            raise ModuleError(f"element {i} does not permute the exceptional classes")
    n = len(g)
    if samples is None:
        pairs = [(a, b) for a in range(n) for b in range(n)]
    else:
        pairs = [(a, b) for a in g.generator_indices for b in g.generator_indices]
        rng = random.Random(seed)
        pairs += [(rng.randrange(n), rng.randrange(n)) for _ in range(samples)]
    for a, b in pairs:
        if m.action[a] @ m.action[b] != m.action[g.mul(a, b)]:
            raise ModuleError(f"action is not a homomorphism at ({a}, {b})")


def classes_saturate(m: PicModule) -> bool:
    """True when the class vectors generate the whole lattice."""
    M = IntMatrix.from_columns([c.vector for c in m.classes], m.rank)
    d = smith_normal_form(M, transforms=False).diagonal
    return len([x for x in d if x]) == m.rank and all(abs(x) == 1 for x in d if x)


@dataclass(frozen=True)
class FixedSublattice:
    rank: int
    basis: IntMatrix   # columns

    def to_json(self) -> dict:
        return {"rank": self.rank, "basis": [list(c) for c in self.basis.columns()]}


def fixed_sublattice(sub: SubgroupRecord | Sequence[int], m: PicModule) -> FixedSublattice:
    gens = sub.generators if isinstance(sub, SubgroupRecord) else tuple(sub)
    ident = IntMatrix.identity(m.rank)
    if not gens:
        return FixedSublattice(m.rank, ident)
    stacked = m.action[gens[0]] - ident
    for s in gens[1:]:
        stacked = stacked.stack(m.action[s] - ident)
    K, _ = kernel(stacked)
    return FixedSublattice(K.cols, K)
