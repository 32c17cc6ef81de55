"""First cohomology of finite groups acting on integer lattices."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .group import GroupTable
from .intmat import IntMatrix, elementary_divisors, kernel, quotient_invariants, smith_normal_form, unimodular_inverse
from .picard import PicModule
from .presentation import Presentation, presentation_of
from .subgroups import SubgroupRecord, is_cyclic


class CohomologyError(ValueError):
    pass


@dataclass(frozen=True)
class CohomologyResult:
    subgroup: str
    invariants: tuple[int, ...]   # elementary divisors > 1, divisibility chain

    @property
    def is_trivial(self) -> bool:
        return not self.invariants

    def label(self) -> str:
        if not self.invariants:
            return "0"
        return " x ".join(f"Z/{d}" for d in self.invariants)

    def to_json(self) -> dict:
        return {"subgroup": self.subgroup, "invariants": list(self.invariants), "group": self.label()}


def _finite_part(q, what: str) -> tuple[int, ...]:
    if q.free_rank:
        raise CohomologyError(f"{what}: quotient has free rank {q.free_rank}, expected a finite group")
    return tuple(q.torsion)


def h1_cyclic(A: IntMatrix, n: int, subgroup: str = "") -> CohomologyResult:
    """ker(N) / im(A - I) with N = I + A + ... + A^(n-1)."""
    r = A.rows
    ident = IntMatrix.identity(r)
    if A ** n != ident:
        raise CohomologyError(f"matrix does not satisfy A^{n} = I")
    norm = IntMatrix.zeros(r, r)
    p = ident
    for _ in range(n):
        norm = norm + p
        p = p @ A
    K, L = kernel(norm)
    rel = (A - ident).columns()
    return CohomologyResult(subgroup, _finite_part(quotient_invariants(K, L, rel), "cyclic H1"))


def fox_matrix(pres: Presentation, mats: Sequence[IntMatrix], inverse_mats: Sequence[IntMatrix]) -> IntMatrix:
    """Rows: one block per relator; columns: one block per generator.

    For a crossed homomorphism phi(gh) = phi(g) + g.phi(h), the relator
    w = l1 ... lm gives sum_i P_{i-1} phi(l_i) = 0 with P_i the action of
    the prefix l1...li and phi(x^-1) = -A_x^-1 phi(x).
    """
    r = mats[0].rows if mats else 0
    ngens = pres.generator_count
    rows: list[list[int]] = []
    for w in pres.relators:
        block = [[0] * (r * ngens) for _ in range(r)]
        prefix = IntMatrix.identity(r)
        for letter in w:
            k = abs(letter) - 1
            coeff = prefix if letter > 0 else -(prefix @ inverse_mats[k])
            for i in range(r):
                row = block[i]
                for j in range(r):
                    row[k * r + j] += coeff[i, j]
            prefix = prefix @ (mats[k] if letter > 0 else inverse_mats[k])
        rows.extend(block)
    return IntMatrix(rows, r * ngens)


def h1_general(g: GroupTable, sub: SubgroupRecord, m: PicModule, pres: Presentation | None = None) -> CohomologyResult:
    """Z1 / B1 from a verified presentation of the subgroup."""
    if pres is None:
        pres = presentation_of(g, sub)
    if pres.generator_count == 0:
        return CohomologyResult(sub.class_id, ())
    mats = [m.action[s] for s in pres.generators]
    inv = [m.action[g.inverse[s]] for s in pres.generators]
    for w in pres.relators:
        if g.word_to_index(w, pres.generators) != g.identity:
            raise CohomologyError(f"relator {w} is not trivial in {sub.class_id}")
    Z, L = kernel(fox_matrix(pres, mats, inv))
    q = quotient_invariants(Z, L, _coboundary_vectors(mats))
    return CohomologyResult(sub.class_id, _finite_part(q, f"H1({sub.class_id})"))


def _coboundary_vectors(mats: Sequence[IntMatrix]) -> list[list[int]]:
    r = mats[0].rows
    ident = IntMatrix.identity(r)
    out = []
    for j in range(r):
        vec: list[int] = []
        for A in mats:
            vec.extend((A - ident).column(j))
        out.append(vec)
    return out


def cocycle_generators(g: GroupTable, sub: SubgroupRecord, m: PicModule, pres: Presentation | None = None) -> list[dict[int, tuple[int, ...]]]:
    """One crossed homomorphism per cyclic summand of H1, given by its
    values on the presentation generators (keys are element indices)."""
    if pres is None:
        pres = presentation_of(g, sub)
    if pres.generator_count == 0:
        return []
    r = m.rank
    mats = [m.action[s] for s in pres.generators]
    inv = [m.action[g.inverse[s]] for s in pres.generators]
    Z, L = kernel(fox_matrix(pres, mats, inv))
    if Z.cols == 0:
        return []
    coords = [L @ v for v in _coboundary_vectors(mats)]
    C = IntMatrix.from_columns(coords, Z.cols)
    snf = smith_normal_form(C)
    Uinv = unimodular_inverse(snf.U)
    out = []
    for i, d in enumerate(snf.diagonal + [0] * (Z.cols - len(snf.diagonal))):
        if d == 1:
            continue
        if d == 0:
            raise CohomologyError("H1 has a free part")
        z = Z @ Uinv.column(i)
        out.append({s: tuple(z[k * r:(k + 1) * r]) for k, s in enumerate(pres.generators)})
    return out


def is_cocycle(g: GroupTable, m: PicModule, pres: Presentation, values: dict[int, Sequence[int]]) -> bool:
    """Evaluate every relator on the candidate generator images."""
    mats = [m.action[s] for s in pres.generators]
    inv = [m.action[g.inverse[s]] for s in pres.generators]
    vec: list[int] = []
    for s in pres.generators:
        vec.extend(values[s])
    F = fox_matrix(pres, mats, inv)
    return not any(F @ vec)


def is_coboundary(m: PicModule, values: dict[int, Sequence[int]]) -> bool:
    """Is (phi(s))_s = ((A_s - 1) x)_s for an integer vector x?

    Lattice membership: appending phi to the coboundary columns must leave
    the rank and the product of the elementary divisors unchanged."""
    gens = list(values)
    B = _coboundary_vectors([m.action[s] for s in gens])
    phi: list[int] = []
    for s in gens:
        phi.extend(values[s])

    def volume(cols):
        d = [x for x in elementary_divisors(IntMatrix.from_columns(cols, len(phi))) if x]
        prod = 1
        for x in d:
            prod *= x
        return len(d), prod

    return volume(B) == volume(B + [phi])


def h1_cyclic_for(g: GroupTable, sub: SubgroupRecord, m: PicModule) -> CohomologyResult:
    gen = next(i for i in sub.element_indices if g.element_orders[i] == sub.order)
    if sub.order == 1:
        return CohomologyResult(sub.class_id, ())
    return h1_cyclic(m.action[gen], sub.order, sub.class_id)


@dataclass
class WpCollection:
    module: str
    entries: dict[str, CohomologyResult]
    orders: dict[str, int] = field(default_factory=dict)

    def ordered_ids(self) -> list[str]:
        return sorted(self.entries, key=lambda k: (self.orders.get(k, 0), k))

    def to_json(self) -> dict:
        return {
            "module": self.module,
            "entries": [self.entries[k].to_json() for k in self.ordered_ids()],
        }


_PRESENTATIONS: dict[tuple[int, ...], Presentation] = {}


def cached_presentation(g: GroupTable, sub: SubgroupRecord) -> Presentation:
    key = (id(g),) + tuple(sub.element_indices) + (-1,) + tuple(sub.generators)
    if key not in _PRESENTATIONS:
        _PRESENTATIONS[key] = presentation_of(g, sub)
    return _PRESENTATIONS[key]


def wp_collection(g: GroupTable, m: PicModule, inventory: Sequence[SubgroupRecord]) -> WpCollection:
    entries = {}
    orders = {}
    for sub in inventory:
        entries[sub.class_id] = h1_general(g, sub, m, cached_presentation(g, sub))
        orders[sub.class_id] = sub.order
    return WpCollection(m.name, entries, orders)


@dataclass(frozen=True)
class Verdict:
    equal: bool
    witnesses: tuple[str, ...]
    text: str

    def to_json(self) -> dict:
        return {"equal": self.equal, "witnesses": list(self.witnesses), "verdict": self.text}


INDISTINGUISHABLE = "indistinguishable by the cohomology collection"
NOT_CONJUGATE = "not G-stably birational; embeddings not stably conjugate"


def compare_collections(a: WpCollection, b: WpCollection) -> Verdict:
    if set(a.entries) != set(b.entries):
        raise CohomologyError("collections are over different subgroup inventories")
    order = {**b.orders, **a.orders}
    witnesses = tuple(
        sorted(
            (k for k in a.entries if a.entries[k].invariants != b.entries[k].invariants),
            key=lambda k: (order.get(k, 0), k),
        )
    )
    if not witnesses:
        return Verdict(True, (), INDISTINGUISHABLE)
    return Verdict(False, witnesses, NOT_CONJUGATE)


def markdown_table(a: WpCollection, b: WpCollection, structures: dict[str, str] | None = None) -> str:
    structures = structures or {}
    lines = [
        f"| subgroup | structure | H1(H, Pic {a.module}) | H1(H, Pic {b.module}) |",
        "|---|---|---|---|",
    ]
    for k in a.ordered_ids():
        lines.append(f"| {k} | {structures.get(k, '')} | {a.entries[k].label()} | {b.entries[k].label()} |")
    v = compare_collections(a, b)
    lines.append("")
    lines.append(f"Verdict: {v.text}" + (f" (witnesses: {', '.join(v.witnesses)})" if v.witnesses else ""))
    return "\n".join(lines)


def oracle_agreement(g: GroupTable, m: PicModule, inventory: Sequence[SubgroupRecord]) -> dict[str, bool]:
    """h1_general against h1_cyclic on every cyclic class."""
    out = {}
    for sub in inventory:
        if is_cyclic(g, sub):
            out[sub.class_id] = h1_general(g, sub, m, cached_presentation(g, sub)) == h1_cyclic_for(g, sub, m)
    return out
