"""Subgroups of a finite group table, up to conjugacy."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .group import GroupTable


@dataclass(frozen=True)
class SubgroupRecord:
    element_indices: tuple[int, ...]
    generators: tuple[int, ...]
    order: int
    class_id: str
    structure: str
    class_size: int   # number of conjugate subgroups

    def contains(self, i: int) -> bool:
        return i in self._members

    @property
    def _members(self) -> frozenset[int]:
        return frozenset(self.element_indices)

    def is_closed(self, g: GroupTable) -> bool:
        s = self._members
        return all(g.mul(a, b) in s for a in s for b in s)

    def to_json(self) -> dict:
        return {
            "class_id": self.class_id,
            "structure": self.structure,
            "order": self.order,
            "class_size": self.class_size,
            "generators": list(self.generators),
            "elements": list(self.element_indices),
        }


_STRUCTURES = {
    (1, ((1, 1),)): "1",
    (2, ((1, 1), (2, 1))): "C2",
    (3, ((1, 1), (3, 2))): "C3",
    (4, ((1, 1), (2, 1), (4, 2))): "C4",
    (4, ((1, 1), (2, 3))): "V4",
    (6, ((1, 1), (2, 3), (3, 2))): "S3",
    (7, ((1, 1), (7, 6))): "C7",
    (8, ((1, 1), (2, 5), (4, 2))): "D8",
    (12, ((1, 1), (2, 3), (3, 8))): "A4",
    (21, ((1, 1), (3, 14), (7, 6))): "7:3",
    (24, ((1, 1), (2, 9), (3, 8), (4, 6))): "S4",
    (168, ((1, 1), (2, 21), (3, 56), (4, 42), (7, 48))): "PSL(2,7)",
}


def structure_label(g: GroupTable, elements: Sequence[int]) -> str:
    """Name from order + element-order statistics (no isomorphism testing)."""
    stats = tuple(sorted(Counter(g.element_orders[i] for i in elements).items()))
    return _STRUCTURES.get((len(elements), stats), f"order-{len(elements)}")


def small_generating_set(g: GroupTable, elements: frozenset[int]) -> tuple[int, ...]:
    """Greedy: start from an element of maximal order, then add whichever
    element enlarges the generated subgroup most (ties to smallest index)."""
    if len(elements) == 1:
        return ()
    ordered = sorted(elements)
    first = max(ordered, key=lambda i: (g.element_orders[i], -i))
    gens = [first]
    current = g.closure(gens)
    while current != elements:
        best, best_size = None, -1
        for x in ordered:
            if x in current:
                continue
            size = len(g.closure(gens + [x]))
            if size > best_size:
                best, best_size = x, size
        gens.append(best)
        current = g.closure(gens)
    return tuple(gens)


def conjugate_subgroup(g: GroupTable, elements: frozenset[int], c: int) -> frozenset[int]:
    return frozenset(g.conj(h, c) for h in elements)


def subgroups_up_to_conjugacy(g: GroupTable) -> list[SubgroupRecord]:
    """One representative per conjugacy class of subgroups.

    Cyclic subgroups seed the search; every class representative is then
    extended by each outside element until no new class appears.
    """
    n = len(g)
    reps: list[frozenset[int]] = []
    known: dict[frozenset[int], int] = {}
    sizes: list[int] = []

    def register(elems: frozenset[int]) -> bool:
        if elems in known:
            return False
        pos = len(reps)
        conjugates = {conjugate_subgroup(g, elems, c) for c in range(n)}
        for cs in conjugates:
            known[cs] = pos
        reps.append(elems)
        sizes.append(len(conjugates))
        return True

    frontier = []
    for i in range(n):
        if register(g.closure([i])):
            frontier.append(len(reps) - 1)
    while frontier:
        new = []
        for pos in frontier:
            base = reps[pos]
            gens = list(small_generating_set(g, base))
            for x in range(n):
                if x in base:
                    continue
                if register(g.closure(gens + [x])):
                    new.append(len(reps) - 1)
        frontier = new

    records = []
    for elems, size in zip(reps, sizes):
        records.append((len(elems), structure_label(g, sorted(elems)), size, tuple(sorted(elems))))
    records.sort(key=lambda r: (r[0], r[1], -r[2], r[3]))
    out = []
    letters: Counter = Counter()
    for order, label, size, elems in records:
        letter = chr(ord("A") + letters[order])
        letters[order] += 1
        out.append(
            SubgroupRecord(
                element_indices=elems,
                generators=small_generating_set(g, frozenset(elems)),
                order=order,
                class_id=f"{order}{letter}",
                structure=label,
                class_size=size,
            )
        )
    return out


def cyclic_subgroup(g: GroupTable, i: int, class_id: str = "") -> SubgroupRecord:
    elems = g.closure([i])
    return SubgroupRecord(
        element_indices=tuple(sorted(elems)),
        generators=(i,) if i != g.identity else (),
        order=len(elems),
        class_id=class_id,
        structure=structure_label(g, sorted(elems)),
        class_size=0,
    )


def is_cyclic(g: GroupTable, sub: SubgroupRecord) -> bool:
    return any(g.element_orders[i] == sub.order for i in sub.element_indices)
