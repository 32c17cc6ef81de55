"""Finite presentations of subgroups and Todd-Coxeter coset enumeration.

Words are tuples of nonzero ints: letter k > 0 is generator k (1-based),
-k its inverse.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .group import GroupTable
from .subgroups import SubgroupRecord

Word = tuple[int, ...]


class PresentationError(RuntimeError):
    pass


class CosetLimitExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Presentation:
    generator_count: int
    relators: tuple[Word, ...]
    generators: tuple[int, ...]   # group-table indices the letters stand for

    def to_json(self) -> dict:
        return {
            "generator_count": self.generator_count,
            "generators": list(self.generators),
            "relators": [list(r) for r in self.relators],
        }


# word utilities -------------------------------------------------------------

def free_reduce(word: Sequence[int]) -> Word:
    out: list[int] = []
    for a in word:
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


def cyclic_reduce(word: Sequence[int]) -> Word:
    w = list(free_reduce(word))
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
    return tuple(w)


def invert(word: Sequence[int]) -> Word:
    return tuple(-a for a in reversed(word))


def canonical_relator(word: Sequence[int]) -> Word:
    """Least rotation of the word or its inverse (for deduplication)."""
    w = cyclic_reduce(word)
    if not w:
        return w
    cands = []
    for v in (w, invert(w)):
        for k in range(len(v)):
            cands.append(v[k:] + v[:k])
    return min(cands, key=lambda c: (len(c), sum(1 for a in c if a < 0), tuple(-a for a in c)))


# coset enumeration ------------------------------------------------------------

def coset_enumeration(
    ngens: int,
    relators: Sequence[Word],
    subgroup_words: Sequence[Word] = (),
    max_cosets: int = 50_000,
) -> int:
    """Index of the subgroup generated by ``subgroup_words`` in the finitely
    presented group (HLT strategy with coincidence processing)."""
    ncols = 2 * ngens

    def col(letter: int) -> int:
        return 2 * (letter - 1) if letter > 0 else 2 * (-letter - 1) + 1

    rels = [[col(a) for a in r] for r in relators if r]
    subs = [[col(a) for a in w] for w in subgroup_words if w]
    table: list[list[int | None]] = [[None] * ncols]
    parent = [0]

    def find(c: int) -> int:
        root = c
        while parent[root] != root:
            root = parent[root]
        while parent[c] != root:
            parent[c], c = root, parent[c]
        return root

    def define(c: int, x: int) -> None:
        n = len(table)
        if n >= max_cosets:
            raise CosetLimitExceeded(f"more than {max_cosets} cosets")
        table.append([None] * ncols)
        parent.append(n)
        table[c][x] = n
        table[n][x ^ 1] = c

    def merge(a: int, b: int, queue: list[int]) -> None:
        a, b = find(a), find(b)
        if a == b:
            return
        if a > b:
            a, b = b, a
        parent[b] = a
        queue.append(b)

    def coincidence(a: int, b: int) -> None:
        queue: list[int] = []
        merge(a, b, queue)
        i = 0
        while i < len(queue):
            e = queue[i]
            i += 1
            for x in range(ncols):
                f = table[e][x]
                if f is None:
                    continue
                table[f][x ^ 1] = None
                e1, f1 = find(e), find(f)
                if table[e1][x] is not None:
                    merge(f1, table[e1][x], queue)
                elif table[f1][x ^ 1] is not None:
                    merge(e1, table[f1][x ^ 1], queue)
                else:
                    table[e1][x] = f1
                    table[f1][x ^ 1] = e1

    def scan_and_fill(c: int, word: list[int]) -> None:
        f, b = c, c
        i, j = 0, len(word) - 1
        while True:
            while i <= j and table[f][word[i]] is not None:
                f = table[f][word[i]]
                i += 1
            if i > j:
                if f != b:
                    coincidence(f, b)
                return
            while j >= i and table[b][word[j] ^ 1] is not None:
                b = table[b][word[j] ^ 1]
                j -= 1
            if j < i:
                coincidence(f, b)
                return
            if i == j:
                table[f][word[i]] = b
                table[b][word[i] ^ 1] = f
                return
            define(f, word[i])

    for w in subs:
        scan_and_fill(0, w)
    c = 0
    while c < len(table):
        if parent[c] == c:
            for r in rels:
                if parent[c] != c:
                    break
                scan_and_fill(c, r)
            if parent[c] == c:
                for x in range(ncols):
                    if table[c][x] is None:
                        define(c, x)
        c += 1
    return sum(1 for k in range(len(table)) if parent[k] == k)


def presented_order(p: Presentation, max_cosets: int = 50_000) -> int:
    return coset_enumeration(p.generator_count, p.relators, max_cosets=max_cosets)


# presentations of subgroups ---------------------------------------------------------

def _tree_relators(g: GroupTable, gens: Sequence[int]) -> list[Word]:
    """One relator per non-tree edge of the Cayley graph spanned by BFS."""
    words: dict[int, Word] = {g.identity: ()}
    queue = deque([g.identity])
    tree_edges = set()
    while queue:
        h = queue.popleft()
        for k, s in enumerate(gens):
            t = g.mul(h, s)
            if t not in words:
                words[t] = words[h] + (k + 1,)
                tree_edges.add((h, k))
                queue.append(t)
    relators = []
    for h, w in words.items():
        for k, s in enumerate(gens):
            if (h, k) in tree_edges:
                continue
            t = g.mul(h, s)
            relators.append(free_reduce(w + (k + 1,) + invert(words[t])))
    return relators


def _simplify(ngens: int, relators: list[Word], order: int) -> list[Word]:
    """Drop duplicate and redundant relators.

    A relator is removed only when coset enumeration confirms the remaining
    ones still present a group of the right order; since the subgroup is a
    quotient of every such group, equal order means the removed relator was
    a consequence of the rest (a Tietze move).
    """
    uniq = sorted({canonical_relator(r) for r in relators if cyclic_reduce(r)}, key=lambda r: (len(r), r))
    limit = max(64, 8 * order)

    def ok(rs: list[Word]) -> bool:
        try:
            return coset_enumeration(ngens, rs, max_cosets=limit) == order
        except CosetLimitExceeded:
            return False

    k = 1
    while k < len(uniq) and not ok(uniq[:k]):
        k *= 2
    chosen = list(uniq[: min(k, len(uniq))])
    if not ok(chosen):
        chosen = list(uniq)
        if not ok(chosen):
            raise PresentationError("tree relators fail to present the subgroup")
    for r in sorted(chosen, key=lambda r: (-len(r), r)):
        trial = [s for s in chosen if s != r]
        if ok(trial):
            chosen = trial
    return sorted(chosen, key=lambda r: (len(r), r))


def presentation_of(g: GroupTable, sub: SubgroupRecord, generators: Sequence[int] | None = None) -> Presentation:
    gens = tuple(sub.generators if generators is None else generators)
    if g.closure(gens) != frozenset(sub.element_indices):
        raise PresentationError(f"generators do not generate subgroup {sub.class_id}")
    if not gens:
        return Presentation(0, (), ())
    relators = _tree_relators(g, gens)
    relators = _simplify(len(gens), relators, sub.order)
    pres = Presentation(len(gens), tuple(relators), gens)
    verify_presentation(g, sub, pres)
    return pres


def verify_presentation(g: GroupTable, sub: SubgroupRecord, pres: Presentation) -> None:
    for r in pres.relators:
        if g.word_to_index(r, pres.generators) != g.identity:
            raise PresentationError(f"relator {r} is not trivial in {sub.class_id}")
    n = presented_order(pres) if pres.generator_count else 1
    if n != sub.order:
        raise PresentationError(f"presentation has order {n}, subgroup has {sub.order}")
