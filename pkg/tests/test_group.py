"""The order-168 matrix group, its classes, subgroups and presentations."""

import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.combinatorics import Permutation, PermutationGroup

from kleinbench.cyclo import ONE, CycloNum
from kleinbench.group import (
    GroupClosureError,
    build_group,
    check_associativity,
    conjugacy_classes,
    klein_generators,
    mat,
    mat_det,
    mat_mul,
)
from kleinbench.picard import permutation_representation
from kleinbench.presentation import (
    Presentation,
    PresentationError,
    canonical_relator,
    coset_enumeration,
    free_reduce,
    presentation_of,
    presented_order,
)
from kleinbench.subgroups import cyclic_subgroup, is_cyclic

# (class id, structure, order, number of conjugates); classical for PSL(2,7)
INVENTORY = [
    ("1A", "1", 1, 1), ("2A", "C2", 2, 21), ("3A", "C3", 3, 28), ("4A", "C4", 4, 21),
    ("4B", "V4", 4, 7), ("4C", "V4", 4, 7), ("6A", "S3", 6, 28), ("7A", "C7", 7, 8),
    ("8A", "D8", 8, 21), ("12A", "A4", 12, 7), ("12B", "A4", 12, 7), ("21A", "7:3", 21, 8),
    ("24A", "S4", 24, 7), ("24B", "S4", 24, 7), ("168A", "PSL(2,7)", 168, 1),
]


def test_order_and_generators(G):
    assert len(G) == 168
    S, T, R = klein_generators()
    for m in (S, T, R):
        assert mat_det(m) == ONE
    assert [G.element_orders[i] for i in G.generator_indices] == [3, 7, 2]


def test_conjugacy_classes(G):
    classes = conjugacy_classes(G)
    assert sorted(c.size for c in classes) == [1, 21, 24, 24, 42, 56]
    assert sorted(c.order for c in classes) == [1, 2, 3, 4, 7, 7]
    assert Counter(G.element_orders) == {1: 1, 2: 21, 3: 56, 4: 42, 7: 48}
    # the two order-7 classes have traces that are Galois conjugate (-1 +- sqrt(-7))/2
    t7 = [c.trace for c in classes if c.order == 7]
    assert t7[0] + t7[1] == CycloNum.from_int(-1)


def test_permutation_model_is_isomorphic(G):
    """The action on the 8 points of P1(F7) is faithful of order 168 (sympy oracle)."""
    perms = permutation_representation(G)
    assert len(set(perms)) == 168
    pg = PermutationGroup([Permutation([p - 1 for p in perms[i]]) for i in G.generator_indices])
    assert pg.order() == 168 and pg.is_perfect
    for a in range(0, 168, 7):
        for b in range(0, 168, 11):
            ab = G.mul(a, b)
            # perm[k-1] is the image of k; the product acts as a after b
            assert perms[ab] == tuple(perms[a][perms[b][k] - 1] for k in range(8))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 167), st.integers(0, 167))
def test_table_matches_matrix_product(a, b):
    from kleinbench.group import klein_group

    G = klein_group()
    assert G.elements[G.mul(a, b)] == mat_mul(G.elements[a], G.elements[b])
    assert G.mul(a, G.inv(a)) == G.identity


def test_associativity(G):
    assert check_associativity(G, samples=2000, seed=1)


def test_closure_bound_raises():
    S, T, R = klein_generators()
    with pytest.raises(GroupClosureError):
        build_group([S, T, R], bound=100)
    with pytest.raises(GroupClosureError):
        build_group([mat([[2, 0, 0], [0, 1, 0], [0, 0, 1]])])


def test_inventory(inventory, G):
    got = [(s.class_id, s.structure, s.order, s.class_size) for s in inventory]
    assert got == INVENTORY
    assert sum(s.class_size for s in inventory) == 179
    for s in inventory:
        assert s.is_closed(G)
        assert G.closure(s.generators) == frozenset(s.element_indices)


def test_cyclic_classes(inventory, G):
    assert [s.class_id for s in inventory if is_cyclic(G, s)] == ["1A", "2A", "3A", "4A", "7A"]
    c = cyclic_subgroup(G, G.generator_indices[1])
    assert c.order == 7 and c.structure == "C7"


def test_presentations_have_the_right_order(inventory, G):
    for s in inventory:
        p = presentation_of(G, s)
        if p.generator_count:
            assert presented_order(p) == s.order
        for r in p.relators:
            assert G.word_to_index(r, p.generators) == G.identity


def test_presentation_rejects_wrong_generators(by_id, G):
    with pytest.raises(PresentationError):
        presentation_of(G, by_id["7A"], by_id["2A"].generators)


def test_coset_enumeration_of_known_groups():
    # <a, b | a^2, b^3, (ab)^7> is infinite; adding the commutator power gives order 168
    p = Presentation(2, ((1, 1), (2, 2, 2), (1, 2) * 7, (1, 2, -1, -2) * 4), (0, 0))
    assert presented_order(p) == 168
    assert presented_order(Presentation(1, ((1,) * 5,), (0,))) == 5
    # index of <a> in the Klein four-group
    assert coset_enumeration(2, ((1, 1), (2, 2), (1, 2, -1, -2)), [(1,)]) == 2


def test_word_utilities():
    assert free_reduce((1, 2, -2, -1, 3)) == (3,)
    assert canonical_relator((2, 1)) == canonical_relator((1, 2))
