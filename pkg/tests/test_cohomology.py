"""H1 of subgroups on Pic: Fox calculus against a brute-force cocycle solver."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kleinbench.cohomology import (
    INDISTINGUISHABLE,
    NOT_CONJUGATE,
    CohomologyError,
    CohomologyResult,
    WpCollection,
    cached_presentation,
    cocycle_generators,
    compare_collections,
    h1_cyclic,
    h1_general,
    is_coboundary,
    is_cocycle,
    markdown_table,
    oracle_agreement,
    wp_collection,
)
from kleinbench.intmat import IntMatrix, kernel, quotient_invariants
from kleinbench.picard import DP2_K

# DERIVED (Fox calculus, confirmed by the brute-force solver below)
DP2_TABLE = {
    "1A": (), "2A": (2, 2), "3A": (), "4A": (2, 2), "4B": (2, 2, 2), "4C": (2, 2, 2),
    "6A": (2, 2), "7A": (), "8A": (2, 2, 2), "12A": (2,), "12B": (2,), "21A": (),
    "24A": (2, 2), "24B": (2, 2), "168A": (2,),
}


def brute_force_h1(g, sub, m):
    """Z1/B1 with one unknown vector phi(h) per element h of the subgroup:
    phi(1) = 0 and phi(s h) = phi(s) + s.phi(h) for every generator s."""
    elems = list(sub.element_indices)
    pos = {h: k for k, h in enumerate(elems)}
    r = m.rank
    n = len(elems) * r
    rows = []
    e = pos[g.identity]
    for i in range(r):
        row = [0] * n
        row[e * r + i] = 1
        rows.append(row)
    for s in sub.generators:
        A = m.action[s]
        for h in elems:
            sh = pos[g.mul(s, h)]
            for i in range(r):
                row = [0] * n
                row[sh * r + i] += 1
                row[pos[s] * r + i] -= 1
                for j in range(r):
                    row[pos[h] * r + j] -= A[i, j]
                rows.append(row)
    Z, L = kernel(IntMatrix(rows, n))
    ident = IntMatrix.identity(r)
    B = []
    for j in range(r):
        vec = []
        for h in elems:
            vec.extend((m.action[h] - ident).column(j))
        B.append(vec)
    q = quotient_invariants(Z, L, B)
    assert q.free_rank == 0
    return tuple(q.torsion)


def test_cyclic_formula_small_cases():
    one = IntMatrix([[1]])
    assert h1_cyclic(one, 2).invariants == ()
    assert h1_cyclic(IntMatrix([[-1]]), 2).invariants == (2,)
    swap = IntMatrix([[0, 1], [1, 0]])
    assert h1_cyclic(swap, 2).is_trivial
    with pytest.raises(CohomologyError):
        h1_cyclic(IntMatrix([[2]]), 2)


def test_geiser_involution():
    """-1 on K-perp, +1 on K: classically H1 = (Z/2)^6."""
    from kleinbench.picard import dp2_gram

    gram = dp2_gram()
    GK = gram @ DP2_K
    gamma = IntMatrix([[-int(i == j) + DP2_K[i] * GK[j] for j in range(8)] for i in range(8)])
    assert gamma @ gamma == IntMatrix.identity(8)
    assert gamma.T @ gram @ gamma == gram
    assert h1_cyclic(gamma, 2).invariants == (2,) * 6


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(0, 3))
def test_cyclic_permutation_modules_are_acyclic(n, extra):
    # Z[C_n] is induced, so H1 vanishes; adding trivial summands keeps H1 = 0
    size = n + extra
    A = IntMatrix([[1 if (i < n and j == (i - 1) % n) or (i >= n and i == j) else 0 for j in range(size)]
                   for i in range(size)])
    assert h1_cyclic(A, n).is_trivial


def test_full_group_values(G, p2, dp2, by_id):
    assert h1_general(G, by_id["168A"], p2).is_trivial
    # The whole group has H1 = Z/2 on Pic(dP2); see the project notes
    assert h1_general(G, by_id["168A"], dp2).invariants == (2,)


def test_dp2_table(G, dp2, inventory):
    col = wp_collection(G, dp2, inventory)
    assert {k: v.invariants for k, v in col.entries.items()} == DP2_TABLE


def test_p2_table_trivial(G, p2, inventory):
    col = wp_collection(G, p2, inventory)
    assert all(v.is_trivial for v in col.entries.values())


def test_fox_against_brute_force(G, dp2, p2, inventory):
    for s in inventory:
        assert h1_general(G, s, dp2, cached_presentation(G, s)).invariants == brute_force_h1(G, s, dp2)
        assert brute_force_h1(G, s, p2) == ()


def test_oracle_agreement_on_cyclic_classes(G, dp2, p2, inventory):
    for m in (dp2, p2):
        agree = oracle_agreement(G, m, inventory)
        assert sorted(agree, key=lambda k: int(k[:-1])) == ["1A", "2A", "3A", "4A", "7A"]
        assert all(agree.values())


def test_explicit_cocycle_for_the_whole_group(G, dp2, by_id):
    sub = by_id["168A"]
    pres = cached_presentation(G, sub)
    cocycles = cocycle_generators(G, sub, dp2, pres)
    assert len(cocycles) == 1
    phi = cocycles[0]
    assert is_cocycle(G, dp2, pres, phi)
    assert not is_coboundary(dp2, phi)
    assert is_coboundary(dp2, {k: tuple(2 * x for x in v) for k, v in phi.items()})


def test_coboundaries_recognised(G, dp2, by_id):
    x = (1, 0, 2, 0, -1, 0, 0, 3)
    gens = by_id["168A"].generators
    ident = IntMatrix.identity(8)
    phi = {s: (dp2.action[s] - ident) @ x for s in gens}
    assert is_coboundary(dp2, phi)


def test_verdict(G, p2, dp2, inventory):
    a = wp_collection(G, p2, inventory)
    b = wp_collection(G, dp2, inventory)
    v = compare_collections(a, b)
    assert not v.equal and v.text == NOT_CONJUGATE
    assert "not stably conjugate" in v.text
    assert v.witnesses[0] == "2A"
    assert set(v.witnesses) == {k for k, t in DP2_TABLE.items() if t}
    same = compare_collections(a, a)
    assert same.equal and same.text == INDISTINGUISHABLE
    table = markdown_table(a, b)
    assert "| 2A |" in table and "Z/2 x Z/2" in table


def test_mismatched_inventories_rejected():
    a = WpCollection("A", {"1A": CohomologyResult("1A", ())})
    b = WpCollection("B", {"2A": CohomologyResult("2A", ())})
    with pytest.raises(CohomologyError):
        compare_collections(a, b)


def test_labels():
    assert CohomologyResult("x", ()).label() == "0"
    assert CohomologyResult("x", (2, 2)).label() == "Z/2 x Z/2"
