"""Cox-coordinate spaces, rational maps and their composition."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kleinbench.cyclo import ONE, ZERO, CycloNum, random_cyclo
from kleinbench.fibrations import sample_free
from kleinbench.poly import Ring
from kleinbench.toric import (
    DegreeError,
    Factored,
    RationalMap,
    UndefinedMapError,
    compose,
    coprime_refine,
    identity_map,
    reduce_components,
    space_catalog,
    tuples_equivalent,
)

SPACES = ["P1xP1112", "T(0)", "T(1)", "T(3)", "P(0)", "P(2)", "P(6)", "P2xP1", "P1112"]


def torus_scale(space, point, lams):
    out = []
    for name, v in zip(space.names, point):
        w = space.weight(name)
        f = ONE
        for lam, e in zip(lams, w):
            f = f * lam ** e
        out.append(v * f)
    return tuple(out)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SPACES), st.integers(0, 10**6))
def test_normalize_is_torus_invariant(name, seed):
    space = space_catalog(name)
    rng = random.Random(seed)
    p = sample_free(space, rng)
    lams = [CycloNum.from_int(rng.choice([1, -1, 2, 3, -5])) * CycloNum.zeta(rng.randrange(7))
            for _ in range(space.ngradings)]
    q = torus_scale(space, p, lams)
    assert space.same_point(p, q)
    n = space.normalize(p)
    assert space.normalize(n) == n


def test_distinct_points_differ():
    P = space_catalog("P2xP1")
    one, two = ONE, CycloNum.from_int(2)
    assert not P.same_point((one, one, one, one, one), (one, one, one, one, two))
    assert not P.same_point((one, one, one, one, one), (one, one, two, one, one))


def test_irrelevant_locus():
    P = space_catalog("P(2)")
    with pytest.raises(UndefinedMapError):
        P.normalize((ZERO, ZERO, ZERO, ONE, ONE))
    with pytest.raises(UndefinedMapError):
        P.normalize((ONE, ZERO, ZERO, ZERO, ZERO))


def test_catalog_errors():
    with pytest.raises(KeyError):
        space_catalog("Q(3)")
    with pytest.raises(ValueError):
        space_catalog("T", -1)
    assert space_catalog("T", 2).name == "T(2)"


def test_twist_and_degree_errors():
    W, P2 = space_catalog("P1112"), space_catalog("P(2)")
    r = W.ring
    m = RationalMap(W, P2, {**{n: r.var(n) for n in "xyz"}, "a": r.one, "b": r.var("t")})
    assert m.twist == ((1,), (0,))
    with pytest.raises(DegreeError):
        RationalMap(W, P2, {**{n: r.var(n) for n in "xyz"}, "a": r.one, "b": r.var("x")})
    with pytest.raises(DegreeError):
        RationalMap(W, P2, {**{n: r.var(n) for n in "xyz"}, "a": r.one, "b": r.var("t") + r.var("x")})
    with pytest.raises(UndefinedMapError):
        RationalMap(W, P2, {n: r.zero for n in P2.names})


def test_factored_and_refinement():
    R = Ring.standard("xy")
    x, y = R.gens()
    a = Factored.product(x, x + y, x + y)   # atoms are not factored further
    assert a.exponent(x + y) == 2 and a.exponent(x) == 1
    assert a.expand(R) == x * (x + y) ** 2
    items = coprime_refine([Factored.of(x * x * y), Factored.of(x * y * y)])
    assert all(k.total_degree() == 1 for it in items for k in it.factors)
    assert [it.expand(R) for it in items] == [x * x * y, x * y * y]
    assert (Factored.of(R.zero) * a).is_zero()


def test_reduce_components():
    P = space_catalog("P(0)")
    r = P.ring
    x, y, z, a, b = r.gens()
    comps = {"x": x * a, "y": y * a, "z": z * a, "a": a * b, "b": b * b}
    red = reduce_components(P, comps)
    # a divides the xyz-block and b divides the (a, b)-block
    assert red == {"x": x, "y": y, "z": z, "a": a, "b": b}


def _chain_pairs():
    from kleinbench.fibrations import build_theorem_chain

    ch = build_theorem_chain()
    return ch, [(ch.steps[i][0], ch.steps[i + 1][0]) for i in range(len(ch.steps) - 1)]


def test_compose_matches_naive_substitution():
    """Factored composition against direct substitution of the components."""
    _, pairs = _chain_pairs()
    for f, g in pairs:
        h = compose(f, g)
        naive = {w: g.components[w].substitute(f.components, target=f.source.ring) for w in g.target.names}
        assert tuples_equivalent(g.target, h.components, naive)


def test_compose_agrees_pointwise():
    ch, pairs = _chain_pairs()
    rng = random.Random(11)
    for f, g in pairs:
        h = compose(f, g)
        done = 0
        while done < 5:
            p = sample_free(f.source, rng)
            try:
                lhs, rhs = h(p), g(f(p))
            except UndefinedMapError:
                continue
            assert g.target.same_point(lhs, rhs)
            done += 1


def test_identity_composition():
    P = space_catalog("P(2)")
    ch, _ = _chain_pairs()
    f = ch.steps[3][0]   # P(2) -> P(6)
    assert tuples_equivalent(f.target, compose(identity_map(P), f).components, f.components)
    assert tuples_equivalent(f.target, compose(f, identity_map(f.target)).components, f.components)


def test_tuples_equivalent_detects_difference():
    P = space_catalog("P(0)")
    r = P.ring
    x, y, z, a, b = r.gens()
    base = {"x": x, "y": y, "z": z, "a": a, "b": b}
    scaled = {"x": 2 * x, "y": 2 * y, "z": 2 * z, "a": a * 3, "b": b * 3}
    assert tuples_equivalent(P, base, scaled)
    assert not tuples_equivalent(P, base, {**base, "b": 2 * b})


def test_incompatible_compose():
    ch, _ = _chain_pairs()
    with pytest.raises(DegreeError):
        compose(ch.steps[0][0], ch.steps[3][0])
