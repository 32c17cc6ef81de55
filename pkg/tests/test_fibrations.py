"""Fibration models, fibre types, singular points and the map chain."""

import random

import pytest
import sympy as sp

from kleinbench.cyclo import ONE, ZERO, CycloNum
from kleinbench.fibrations import (
    FIBRE_KINDS,
    ModelError,
    build_theorem_chain,
    check_equivariance,
    classify_fibre,
    expected_composite,
    form_value,
    quartic_smoothness_certificate,
    root_of,
    roundtrip_certify,
    sample_on_model,
    singular_points,
    validate_model,
)
from kleinbench.runner import default_forms
from kleinbench.toric import tuples_equivalent


def generic_point(model):
    for k in range(1, 50):
        p = (CycloNum.from_int(k), CycloNum.from_int(3 * k - 1))
        if form_value(model.alpha, p) and form_value(model.beta, p):
            return p


@pytest.mark.parametrize("n", [0, 1, 2, 3, 4])
def test_singular_points_and_fibres(n, G):
    alpha, beta = default_forms(n)
    toric = validate_model(n, alpha, beta, "toric", G)
    prime = validate_model(n, alpha, beta, "prime", G)
    sing = singular_points(toric)
    assert len(sing) == 2 * n
    assert len({s.base_point for s in sing}) == 2 * n
    # the curve x = y = z = 0 of the ambient space meets the threefold
    # exactly over the zeros of alpha * beta
    for s in sing:
        u, v = s.base_point
        assert toric.contains((u, v, ZERO, ZERO, ZERO, ONE))
    gp = generic_point(toric)
    assert not toric.contains((gp[0], gp[1], ZERO, ZERO, ZERO, ONE))
    for form in prime.beta:
        assert classify_fibre(prime, root_of(form)).kind == "nonreduced_plane"
    for form in prime.alpha:
        assert classify_fibre(prime, root_of(form)).kind == "cone"
    assert classify_fibre(prime, gp).kind == "smooth_dp2"
    assert prime.is_degenerate_product() == (n == 0)


def test_degenerate_case():
    m = validate_model(0, [], [], "prime")
    assert m.is_degenerate_product()
    assert singular_points(validate_model(0, [], [], "toric")) == []
    r = m.space.ring
    from kleinbench.fibrations import quartic_in

    assert m.equation == r.var("t") ** 2 + quartic_in(r)


def test_overlap_rejected_with_root():
    with pytest.raises(ModelError, match=r"\(1:1\)"):
        validate_model(2, [(1, 0), (1, -1)], [(0, 1), (1, -1)])
    with pytest.raises(ModelError):
        validate_model(1, [(1, 0)], [(2, 0)], "toric")


def test_bad_inputs():
    with pytest.raises(ModelError):
        validate_model(2, [(1, 0)], [(0, 1)])
    with pytest.raises(ModelError):
        validate_model(1, [(1, 0)], [(0, 1)], "weird")
    m = validate_model(1, [(1, 0)], [(0, 1)], "toric")
    with pytest.raises(ModelError):
        classify_fibre(m, (1, 1))
    p = validate_model(1, [(1, 0)], [(0, 1)], "prime")
    with pytest.raises(ModelError):
        classify_fibre(p, (0, 0))


def test_duplicate_roots_in_alpha_allowed():
    m = validate_model(2, [(1, 0), (1, 0)], [(0, 1), (1, 1)], "toric")
    assert len(singular_points(m)) == 4


def test_smoothness_certificate_frozen():
    cert = quartic_smoothness_certificate()
    assert cert["smooth"]
    assert cert["resultant_fx_fy"] == "3*z^7 + 9"
    assert cert["resultant_fx_fz"] == "-z^9 + 81*z^2"


def test_smoothness_by_groebner_oracle():
    x, y, z = sp.symbols("x y z")
    f = x**3 * y + y**3 * z + z**3 * x
    parts = [sp.diff(f, v) for v in (x, y, z)]
    for chart in (x - 1, y - 1, z - 1):
        gb = sp.groebner(parts + [chart], x, y, z, order="grevlex")
        assert list(gb.exprs) == [1]


def test_fibre_kinds_constant():
    assert set(FIBRE_KINDS) == {"smooth_dp2", "nonreduced_plane", "cone"}


# chain ------------------------------------------------------------------------------

def test_chain_composite(chain):
    assert [s[0].target.name for s in chain.steps] == ["P1xP1112", "P1112", "P(2)", "P(6)", "P(0)"]
    assert tuples_equivalent(chain.composite.target, chain.composite.components, expected_composite(chain))


@pytest.mark.parametrize("name,k", [("S", 0), ("T", 1), ("R", 2)])
def test_symbolic_equivariance(chain, G, name, k):
    m = G.elements[G.generator_indices[k]]
    assert check_equivariance(chain.composite, m, "symbolic", label=name).passed


def test_each_step_is_equivariant(chain, G):
    for f, g in chain.steps:
        for k in range(3):
            m = G.elements[G.generator_indices[k]]
            assert check_equivariance(f, m, "symbolic").passed
            assert check_equivariance(g, m, "symbolic").passed


def test_point_equivariance_random_elements(chain, G):
    rng = random.Random(2)
    for i in rng.sample(range(len(G)), 4):
        c = check_equivariance(chain.composite, G.elements[i], "point", samples=5, seed=i, model=chain.model)
        assert c.passed


def test_roundtrip(chain):
    c = roundtrip_certify(chain.composite, chain.inverse, samples=20, seed=3, model=chain.model)
    assert c.passed and c.data["samples"] == 20


def test_roundtrip_wrong_inverse_fails(chain):
    from kleinbench.toric import RationalMap

    inv = chain.inverse
    comps = dict(inv.components)
    comps["x"] = comps["x"] * 2
    bogus = RationalMap(inv.source, inv.target, comps, name="bogus")
    c = roundtrip_certify(chain.composite, bogus, samples=5, seed=1, model=chain.model)
    assert not c.passed and "back" in c.counterexample


def test_samples_lie_on_model(chain):
    rng = random.Random(9)
    for _ in range(10):
        rec, _ = sample_on_model(chain.model, rng)
        assert chain.model.contains(rec.coordinates)
        rec, _ = sample_on_model(chain.intermediate, rng)
        assert chain.intermediate.contains(rec.coordinates)


def test_sabotage_is_caught(G):
    bad = build_theorem_chain(sabotage=True)
    R = G.elements[G.generator_indices[2]]
    sym = check_equivariance(bad.composite, R, "symbolic", label="R")
    assert not sym.passed and sym.counterexample
    pt = check_equivariance(bad.composite, R, "point", samples=10, seed=7, model=bad.model, label="R")
    assert not pt.passed and "point" in pt.counterexample
