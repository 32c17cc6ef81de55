"""dP2 fibrations over P1 and the equivariant chain to P2 x P1."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from .cyclo import ONE, ZERO, CycloNum, cyclo, random_cyclo
from .group import GroupTable, Matrix3, klein_group
from .invariants import klein_hessian, klein_quartic
from .poly import MultiPoly, Ring, gcd_list, resultant
from .toric import (
    ACTED,
    Factored,
    RationalMap,
    ToricSpace,
    UndefinedMapError,
    compose_chain,
    space_catalog,
    tuples_equivalent,
)

LinearForm = tuple[CycloNum, CycloNum]   # a*u + b*v

MODELS = ("prime", "toric")


class ModelError(ValueError):
    pass


def linear_form(a, b) -> LinearForm:
    a, b = cyclo(a), cyclo(b)
    if not a and not b:
        raise ModelError("zero linear form")
    return a, b


def form_poly(ring: Ring, factors: Sequence[LinearForm]) -> MultiPoly:
    u, v = ring.var("u"), ring.var("v")
    out = ring.one
    for a, b in factors:
        out = out * (u * a + v * b)
    return out


def form_value(factors: Sequence[LinearForm], p: Sequence[CycloNum]) -> CycloNum:
    out = ONE
    for a, b in factors:
        out = out * (a * p[0] + b * p[1])
    return out


def root_of(form: LinearForm) -> tuple[CycloNum, CycloNum]:
    """The zero of a*u + b*v on P1, first nonzero coordinate scaled to 1."""
    a, b = form
    u, v = -b, a
    first = u if u else v
    inv = first.inverse()
    return u * inv, v * inv


def quartic_in(ring: Ring) -> MultiPoly:
    return klein_quartic().substitute({n: ring.var(n) for n in ACTED}, target=ring)


def hessian_in(ring: Ring) -> MultiPoly:
    return klein_hessian().substitute({n: ring.var(n) for n in ACTED}, target=ring)


@dataclass
class FibrationModel:
    n: int
    alpha: list[LinearForm]
    beta: list[LinearForm]
    model: str
    space: ToricSpace
    equation: MultiPoly
    resultant: CycloNum

    @property
    def alpha_poly(self) -> MultiPoly:
        return form_poly(self.space.ring, self.alpha)

    @property
    def beta_poly(self) -> MultiPoly:
        return form_poly(self.space.ring, self.beta)

    def is_degenerate_product(self) -> bool:
        """n = 0: the equation is t^2 + f up to constants, i.e. dP2 x P1."""
        return self.n == 0

    def contains(self, point: Sequence[CycloNum]) -> bool:
        return not self.equation.evaluate(dict(zip(self.space.names, point)))

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "model": self.model,
            "space": self.space.name,
            "alpha": [[a.to_json(), b.to_json()] for a, b in self.alpha],
            "beta": [[a.to_json(), b.to_json()] for a, b in self.beta],
            "equation": self.equation.to_json(),
            "resultant": self.resultant.to_json(),
        }


def pair_resultant(p: LinearForm, q: LinearForm) -> CycloNum:
    return p[0] * q[1] - p[1] * q[0]


def validate_model(
    n: int,
    alpha: Sequence[LinearForm],
    beta: Sequence[LinearForm],
    model: str = "prime",
    g: GroupTable | None = None,
) -> FibrationModel:
    if model not in MODELS:
        raise ModelError(f"unknown model {model!r}")
    if n < 0:
        raise ModelError("n must be non-negative")
    alpha = [linear_form(*f) for f in alpha]
    beta = [linear_form(*f) for f in beta]
    if len(alpha) != n or len(beta) != n:
        raise ModelError(f"alpha and beta need exactly n = {n} linear factors each")
    res = ONE
    for p in alpha:
        for q in beta:
            r = pair_resultant(p, q)
            if not r:
                root = root_of(p)
                raise ModelError(
                    "alpha and beta have a common zero at (u:v) = "
                    f"({root[0]}:{root[1]}); their zero sets must be disjoint"
                )
            res = res * r
    space = space_catalog("P1xP1112") if model == "prime" else space_catalog("T", n)
    ring = space.ring
    a, b = form_poly(ring, alpha), form_poly(ring, beta)
    t = ring.var("t")
    f = quartic_in(ring)
    equation = a * t**2 + b * f if model == "prime" else a * b * t**2 + f
    if not equation.is_homogeneous():
        raise ModelError("equation is not homogeneous")
    g = klein_group() if g is None else g
    for i in g.generator_indices:
        m = g.elements[g.inverse[i]]
        if equation.linear_substitution(ACTED, m) != equation:
            raise ModelError(f"equation is not fixed by generator {i}")
    return FibrationModel(n, alpha, beta, model, space, equation, res)


@dataclass(frozen=True)
class SingularPoint:
    base_point: tuple[CycloNum, CycloNum]
    factor: str          # "alpha" or "beta"
    index: int
    fibre_point: str = "x = y = z = 0"

    def to_json(self) -> dict:
        return {
            "base_point": [c.to_json() for c in self.base_point],
            "factor": self.factor,
            "index": self.index,
            "fibre_point": self.fibre_point,
        }


def singular_points(model: FibrationModel) -> list[SingularPoint]:
    """Base points of the singular points of the toric model: the roots of
    the linear factors of alpha*beta."""
    if model.model != "toric":
        raise ModelError("singular points are computed on the toric model")
    out = []
    for name, forms in (("alpha", model.alpha), ("beta", model.beta)):
        for k, form in enumerate(forms):
            out.append(SingularPoint(root_of(form), name, k))
    return out


# fibres ------------------------------------------------------------------------

@lru_cache(maxsize=None)
def quartic_smoothness_certificate() -> dict:
    """The partials of f have no common zero in P2.

    On x = 0 they reduce to z^3, 3y^2 z, y^3 (gcd 1, so no projective zero);
    on x = 1, eliminating y from f_x (monic-up-to-3 in y) against f_y and
    against f_z gives two univariate resultants in z with gcd 1.
    """
    R = Ring.standard("xyz")
    f = klein_quartic(R)
    parts = [f.derivative(n) for n in "xyz"]
    R2 = Ring.standard("yz")
    at_x0 = [p.substitute({"x": R2.zero}, target=R2) for p in parts]
    g0 = gcd_list(at_x0)
    at_x1 = [p.substitute({"x": R2.one}, target=R2) for p in parts]
    fx, fy, fz = at_x1
    if fx.degree_in("y") != 1 or not fx.divmod(R2.var("y"))[0].is_constant():
        raise ArithmeticError("elimination variable has a non-constant leading coefficient")
    r1 = resultant(fx, fy, "y")
    r2 = resultant(fx, fz, "y")
    g1 = gcd_list([r1, r2])
    ok = g0.is_constant() and g1.is_constant()
    return {
        "smooth": ok,
        "chart_x0_gcd": repr(g0),
        "resultant_fx_fy": repr(r1),
        "resultant_fx_fz": repr(r2),
        "resultant_gcd": repr(g1),
    }


FIBRE_KINDS = ("smooth_dp2", "nonreduced_plane", "cone")


@dataclass
class FibreClassification:
    kind: str
    base_point: tuple[CycloNum, CycloNum]
    data: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"kind": self.kind, "base_point": [c.to_json() for c in self.base_point], "data": self.data}


def classify_fibre(model: FibrationModel, p: Sequence) -> FibreClassification:
    if model.model != "prime":
        raise ModelError("fibres are classified on the prime model")
    if len(p) != 2:
        raise ModelError("base point needs two coordinates (u:v)")
    pt = (cyclo(p[0]), cyclo(p[1]))
    if not pt[0] and not pt[1]:
        raise ModelError("(0:0) is not a point of P1")
    a = form_value(model.alpha, pt)
    b = form_value(model.beta, pt)
    if not b:
        # alpha(p) t^2 = 0 with alpha(p) != 0 by disjointness
        return FibreClassification("nonreduced_plane", pt, {"equation": "t^2 = 0", "reduced": "P2 = {t = 0}"})
    if not a:
        return FibreClassification(
            "cone", pt, {"equation": "f(x,y,z) = 0", "vertex": "(0:0:0:1)", "vertex_type": "1/2(1,1,1)"}
        )
    cert = quartic_smoothness_certificate()
    if not cert["smooth"]:
        raise ArithmeticError("quartic smoothness certificate failed")
    # c1 t^2 + c2 f: d/dt forces t = 0, then f and its partials must vanish
    return FibreClassification(
        "smooth_dp2",
        pt,
        {"c1": a.to_json(), "c2": b.to_json(), "certificate": "partials of f have no common zero", **cert},
    )


# the chain -----------------------------------------------------------------------

@dataclass
class TheoremChain:
    model: FibrationModel
    steps: list[tuple[RationalMap, RationalMap]]   # (forward, inverse)
    composite: RationalMap
    inverse: RationalMap
    intermediate: FibrationModel                   # the prime model X'_1

    def to_json(self) -> dict:
        return {
            "model": self.model.to_json(),
            "steps": [{"forward": f.to_json(), "inverse": g.to_json()} for f, g in self.steps],
            "composite": self.composite.to_json(),
            "inverse": self.inverse.to_json(),
        }


def _map(src: ToricSpace, tgt: ToricSpace, comps: dict, name: str, note: str = "") -> RationalMap:
    """Components may be given as tuples of factors; unlisted target
    variables map to the same-named source variable."""
    factored = {}
    for w in tgt.names:
        c = comps.get(w, src.ring.var(w) if w in src.names else None)
        if c is None:
            raise ValueError(f"{name}: no component for {w}")
        factored[w] = Factored.product(*(c if isinstance(c, tuple) else (c,)))
    full = {w: factored[w].expand(src.ring) for w in tgt.names}
    return RationalMap(src, tgt, full, name=name, note=note, factored_components=factored)


def build_theorem_chain(sabotage: bool = False) -> TheoremChain:
    """X1 -> X'1 -> P(1,1,1,2) -> P(2) -> P(6) -> P(0) = P2 x P1 and back.

    With ``sabotage`` the fibrewise map P(2) -> P(6) multiplies b by x^4
    instead of the invariant quartic (a negative control)."""
    X1 = validate_model(1, [(1, 0)], [(0, 1)], "toric")
    X1p = validate_model(1, [(1, 0)], [(0, 1)], "prime")
    T1, PP, W, P2, P6, P0 = (
        X1.space, X1p.space, space_catalog("P1112"),
        space_catalog("P", 2), space_catalog("P", 6), space_catalog("P", 0),
    )

    r = T1.ring
    m1 = _map(T1, PP, {"t": (r.var("v"), r.var("t"))}, "X1->X'1", "t -> beta t")
    r = PP.ring
    i1 = _map(PP, T1, {n: (r.var("v"), r.var(n)) for n in ("x", "y", "z", "t")}, "X'1->X1", "t -> t/beta, rescaled")

    m2 = _map(PP, W, {}, "X'1->P1112", "projection")
    r = W.ring
    f_w = quartic_in(r)
    i2 = _map(W, PP, {"u": f_w, "v": -r.var("t") ** 2}, "P1112->X'1", "(u:v) = (f : -t^2) from u t^2 + v f = 0")

    m3 = _map(W, P2, {"a": r.one, "b": r.var("t")}, "P1112->P(2)", "blow up of the singular point")
    r = P2.ring
    a, b = r.var("a"), r.var("b")
    i3 = _map(P2, W, {**{n: (a, r.var(n)) for n in ACTED}, "t": (a, b)}, "P(2)->P1112")

    gb = (r.var("x") ** 4) if sabotage else quartic_in(r)
    m4 = _map(P2, P6, {"a": a, "b": (gb, b)}, "P(2)->P(6)", "(a:b) -> (a : g b), g = " + ("x^4" if sabotage else "f"))
    r = P6.ring
    i4 = _map(P6, P2, {"a": (quartic_in(r), r.var("a")), "b": r.var("b")}, "P(6)->P(2)")

    m5 = _map(P6, P0, {"a": (hessian_in(r), r.var("a")), "b": r.var("b")}, "P(6)->P(0)",
              "(a:b) -> (H a : b); a is multiplied by the Hessian so the degrees stay consistent")
    r = P0.ring
    i5 = _map(P0, P6, {"a": r.var("a"), "b": (hessian_in(r), r.var("b"))}, "P(0)->P(6)")

    steps = [(m1, i1), (m2, i2), (m3, i3), (m4, i4), (m5, i5)]
    composite = compose_chain([s[0] for s in steps], name="X1->P2xP1")
    inverse = compose_chain([s[1] for s in reversed(steps)], name="P2xP1->X1")
    return TheoremChain(X1, steps, composite, inverse, X1p)


def expected_composite(chain: TheoremChain) -> dict[str, MultiPoly]:
    """(x : y : z ; H : v t f) written in the Cox ring of X1."""
    r = chain.model.space.ring
    return {
        **{n: r.var(n) for n in ACTED},
        "a": hessian_in(r),
        "b": r.var("v") * r.var("t") * quartic_in(r),
    }


# sampling ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PointRecord:
    space: str
    coordinates: tuple[CycloNum, ...]
    normalized: bool

    def to_json(self) -> dict:
        return {"space": self.space, "coordinates": [c.to_json() for c in self.coordinates], "normalized": self.normalized}


def _nonzero(rng: random.Random, bound: int = 4) -> CycloNum:
    while True:
        c = random_cyclo(rng, bound, 2)
        if c:
            return c


def sample_free(space: ToricSpace, rng: random.Random) -> tuple[CycloNum, ...]:
    while True:
        p = tuple(random_cyclo(rng, 4, 2) for _ in space.names)
        if not space.in_irrelevant_locus(p):
            return p


def sample_on_model(model: FibrationModel, rng: random.Random, max_tries: int = 100) -> tuple[PointRecord, int]:
    """A point of the model: x, y, z, t random and the fibre coordinate
    solved from the equation (linear in (u:v) for the prime model; for the
    toric n = 1 model u is drawn and v = -f / (u t^2)).  Returns the point
    and the number of rejected draws."""
    space = model.space
    f = klein_quartic()
    for tries in range(max_tries):
        x, y, z = (random_cyclo(rng, 4, 2) for _ in range(3))
        t = _nonzero(rng)
        fv = f.evaluate({"x": x, "y": y, "z": z})
        if not fv or (not x and not y and not z):
            continue
        if model.model == "prime":
            # alpha(u,v) t^2 + beta(u,v) f = 0 along a random pencil member
            if model.n != 1:
                raise NotImplementedError("prime-model sampling is implemented for n = 1")
            (a0, a1), (b0, b1) = model.alpha[0], model.beta[0]
            # (a0 t^2 + b0 f) u + (a1 t^2 + b1 f) v = 0
            cu, cv = a0 * t * t + b0 * fv, a1 * t * t + b1 * fv
            if not cu and not cv:
                continue
            u, v = -cv, cu
        else:
            if model.n != 1:
                raise NotImplementedError("toric-model sampling is implemented for n = 1")
            u = _nonzero(rng)
            ab = model.alpha[0], model.beta[0]
            # alpha(u,v) beta(u,v) t^2 + f = 0 with alpha = a0 u + a1 v etc: solve for v
            (a0, a1), (b0, b1) = ab
            # (a0 u + a1 v)(b0 u + b1 v) t^2 = -f; require it to be linear in v
            if a1 and b1:
                raise NotImplementedError("toric sampling expects one factor free of v")
            if a1:
                (a0, a1), (b0, b1) = (b0, b1), (a0, a1)
            # a0 u (b0 u + b1 v) t^2 = -f
            if not a0 or not b1:
                continue
            v = (-fv / (a0 * u * t * t) - b0 * u) / b1
        point = dict(zip(("u", "v", "x", "y", "z", "t"), (u, v, x, y, z, t)))
        coords = tuple(point[n] for n in space.names)
        if space.in_irrelevant_locus(coords) or not model.contains(coords):
            continue
        return PointRecord(space.name, space.normalize(coords), True), tries
    raise RuntimeError(f"no valid sample after {max_tries} draws")


# certification --------------------------------------------------------------------

@dataclass
class Certificate:
    kind: str
    passed: bool
    mode: str
    data: dict = field(default_factory=dict)
    counterexample: dict | None = None

    def to_json(self) -> dict:
        out = {"kind": self.kind, "passed": self.passed, "mode": self.mode, "data": self.data}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


def _source_action(phi: RationalMap, m: Matrix3) -> dict[str, MultiPoly]:
    """Components of phi after gamma on the source."""
    return {w: c.linear_substitution(ACTED, m) for w, c in phi.components.items()}


def check_equivariance(
    phi: RationalMap,
    m: Matrix3,
    mode: str = "symbolic",
    samples: int = 50,
    seed: int = 0,
    model: FibrationModel | None = None,
    label: str = "",
) -> Certificate:
    """phi(gamma p) = gamma phi(p), as tuples up to torus equivalence
    (symbolic) or as normalized points on seeded samples (point)."""
    if mode == "symbolic":
        left = _source_action(phi, m)
        right = phi.target.act_components(m, phi.components)
        ok = tuples_equivalent(phi.target, left, right)
        cx = None
        if not ok:
            diff = [w for w in phi.target.names if left[w] != right[w]]
            cx = {"components": {w: {"phi(gamma)": repr(left[w]), "gamma(phi)": repr(right[w])} for w in diff}}
        return Certificate("equivariance", ok, "symbolic", {"map": phi.name, "element": label}, cx)
    if mode != "point":
        raise ValueError(f"unknown mode {mode!r}")
    rng = random.Random(seed)
    checked = resampled = 0
    while checked < samples:
        if model is not None and model.space.name == phi.source.name:
            rec, extra = sample_on_model(model, rng)
            p = rec.coordinates
            resampled += extra
        else:
            p = sample_free(phi.source, rng)
        try:
            lhs = phi(phi.source.act_point(m, p))
            rhs = phi.target.act_point(m, phi(p))
        except UndefinedMapError:
            resampled += 1
            if resampled > 100 * samples:
                raise
            continue
        if not phi.target.same_point(lhs, rhs):
            return Certificate(
                "equivariance", False, "point",
                {"map": phi.name, "element": label, "seed": seed, "checked": checked},
                {
                    "point": [c.to_json() for c in p],
                    "phi(gamma p)": [c.to_json() for c in phi.target.normalize(lhs)],
                    "gamma phi(p)": [c.to_json() for c in phi.target.normalize(rhs)],
                },
            )
        checked += 1
    return Certificate(
        "equivariance", True, "point",
        {"map": phi.name, "element": label, "seed": seed, "samples": samples, "resampled": resampled},
    )


def roundtrip_certify(
    phi: RationalMap,
    psi: RationalMap,
    samples: int = 50,
    seed: int = 0,
    model: FibrationModel | None = None,
    target_model: FibrationModel | None = None,
    max_resample: int = 100,
) -> Certificate:
    """psi(phi(p)) = p on seeded points of the source (on ``model`` when
    given), and the image lies on ``target_model`` when given."""
    rng = random.Random(seed)
    resampled = 0
    for k in range(samples):
        for attempt in range(max_resample + 1):
            if model is not None:
                rec, extra = sample_on_model(model, rng)
                p = rec.coordinates
                resampled += extra
            else:
                p = sample_free(phi.source, rng)
            try:
                q = phi(p)
                back = psi(q)
                break
            except UndefinedMapError:
                resampled += 1
        else:
            raise RuntimeError(f"sample {k}: {max_resample} consecutive draws hit the base locus")
        ok = phi.source.same_point(back, p)
        on_target = target_model is None or target_model.contains(q)
        if not ok or not on_target:
            return Certificate(
                "roundtrip", False, "point",
                {"forward": phi.name, "inverse": psi.name, "seed": seed, "checked": k},
                {
                    "point": [c.to_json() for c in p],
                    "image": [c.to_json() for c in q],
                    "back": [c.to_json() for c in phi.source.normalize(back)],
                    "image_on_target_model": on_target,
                },
            )
    return Certificate(
        "roundtrip", True, "point",
        {"forward": phi.name, "inverse": psi.name, "seed": seed, "samples": samples, "resampled": resampled},
    )
