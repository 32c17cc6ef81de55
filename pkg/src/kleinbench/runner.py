"""Dispatch a RunConfig to the computational modules and collect a Report."""

from __future__ import annotations

import traceback
from functools import cached_property
from typing import Callable

from .bitangents import find_bitangents
from .cohomology import (
    NOT_CONJUGATE,
    cached_presentation,
    cocycle_generators,
    compare_collections,
    is_coboundary,
    is_cocycle,
    markdown_table,
    oracle_agreement,
    wp_collection,
)
from .cyclo import CycloNum
from .dsl import DSLError, format_form, parse_dsl
from .fibrations import (
    ModelError,
    build_theorem_chain,
    check_equivariance,
    classify_fibre,
    expected_composite,
    form_value,
    quartic_smoothness_certificate,
    root_of,
    roundtrip_certify,
    singular_points,
    validate_model,
)
from .group import GroupTable, conjugacy_classes, klein_group
from .invariants import hessian, is_invariant, klein_hessian, klein_quartic, molien_dimension, reynolds_rank
from .picard import (
    LabelingError,
    build_g_action,
    check_module,
    classes_saturate,
    fixed_sublattice,
    trivial_module,
    verify_s8_compatibility,
)
from .report import Entry, Report, RunConfig
from .subgroups import subgroups_up_to_conjugacy
from .toric import tuples_equivalent

COMMANDS = ("group", "invariants", "bitangents", "picard", "cohomology", "fibration", "chain", "report")
SAMPLING_COMMANDS = ("chain", "report")
GENERATOR_NAMES = ("S", "T", "R")
# H1 is a conjugation invariant, so one entry per class carries the same data
WP_INDEXING = "one entry per conjugacy class of subgroups (15 classes, 179 subgroups)"
MOLIEN_EXPECTED = [1, 0, 0, 0, 1, 0, 1]


class ConfigError(ValueError):
    """Bad command line or input data; maps to exit code 2."""


def default_forms(n: int) -> tuple[list, list]:
    """alpha = u (u - v) ... (u - (n-1) v), beta = v (v + u) ... (v + (n-1) u).

    The zeros of alpha are (k : 1), k >= 0, those of beta are (1 : -k): disjoint."""
    alpha = [(1, -k) for k in range(n)]
    beta = [(k, 1) for k in range(n)]
    return alpha, beta


def default_dsl(n: int) -> str:
    a, b = default_forms(n)
    lhs = "".join(f"({format_form((CycloNum.from_int(x), CycloNum.from_int(y)))})" for x, y in a) or "1"
    rhs = "".join(f"({format_form((CycloNum.from_int(x), CycloNum.from_int(y)))})" for x, y in b) or "1"
    return f"alpha = {lhs}; beta = {rhs};"


def resolve_fibration_input(config: RunConfig) -> dict:
    """Parse the DSL text (or build the default forms) and reconcile with --n."""
    text = config.dsl if config.dsl is not None else default_dsl(1 if config.n is None else config.n)
    try:
        parsed = parse_dsl(text)
    except DSLError as exc:
        raise ConfigError(f"input: {exc}") from exc
    if config.n is not None and parsed["n"] != config.n:
        raise ConfigError(f"--n {config.n} does not match the degree {parsed['n']} of the input forms")
    parsed["text"] = text
    return parsed


def validate_config(config: RunConfig) -> None:
    if config.command not in COMMANDS:
        raise ConfigError(f"unknown command {config.command!r}")
    if config.samples < 0:
        raise ConfigError("--samples must be non-negative")
    if config.n is not None and config.n < 0:
        raise ConfigError("--n must be non-negative")
    if config.model not in ("prime", "toric"):
        raise ConfigError(f"unknown model {config.model!r}")
    sampling = config.command == "report" or (config.command == "chain" and config.certify)
    if sampling and config.seed is None:
        raise ConfigError(f"{config.command} draws random samples: --seed is required")


class Context:
    """Lazily built shared objects; one per run."""

    @cached_property
    def group(self) -> GroupTable:
        return klein_group()

    @cached_property
    def inventory(self):
        return subgroups_up_to_conjugacy(self.group)

    @cached_property
    def dp2(self):
        return build_g_action(self.group)

    @cached_property
    def p2(self):
        return trivial_module(self.group)

    def generator(self, name: str):
        return self.group.elements[self.group.generator_indices[GENERATOR_NAMES.index(name)]]


def _guard(report: Report, section: str, claim: str, anchor: str, fn: Callable[[], None]) -> None:
    try:
        fn()
    except Exception as exc:  # noqa: BLE001 - recorded, never swallowed
        report.add(
            section,
            Entry(
                claim, "failed", anchor,
                {"error": type(exc).__name__},
                counterexample={"exception": str(exc), "where": traceback.format_exception_only(type(exc), exc)[-1].strip()},
            ),
        )


def _check(ok: bool) -> str:
    return "verified" if ok else "failed"


# sections -----------------------------------------------------------------------

def section_group(report: Report, ctx: Context) -> None:
    def body():
        g = ctx.group
        report.add("group", Entry("group.order", _check(len(g) == 168), "group.order-168",
                                  {"order": len(g), "generators": list(GENERATOR_NAMES)},
                                  None if len(g) == 168 else {"order": len(g)}))
        classes = conjugacy_classes(g)
        sizes = sorted(c.size for c in classes)
        orders = sorted(c.order for c in classes)
        ok = sizes == sorted([1, 21, 56, 42, 24, 24]) and orders == [1, 2, 3, 4, 7, 7]
        report.add("group", Entry(
            "group.classes", _check(ok), "derived.group-classes",
            {
                "count": len(classes),
                "classes": [{"size": c.size, "order": c.order, "trace": c.trace} for c in classes],
            },
            None if ok else {"sizes": sizes, "orders": orders},
        ))
        inv = ctx.inventory
        report.add("group", Entry(
            "group.subgroups", "computed", "derived.subgroups",
            {
                "classes": len(inv),
                "table": "\n".join(
                    ["| class | structure | order | conjugates |", "|---|---|---|---|"]
                    + [f"| {s.class_id} | {s.structure} | {s.order} | {s.class_size} |" for s in inv]
                ),
                "inventory": [{"class_id": s.class_id, "structure": s.structure, "order": s.order,
                               "conjugates": s.class_size} for s in inv],
            },
        ))

    _guard(report, "group", "group.order", "group.order-168", body)


def section_invariants(report: Report, ctx: Context) -> None:
    def body():
        g = ctx.group
        f = klein_quartic()
        ok = is_invariant(g, f)
        report.add("invariants", Entry("invariants.quartic", _check(ok), "invariants.quartic",
                                       {"polynomial": f, "elements_checked": len(g)},
                                       None if ok else {"polynomial": f}))
        molien = [molien_dimension(g, d) for d in range(7)]
        ranks = [reynolds_rank(g, d) for d in range(7)]
        ok = molien == ranks == MOLIEN_EXPECTED
        report.add("invariants", Entry("invariants.molien", _check(ok), "derived.molien",
                                       {"degrees": list(range(7)), "molien": molien, "reynolds_ranks": ranks},
                                       None if ok else {"molien": molien, "reynolds_ranks": ranks}))
        h = klein_hessian()
        ok = h.total_degree() == 6 and is_invariant(g, h) and h == hessian(f)
        report.add("invariants", Entry("invariants.hessian", _check(ok), "invariants.hessian-sextic",
                                       {"degree": h.total_degree(), "polynomial": h},
                                       None if ok else {"polynomial": h}))

    _guard(report, "invariants", "invariants.quartic", "invariants.quartic", body)


def section_bitangents(report: Report, ctx: Context) -> None:
    def body():
        search = find_bitangents(ctx.group)
        f = klein_quartic()
        bad = [c.line for c in search.certificates if not c.verify(f)]
        ok = search.complete and len(search.certificates) == 28 and not bad
        report.add("bitangents", Entry(
            "bitangents.certified", _check(ok), "derived.bitangents",
            {
                "count": len(search.certificates),
                "closed_under_group": search.complete,
                "orbit_sizes": [len(o) for o in search.orbits],
                "candidates_tested": search.candidates_tested,
                "strategy": search.strategy,
                "certificates": [c.to_json() for c in search.certificates],
            },
            None if ok else {"unverified_lines": bad, "count": len(search.certificates)},
        ))

    _guard(report, "bitangents", "bitangents.certified", "derived.bitangents", body)


def section_picard(report: Report, ctx: Context) -> None:
    def body():
        compat = verify_s8_compatibility("standard", "oriented")
        report.add("picard", Entry("picard.labelling", "verified", "derived.picard-labelling", compat.to_json()))
        for orientation, action in (("swapped-octad", "oriented"), ("standard", "ordered")):
            try:
                verify_s8_compatibility(orientation, action)
            except LabelingError as exc:
                report.add("picard", Entry(
                    f"picard.control.{orientation}.{action}", "verified", "derived.picard-labelling",
                    {"rejected": True, "reason": str(exc)},
                ))
            else:
                report.add("picard", Entry(
                    f"picard.control.{orientation}.{action}", "failed", "derived.picard-labelling",
                    {"rejected": False}, {"orientation": orientation, "action": action},
                ))
        g, m = ctx.group, ctx.dp2
        check_module(g, m, samples=None)
        traces = sorted({(g.element_orders[i], m.action[i].trace()) for i in range(len(g))})
        report.add("picard", Entry(
            "picard.module", "verified", "picard.double-cover",
            {
                "rank": m.rank,
                "canonical_class": list(m.canonical_class),
                "exceptional_classes": len(m.classes),
                "classes_generate_lattice": classes_saturate(m),
                "homomorphism_pairs_checked": len(g) ** 2,
                "traces_by_order": [{"order": o, "trace": t} for o, t in traces],
                "convention": m.convention,
            },
        ))
        inv = {s.class_id: s for s in ctx.inventory}
        rank_g = fixed_sublattice(inv["168A"], m).rank
        rank_2 = fixed_sublattice(inv["2A"], m).rank
        ok = rank_g == 1 and rank_2 == 4
        report.add("picard", Entry("picard.invariant-ranks", _check(ok), "derived.picard-ranks",
                                   {"rank_G": rank_g, "rank_C2": rank_2},
                                   None if ok else {"rank_G": rank_g, "rank_C2": rank_2}))

    _guard(report, "picard", "picard.module", "picard.double-cover", body)


def section_cohomology(report: Report, ctx: Context) -> None:
    def body():
        g = ctx.group
        inv = ctx.inventory
        full = next(s for s in inv if s.order == len(g))
        a = wp_collection(g, ctx.p2, inv)
        b = wp_collection(g, ctx.dp2, inv)
        h_p2 = a.entries[full.class_id]
        report.add("cohomology", Entry("cohomology.h1-G-P2", _check(h_p2.is_trivial), "cohomology.h1-plane",
                                       {"group": h_p2.label(), "expected": "0"},
                                       None if h_p2.is_trivial else {"computed": h_p2.label()}))
        h_dp2 = b.entries[full.class_id]
        if h_dp2.is_trivial:
            report.add("cohomology", Entry("cohomology.h1-G-dP2", "verified", "cohomology.h1-dp2",
                                           {"group": "0", "expected": "0"}))
        else:
            pres = cached_presentation(g, full)
            cocycles = cocycle_generators(g, full, ctx.dp2, pres)
            witness = cocycles[0]
            report.add("cohomology", Entry(
                "cohomology.h1-G-dP2", "failed", "cohomology.h1-dp2",
                {"group": h_dp2.label(), "expected": "0"},
                counterexample={
                    "computed": h_dp2.label(),
                    "cocycle_on_generators": {str(k): list(v) for k, v in witness.items()},
                    "is_cocycle": is_cocycle(g, ctx.dp2, pres, witness),
                    "is_coboundary": is_coboundary(ctx.dp2, witness),
                    "twice_is_coboundary": is_coboundary(
                        ctx.dp2, {k: tuple(2 * x for x in v) for k, v in witness.items()}
                    ),
                },
                message=f"H1(G, Pic dP2) = {h_dp2.label()}: an explicit non-trivial cocycle is attached",
            ))
        all_trivial = all(r.is_trivial for r in a.entries.values())
        report.add("cohomology", Entry("cohomology.collection-P2", _check(all_trivial), "cohomology.collection",
                                       {**a.to_json(), "indexing": WP_INDEXING},
                                       None if all_trivial else a.to_json()))
        report.add("cohomology", Entry("cohomology.collection-dP2", "computed", "cohomology.collection",
                                       {**b.to_json(), "indexing": WP_INDEXING}))
        order2 = [s.class_id for s in inv if s.order == 2]
        ok = bool(order2) and all(not b.entries[k].is_trivial for k in order2)
        report.add("cohomology", Entry(
            "cohomology.order-2-witness", _check(ok), "cohomology.witness",
            {k: b.entries[k].label() for k in order2}, None if ok else {"trivial": order2},
        ))
        verdict = compare_collections(a, b)
        ok = verdict.text == NOT_CONJUGATE and bool(set(order2) & set(verdict.witnesses))
        structures = {s.class_id: s.structure for s in inv}
        report.add("cohomology", Entry(
            "cohomology.verdict", _check(ok), "cohomology.verdict",
            {**verdict.to_json(), "table": markdown_table(a, b, structures)},
            None if ok else verdict.to_json(),
        ))
        agree = {}
        for name, m in (("P2", ctx.p2), ("dP2", ctx.dp2)):
            for k, v in oracle_agreement(g, m, inv).items():
                agree[f"{name}:{k}"] = v
        ok = all(agree.values())
        report.add("cohomology", Entry("cohomology.oracle", _check(ok), "derived.cohomology-oracle",
                                       {"cyclic_classes_checked": agree},
                                       None if ok else {k: v for k, v in agree.items() if not v}))

    _guard(report, "cohomology", "cohomology.collection", "cohomology.collection", body)


def _generic_point(model) -> tuple[CycloNum, CycloNum]:
    for k in range(1, 1000):
        p = (CycloNum.from_int(k), CycloNum.from_int(2 * k + 1))
        if form_value(model.alpha, p) and form_value(model.beta, p):
            return p
    raise RuntimeError("no generic base point found")


def section_fibration(report: Report, ctx: Context, parsed: dict, model_name: str) -> None:
    n = parsed["n"]
    report.add("input", Entry("input.fibration", "computed", "derived.input", {
        "dsl": parsed["text"],
        "n": n,
        "alpha": [format_form(f) for f in parsed["alpha"]],
        "beta": [format_form(f) for f in parsed["beta"]],
    }))

    def body():
        try:
            prime = validate_model(n, parsed["alpha"], parsed["beta"], "prime", ctx.group)
            toric = validate_model(n, parsed["alpha"], parsed["beta"], "toric", ctx.group)
        except ModelError as exc:
            report.add("fibration", Entry("fibration.conditions", "failed", "fibration.conditions",
                                          {"n": n}, {"rejected": str(exc)}, message=str(exc)))
            return
        chosen = prime if model_name == "prime" else toric
        report.add("fibration", Entry("fibration.conditions", "verified", "fibration.conditions", {
            "n": n, "resultant": prime.resultant, "model": model_name,
            "space": chosen.space.name, "equation": chosen.equation,
        }))
        report.add("fibration", Entry("fibration.toric-model", "verified", "fibration.toric-model", {
            "space": toric.space.name, "irrelevant": [list(c) for c in toric.space.irrelevant],
            "equation": toric.equation,
        }))
        sing = singular_points(toric)
        ok = len(sing) == 2 * n
        report.add("fibration", Entry("fibration.singular-points", _check(ok), "fibration.singular",
                                      {"count": len(sing), "expected": 2 * n, "points": [s.to_json() for s in sing]},
                                      None if ok else {"count": len(sing)}))
        if n == 0:
            ok = prime.is_degenerate_product() and not sing
            report.add("fibration", Entry("fibration.degenerate-product", _check(ok), "fibration.degenerate",
                                          {"n": 0, "equation": prime.equation},
                                          None if ok else {"equation": prime.equation}))
        cert = quartic_smoothness_certificate()
        report.add("fibration", Entry("fibration.quartic-smooth", _check(cert["smooth"]), "derived.smoothness",
                                      cert, None if cert["smooth"] else cert))
        fibres = []
        mismatches = []
        for forms, expected in ((prime.beta, "nonreduced_plane"), (prime.alpha, "cone")):
            for form in forms:
                c = classify_fibre(prime, root_of(form))
                fibres.append({"expected": expected, **c.to_json()})
                if c.kind != expected:
                    mismatches.append(fibres[-1])
        c = classify_fibre(prime, _generic_point(prime))
        fibres.append({"expected": "smooth_dp2", **c.to_json()})
        if c.kind != "smooth_dp2":
            mismatches.append(fibres[-1])
        report.add("fibration", Entry("fibration.fibres", _check(not mismatches), "fibration.fibres",
                                      {"fibres": fibres}, {"mismatches": mismatches} if mismatches else None))

    _guard(report, "fibration", "fibration.conditions", "fibration.conditions", body)


def section_chain(report: Report, ctx: Context, certify: bool, samples: int, seed: int | None) -> None:
    def body():
        chain = build_theorem_chain()
        ok = tuples_equivalent(chain.composite.target, chain.composite.components, expected_composite(chain))
        report.add("chain", Entry("chain.assembled", _check(ok), "chain.maps", {
            "steps": [{"forward": f.name, "inverse": i.name, "note": f.note} for f, i in chain.steps],
            "composite": chain.composite.describe(),
            "matches_expected": ok,
        }, None if ok else {"composite": chain.composite.describe()}))
        for name in GENERATOR_NAMES:
            c = check_equivariance(chain.composite, ctx.generator(name), "symbolic", label=name)
            report.add("chain", Entry(f"chain.equivariance.{name}.symbolic", _check(c.passed),
                                      "chain.equivariance", c.data, c.counterexample))
        bad = build_theorem_chain(sabotage=True)
        c = check_equivariance(bad.composite, ctx.generator("R"), "symbolic", label="R")
        report.add("chain", Entry("chain.control.sabotage", _check(not c.passed), "chain.equivariance", {
            "map": bad.steps[3][0].note, "detected": not c.passed,
            "counterexample": c.counterexample or {},
        }, None if not c.passed else {"sabotaged map passed": True}))
        if not certify:
            for claim in ("chain.equivariance.R.point", "chain.roundtrip"):
                report.add("chain", Entry(claim, "skipped", "chain.roundtrip" if "roundtrip" in claim
                                          else "chain.equivariance", message="sampled certificates need --certify"))
            return
        c = check_equivariance(chain.composite, ctx.generator("R"), "point", samples, seed, chain.model, "R")
        report.add("chain", Entry("chain.equivariance.R.point", _check(c.passed), "chain.equivariance",
                                  c.data, c.counterexample))
        c = roundtrip_certify(chain.composite, chain.inverse, samples, seed, chain.model)
        report.add("chain", Entry("chain.roundtrip", _check(c.passed), "chain.roundtrip", c.data, c.counterexample))
        c = check_equivariance(bad.composite, ctx.generator("R"), "point", samples, seed, bad.model, "R")
        report.add("chain", Entry("chain.control.sabotage.point", _check(not c.passed), "chain.equivariance", {
            "detected": not c.passed, "counterexample": c.counterexample or {},
        }, None if not c.passed else {"sabotaged map passed": True}))

    _guard(report, "chain", "chain.assembled", "chain.maps", body)


PIPELINE = ("group", "invariants", "bitangents", "picard", "cohomology", "fibration", "chain")


def run(config: RunConfig) -> Report:
    """Raises ConfigError for bad configurations; module errors become failed entries."""
    validate_config(config)
    report = Report(config)
    ctx = Context()
    todo = PIPELINE if config.command == "report" else (config.command,)
    parsed = resolve_fibration_input(config) if "fibration" in todo else None
    for name in todo:
        if name == "group":
            section_group(report, ctx)
        elif name == "invariants":
            section_invariants(report, ctx)
        elif name == "bitangents":
            section_bitangents(report, ctx)
        elif name == "picard":
            section_picard(report, ctx)
        elif name == "cohomology":
            section_cohomology(report, ctx)
        elif name == "fibration":
            section_fibration(report, ctx, parsed, config.model)
        elif name == "chain":
            certify = config.certify or config.command == "report"
            section_chain(report, ctx, certify, config.samples, config.seed)
    return report
