"""Report records, the anchor table and deterministic JSON/markdown output."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Any

from . import __version__
from .cyclo import CycloNum
from .intmat import IntMatrix
from .poly import MultiPoly

SCHEMA_VERSION = "1.0"
STATUSES = ("verified", "computed", "failed", "skipped")
PROVENANCE = ("verified-against-paper", "computed-no-paper-value")
SECTIONS = ("input", "group", "invariants", "bitangents", "picard", "cohomology", "fibration", "chain")

# Fixed anchor table.  Each id names one source claim; the description is
# ours.  Entries without a published value use a "derived." id.
ANCHORS: dict[str, str] = {
    "group.order-168": "the simple group of order 168 acting linearly on the plane",
    "invariants.quartic": "the quartic x^3y + y^3z + z^3x is fixed by the whole group",
    "invariants.hessian-sextic": "the Hessian of the quartic is an invariant sextic",
    "picard.double-cover": "the double plane branched along the quartic and its Picard lattice",
    "cohomology.h1-plane": "H1 of the full group on Pic of the plane vanishes",
    "cohomology.h1-dp2": "H1 of the full group on Pic of the double plane vanishes",
    "cohomology.collection": "the collection of H1 over all subgroups is a stable birational invariant",
    "cohomology.witness": "an order-2 subgroup fixing a line separates the two collections",
    "cohomology.verdict": "the two embeddings are not stably conjugate",
    "fibration.conditions": "alpha, beta of equal degree n with disjoint zero sets",
    "fibration.degenerate": "for n = 0 the threefold is the product of the double plane and a line",
    "fibration.singular": "the toric model has 2n singular points",
    "fibration.fibres": "fibre types over the zeros of beta, the zeros of alpha and elsewhere",
    "fibration.toric-model": "the toric model is a hypersurface alpha beta t^2 + f = 0",
    "chain.maps": "the chain of maps ending in multiplication by the Hessian",
    "chain.equivariance": "the composite is equivariant",
    "chain.roundtrip": "the composite is birational with the assembled inverse",
    "derived.group-classes": "conjugacy classes read off the closure",
    "derived.subgroups": "subgroup classes read off the closure",
    "derived.molien": "Molien series coefficients cross-checked by Reynolds ranks",
    "derived.bitangents": "28 certified bitangent lines",
    "derived.picard-ranks": "ranks of invariant sublattices",
    "derived.picard-labelling": "pair labelling of the 56 classes is compatible with S8",
    "derived.cohomology-oracle": "Fox-calculus H1 agrees with the cyclic formula",
    "derived.smoothness": "the quartic is smooth",
    "derived.input": "parsed input data",
}


class ReportError(ValueError):
    pass


def jsonable(obj: Any) -> Any:
    """Convert to plain JSON data.  Floats are refused."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, float):
        raise ReportError("floating-point value in report data")
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, (CycloNum, IntMatrix, MultiPoly)):
        return obj.to_json()
    if hasattr(obj, "to_json"):
        return jsonable(obj.to_json())
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(jsonable(v) for v in obj)
    raise ReportError(f"cannot serialise {type(obj).__name__}")


@dataclass
class Entry:
    claim: str
    status: str
    anchor: str
    data: dict = field(default_factory=dict)
    counterexample: dict | None = None
    message: str = ""

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ReportError(f"bad status {self.status!r}")
        if self.anchor not in ANCHORS:
            raise ReportError(f"unknown anchor {self.anchor!r}")
        if self.status == "failed" and self.counterexample is None and not self.message:
            raise ReportError(f"failed entry {self.claim} needs a counterexample or message")

    @property
    def provenance(self) -> str:
        return PROVENANCE[1] if self.anchor.startswith("derived.") else PROVENANCE[0]

    def to_json(self) -> dict:
        out = {
            "claim": self.claim,
            "status": self.status,
            "anchor": self.anchor,
            "provenance": self.provenance,
            "data": jsonable(self.data),
        }
        if self.counterexample is not None:
            out["counterexample"] = jsonable(self.counterexample)
        if self.message:
            out["message"] = self.message
        return out


@dataclass
class RunConfig:
    command: str
    n: int | None = None
    dsl: str | None = None
    samples: int = 50
    seed: int | None = None
    output: str = "markdown"     # or "json"
    model: str = "toric"
    certify: bool = False
    out: str | None = None

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "n": self.n,
            "dsl": self.dsl,
            "samples": self.samples,
            "seed": self.seed,
            "output": self.output,
            "model": self.model,
            "certify": self.certify,
        }


@dataclass
class Report:
    config: RunConfig
    sections: dict[str, list[Entry]] = field(default_factory=dict)
    version: str = __version__

    def add(self, section: str, entry: Entry) -> Entry:
        if section not in SECTIONS:
            raise ReportError(f"unknown section {section!r}")
        self.sections.setdefault(section, []).append(entry)
        return entry

    def entries(self):
        for name in SECTIONS:
            for e in self.sections.get(name, []):
                yield name, e

    @property
    def failed(self) -> list[Entry]:
        return [e for _, e in self.entries() if e.status == "failed"]

    @property
    def exit_code(self) -> int:
        return 1 if self.failed else 0

    def summary(self) -> dict[str, int]:
        counts = {s: 0 for s in STATUSES}
        for _, e in self.entries():
            counts[e.status] += 1
        return counts

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "tool": "kleinbench",
            "version": self.version,
            "config": self.config.to_json(),
            "summary": self.summary(),
            "sections": [
                {"name": name, "entries": [e.to_json() for e in self.sections[name]]}
                for name in SECTIONS
                if name in self.sections
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False) + "\n"

    def to_markdown(self) -> str:
        lines = [f"# kleinbench report (version {self.version}, schema {SCHEMA_VERSION})", ""]
        cfg = self.config.to_json()
        lines.append("Config: " + ", ".join(f"{k}={cfg[k]}" for k in cfg if cfg[k] is not None))
        s = self.summary()
        lines.append("Summary: " + ", ".join(f"{s[k]} {k}" for k in STATUSES))
        for name in SECTIONS:
            if name not in self.sections:
                continue
            lines += ["", f"## {name}", "", "| claim | status | anchor | detail |", "|---|---|---|---|"]
            for e in self.sections[name]:
                lines.append(f"| {e.claim} | {e.status} | {e.anchor} | {_detail(e)} |")
            tables = [e.data["table"] for e in self.sections[name] if isinstance(e.data.get("table"), str)]
            for t in tables:
                lines += ["", t]
        return "\n".join(lines) + "\n"

    def render(self) -> str:
        return self.dumps() if self.config.output == "json" else self.to_markdown()


def _detail(e: Entry) -> str:
    if e.message:
        return e.message.replace("|", "/")
    short = {k: v for k, v in e.data.items() if isinstance(v, (int, str, bool)) and k != "table" and len(str(v)) < 60}
    return "; ".join(f"{k}={v}" for k, v in short.items()).replace("|", "/")


def load_schema() -> dict:
    text = resources.files("kleinbench").joinpath("report.schema.json").read_text(encoding="utf-8")
    return json.loads(text)
