"""JSON instance and point files (schema version 1).

Rationals are written as integers or ``"p/q"`` strings; a cyclotomic scalar is
either a rational or a list of rational coefficients over 1, z, z^2, ... with
z = exp(2 pi i / N).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema

from .cyclotomic import CycloMatrix, CycloScalar
from .groupmodel import ComponentElement, GroupSpec, validate_spec
from .stabilizer import PointSpec, SamplingPlan

SCHEMA_VERSION = 1

_RATIONAL = {"oneOf": [{"type": "integer"}, {"type": "string", "pattern": r"^\s*-?\d+\s*(/\s*\d+\s*)?$"}]}
_CYCLO = {"oneOf": [_RATIONAL, {"type": "array", "items": _RATIONAL}]}
_INT_VEC = {"type": "array", "items": {"type": "integer"}}

INSTANCE_SCHEMA: dict = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "orbitspace instance",
    "type": "object",
    "required": ["schema", "torus_rank", "cyclotomic_order"],
    "additionalProperties": False,
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "name": {"type": "string"},
        "description": {"type": "string"},
        "torus_rank": {"type": "integer", "minimum": 0},
        "cyclotomic_order": {"type": "integer", "minimum": 1},
        "weights": {
            "type": "array",
            "items": {"oneOf": [
                _INT_VEC,
                {"type": "object", "required": ["vector"], "additionalProperties": False,
                 "properties": {"vector": _INT_VEC, "multiplicity": {"type": "integer", "minimum": 1}}},
            ]},
        },
        "zero_block_dim": {"type": "integer", "minimum": 0},
        "generators": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "properties": {
                    "ad": {"type": "array", "items": _INT_VEC},
                    "line_perm": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                    "scalars": {"type": "array", "items": {"type": "integer"}},
                    "conj": {"type": "array", "items": {"type": "boolean"}},
                    "zero_block": {"type": "array", "items": {"type": "array", "items": _CYCLO}},
                },
            },
        },
        "sampling": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"count": {"type": "integer", "minimum": 0}, "seed": {"type": "integer"}},
        },
    },
}

POINT_SCHEMA: dict = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "orbitspace point",
    "type": "object",
    "required": ["lines"],
    "additionalProperties": False,
    "properties": {
        "lines": {
            "type": "array",
            "items": {"oneOf": [
                {"type": "null"},
                {"type": "object", "required": ["magnitude"], "additionalProperties": False,
                 "properties": {"magnitude": _RATIONAL, "phase": _RATIONAL, "exponent": {"type": "integer"}}},
            ]},
        },
        "zero_block": {"type": "array", "items": _CYCLO},
    },
}


class LoadError(Exception):
    """A file could not be turned into a model object; ``kind`` is parse, schema or validation."""

    def __init__(self, kind: str, pointer: str, message: str):
        self.kind = kind
        self.pointer = pointer
        self.message = message
        super().__init__(f"{kind} error at {pointer or '/'}: {message}")

    def to_dict(self) -> dict:
        return {"error": self.kind, "pointer": self.pointer or "/", "message": self.message}


@dataclass(frozen=True)
class Instance:
    spec: GroupSpec
    sampling: SamplingPlan | None
    name: str = ""


def rational(x) -> Fraction:
    return Fraction(x.replace(" ", "")) if isinstance(x, str) else Fraction(x)


def rational_str(x) -> str | int:
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def cyclo(order: int, x) -> CycloScalar:
    if isinstance(x, list):
        return CycloScalar.make(order, [rational(c) for c in x])
    return CycloScalar.rational(order, rational(x))


def cyclo_json(s: CycloScalar):
    coeffs = list(s.coeffs)
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) <= 1:
        return rational_str(coeffs[0] if coeffs else 0)
    return [rational_str(c) for c in coeffs]


def _pointer(path) -> str:
    return "".join(f"/{p}" for p in path)


def _read_json(source: str | Path | dict) -> Any:
    if isinstance(source, dict):
        return source
    text = Path(source).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise LoadError("parse", "", f"line {e.lineno} column {e.colno}: {e.msg}") from None


def _check(schema: dict, data: Any) -> None:
    errors = sorted(jsonschema.Draft202012Validator(schema).iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        raise LoadError("schema", _pointer(e.absolute_path), e.message)


def spec_from_json(data: dict) -> Instance:
    _check(INSTANCE_SCHEMA, data)
    m, N = data["torus_rank"], data["cyclotomic_order"]
    lines, origin = [], []
    for i, w in enumerate(data.get("weights", [])):
        vec, k = (w["vector"], w.get("multiplicity", 1)) if isinstance(w, dict) else (w, 1)
        lines.extend([tuple(vec)] * k)
        origin.extend([i] * k)
    d = data.get("zero_block_dim", 0)
    base = GroupSpec(m, N, tuple(lines), d)
    n = len(lines)
    gens = []
    for gi, g in enumerate(data.get("generators", [])):
        for key, size in (("line_perm", n), ("scalars", n), ("conj", n)):
            if key in g and len(g[key]) != size:
                raise LoadError("validation", f"/generators/{gi}/{key}", f"expected {size} entries, got {len(g[key])}")
        ad = g.get("ad", [[int(i == j) for j in range(m)] for i in range(m)])
        if len(ad) != m or any(len(r) != m for r in ad):
            raise LoadError("validation", f"/generators/{gi}/ad", f"expected a {m}x{m} matrix")
        Z = g.get("zero_block")
        if Z is not None:
            if len(Z) != d or any(len(r) != d for r in Z):
                raise LoadError("validation", f"/generators/{gi}/zero_block", f"expected a {d}x{d} matrix")
            Z = CycloMatrix.from_rows(N, [[cyclo(N, x) for x in r] for r in Z], cols=d)
        gens.append(ComponentElement.make(base, ad, g.get("line_perm"), g.get("scalars"), g.get("conj"), Z))
    spec = base.with_generators(gens)
    report = validate_spec(spec)
    if not report.ok:
        f = report.failures[0]
        raise LoadError("validation", _translate(f.path, origin), f.message)
    plan = None
    if "sampling" in data:
        s = data["sampling"]
        plan = SamplingPlan(count=s.get("count", SamplingPlan.count), seed=s.get("seed", SamplingPlan.seed))
    return Instance(spec, plan, data.get("name", ""))


def _translate(path: str, origin: list[int]) -> str:
    """Map model paths (one entry per line) back to positions in the file."""
    parts = path.split("/")
    if len(parts) >= 2 and parts[1] == "lines":
        if len(parts) >= 3 and parts[2].isdigit():
            return f"/weights/{origin[int(parts[2])]}"
        return "/weights"
    return path


def load_instance(source: str | Path | dict) -> Instance:
    return spec_from_json(_read_json(source))


def spec_to_json(spec: GroupSpec, sampling: SamplingPlan | None = None, name: str = "") -> dict:
    out: dict = {"schema": SCHEMA_VERSION}
    if name:
        out["name"] = name
    out.update(torus_rank=spec.torus_rank, cyclotomic_order=spec.cyclotomic_order,
               weights=[list(w) for w in spec.lines], zero_block_dim=spec.zero_block_dim)
    gens = []
    for g in spec.generators:
        item = {"ad": g.ad.tolist(), "line_perm": list(g.line_perm), "scalars": list(g.line_scalar),
                "conj": list(g.line_conj)}
        if spec.zero_block_dim:
            item["zero_block"] = [[cyclo_json(x) for x in r] for r in g.zero_block.tolist()]
        gens.append(item)
    out["generators"] = gens
    if sampling is not None:
        out["sampling"] = {"count": sampling.count, "seed": sampling.seed}
    return out


def load_point(source: str | Path | dict, spec: GroupSpec) -> PointSpec:
    data = _read_json(source)
    _check(POINT_SCHEMA, data)
    if len(data["lines"]) != spec.n_lines:
        raise LoadError("validation", "/lines", f"expected {spec.n_lines} entries, got {len(data['lines'])}")
    N = spec.cyclotomic_order
    lines = []
    for j, z in enumerate(data["lines"]):
        if z is None:
            lines.append(None)
            continue
        r = rational(z["magnitude"])
        if r <= 0:
            raise LoadError("validation", f"/lines/{j}/magnitude", "must be positive")
        if "phase" in z and "exponent" in z:
            raise LoadError("validation", f"/lines/{j}", "give either phase or exponent, not both")
        phase = Fraction(z["exponent"], N) if "exponent" in z else rational(z.get("phase", 0))
        lines.append((r, phase))
    zero = None
    if "zero_block" in data:
        if len(data["zero_block"]) != spec.zero_block_dim:
            raise LoadError("validation", "/zero_block", f"expected {spec.zero_block_dim} coordinates")
        zero = tuple(cyclo(N, x) for x in data["zero_block"])
    return PointSpec(tuple(lines), zero)


def curated_names() -> list[str]:
    return sorted(p.name[:-5] for p in resources.files("orbitspace.instances").iterdir() if p.name.endswith(".json"))


def curated_path(name: str) -> Path:
    return Path(str(resources.files("orbitspace.instances").joinpath(f"{name}.json")))
