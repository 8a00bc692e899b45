"""JSON encoding of field elements, cubic forms, models, certificates and verdicts.

Numbers are written as strings (``"3"``, ``"-1/2"``); elements of Q(i) and
Q(omega) as ``{"a": "p/q", "b": "r/s", "zeta": "i" | "omega"}``.  Tensor and
variable indices are 1-based.  Documents are schema-checked before they are
decoded, and :func:`dumps` of a decoded document reproduces it byte for byte.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Any

import jsonschema

from . import __version__
from .cubic import CubicForm
from .field import Field, FieldElem, widen
from .obstruct import (
    BranchStep,
    RankCertificate,
    ResolutionModel,
    SquareStep,
    Verdict,
    VerdictStatus,
)
from .quotient import ZETA_LABELS, DiagonalAction

_ZETA_FIELD = {"one": Field.Q, "i": Field.Q_I, "omega": Field.Q_OMEGA}
_RATIONAL = r"^-?[0-9]+(/[0-9]+)?$"

RATIONAL_SCHEMA = {"type": "string", "pattern": _RATIONAL}
ELEMENT_SCHEMA = {
    "oneOf": [
        RATIONAL_SCHEMA,
        {"type": "integer"},
        {
            "type": "object",
            "properties": {
                "a": RATIONAL_SCHEMA,
                "b": RATIONAL_SCHEMA,
                "zeta": {"enum": ["one", "i", "omega"]},
            },
            "required": ["a", "b", "zeta"],
            "additionalProperties": False,
        },
    ]
}
INDEX_TRIPLE = {
    "type": "array",
    "items": {"type": "integer", "minimum": 1},
    "minItems": 3,
    "maxItems": 3,
}
FORM_SCHEMA = {
    "type": "object",
    "properties": {
        "m": {"type": "integer", "minimum": 0},
        "field": {"enum": [f.value for f in Field]},
        "entries": {
            "type": "array",
            "items": {
                "type": "array",
                "prefixItems": [INDEX_TRIPLE, ELEMENT_SCHEMA],
                "minItems": 2,
                "maxItems": 2,
            },
        },
    },
    "required": ["m", "field", "entries"],
    "additionalProperties": False,
}
INTEGER_SCHEMA = {"oneOf": [{"type": "integer"}, {"type": "string", "pattern": r"^-?[0-9]+$"}]}
MODEL_SCHEMA = {
    "type": "object",
    "properties": {
        "form": FORM_SCHEMA,
        "k": {"type": "integer", "minimum": 1},
        "a": {"type": "array", "items": INTEGER_SCHEMA, "minItems": 1},
    },
    "required": ["form", "k", "a"],
    "additionalProperties": False,
}
ACTION_SCHEMA = {
    "type": "object",
    "properties": {
        "zeta": {"anyOf": [{"enum": sorted(ZETA_LABELS)}, ELEMENT_SCHEMA]},
        "order": {"type": "integer", "minimum": 1},
    },
    "required": ["zeta"],
    "additionalProperties": False,
}
POINT_SCHEMA = {"type": "array", "items": ELEMENT_SCHEMA}


class SchemaError(ValueError):
    """Input document does not match the expected schema."""


def _validate(doc: Any, schema: dict, what: str) -> None:
    try:
        jsonschema.validate(doc, schema, cls=jsonschema.Draft202012Validator)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path)
        raise SchemaError(f"invalid {what}{' at ' + path if path else ''}: {exc.message}") from None


def _render(doc: Any, indent: int, width: int) -> str:
    flat = json.dumps(doc, ensure_ascii=True)
    if len(flat) + indent <= width or not isinstance(doc, (list, dict)) or not doc:
        return flat
    pad = " " * (indent + 2)
    if isinstance(doc, dict):
        items = [
            f"{pad}{json.dumps(k)}: {_render(v, indent + 2, width)}" for k, v in doc.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + " " * indent + "}"
    items = [pad + _render(v, indent + 2, width) for v in doc]
    return "[\n" + ",\n".join(items) + "\n" + " " * indent + "]"


def dumps(doc: Any, width: int = 88) -> str:
    """Deterministic JSON text: containers stay on one line when they fit in ``width``."""
    return _render(doc, 0, width) + "\n"


# -- field elements ---------------------------------------------------------


def encode_rational(x: Fraction) -> str:
    return str(Fraction(x))


def encode_elem(x: FieldElem) -> str | dict:
    if x.field is Field.Q:
        return encode_rational(x.a)
    return {"a": encode_rational(x.a), "b": encode_rational(x.b), "zeta": x.field.zeta_name}


def decode_elem(doc: Any, field: Field | None = None) -> FieldElem:
    """Decode an element; with ``field`` given, rationals are widened into it."""
    if isinstance(doc, bool):
        raise SchemaError("booleans are not field elements")
    if isinstance(doc, int):
        x = FieldElem(doc)
    elif isinstance(doc, str):
        if not re.match(_RATIONAL, doc):
            raise SchemaError(f"not a rational: {doc!r}")
        x = FieldElem(Fraction(doc))
    elif isinstance(doc, dict):
        _validate(doc, ELEMENT_SCHEMA, "field element")
        x = FieldElem(Fraction(doc["a"]), Fraction(doc["b"]), _ZETA_FIELD[doc["zeta"]])
    else:
        raise SchemaError(f"cannot read {doc!r} as a field element")
    return x if field is None else widen(x, field)


# -- forms and points ----------------------------------------------------------


def encode_form(F: CubicForm) -> dict:
    return {
        "m": F.m,
        "field": F.field.value,
        "entries": [[[i + 1 for i in key], encode_elem(v)] for key, v in F.entries],
    }


def decode_form(doc: Any) -> CubicForm:
    _validate(doc, FORM_SCHEMA, "cubic form")
    field = Field(doc["field"])
    entries = []
    for key, coeff in doc["entries"]:
        if any(i > doc["m"] for i in key):
            raise SchemaError(f"entry index {key} exceeds m = {doc['m']}")
        entries.append(([i - 1 for i in key], decode_elem(coeff, field)))
    return CubicForm.from_entries(doc["m"], entries, field)


def decode_point(doc: Any) -> list[FieldElem]:
    _validate(doc, POINT_SCHEMA, "point")
    return [decode_elem(x) for x in doc]


def encode_point(p) -> list:
    return [encode_elem(x) for x in p]


# -- models and actions -----------------------------------------------------


def encode_model(model: ResolutionModel) -> dict:
    return {"form": encode_form(model.F_Z), "k": model.k, "a": [str(x) for x in model.a]}


def decode_model(doc: Any) -> ResolutionModel:
    _validate(doc, MODEL_SCHEMA, "resolution model")
    a = [int(x) for x in doc["a"]]
    if len(a) != doc["k"]:
        raise SchemaError(f"k = {doc['k']} but {len(a)} values of a were given")
    return ResolutionModel(decode_form(doc["form"]), tuple(a))


def encode_action(act: DiagonalAction) -> dict:
    for label, z in ZETA_LABELS.items():
        if z == act.zeta and z.field is act.zeta.field:
            return {"zeta": label, "order": act.order}
    return {"zeta": encode_elem(act.zeta), "order": act.order}


def decode_action(doc: Any) -> DiagonalAction:
    _validate(doc, ACTION_SCHEMA, "action")
    z = doc["zeta"]
    zeta = ZETA_LABELS[z] if isinstance(z, str) and z in ZETA_LABELS else decode_elem(z)
    if "order" in doc:
        return DiagonalAction(zeta, doc["order"])
    return DiagonalAction.from_zeta(zeta)


def load_document(doc: Any):
    """Decode a model file: a cubic form, a resolution model, or an action document."""
    if isinstance(doc, dict):
        if "form" in doc:
            return decode_model(doc)
        if "zeta" in doc:
            return decode_action(doc)
        if "entries" in doc:
            return decode_form(doc)
    raise SchemaError("expected a cubic form, a resolution model or an action document")


# -- certificates and verdicts --------------------------------------------


def _minor(step) -> dict:
    return {"rows": [r + 1 for r in step.rows], "cols": [c + 1 for c in step.cols]}


def encode_certificate(cert: RankCertificate) -> dict:
    steps = []
    for s in cert.steps:
        item = {
            "minor": _minor(s),
            "known_zeros_before": [v + 1 for v in s.known_zeros_before],
            "coefficient": encode_elem(s.coefficient),
            "reduced_form": s.reduced_form,
        }
        if isinstance(s, SquareStep):
            item["conclusion"] = s.conclusion
        else:
            item["branches"] = [
                {"assume": f"x_{v + 1}=0", "certificate": encode_certificate(sub)}
                for v, sub in zip(s.variables, s.branches)
            ]
        steps.append(item)
    return {"m": cert.m, "steps": steps}


_CONCLUSION = re.compile(r"^x_([0-9]+)=0$")
_PRODUCT = re.compile(r"\*x_([0-9]+)\*x_([0-9]+)$")


def decode_certificate(doc: Any) -> RankCertificate:
    """Rebuild a certificate; validity is checked separately by replaying it."""
    try:
        steps = []
        for s in doc["steps"]:
            rows = tuple(r - 1 for r in s["minor"]["rows"])
            cols = tuple(c - 1 for c in s["minor"]["cols"])
            before = tuple(v - 1 for v in s["known_zeros_before"])
            coeff = decode_elem(s["coefficient"])
            if "branches" in s:
                a, b = (int(g) - 1 for g in _PRODUCT.search(s["reduced_form"]).groups())
                subs = tuple(decode_certificate(br["certificate"]) for br in s["branches"])
                steps.append(BranchStep(rows, cols, before, coeff, (a, b), subs))
            else:
                var = int(_CONCLUSION.match(s["conclusion"]).group(1)) - 1
                step = SquareStep(rows, cols, before, coeff, var)
                if step.reduced_form != s["reduced_form"]:
                    raise SchemaError(f"reduced_form {s['reduced_form']!r} does not match its step")
                steps.append(step)
        return RankCertificate(doc["m"], tuple(steps))
    except (KeyError, TypeError, AttributeError) as exc:
        raise SchemaError(f"malformed certificate: {exc}") from None


def encode_verdict(v: Verdict) -> dict:
    return {
        "status": v.status.value,
        "certificate": None if v.certificate is None else encode_certificate(v.certificate),
        "residual_assumptions": list(v.residual_assumptions),
        "counterexample": None if v.counterexample is None else encode_point(v.counterexample),
        "notes": list(v.notes),
        "version": __version__,
    }


def decode_verdict(doc: Any) -> Verdict:
    cert = doc.get("certificate")
    cex = doc.get("counterexample")
    return Verdict(
        VerdictStatus(doc["status"]),
        None if cert is None else decode_certificate(cert),
        tuple(doc["residual_assumptions"]),
        None if cex is None else tuple(decode_point(cex)),
        tuple(doc.get("notes", ())),
    )
