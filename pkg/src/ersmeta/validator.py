"""Constraint validation and completeness scoring for metadata records.

All problems are findings, never exceptions: presence vs tier, datatype vs
declared value type, vocabulary membership, nested shapes, and cardinality.
Severity is a fixed function of the constraint and the element tier; a
record conforms exactly when it has no violation-level finding.
"""

from __future__ import annotations

from dataclasses import dataclass

from .record import (
    BooleanValue,
    DateValue,
    IntegerValue,
    IriValue,
    MetadataRecord,
    NestedValue,
    NumberValue,
    TermValue,
    TextValue,
    Value,
    is_absolute_iri,
)
from .schema import ElementDefinition, SchemaDefinition, resolve_term

VIOLATION = "violation"
WARNING = "warning"
INFO = "info"


@dataclass(frozen=True)
class Finding:
    element_path: str
    constraint: str
    severity: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    findings: tuple[Finding, ...]
    conformant: bool

    def to_payload(self) -> dict:
        return {
            "findings": [
                {
                    "elementPath": f.element_path,
                    "constraint": f.constraint,
                    "severity": f.severity,
                    "message": f.message,
                }
                for f in self.findings
            ],
            "conformant": self.conformant,
        }


@dataclass(frozen=True)
class CompletenessReport:
    per_tier: dict[str, tuple[int, int]]
    per_area: dict[str, tuple[int, int]]
    mandatory_complete: bool

    def to_payload(self) -> dict:
        return {
            "perTier": {t: {"filled": f, "total": n} for t, (f, n) in self.per_tier.items()},
            "perArea": {a: {"filled": f, "total": n} for a, (f, n) in self.per_area.items()},
            "mandatoryComplete": self.mandatory_complete,
        }


def validate(record: MetadataRecord, schema: SchemaDefinition, strict: bool = True) -> ValidationReport:
    """Evaluate every constraint; findings in schema declaration order, then
    unknown keys. ``strict`` controls only the severity of unknown elements."""
    findings: list[Finding] = []

    for el in schema.elements:
        vals = record.values.get(el.id)
        if not vals:
            if el.tier == "mandatory":
                findings.append(Finding(el.id, "missingMandatory", VIOLATION,
                                        f"mandatory element {el.id!r} is not filled"))
            elif el.tier == "recommended":
                findings.append(Finding(el.id, "missingRecommended", WARNING,
                                        f"recommended element {el.id!r} is not filled"))
            continue
        findings.extend(_check_values(el, vals, schema, el.id, strict))

    unknown_severity = VIOLATION if strict else WARNING
    unknown_keys = [k for k in record.values if schema.element_by_id(k) is None]
    unknown_keys += [k for k in record.unknowns if k not in unknown_keys]
    for key in sorted(unknown_keys):
        findings.append(Finding(key, "unknownElement", unknown_severity,
                                f"element {key!r} is not declared by schema {schema.id!r}"))

    conformant = not any(f.severity == VIOLATION for f in findings)
    return ValidationReport(findings=tuple(findings), conformant=conformant)


def _check_values(
    el: ElementDefinition,
    vals: list[Value],
    schema: SchemaDefinition,
    path: str,
    strict: bool,
) -> list[Finding]:
    findings: list[Finding] = []
    if not el.multi_valued and len(vals) > 1:
        findings.append(Finding(path, "cardinalityExceeded", VIOLATION,
                                f"element {path!r} is single-valued but holds {len(vals)} values"))
    for i, value in enumerate(vals):
        value_path = f"{path}[{i}]" if el.multi_valued and len(vals) > 1 else path
        findings.extend(_check_value(el, value, schema, value_path, strict))
    return findings


def _check_value(
    el: ElementDefinition,
    value: Value,
    schema: SchemaDefinition,
    path: str,
    strict: bool,
) -> list[Finding]:
    vt = el.value_type
    expected = {
        "text": TextValue,
        "iri": IriValue,
        "date": DateValue,
        "integer": IntegerValue,
        "number": NumberValue,
        "boolean": BooleanValue,
        "vocabularyTerm": TermValue,
    }
    sub_id = el.sub_schema_ref

    if sub_id is None:
        kind = expected.get(vt)
        if kind is None or not isinstance(value, kind):
            return [Finding(path, "datatypeMismatch", VIOLATION,
                            f"element {path!r} expects {vt}, holds {type(value).__name__}")]
        if isinstance(value, IriValue) and not is_absolute_iri(value.iri):
            return [Finding(path, "datatypeMismatch", VIOLATION,
                            f"element {path!r} holds {value.iri!r}, which is not an absolute IRI")]
        if isinstance(value, TermValue):
            return _check_term(el, value, schema, path)
        return []

    if not isinstance(value, NestedValue):
        return [Finding(path, "datatypeMismatch", VIOLATION,
                        f"element {path!r} expects a {sub_id!r} object, holds {type(value).__name__}")]
    if value.sub_schema != sub_id:
        return [Finding(path, "nestedShapeViolation", VIOLATION,
                        f"element {path!r} expects sub-schema {sub_id!r}, holds {value.sub_schema!r}")]
    sub = schema.sub_schema_by_id(sub_id)
    if sub is None:
        return [Finding(path, "nestedShapeViolation", VIOLATION,
                        f"element {path!r} references unknown sub-schema {sub_id!r}")]

    findings: list[Finding] = []
    for f in sub.fields:
        inner = value.fields.get(f.id)
        inner_path = f"{path}.{f.id}"
        if not inner:
            if f.tier == "mandatory":
                findings.append(Finding(inner_path, "missingMandatory", VIOLATION,
                                        f"mandatory field {inner_path!r} is not filled"))
            elif f.tier == "recommended":
                findings.append(Finding(inner_path, "missingRecommended", WARNING,
                                        f"recommended field {inner_path!r} is not filled"))
            continue
        findings.extend(_check_values(f, inner, schema, inner_path, strict))
    for fid in value.fields:
        if sub.field_by_id(fid) is None:
            findings.append(Finding(f"{path}.{fid}", "nestedShapeViolation", VIOLATION,
                                    f"field {fid!r} is not declared by sub-schema {sub.id!r}"))
    return findings


def _check_term(el: ElementDefinition, value: TermValue, schema: SchemaDefinition, path: str) -> list[Finding]:
    vocab = schema.vocabulary_by_id(el.vocabulary_ref) if el.vocabulary_ref else None
    if vocab is None:
        return [Finding(path, "notInVocabulary", VIOLATION,
                        f"element {path!r} has no resolvable vocabulary {el.vocabulary_ref!r}")]
    probe = value.iri if value.iri else value.label
    term = resolve_term(vocab, probe)
    if term is None or term.label != value.label:
        return [Finding(path, "notInVocabulary", VIOLATION,
                        f"{value.label!r} is not a term of vocabulary {vocab.id!r}")]
    return []


def completeness(record: MetadataRecord, schema: SchemaDefinition) -> CompletenessReport:
    """Per-tier and per-area fill ratios over the schema's top-level elements.

    An element counts as filled iff present with at least one value; totals
    come from the schema, never from the record.
    """
    tier_filled = {"mandatory": 0, "recommended": 0, "optional": 0}
    tier_total = {"mandatory": 0, "recommended": 0, "optional": 0}
    area_filled = {a.id: 0 for a in schema.areas}
    area_total = {a.id: 0 for a in schema.areas}

    for el in schema.elements:
        tier_total[el.tier] += 1
        area_total[el.area] += 1
        if record.values.get(el.id):
            tier_filled[el.tier] += 1
            area_filled[el.area] += 1

    per_tier = {t: (tier_filled[t], tier_total[t]) for t in tier_total}
    per_area = {a: (area_filled[a], area_total[a]) for a in area_total}
    mandatory_complete = tier_filled["mandatory"] == tier_total["mandatory"]
    return CompletenessReport(per_tier=per_tier, per_area=per_area, mandatory_complete=mandatory_complete)


def quality_gate(report: CompletenessReport) -> bool:
    """The record passes the quality bar iff every mandatory element is filled."""
    return report.mandatory_complete
