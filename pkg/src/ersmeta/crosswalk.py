"""Record conversion between schemas via declarative mapping tables.

A crosswalk binds a source and a target schema and a list of rules over
top-level element paths. Conversion is lossless-or-reported: every filled
source element ends up either in the report's ``mapped`` pairs or in
``dropped``; constant rules appear in ``synthesized``.
"""

from __future__ import annotations

import datetime as dt
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional

import yaml

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
    element_payload,
    from_json,
    from_payload,
    make_term,
    to_json,
)
from .schema import ElementDefinition, SchemaDefinition, SubSchema, load_schema_file

TRANSFORMS = ("identity", "rename", "personSplit", "personJoin", "listJoin", "constant")
TARGET_FORMATS = ("codemeta-json", "cff-yaml-like", "ersmeta")

CODEMETA_CONTEXT = "https://doi.org/10.5063/schema/codemeta-2.0"

_DATA_DIR = Path(__file__).parent / "data"
_SCHEMA_FILES = {
    "ersmeta": _DATA_DIR / "schema" / "ersmeta.json",
    "codemeta": _DATA_DIR / "schema" / "codemeta-mini.json",
    "cff": _DATA_DIR / "schema" / "cff-mini.json",
}
BUNDLED_CROSSWALKS = {
    "ersmeta-codemeta": _DATA_DIR / "crosswalks" / "ersmeta-codemeta.json",
    "ersmeta-cff": _DATA_DIR / "crosswalks" / "ersmeta-cff.json",
}


class CrosswalkError(Exception):
    """Configuration problem in a mapping table (parse or dangling path)."""


class ConversionError(Exception):
    """A record cannot be converted with the given crosswalk."""


@dataclass(frozen=True)
class MappingRule:
    source_path: Optional[str]  # None for constant rules
    target_path: str
    transform: str
    arg: Optional[str] = None


@dataclass(frozen=True)
class ConversionReport:
    mapped: tuple[tuple[str, str], ...]
    dropped: tuple[str, ...]
    synthesized: tuple[str, ...]

    def to_payload(self) -> dict:
        return {
            "mapped": [[s, t] for s, t in self.mapped],
            "dropped": list(self.dropped),
            "synthesized": list(self.synthesized),
        }


@dataclass(frozen=True)
class Crosswalk:
    source_schema_id: str
    target_schema_id: str
    rules: tuple[MappingRule, ...]
    source_schema: SchemaDefinition
    target_schema: SchemaDefinition

    def rule_for(self, source_path: str) -> Optional[MappingRule]:
        for rule in self.rules:
            if rule.source_path == source_path:
                return rule
        return None


def load_crosswalk(document: str, source_schema: SchemaDefinition, target_schema: SchemaDefinition) -> Crosswalk:
    """Parse a mapping file and resolve every rule path against both schemas."""
    try:
        raw = json.loads(document)
    except json.JSONDecodeError as exc:
        raise CrosswalkError(f"mapping file is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict) or "rules" not in raw:
        raise CrosswalkError("mapping file must be an object with a 'rules' list")

    rules = []
    for entry in raw["rules"]:
        transform = entry.get("transform", "identity")
        if transform not in TRANSFORMS:
            raise CrosswalkError(f"unknown transform {transform!r}")
        source_path = entry.get("sourcePath")
        if transform == "constant":
            if source_path is not None:
                raise CrosswalkError("constant rules must not declare a sourcePath")
        elif not source_path:
            raise CrosswalkError(f"rule for target {entry.get('targetPath')!r} is missing its sourcePath")
        rules.append(MappingRule(
            source_path=source_path,
            target_path=entry["targetPath"],
            transform=transform,
            arg=entry.get("arg"),
        ))

    seen_sources: set[str] = set()
    seen_targets: set[str] = set()
    for rule in rules:
        if rule.source_path is not None:
            if rule.source_path in seen_sources:
                raise CrosswalkError(f"more than one rule for source element {rule.source_path!r}")
            seen_sources.add(rule.source_path)
            if source_schema.element_by_id(rule.source_path) is None:
                raise CrosswalkError(
                    f"rule {rule.source_path!r} -> {rule.target_path!r}: "
                    f"source path not declared by schema {source_schema.id!r}"
                )
        if rule.target_path in seen_targets:
            raise CrosswalkError(f"more than one rule targets element {rule.target_path!r}")
        seen_targets.add(rule.target_path)
        if target_schema.element_by_id(rule.target_path) is None:
            raise CrosswalkError(
                f"rule {rule.source_path!r} -> {rule.target_path!r}: "
                f"target path not declared by schema {target_schema.id!r}"
            )

    return Crosswalk(
        source_schema_id=raw.get("source", source_schema.id),
        target_schema_id=raw.get("target", target_schema.id),
        rules=tuple(rules),
        source_schema=source_schema,
        target_schema=target_schema,
    )


def load_bundled_schema_by_id(schema_id: str) -> SchemaDefinition:
    path = _SCHEMA_FILES.get(schema_id)
    if path is None:
        raise CrosswalkError(f"no bundled schema with id {schema_id!r}")
    return load_schema_file(path)


def load_bundled_crosswalk(name: str) -> Crosswalk:
    path = BUNDLED_CROSSWALKS.get(name)
    if path is None:
        raise CrosswalkError(f"no bundled crosswalk named {name!r}")
    raw = json.loads(path.read_text(encoding="utf-8"))
    source = load_bundled_schema_by_id(raw["source"])
    target = load_bundled_schema_by_id(raw["target"])
    return load_crosswalk(path.read_text(encoding="utf-8"), source, target)


def invert_crosswalk(crosswalk: Crosswalk) -> Crosswalk:
    """Reverse mapping over the bidirectional core: identity and rename rules
    swap direction; other transforms are not invertible and are dropped."""
    inverted = tuple(
        MappingRule(source_path=r.target_path, target_path=r.source_path, transform=r.transform)
        for r in crosswalk.rules
        if r.transform in ("identity", "rename") and r.source_path is not None
    )
    return Crosswalk(
        source_schema_id=crosswalk.target_schema_id,
        target_schema_id=crosswalk.source_schema_id,
        rules=inverted,
        source_schema=crosswalk.target_schema,
        target_schema=crosswalk.source_schema,
    )


# ---------------------------------------------------------------------------
# Conversion
# ---------------------------------------------------------------------------

def convert(record: MetadataRecord, crosswalk: Crosswalk, target_format: str) -> tuple[str, ConversionReport]:
    """Apply the crosswalk and render the result in the requested format."""
    if target_format not in TARGET_FORMATS:
        raise ConversionError(f"unknown target format {target_format!r}")
    if record.schema_id != crosswalk.source_schema_id:
        raise ConversionError(
            f"record follows schema {record.schema_id!r} but the crosswalk "
            f"maps from {crosswalk.source_schema_id!r}"
        )

    target_record, report = convert_record(record, crosswalk)
    if target_format == "codemeta-json":
        doc: dict[str, Any] = {"@context": CODEMETA_CONTEXT, "@type": "SoftwareSourceCode"}
        doc.update(element_payload(target_record, crosswalk.target_schema))
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n", report
    if target_format == "cff-yaml-like":
        payload = element_payload(target_record, crosswalk.target_schema)
        return yaml.safe_dump(payload, sort_keys=False, allow_unicode=True, default_flow_style=False), report
    return to_json(target_record, crosswalk.target_schema), report


def convert_record(record: MetadataRecord, crosswalk: Crosswalk) -> tuple[MetadataRecord, ConversionReport]:
    """The schema-to-schema mapping step, before any rendering."""
    mapped: list[tuple[str, str]] = []
    dropped: list[str] = []
    synthesized: list[str] = []
    target = MetadataRecord(schema_id=crosswalk.target_schema_id)

    for source_el in crosswalk.source_schema.elements:
        vals = record.values.get(source_el.id)
        if not vals:
            continue
        rule = crosswalk.rule_for(source_el.id)
        if rule is None:
            dropped.append(source_el.id)
            continue
        target_el = crosswalk.target_schema.element_by_id(rule.target_path)
        assert target_el is not None  # load_crosswalk resolved it
        target.values[target_el.id] = _apply(rule, vals, target_el, crosswalk.target_schema)
        mapped.append((source_el.id, rule.target_path))

    for key in record.values:
        if crosswalk.source_schema.element_by_id(key) is None:
            dropped.append(key)

    for rule in crosswalk.rules:
        if rule.transform == "constant":
            target_el = crosswalk.target_schema.element_by_id(rule.target_path)
            assert target_el is not None
            target.values[rule.target_path] = [
                _coerce(TextValue(rule.arg or ""), target_el, crosswalk.target_schema)
            ]
            synthesized.append(rule.target_path)

    report = ConversionReport(mapped=tuple(mapped), dropped=tuple(dropped), synthesized=tuple(synthesized))
    return target, report


def _apply(
    rule: MappingRule,
    vals: list[Value],
    target_el: ElementDefinition,
    target_schema: SchemaDefinition,
) -> list[Value]:
    if rule.transform in ("identity", "rename"):
        return [_coerce(v, target_el, target_schema) for v in vals]
    if rule.transform == "listJoin":
        separator = rule.arg if rule.arg is not None else ", "
        joined = separator.join(_lexical(v) for v in vals)
        return [_coerce(TextValue(joined), target_el, target_schema)]
    if rule.transform == "personSplit":
        return [_person_split(v, target_el, target_schema) for v in vals]
    if rule.transform == "personJoin":
        return [TextValue(_person_join(v)) for v in vals]
    raise ConversionError(f"transform {rule.transform!r} cannot be applied to values")


def _lexical(value: Value) -> str:
    if isinstance(value, TextValue):
        return value.content
    if isinstance(value, IriValue):
        return value.iri
    if isinstance(value, TermValue):
        return value.label
    if isinstance(value, DateValue):
        return value.value.isoformat()
    if isinstance(value, BooleanValue):
        return "true" if value.value else "false"
    if isinstance(value, IntegerValue):
        return str(value.value)
    if isinstance(value, NumberValue):
        return repr(value.value)
    raise ConversionError(f"value {value!r} has no text form")


def _coerce(value: Value, target_el: ElementDefinition, target_schema: SchemaDefinition) -> Value:
    """Retype a value for the target element, canonicalizing terms."""
    vt = target_el.value_type
    sub_id = target_el.sub_schema_ref
    if sub_id is not None:
        if not isinstance(value, NestedValue):
            raise ConversionError(
                f"target {target_el.id!r} expects a {sub_id!r} object, got {type(value).__name__}"
            )
        sub = target_schema.sub_schema_by_id(sub_id)
        assert sub is not None
        fields: dict[str, list[Value]] = {}
        for fid, inner in value.fields.items():
            target_field = sub.field_by_id(fid)
            if target_field is None:
                continue  # field not present in the target shape
            fields[fid] = [_coerce(v, target_field, target_schema) for v in inner]
        return NestedValue(sub_schema=sub.id, fields=fields)
    if vt == "text":
        return TextValue(_lexical(value))
    if vt == "iri":
        if isinstance(value, IriValue):
            return value
        if isinstance(value, TermValue) and value.iri:
            return IriValue(value.iri)
        if isinstance(value, TextValue):
            return IriValue(value.content)
        raise ConversionError(f"target {target_el.id!r} expects an IRI, got {type(value).__name__}")
    if vt == "vocabularyTerm":
        if isinstance(value, TermValue):
            probe = value.iri or value.label
        else:
            probe = _lexical(value)
        return make_term(target_schema, target_el, probe)
    if vt == "date":
        if isinstance(value, DateValue):
            return value
        try:
            return DateValue(dt.date.fromisoformat(_lexical(value)))
        except ValueError as exc:
            raise ConversionError(f"target {target_el.id!r}: {_lexical(value)!r} is not a date") from exc
    if vt == "integer":
        if isinstance(value, IntegerValue):
            return value
        try:
            return IntegerValue(int(_lexical(value)))
        except ValueError as exc:
            raise ConversionError(f"target {target_el.id!r}: not an integer") from exc
    if vt == "number":
        if isinstance(value, NumberValue):
            return value
        if isinstance(value, IntegerValue):
            return NumberValue(float(value.value))
        try:
            return NumberValue(float(_lexical(value)))
        except ValueError as exc:
            raise ConversionError(f"target {target_el.id!r}: not a number") from exc
    if vt == "boolean":
        if isinstance(value, BooleanValue):
            return value
        lex = _lexical(value)
        if lex in ("true", "false"):
            return BooleanValue(lex == "true")
        raise ConversionError(f"target {target_el.id!r}: not a boolean")
    raise ConversionError(f"target {target_el.id!r} has unsupported valueType {vt!r}")


# ---------------------------------------------------------------------------
# Person name handling (documented as lossy for multi-part family names)
# ---------------------------------------------------------------------------

def _split_name(full_name: str) -> tuple[str, str]:
    """Split on the last whitespace: given names are all but the last token."""
    parts = full_name.rsplit(None, 1)
    if len(parts) == 2:
        return parts[0], parts[1]
    return "", full_name.strip()


def _field_id(sub: SubSchema, candidates: list[str]) -> Optional[str]:
    for fid in candidates:
        if sub.field_by_id(fid) is not None:
            return fid
    return None


def _person_parts(value: Value) -> dict[str, str]:
    """Extract given/family/full-name/email/orcid text from a person-shaped
    value or a plain name string."""
    if isinstance(value, TextValue):
        return {"name": value.content}
    if isinstance(value, NestedValue):
        parts: dict[str, str] = {}
        for key, aliases in {
            "given": ("givenName", "given-names"),
            "family": ("familyName", "family-names"),
            "name": ("name",),
            "email": ("email",),
            "orcid": ("orcid",),
        }.items():
            for alias in aliases:
                vals = value.fields.get(alias)
                if vals:
                    parts[key] = _lexical(vals[0])
                    break
        return parts
    raise ConversionError(f"person transforms expect a person or a name string, got {type(value).__name__}")


def _person_split(value: Value, target_el: ElementDefinition, target_schema: SchemaDefinition) -> Value:
    sub_id = target_el.sub_schema_ref
    if sub_id is None:
        raise ConversionError(f"personSplit target {target_el.id!r} must be person-shaped")
    sub = target_schema.sub_schema_by_id(sub_id)
    assert sub is not None
    parts = _person_parts(value)
    given = parts.get("given", "")
    family = parts.get("family", "")
    if not given and not family and parts.get("name"):
        given, family = _split_name(parts["name"])

    fields: dict[str, list[Value]] = {}
    given_id = _field_id(sub, ["given-names", "givenName"])
    family_id = _field_id(sub, ["family-names", "familyName"])
    if given and given_id:
        fields[given_id] = [TextValue(given)]
    if family and family_id:
        fields[family_id] = [TextValue(family)]
    for key in ("email", "orcid"):
        fid = _field_id(sub, [key])
        if parts.get(key) and fid:
            field_def = sub.field_by_id(fid)
            assert field_def is not None
            fields[fid] = [_coerce(TextValue(parts[key]), field_def, target_schema)]
    return NestedValue(sub_schema=sub.id, fields=fields)


def _person_join(value: Value) -> str:
    parts = _person_parts(value)
    if parts.get("name"):
        return parts["name"]
    given = parts.get("given", "")
    family = parts.get("family", "")
    return " ".join(p for p in (given, family) if p)


# ---------------------------------------------------------------------------
# Reading external documents back into records
# ---------------------------------------------------------------------------

def parse_external(text: str, document_format: str, schema: SchemaDefinition, strict: bool = False) -> MetadataRecord:
    """Read a converted document back into a record of the given schema."""
    if document_format in ("codemeta-json", "ersmeta"):
        return from_json(text, schema, strict=strict)
    if document_format == "cff-yaml-like":
        try:
            payload = yaml.safe_load(text)
        except yaml.YAMLError as exc:
            raise ConversionError(f"document is not valid YAML: {exc}") from exc
        return from_payload(payload, schema, strict=strict)
    raise ConversionError(f"unknown document format {document_format!r}")
