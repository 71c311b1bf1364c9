"""Metadata records: the typed value model and the JSON serialization.

A record is an ordered map from element ids to non-empty value lists. The
JSON layout is linked-data flavoured: an ``@context`` object mapping every
element id to its source IRI comes first, followed by the element keys in
schema declaration order. Output is deterministic; equal records serialize
to identical bytes.
"""

from __future__ import annotations

import datetime as dt
import json
import re
from dataclasses import dataclass, field
from typing import Any, Optional, Union

from .schema import ElementDefinition, SchemaDefinition, SubSchema, resolve_term

_ABSOLUTE_IRI_RE = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:")


def is_absolute_iri(text: str) -> bool:
    return bool(_ABSOLUTE_IRI_RE.match(text))


class RecordError(Exception):
    """Base class for record serialization problems."""


class SerializationError(RecordError):
    """A record cannot be rendered in the requested layout."""


class RecordParseError(RecordError):
    """A document cannot be read back into a record."""


@dataclass(frozen=True)
class TextValue:
    content: str


@dataclass(frozen=True)
class IriValue:
    iri: str


@dataclass(frozen=True)
class DateValue:
    value: dt.date


@dataclass(frozen=True)
class IntegerValue:
    value: int


@dataclass(frozen=True)
class NumberValue:
    value: float


@dataclass(frozen=True)
class BooleanValue:
    value: bool


@dataclass(frozen=True)
class TermValue:
    label: str
    iri: Optional[str] = None


@dataclass(frozen=True, eq=False)
class NestedValue:
    """A sub-schema shaped value: field id -> list of inner values."""

    sub_schema: str
    fields: dict[str, list["Value"]]

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, NestedValue)
            and self.sub_schema == other.sub_schema
            and self.fields == other.fields
        )


Value = Union[TextValue, IriValue, DateValue, IntegerValue, NumberValue, BooleanValue, TermValue, NestedValue]


@dataclass
class MetadataRecord:
    """One software's metadata: element id -> values, in insertion order.

    ``unknowns`` is the side channel for keys a lax parse could not map to
    the schema; it never feeds back into serialization.
    """

    schema_id: str
    values: dict[str, list[Value]] = field(default_factory=dict)
    unknowns: dict[str, Any] = field(default_factory=dict)

    def add(self, element_id: str, value: Value) -> "MetadataRecord":
        self.values.setdefault(element_id, []).append(value)
        return self

    def first(self, element_id: str) -> Optional[Value]:
        vals = self.values.get(element_id)
        return vals[0] if vals else None

    def remove(self, element_id: str) -> None:
        self.values.pop(element_id, None)


# ---------------------------------------------------------------------------
# JSON writing
# ---------------------------------------------------------------------------

def to_json(record: MetadataRecord, schema: SchemaDefinition) -> str:
    """Render the canonical JSON record document (context first, schema order,
    two-space indent, trailing newline)."""
    doc: dict[str, Any] = {"@context": _context(schema)}
    doc.update(element_payload(record, schema))
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def element_payload(record: MetadataRecord, schema: SchemaDefinition) -> dict[str, Any]:
    """The element keys of a record as plain JSON data, in schema order."""
    known = {el.id for el in schema.elements}
    for element_id in record.values:
        if element_id not in known:
            raise SerializationError(f"record uses element {element_id!r} not declared by schema {schema.id!r}")
    payload: dict[str, Any] = {}
    for el in schema.elements:
        vals = record.values.get(el.id)
        if not vals:
            continue
        payload[el.id] = _jsonify(el, vals, schema)
    return payload


def _context(schema: SchemaDefinition) -> dict[str, str]:
    return {el.id: schema.element_iri(el) for el in schema.elements}


def _jsonify(el: ElementDefinition, vals: list[Value], schema: SchemaDefinition) -> Any:
    items = [_jsonify_value(el, v, schema) for v in vals]
    if el.multi_valued:
        return items
    if len(items) > 1:
        raise SerializationError(
            f"element {el.id!r} is single-valued but the record holds {len(items)} values"
        )
    return items[0]


def _jsonify_value(el: ElementDefinition, value: Value, schema: SchemaDefinition) -> Any:
    if isinstance(value, TextValue):
        return value.content
    if isinstance(value, IriValue):
        return value.iri
    if isinstance(value, DateValue):
        return value.value.isoformat()
    if isinstance(value, (IntegerValue, NumberValue, BooleanValue)):
        return value.value
    if isinstance(value, TermValue):
        return value.label
    if isinstance(value, NestedValue):
        sub = schema.sub_schema_by_id(value.sub_schema)
        if sub is None:
            raise SerializationError(
                f"element {el.id!r} holds a nested value for unknown sub-schema {value.sub_schema!r}"
            )
        inner: dict[str, Any] = {}
        for f in sub.fields:
            inner_vals = value.fields.get(f.id)
            if inner_vals:
                inner[f.id] = _jsonify(f, inner_vals, schema)
        for fid in value.fields:
            if sub.field_by_id(fid) is None:
                raise SerializationError(
                    f"nested value under {el.id!r} uses field {fid!r} not declared by sub-schema {sub.id!r}"
                )
        return inner
    raise SerializationError(f"unsupported value object {value!r}")


# ---------------------------------------------------------------------------
# JSON reading
# ---------------------------------------------------------------------------

def from_json(text: str, schema: SchemaDefinition, strict: bool = True) -> MetadataRecord:
    """Parse a JSON record document against the schema.

    Strict mode rejects unknown keys; lax mode collects them in
    ``record.unknowns``. Values must structurally match the declared
    valueType either way.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RecordParseError(f"record document is not valid JSON: {exc}") from exc
    return from_payload(doc, schema, strict=strict)


def from_payload(doc: Any, schema: SchemaDefinition, strict: bool = True) -> MetadataRecord:
    """Build a record from already-decoded document data (dict of element keys)."""
    if not isinstance(doc, dict):
        raise RecordParseError("record document must be a JSON object")
    record = MetadataRecord(schema_id=schema.id)
    for key, raw in doc.items():
        if isinstance(key, str) and key.startswith("@"):
            continue  # linked-data machinery, not element content
        el = schema.element_by_id(key)
        if el is None:
            if strict:
                raise RecordParseError(f"unknown element key {key!r}")
            record.unknowns[key] = raw
            continue
        vals = _parse_values(el, raw, schema, strict, record.unknowns, key)
        if vals:
            record.values[key] = vals
    return record


def _parse_values(
    el: ElementDefinition,
    raw: Any,
    schema: SchemaDefinition,
    strict: bool,
    unknowns: dict[str, Any],
    path: str,
) -> list[Value]:
    if el.multi_valued:
        items = raw if isinstance(raw, list) else [raw]
    else:
        if isinstance(raw, list):
            raise RecordParseError(f"element {path!r} is single-valued but the document holds an array")
        items = [raw]
    out = []
    for i, item in enumerate(items):
        item_path = f"{path}[{i}]" if el.multi_valued else path
        out.append(_parse_value(el, item, schema, strict, unknowns, item_path))
    return out


def _parse_value(
    el: ElementDefinition,
    raw: Any,
    schema: SchemaDefinition,
    strict: bool,
    unknowns: dict[str, Any],
    path: str,
) -> Value:
    vt = el.value_type
    if vt == "text":
        if not isinstance(raw, str):
            raise RecordParseError(f"element {path!r} expects text, got {_kind(raw)}")
        return TextValue(raw)
    if vt == "iri":
        if not isinstance(raw, str):
            raise RecordParseError(f"element {path!r} expects an IRI string, got {_kind(raw)}")
        return IriValue(raw)
    if vt == "date":
        if isinstance(raw, dt.date) and not isinstance(raw, dt.datetime):
            return DateValue(raw)  # YAML decodes calendar dates natively
        if not isinstance(raw, str):
            raise RecordParseError(f"element {path!r} expects an ISO date string, got {_kind(raw)}")
        try:
            return DateValue(dt.date.fromisoformat(raw))
        except ValueError as exc:
            raise RecordParseError(f"element {path!r}: {raw!r} is not an ISO-8601 calendar date") from exc
    if vt == "integer":
        if isinstance(raw, bool) or not isinstance(raw, int):
            raise RecordParseError(f"element {path!r} expects an integer, got {_kind(raw)}")
        return IntegerValue(raw)
    if vt == "number":
        if isinstance(raw, bool) or not isinstance(raw, (int, float)):
            raise RecordParseError(f"element {path!r} expects a number, got {_kind(raw)}")
        return NumberValue(float(raw))
    if vt == "boolean":
        if not isinstance(raw, bool):
            raise RecordParseError(f"element {path!r} expects a boolean, got {_kind(raw)}")
        return BooleanValue(raw)
    if vt == "vocabularyTerm":
        if not isinstance(raw, str):
            raise RecordParseError(f"element {path!r} expects a vocabulary term label, got {_kind(raw)}")
        return make_term(schema, el, raw)
    sub_id = el.sub_schema_ref
    if sub_id is not None:
        if not isinstance(raw, dict):
            raise RecordParseError(f"element {path!r} expects a {sub_id!r} object, got {_kind(raw)}")
        sub = schema.sub_schema_by_id(sub_id)
        if sub is None:
            raise RecordParseError(f"element {path!r} references unknown sub-schema {sub_id!r}")
        return _parse_nested(sub, raw, schema, strict, unknowns, path)
    raise RecordParseError(f"element {path!r} has unsupported valueType {vt!r}")


def _parse_nested(
    sub: SubSchema,
    raw: dict,
    schema: SchemaDefinition,
    strict: bool,
    unknowns: dict[str, Any],
    path: str,
) -> NestedValue:
    fields: dict[str, list[Value]] = {}
    for key, inner_raw in raw.items():
        f = sub.field_by_id(key)
        if f is None:
            if strict:
                raise RecordParseError(f"unknown field {key!r} in {path!r} (sub-schema {sub.id!r})")
            unknowns[f"{path}.{key}"] = inner_raw
            continue
        vals = _parse_values(f, inner_raw, schema, strict, unknowns, f"{path}.{key}")
        if vals:
            fields[key] = vals
    return NestedValue(sub_schema=sub.id, fields=fields)


def make_term(schema: SchemaDefinition, el: ElementDefinition, raw: str) -> TermValue:
    """Build a term value, canonicalized against the element's vocabulary
    when the label or IRI is known there."""
    vocab = schema.vocabulary_by_id(el.vocabulary_ref) if el.vocabulary_ref else None
    if vocab is not None:
        term = resolve_term(vocab, raw)
        if term is not None:
            return TermValue(label=term.label, iri=term.iri)
    return TermValue(label=raw, iri=None)


def _kind(raw: Any) -> str:
    if raw is None:
        return "null"
    if isinstance(raw, bool):
        return "boolean"
    if isinstance(raw, (int, float)):
        return "number"
    if isinstance(raw, str):
        return "string"
    if isinstance(raw, list):
        return "array"
    return "object"


def canonical_json(payload: Any) -> str:
    """Shared rendering for machine-readable documents: two-space indent,
    UTF-8 friendly, trailing newline."""
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"
