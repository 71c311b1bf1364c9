"""Schema definitions: the element registry that drives the whole toolkit.

Everything else (validation, serialization, extraction, the curation UI) is
driven by a :class:`SchemaDefinition` loaded from a JSON data file; no other
module hardcodes element lists.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

TIERS = ("mandatory", "recommended", "optional")
PROVENANCES = (
    "schema.org",
    "codemeta",
    "softwareDescriptionOntology",
    "ontosoft",
    "oeo",
    "m4i",
    "new",
)
SCALAR_VALUE_TYPES = ("text", "iri", "date", "integer", "number", "boolean", "vocabularyTerm")
SUB_SCHEMA_REF_PREFIX = "subSchemaRef:"

# Namespace used for elements that are newly defined by this schema family
# (provenance "new", no sourceIri). Schemas may override it by declaring an
# "ersmeta" namespace of their own.
DEFAULT_ARTIFACT_NAMESPACE = "https://w3id.org/ersmeta#"

_DATA_DIR = Path(__file__).parent / "data"
BUNDLED_SCHEMA_PATH = _DATA_DIR / "schema" / "ersmeta.json"
BUNDLED_MANIFEST_PATH = _DATA_DIR / "schema" / "manifest.json"


class SchemaError(Exception):
    """Base class for schema-definition problems."""


class SchemaParseError(SchemaError):
    """The schema document is not well-formed."""


class SchemaConsistencyError(SchemaError):
    """The schema document violates one or more structural invariants.

    Carries every violation found, not just the first.
    """

    def __init__(self, violations: list[str]):
        self.violations = violations
        super().__init__("; ".join(violations))


@dataclass(frozen=True)
class Term:
    label: str
    iri: Optional[str] = None


@dataclass(frozen=True)
class Vocabulary:
    """A controlled value set: a closed label list or an ontology-class snapshot."""

    id: str
    kind: str  # "closedList" | "ontologyClass"
    terms: tuple[Term, ...]
    source_note: str = ""

    def resolve(self, value: str) -> Optional[Term]:
        return resolve_term(self, value)


@dataclass(frozen=True)
class ThematicArea:
    id: str
    label: str
    description: str = ""


@dataclass(frozen=True)
class ElementDefinition:
    id: str
    label: str
    description: str
    tier: str
    value_type: str  # scalar type name or "subSchemaRef:<subSchemaId>"
    multi_valued: bool
    area: Optional[str] = None  # None for sub-schema fields
    vocabulary_ref: Optional[str] = None
    provenance: str = "new"
    source_iri: Optional[str] = None

    @property
    def sub_schema_ref(self) -> Optional[str]:
        if self.value_type.startswith(SUB_SCHEMA_REF_PREFIX):
            return self.value_type[len(SUB_SCHEMA_REF_PREFIX):]
        return None


@dataclass(frozen=True)
class SubSchema:
    id: str
    fields: tuple[ElementDefinition, ...]

    def field_by_id(self, field_id: str) -> Optional[ElementDefinition]:
        for f in self.fields:
            if f.id == field_id:
                return f
        return None


@dataclass(frozen=True)
class SchemaStats:
    per_tier: dict[str, int]
    per_area: dict[str, int]
    per_provenance: dict[str, int]
    top_level_count: int
    sub_schema_count: int
    sub_schema_field_count: int


@dataclass(frozen=True)
class SchemaDefinition:
    """An immutable, fully resolved schema. Safe to share between threads."""

    id: str
    version: str
    areas: tuple[ThematicArea, ...]
    elements: tuple[ElementDefinition, ...]
    sub_schemas: tuple[SubSchema, ...]
    vocabularies: tuple[Vocabulary, ...]
    namespaces: dict[str, str] = field(default_factory=dict)

    def element_by_id(self, element_id: str) -> Optional[ElementDefinition]:
        return element_by_id(self, element_id)

    def sub_schema_by_id(self, sub_schema_id: str) -> Optional[SubSchema]:
        for s in self.sub_schemas:
            if s.id == sub_schema_id:
                return s
        return None

    def vocabulary_by_id(self, vocab_id: str) -> Optional[Vocabulary]:
        for v in self.vocabularies:
            if v.id == vocab_id:
                return v
        return None

    def artifact_namespace(self) -> str:
        return self.namespaces.get("ersmeta", DEFAULT_ARTIFACT_NAMESPACE)

    def element_iri(self, element: ElementDefinition) -> str:
        """IRI identifying an element: its reused source IRI, or one minted
        in the artifact namespace for newly defined elements."""
        if element.source_iri:
            return element.source_iri
        return self.artifact_namespace() + element.id


def element_by_id(schema: SchemaDefinition, element_id: str) -> Optional[ElementDefinition]:
    """Return the top-level element with this id, or None."""
    for el in schema.elements:
        if el.id == element_id:
            return el
    return None


def resolve_term(vocab: Vocabulary, value: str) -> Optional[Term]:
    """Match a label or IRI against a vocabulary, exact and case-sensitive.

    Labels always match; IRIs match only terms that declare one.
    """
    for term in vocab.terms:
        if term.label == value:
            return term
        if term.iri is not None and term.iri == value:
            return term
    return None


def schema_stats(schema: SchemaDefinition) -> SchemaStats:
    """Exhaustive counts over all declared elements (top level plus sub-schema fields)."""
    per_tier = {t: 0 for t in TIERS}
    per_area = {a.id: 0 for a in schema.areas}
    per_provenance: dict[str, int] = {}

    def bump(el: ElementDefinition) -> None:
        per_tier[el.tier] += 1
        per_provenance[el.provenance] = per_provenance.get(el.provenance, 0) + 1

    for el in schema.elements:
        bump(el)
        per_area[el.area] += 1
    field_count = 0
    for sub in schema.sub_schemas:
        for f in sub.fields:
            bump(f)
            field_count += 1

    return SchemaStats(
        per_tier=per_tier,
        per_area=per_area,
        per_provenance=per_provenance,
        top_level_count=len(schema.elements),
        sub_schema_count=len(schema.sub_schemas),
        sub_schema_field_count=field_count,
    )


# ---------------------------------------------------------------------------
# Loading
# ---------------------------------------------------------------------------

def load_schema(document: str, base_dir: Optional[Path] = None) -> SchemaDefinition:
    """Parse and consistency-check a schema-definition document.

    `base_dir` resolves vocabulary files referenced by relative path; it is
    required only when the document uses references instead of inlining.
    Raises SchemaParseError for malformed documents and
    SchemaConsistencyError listing every violated invariant.
    """
    try:
        raw = json.loads(document)
    except json.JSONDecodeError as exc:
        raise SchemaParseError(f"schema document is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise SchemaParseError("schema document must be a JSON object")

    try:
        schema = _build(raw, base_dir)
    except (KeyError, TypeError, AttributeError) as exc:
        raise SchemaParseError(f"schema document is structurally malformed: {exc!r}") from exc

    violations = check_consistency(schema)
    if violations:
        raise SchemaConsistencyError(violations)
    return schema


def load_schema_file(path: str | Path) -> SchemaDefinition:
    path = Path(path)
    return load_schema(path.read_text(encoding="utf-8"), base_dir=path.parent)


def load_bundled_schema() -> SchemaDefinition:
    return load_schema_file(BUNDLED_SCHEMA_PATH)


def load_bundled_manifest() -> dict:
    return json.loads(BUNDLED_MANIFEST_PATH.read_text(encoding="utf-8"))


def _build(raw: dict, base_dir: Optional[Path]) -> SchemaDefinition:
    areas = tuple(
        ThematicArea(id=a["id"], label=a.get("label", a["id"]), description=a.get("description", ""))
        for a in raw.get("areas", [])
    )
    elements = tuple(_element(e, top_level=True) for e in raw.get("elements", []))
    sub_schemas = tuple(
        SubSchema(id=s["id"], fields=tuple(_element(f, top_level=False) for f in s.get("fields", [])))
        for s in raw.get("subSchemas", [])
    )
    vocabularies = tuple(_vocabulary(v, base_dir) for v in raw.get("vocabularies", []))
    namespaces = dict(raw.get("namespaces", {}))
    return SchemaDefinition(
        id=raw["id"],
        version=str(raw.get("version", "")),
        areas=areas,
        elements=elements,
        sub_schemas=sub_schemas,
        vocabularies=vocabularies,
        namespaces=namespaces,
    )


def _element(raw: dict, top_level: bool) -> ElementDefinition:
    return ElementDefinition(
        id=raw["id"],
        label=raw.get("label", raw["id"]),
        description=raw.get("description", ""),
        tier=raw["tier"],
        value_type=raw["valueType"],
        multi_valued=bool(raw["multiValued"]),
        area=raw["area"] if top_level else None,
        vocabulary_ref=raw.get("vocabularyRef"),
        provenance=raw.get("provenance", "new"),
        source_iri=raw.get("sourceIri"),
    )


def _vocabulary(raw: dict, base_dir: Optional[Path]) -> Vocabulary:
    if "ref" in raw:
        if base_dir is None:
            raise SchemaParseError(
                f"vocabulary reference {raw['ref']!r} cannot be resolved without a base directory"
            )
        ref_path = base_dir / raw["ref"]
        try:
            raw = json.loads(ref_path.read_text(encoding="utf-8"))
        except FileNotFoundError as exc:
            raise SchemaParseError(f"referenced vocabulary file not found: {ref_path}") from exc
        except json.JSONDecodeError as exc:
            raise SchemaParseError(f"referenced vocabulary file {ref_path} is not valid JSON: {exc}") from exc
    terms = tuple(Term(label=t["label"], iri=t.get("iri")) for t in raw.get("terms", []))
    return Vocabulary(
        id=raw["id"],
        kind=raw["kind"],
        terms=terms,
        source_note=raw.get("sourceNote", ""),
    )


# ---------------------------------------------------------------------------
# Consistency checking
# ---------------------------------------------------------------------------

def check_consistency(schema: SchemaDefinition) -> list[str]:
    """Return every violated structural invariant (empty list when consistent)."""
    violations: list[str] = []

    _check_unique((a.id for a in schema.areas), "area", violations)
    _check_unique((e.id for e in schema.elements), "element", violations)
    _check_unique((s.id for s in schema.sub_schemas), "sub-schema", violations)
    _check_unique((v.id for v in schema.vocabularies), "vocabulary", violations)
    for sub in schema.sub_schemas:
        _check_unique((f.id for f in sub.fields), f"field of sub-schema {sub.id!r}", violations)
    for vocab in schema.vocabularies:
        _check_unique((t.label for t in vocab.terms), f"term label in vocabulary {vocab.id!r}", violations)
        if vocab.kind not in ("closedList", "ontologyClass"):
            violations.append(f"vocabulary {vocab.id!r} has unknown kind {vocab.kind!r}")
        if vocab.kind == "ontologyClass":
            for t in vocab.terms:
                if not t.iri:
                    violations.append(
                        f"vocabulary {vocab.id!r} is an ontologyClass but term {t.label!r} has no IRI"
                    )

    area_ids = {a.id for a in schema.areas}
    sub_ids = {s.id for s in schema.sub_schemas}
    vocab_ids = {v.id for v in schema.vocabularies}

    for el in schema.elements:
        if el.area not in area_ids:
            violations.append(f"element {el.id!r} references unknown area {el.area!r}")
        violations.extend(_check_element(el, sub_ids, vocab_ids, el.id))
    for sub in schema.sub_schemas:
        for f in sub.fields:
            violations.extend(_check_element(f, sub_ids, vocab_ids, f"{sub.id}.{f.id}"))

    violations.extend(_check_sub_schema_cycles(schema))
    return violations


def _check_unique(ids: Iterable[str], what: str, violations: list[str]) -> None:
    seen: set[str] = set()
    for i in ids:
        if i in seen:
            violations.append(f"duplicate {what} id {i!r}")
        seen.add(i)


def _check_element(el: ElementDefinition, sub_ids: set[str], vocab_ids: set[str], path: str) -> list[str]:
    problems: list[str] = []
    if el.tier not in TIERS:
        problems.append(f"element {path!r} has unknown tier {el.tier!r}")
    if el.provenance not in PROVENANCES:
        problems.append(f"element {path!r} has unknown provenance {el.provenance!r}")
    if el.provenance != "new" and not el.source_iri:
        problems.append(f"element {path!r} reuses {el.provenance} but declares no sourceIri")

    ref = el.sub_schema_ref
    if ref is not None:
        if ref not in sub_ids:
            problems.append(f"element {path!r} references unknown sub-schema {ref!r}")
    elif el.value_type not in SCALAR_VALUE_TYPES:
        problems.append(f"element {path!r} has unknown valueType {el.value_type!r}")

    if el.value_type == "vocabularyTerm" and not el.vocabulary_ref:
        problems.append(f"element {path!r} is a vocabularyTerm but declares no vocabularyRef")
    if el.vocabulary_ref and el.value_type != "vocabularyTerm":
        problems.append(f"element {path!r} declares vocabularyRef but is not a vocabularyTerm")
    if el.vocabulary_ref and el.vocabulary_ref not in vocab_ids:
        problems.append(f"element {path!r} references unknown vocabulary {el.vocabulary_ref!r}")
    return problems


def _check_sub_schema_cycles(schema: SchemaDefinition) -> list[str]:
    edges: dict[str, list[str]] = {}
    for sub in schema.sub_schemas:
        edges[sub.id] = [f.sub_schema_ref for f in sub.fields if f.sub_schema_ref]

    violations: list[str] = []
    state: dict[str, int] = {}  # 0 unvisited / 1 in progress / 2 done

    def visit(node: str, trail: list[str]) -> None:
        if state.get(node) == 2:
            return
        if state.get(node) == 1:
            cycle = " -> ".join(trail + [node])
            violations.append(f"sub-schema reference cycle: {cycle}")
            return
        state[node] = 1
        for nxt in edges.get(node, []):
            if nxt in edges:
                visit(nxt, trail + [node])
        state[node] = 2

    for sub_id in edges:
        visit(sub_id, [])
    return violations


# ---------------------------------------------------------------------------
# Serialization (inverse of load_schema, vocabularies always inlined)
# ---------------------------------------------------------------------------

def serialize_schema(schema: SchemaDefinition) -> str:
    doc = {
        "id": schema.id,
        "version": schema.version,
        "namespaces": schema.namespaces,
        "areas": [
            {"id": a.id, "label": a.label, "description": a.description} for a in schema.areas
        ],
        "elements": [_element_raw(e, top_level=True) for e in schema.elements],
        "subSchemas": [
            {"id": s.id, "fields": [_element_raw(f, top_level=False) for f in s.fields]}
            for s in schema.sub_schemas
        ],
        "vocabularies": [
            {
                "id": v.id,
                "kind": v.kind,
                "sourceNote": v.source_note,
                "terms": [
                    {"label": t.label} if t.iri is None else {"label": t.label, "iri": t.iri}
                    for t in v.terms
                ],
            }
            for v in schema.vocabularies
        ],
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _element_raw(el: ElementDefinition, top_level: bool) -> dict:
    raw = {
        "id": el.id,
        "label": el.label,
        "description": el.description,
        "tier": el.tier,
    }
    if top_level:
        raw["area"] = el.area
    raw["valueType"] = el.value_type
    raw["multiValued"] = el.multi_valued
    if el.vocabulary_ref:
        raw["vocabularyRef"] = el.vocabulary_ref
    raw["provenance"] = el.provenance
    if el.source_iri:
        raw["sourceIri"] = el.source_iri
    return raw
