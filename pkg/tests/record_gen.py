"""Seeded random generation of schema-valid records for the test suites."""

from __future__ import annotations

import datetime as dt
import random
from typing import Optional

from ersmeta.record import (
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
)
from ersmeta.schema import ElementDefinition, SchemaDefinition

TEXT_ALPHABET = (
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789"
    " _-.,:;!?()#&%+*='\"\\\n\t"
    "éüßøλ中文"
)
IRI_ALPHABET = "abcdefghijklmnopqrstuvwxyz0123456789-._~"


class RecordGenerator:
    """Deterministic generator of type-correct records for a schema."""

    def __init__(self, schema: SchemaDefinition, seed: int = 0):
        self.schema = schema
        self.rng = random.Random(seed)

    def record(
        self,
        element_ids: Optional[list[str]] = None,
        include_probability: float = 0.6,
        conformant: bool = False,
        complete: bool = False,
    ) -> MetadataRecord:
        """A random record. With `conformant=True`, every mandatory element
        and every mandatory nested field is filled, so the record validates
        without violations. With `complete=True`, every element and every
        nested field is filled, so validation yields no findings at all."""
        record = MetadataRecord(schema_id=self.schema.id)
        for el in self.schema.elements:
            if element_ids is not None and el.id not in element_ids:
                continue
            required = complete or (conformant and el.tier == "mandatory")
            if not required and self.rng.random() > include_probability:
                continue
            record.values[el.id] = self.values(el, conformant=conformant, complete=complete)
        return record

    def values(self, el: ElementDefinition, conformant: bool = False, complete: bool = False) -> list[Value]:
        count = self.rng.randint(1, 3) if el.multi_valued else 1
        return [self.value(el, conformant=conformant, complete=complete) for _ in range(count)]

    def value(self, el: ElementDefinition, conformant: bool = False, complete: bool = False) -> Value:
        sub_id = el.sub_schema_ref
        if sub_id is not None:
            return self.nested(sub_id, conformant=conformant, complete=complete)
        if el.value_type == "text":
            return TextValue(self.text())
        if el.value_type == "iri":
            return IriValue(self.iri())
        if el.value_type == "date":
            return DateValue(self.date())
        if el.value_type == "integer":
            return IntegerValue(self.rng.randint(-10**6, 10**6))
        if el.value_type == "number":
            return NumberValue(self.number())
        if el.value_type == "boolean":
            return BooleanValue(self.rng.random() < 0.5)
        if el.value_type == "vocabularyTerm":
            vocab = self.schema.vocabulary_by_id(el.vocabulary_ref)
            term = self.rng.choice(vocab.terms)
            return TermValue(label=term.label, iri=term.iri)
        raise ValueError(f"cannot generate a value for valueType {el.value_type!r}")

    def nested(self, sub_id: str, conformant: bool = False, complete: bool = False) -> NestedValue:
        sub = self.schema.sub_schema_by_id(sub_id)
        fields: dict[str, list[Value]] = {}
        for f in sub.fields:
            required = complete or (conformant and f.tier == "mandatory")
            if not required and self.rng.random() > 0.5:
                continue
            count = self.rng.randint(1, 2) if f.multi_valued else 1
            fields[f.id] = [self.value(f, conformant=conformant, complete=complete) for _ in range(count)]
        return NestedValue(sub_schema=sub_id, fields=fields)

    def text(self) -> str:
        length = self.rng.randint(0, 40)
        return "".join(self.rng.choice(TEXT_ALPHABET) for _ in range(length))

    def iri(self) -> str:
        token = "".join(self.rng.choice(IRI_ALPHABET) for _ in range(self.rng.randint(1, 16)))
        return f"https://example.org/{token}"

    def date(self) -> dt.date:
        return dt.date(self.rng.randint(1990, 2035), self.rng.randint(1, 12), self.rng.randint(1, 28))

    def number(self) -> float:
        if self.rng.random() < 0.2:
            return self.rng.choice([0.0, 1.0, -1.5, 2.25, 1e-9, 12345.678])
        return round(self.rng.uniform(-10**6, 10**6), 6)
