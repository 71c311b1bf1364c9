"""Acceptance suite: one test per release gate, each printing a pass/fail
line and enforcing its time budget. Run with `pytest -s tests/test_acceptance.py`
to see the lines; plain `pytest` shows them for failing gates only.
"""

import copy
import json
import time
from collections import Counter
from contextlib import contextmanager

from fastapi.testclient import TestClient

from ersmeta.crosswalk import convert, invert_crosswalk, load_bundled_crosswalk, parse_external
from ersmeta.record import canonical_json, from_json, from_payload, to_json
from ersmeta.schema import schema_stats, serialize_schema
from ersmeta.service import create_app
from ersmeta.turtle import from_turtle, to_turtle
from ersmeta.validator import completeness, validate
from record_gen import RecordGenerator

BIDIRECTIONAL_CORE = [
    "name", "description", "identifier", "keywords", "license", "version",
    "programmingLanguage", "codeRepository", "developmentStatus", "author",
    "contributor", "referencePublication", "funding",
]


@contextmanager
def gate(name: str, budget_seconds: float):
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE FAIL  {name}")
        raise
    elapsed = time.perf_counter() - start
    if elapsed >= budget_seconds:
        print(f"ACCEPTANCE FAIL  {name} (took {elapsed:.2f}s, budget {budget_seconds:g}s)")
        raise AssertionError(f"{name} exceeded its {budget_seconds:g}s budget: {elapsed:.2f}s")
    print(f"ACCEPTANCE PASS  {name} ({elapsed:.2f}s < {budget_seconds:g}s)")


def test_schema_structure_counts(schema, manifest):
    with gate("schema structure: bundled definition matches its manifest", 1.0):
        stats = schema_stats(schema)
        assert len(schema.areas) == 10
        assert stats.top_level_count == manifest["topLevelCount"]
        assert stats.sub_schema_count == manifest["subSchemaCount"]
        assert stats.sub_schema_field_count == manifest["subSchemaFieldCount"]
        assert stats.per_tier == manifest["perTier"]
        assert stats.per_area == manifest["perArea"]
        assert stats.per_provenance == manifest["perProvenance"]
        # manifest is itself cross-checked against the raw data file
        raw = json.loads(serialize_schema(schema))
        assert len(raw["elements"]) == manifest["topLevelCount"]
        raw_tiers = Counter(e["tier"] for e in raw["elements"])
        for sub in raw["subSchemas"]:
            raw_tiers.update(f["tier"] for f in sub["fields"])
        assert dict(raw_tiers) == manifest["perTier"]


def test_validator_single_removal(schema):
    with gate("validator: removing any one mandatory element costs conformance", 5.0):
        base = RecordGenerator(schema, seed=2024).record(complete=True)
        assert validate(base, schema).conformant
        mandatory = [el for el in schema.elements if el.tier == "mandatory"]
        assert mandatory
        for el in mandatory:
            record = copy.deepcopy(base)
            record.remove(el.id)
            report = validate(record, schema)
            violations = [f for f in report.findings if f.severity == "violation"]
            assert not report.conformant, el.id
            assert len(violations) == 1, el.id
            assert violations[0].constraint == "missingMandatory"
            assert violations[0].element_path == el.id
            record.values[el.id] = base.values[el.id]
            assert validate(record, schema).conformant, el.id


def test_dual_format_round_trip(schema):
    with gate("records: 500 random records survive JSON and Turtle round-trips", 30.0):
        gen = RecordGenerator(schema, seed=4711)
        for _ in range(500):
            record = gen.record()
            via_json = from_json(to_json(record, schema), schema)
            assert via_json.values == record.values
            assert via_json.schema_id == record.schema_id
            via_turtle = from_turtle(to_turtle(record, schema), schema)
            assert via_turtle.values == record.values
            assert via_turtle.schema_id == record.schema_id


def test_crosswalk_accounting_and_round_trip(schema):
    with gate("crosswalk: coverage accounting and bidirectional-core identity over 200 records", 10.0):
        to_codemeta = load_bundled_crosswalk("ersmeta-codemeta")
        to_cff = load_bundled_crosswalk("ersmeta-cff")
        back_walk = invert_crosswalk(to_codemeta)
        gen = RecordGenerator(schema, seed=515)
        for i in range(200):
            record = gen.record()
            crosswalk, fmt = (to_codemeta, "codemeta-json") if i % 2 == 0 else (to_cff, "cff-yaml-like")
            _, report = convert(record, crosswalk, fmt)
            mapped_sources = {s for s, _ in report.mapped}
            assert mapped_sources | set(report.dropped) == set(record.values)
            assert len(report.mapped) + len(report.dropped) == len(record.values)

            core = gen.record(element_ids=BIDIRECTIONAL_CORE, include_probability=0.7)
            document, _ = convert(core, to_codemeta, "codemeta-json")
            intermediate = parse_external(document, "codemeta-json", to_codemeta.target_schema)
            back_doc, _ = convert(intermediate, back_walk, "ersmeta")
            assert from_json(back_doc, schema).values == core.values


def test_extraction_golden(schema, fixtures_dir, golden_dir):
    with gate("extraction: fixture repository reproduces the reviewed golden record", 1.0):
        from ersmeta.forge import FixtureTransport, extract

        record, report = extract("https://github.com/acme/grid-sim",
                                 FixtureTransport(fixtures_dir), schema)
        golden = (golden_dir / "acme-grid-sim.metadata.json").read_text(encoding="utf-8")
        assert to_json(record, schema) == golden
        assert set(report.extracted) == set(record.values)


def test_completeness_oracle(schema):
    with gate("completeness: 100 random records match the brute-force tier counts", 5.0):
        gen = RecordGenerator(schema, seed=909)
        tier_of = {el.id: el.tier for el in schema.elements}
        area_of = {el.id: el.area for el in schema.elements}
        for _ in range(100):
            record = gen.record(include_probability=0.5)
            report = completeness(record, schema)
            filled_by_tier = Counter(tier_of[k] for k in record.values if k in tier_of)
            filled_by_area = Counter(area_of[k] for k in record.values if k in area_of)
            for tier, (filled, _) in report.per_tier.items():
                assert filled == filled_by_tier.get(tier, 0)
            for area, (filled, _) in report.per_area.items():
                assert filled == filled_by_area.get(area, 0)


def test_service_parity(schema, fixtures_dir, golden_dir):
    with gate("service: every endpoint byte-equals the library serialization", 10.0):
        app = create_app(schema=schema, fixtures_dir=fixtures_dir)
        corpus_docs = [
            {"name": "demo"},
            {"name": "demo", "keywords": ["a", "b"], "license": "MIT"},
            {"description": "no name"},
            json.loads((golden_dir / "acme-grid-sim.metadata.json").read_text(encoding="utf-8")),
        ]
        with TestClient(app) as client:
            assert client.get("/api/schema").text == serialize_schema(schema)

            extract_body = client.post(
                "/api/extract", json={"url": "https://github.com/acme/grid-sim"}
            )
            from ersmeta.forge import FixtureTransport, extract

            record, report = extract("https://github.com/acme/grid-sim",
                                     FixtureTransport(fixtures_dir), schema)
            assert extract_body.text == canonical_json({
                "record": json.loads(to_json(record, schema)),
                "extractionReport": report.to_payload(),
            })

            to_codemeta = load_bundled_crosswalk("ersmeta-codemeta")
            to_cff = load_bundled_crosswalk("ersmeta-cff")
            for doc in corpus_docs:
                parsed = from_payload(doc, schema, strict=False)
                body = {"record": doc}
                assert client.post("/api/validate", json=body).text == canonical_json(
                    validate(parsed, schema, strict=False).to_payload())
                assert client.post("/api/completeness", json=body).text == canonical_json(
                    completeness(parsed, schema).to_payload())
                for target, crosswalk in (("codemeta-json", to_codemeta), ("cff-yaml-like", to_cff)):
                    document, conv_report = convert(parsed, crosswalk, target)
                    assert client.post("/api/convert", json={**body, "target": target}).text == canonical_json(
                        {"document": document, "conversionReport": conv_report.to_payload()})
                assert client.post("/api/export", json=body).content == to_json(parsed, schema).encode("utf-8")
