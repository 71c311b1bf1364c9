import pytest

from ersmeta.record import MetadataRecord, NestedValue, RecordParseError, TextValue, IriValue
from ersmeta.turtle import (
    BlankNode,
    Iri,
    Literal,
    TurtleParseError,
    UnsupportedConstructError,
    from_turtle,
    parse_turtle,
    to_turtle,
    write_turtle,
)
from record_gen import RecordGenerator


def test_parse_minimal_document():
    doc = parse_turtle('@prefix s: <http://x/> .\n<http://a> s:p "v" .\n')
    assert doc.prefixes == {"s": "http://x/"}
    assert doc.triples == [(Iri("http://a"), Iri("http://x/p"), Literal("v"))]


def test_semicolon_shares_subject():
    doc = parse_turtle('@prefix s: <http://x/> . <http://a> s:p "v" ; s:q "w" .')
    assert len(doc.triples) == 2
    assert doc.triples[0][0] == doc.triples[1][0] == Iri("http://a")


def test_comma_object_list():
    doc = parse_turtle('@prefix s: <http://x/> . <http://a> s:p "v", "w" .')
    assert [t[2] for t in doc.triples] == [Literal("v"), Literal("w")]


def test_collections_are_unsupported_with_position():
    with pytest.raises(UnsupportedConstructError) as excinfo:
        parse_turtle('@prefix s: <http://x/> .\n<http://a> s:p ( "v" "w" ) .')
    assert excinfo.value.line == 2
    assert excinfo.value.column > 0


def test_base_is_unsupported():
    with pytest.raises(UnsupportedConstructError):
        parse_turtle("@base <http://x/> .")


def test_syntax_error_carries_position():
    with pytest.raises(TurtleParseError) as excinfo:
        parse_turtle('<http://a> <http://p> "unterminated .')
    assert excinfo.value.line == 1


def test_undeclared_prefix_is_an_error():
    with pytest.raises(TurtleParseError):
        parse_turtle('<http://a> s:p "v" .')


def test_typed_and_language_literals():
    text = '@prefix x: <http://www.w3.org/2001/XMLSchema#> .\n<http://a> <http://p> "3"^^x:integer, "hi"@en .'
    doc = parse_turtle(text)
    assert doc.triples[0][2] == Literal("3", datatype="http://www.w3.org/2001/XMLSchema#integer")
    assert doc.triples[1][2] == Literal("hi", lang="en")


def test_bare_numeric_and_boolean_literals():
    doc = parse_turtle("<http://a> <http://p> 3, 4.5, true .")
    datatypes = [t[2].datatype for t in doc.triples]
    assert datatypes == [
        "http://www.w3.org/2001/XMLSchema#integer",
        "http://www.w3.org/2001/XMLSchema#decimal",
        "http://www.w3.org/2001/XMLSchema#boolean",
    ]


def test_labeled_blank_nodes_keep_labels():
    doc = parse_turtle("_:me <http://p> _:you .")
    assert doc.triples == [(BlankNode("me"), Iri("http://p"), BlankNode("you"))]


def test_anonymous_blank_node_labels_do_not_collide():
    doc = parse_turtle('_:b0 <http://p> [ <http://q> "v" ] .')
    outer = [t for t in doc.triples if t[0] == BlankNode("b0")]
    generated = outer[0][2]
    assert isinstance(generated, BlankNode) and generated.label != "b0"


def test_string_escapes():
    doc = parse_turtle(r'<http://a> <http://p> "line\nbreak \"quoted\" back\\slash\ttab" .')
    assert doc.triples[0][2].lexical == 'line\nbreak "quoted" back\\slash\ttab'


def test_unicode_escapes():
    doc = parse_turtle(r'<http://a> <http://p> "café" .')
    assert doc.triples[0][2].lexical == "café"


def test_write_parse_preserves_triples_exactly():
    text = """@prefix s: <http://x/> .
@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .
<http://a> s:p "v" ; s:q "3"^^xsd:integer, "w"@en .
_:b1 s:p <http://a> .
<http://a> s:r _:b1 .
"""
    doc = parse_turtle(text)
    rewritten = write_turtle(doc)
    again = parse_turtle(rewritten)
    assert again.prefixes == doc.prefixes
    assert again.triples == doc.triples


def test_to_turtle_simple_record(schema):
    record = MetadataRecord(schema_id=schema.id).add("name", TextValue("demo"))
    text = to_turtle(record, schema)
    assert 'schema:name "demo"' in text
    assert text.startswith("@prefix ")
    assert "urn:ersmeta:record:ersmeta:" in text


def test_to_turtle_nested_person_is_a_blank_node(schema):
    record = MetadataRecord(schema_id=schema.id)
    record.add("author", NestedValue("person", {
        "givenName": [TextValue("Ada")], "familyName": [TextValue("Lovelace")],
    }))
    text = to_turtle(record, schema)
    assert '[ schema:givenName "Ada" ; schema:familyName "Lovelace" ]' in text


def test_to_turtle_empty_record_has_type_triple_only(schema):
    text = to_turtle(MetadataRecord(schema_id=schema.id), schema)
    doc = parse_turtle(text)
    assert len(doc.triples) == 1
    assert doc.triples[0][1] == Iri("http://www.w3.org/1999/02/22-rdf-syntax-ns#type")


def test_identifier_element_overrides_subject(schema):
    record = MetadataRecord(schema_id=schema.id)
    record.add("identifier", IriValue("https://doi.org/10.5281/zenodo.1234"))
    text = to_turtle(record, schema)
    assert "<https://doi.org/10.5281/zenodo.1234> a " in text
    assert "urn:ersmeta:record" not in text


def test_from_turtle_round_trip_generated(schema):
    gen = RecordGenerator(schema, seed=23)
    for _ in range(50):
        record = gen.record()
        back = from_turtle(to_turtle(record, schema), schema)
        assert back.values == record.values


def test_from_turtle_rejects_two_subjects(schema):
    text = '<http://a> <http://schema.org/name> "x" .\n<http://b> <http://schema.org/name> "y" .'
    with pytest.raises(RecordParseError) as excinfo:
        from_turtle(text, schema)
    assert "2" in str(excinfo.value)


def test_from_turtle_unknown_predicate_strict_vs_lax(schema):
    text = '<http://a> <http://example.org/unknown> "x" .'
    with pytest.raises(RecordParseError):
        from_turtle(text, schema)
    record = from_turtle(text, schema, strict=False)
    assert record.values == {}
    assert record.unknowns == {"http://example.org/unknown": "x"}


def test_turtle_output_is_deterministic(schema):
    gen1, gen2 = RecordGenerator(schema, seed=5), RecordGenerator(schema, seed=5)
    assert to_turtle(gen1.record(), schema) == to_turtle(gen2.record(), schema)
