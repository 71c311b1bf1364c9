"""Turtle subset: triple documents, a parser, writers, and the record mapping.

Supported grammar: ``@prefix`` declarations, IRIs (full and prefixed),
labeled and anonymous blank nodes, string literals with ``^^`` datatypes and
language tags, bare numeric/boolean literals, predicate lists (``;``) and
object lists (``,``), comments. Collections, quads, ``@base``, and long or
single-quoted strings are out of the subset and rejected with a position.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from typing import Optional, Union

from .record import (
    BooleanValue,
    DateValue,
    IntegerValue,
    IriValue,
    MetadataRecord,
    NestedValue,
    NumberValue,
    RecordParseError,
    SerializationError,
    TermValue,
    TextValue,
    Value,
    make_term,
)
from .schema import ElementDefinition, SchemaDefinition, SubSchema

import datetime as dt

XSD = "http://www.w3.org/2001/XMLSchema#"
RDF_TYPE = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type"
RECORD_TYPE_IRI = "https://w3id.org/ersmeta#SoftwareRecord"


class TurtleParseError(Exception):
    """Syntax problem, carrying 1-based line and column."""

    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        super().__init__(f"{message} (line {line}, column {column})")


class UnsupportedConstructError(TurtleParseError):
    """Valid Turtle, but outside the supported subset."""


@dataclass(frozen=True)
class Iri:
    value: str


@dataclass(frozen=True)
class BlankNode:
    label: str


@dataclass(frozen=True)
class Literal:
    lexical: str
    datatype: Optional[str] = None
    lang: Optional[str] = None


Node = Union[Iri, BlankNode]
Object = Union[Iri, BlankNode, Literal]
Triple = tuple[Node, Iri, Object]


@dataclass
class TripleDocument:
    prefixes: dict[str, str] = field(default_factory=dict)
    triples: list[Triple] = field(default_factory=list)


# ---------------------------------------------------------------------------
# Tokenizer
# ---------------------------------------------------------------------------

_PN_CHARS = re.compile(r"[A-Za-z0-9_\-]")
_ESCAPES = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}


@dataclass(frozen=True)
class _Token:
    kind: str
    value: str
    line: int
    column: int
    extra: Optional[str] = None  # datatype flavour for numbers


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def error(self, message: str, line: Optional[int] = None, col: Optional[int] = None) -> TurtleParseError:
        return TurtleParseError(message, line or self.line, col or self.col)

    def _advance(self, n: int = 1) -> None:
        for _ in range(n):
            if self.pos < len(self.text) and self.text[self.pos] == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
            self.pos += 1

    def _peek(self, offset: int = 0) -> str:
        i = self.pos + offset
        return self.text[i] if i < len(self.text) else ""

    def tokens(self) -> list[_Token]:
        out: list[_Token] = []
        while True:
            tok = self._next()
            out.append(tok)
            if tok.kind == "eof":
                return out

    def _next(self) -> _Token:
        self._skip_ws_and_comments()
        line, col = self.line, self.col
        ch = self._peek()
        if ch == "":
            return _Token("eof", "", line, col)
        if ch == "<":
            return self._iri(line, col)
        if ch == '"':
            return self._string(line, col)
        if ch == "'":
            raise UnsupportedConstructError("single-quoted string literals are not supported", line, col)
        if ch == "(" or ch == ")":
            raise UnsupportedConstructError("RDF collections are not supported", line, col)
        if ch == "{" or ch == "}":
            raise UnsupportedConstructError("graph blocks are not supported", line, col)
        if ch in ".;,[]":
            self._advance()
            kinds = {".": "dot", ";": "semicolon", ",": "comma", "[": "lbracket", "]": "rbracket"}
            return _Token(kinds[ch], ch, line, col)
        if ch == "^":
            if self._peek(1) == "^":
                self._advance(2)
                return _Token("carets", "^^", line, col)
            raise self.error("stray '^'", line, col)
        if ch == "@":
            return self._at_keyword(line, col)
        if ch == "_" and self._peek(1) == ":":
            return self._blank(line, col)
        if ch.isdigit() or (ch in "+-" and (self._peek(1).isdigit() or self._peek(1) == ".")):
            return self._number(line, col)
        if ch == "." and self._peek(1).isdigit():
            return self._number(line, col)
        return self._name(line, col)

    def _skip_ws_and_comments(self) -> None:
        while True:
            ch = self._peek()
            if ch and ch in " \t\r\n":
                self._advance()
            elif ch == "#":
                while self._peek() not in ("", "\n"):
                    self._advance()
            else:
                return

    def _iri(self, line: int, col: int) -> _Token:
        self._advance()  # <
        buf = []
        while True:
            ch = self._peek()
            if ch == "":
                raise self.error("unterminated IRI", line, col)
            if ch == ">":
                self._advance()
                return _Token("iri", "".join(buf), line, col)
            if ch in " \n\t\r":
                raise self.error("whitespace inside IRI", self.line, self.col)
            buf.append(ch)
            self._advance()

    def _string(self, line: int, col: int) -> _Token:
        if self._peek(1) == '"' and self._peek(2) == '"':
            raise UnsupportedConstructError("long string literals are not supported", line, col)
        self._advance()  # opening quote
        buf = []
        while True:
            ch = self._peek()
            if ch == "":
                raise self.error("unterminated string literal", line, col)
            if ch == "\n":
                raise self.error("raw newline inside string literal", self.line, self.col)
            if ch == '"':
                self._advance()
                return _Token("string", "".join(buf), line, col)
            if ch == "\\":
                self._advance()
                esc = self._peek()
                if esc in _ESCAPES:
                    buf.append(_ESCAPES[esc])
                    self._advance()
                elif esc == "u" or esc == "U":
                    width = 4 if esc == "u" else 8
                    self._advance()
                    hexdigits = self.text[self.pos:self.pos + width]
                    if len(hexdigits) < width or any(c not in "0123456789abcdefABCDEF" for c in hexdigits):
                        raise self.error("malformed unicode escape", self.line, self.col)
                    buf.append(chr(int(hexdigits, 16)))
                    self._advance(width)
                else:
                    raise self.error(f"unknown escape sequence \\{esc}", self.line, self.col)
            else:
                buf.append(ch)
                self._advance()

    def _at_keyword(self, line: int, col: int) -> _Token:
        m = re.match(r"@[A-Za-z][A-Za-z0-9\-]*", self.text[self.pos:])
        if not m:
            raise self.error("stray '@'", line, col)
        word = m.group(0)
        if word == "@prefix":
            self._advance(len(word))
            return _Token("prefix_kw", word, line, col)
        if word == "@base":
            raise UnsupportedConstructError("@base and relative IRIs are not supported", line, col)
        # language tag
        self._advance(len(word))
        return _Token("langtag", word[1:], line, col)

    def _blank(self, line: int, col: int) -> _Token:
        self._advance(2)  # _:
        buf = []
        while _PN_CHARS.match(self._peek() or " "):
            buf.append(self._peek())
            self._advance()
        if not buf:
            raise self.error("blank node label expected after '_:'", line, col)
        return _Token("blank", "".join(buf), line, col)

    def _number(self, line: int, col: int) -> _Token:
        m = re.match(r"[+-]?(\d+\.\d*([eE][+-]?\d+)?|\.?\d+([eE][+-]?\d+)?|\d+)", self.text[self.pos:])
        if not m:
            raise self.error("malformed numeric literal", line, col)
        lexical = m.group(0)
        self._advance(len(lexical))
        if "e" in lexical.lower():
            flavour = XSD + "double"
        elif "." in lexical:
            flavour = XSD + "decimal"
        else:
            flavour = XSD + "integer"
        return _Token("number", lexical, line, col, extra=flavour)

    def _name(self, line: int, col: int) -> _Token:
        # bare keyword, boolean, or prefixed name
        m = re.match(r"[A-Za-z_][A-Za-z0-9_\-]*", self.text[self.pos:])
        head = m.group(0) if m else ""
        after = self._peek(len(head))
        if after != ":":
            if head == "a":
                self._advance(1)
                return _Token("a", "a", line, col)
            if head in ("true", "false"):
                self._advance(len(head))
                return _Token("boolean", head, line, col)
            raise self.error(f"unexpected input {self._peek()!r}", line, col)
        self._advance(len(head) + 1)  # prefix + colon
        local = self._pn_local()
        return _Token("pname", f"{head}:{local}", line, col)

    def _pn_local(self) -> str:
        buf = []
        while True:
            ch = self._peek()
            if _PN_CHARS.match(ch or " "):
                buf.append(ch)
                self._advance()
            elif ch == "." and _PN_CHARS.match(self._peek(1) or " "):
                # dots are allowed inside a local name but never at its end
                buf.append(ch)
                self._advance()
            else:
                return "".join(buf)


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def parse_turtle(text: str) -> TripleDocument:
    """Parse the supported Turtle subset into a triple document.

    Blank node labels from the input are preserved; anonymous nodes get
    fresh labels that do not collide with any label in the input.
    """
    return _Parser(text).parse()


class _Parser:
    def __init__(self, text: str):
        self.tokens = _Lexer(text).tokens()
        self.index = 0
        self.doc = TripleDocument()
        self._used_labels = set(re.findall(r"_:([A-Za-z0-9_\-]+)", text))
        self._gen_counter = 0

    def _peek(self) -> _Token:
        return self.tokens[self.index]

    def _next(self) -> _Token:
        tok = self.tokens[self.index]
        self.index += 1
        return tok

    def _expect(self, kind: str, what: str) -> _Token:
        tok = self._next()
        if tok.kind != kind:
            raise TurtleParseError(f"expected {what}, found {tok.value!r}", tok.line, tok.column)
        return tok

    def _fresh_blank(self) -> BlankNode:
        while True:
            label = f"b{self._gen_counter}"
            self._gen_counter += 1
            if label not in self._used_labels:
                self._used_labels.add(label)
                return BlankNode(label)

    def parse(self) -> TripleDocument:
        while True:
            tok = self._peek()
            if tok.kind == "eof":
                return self.doc
            if tok.kind == "prefix_kw":
                self._prefix_decl()
            else:
                self._triples()

    def _prefix_decl(self) -> None:
        self._next()  # @prefix
        tok = self._expect("pname", "prefix name")
        prefix, _, local = tok.value.partition(":")
        if local:
            raise TurtleParseError("prefix declaration must end with ':'", tok.line, tok.column)
        iri = self._expect("iri", "IRI")
        self._expect("dot", "'.'")
        self.doc.prefixes[prefix] = iri.value

    def _triples(self) -> None:
        tok = self._peek()
        if tok.kind == "lbracket":
            subject = self._blank_property_list()
            if self._peek().kind != "dot":
                self._predicate_object_list(subject)
        else:
            subject = self._subject()
            self._predicate_object_list(subject)
        self._expect("dot", "'.'")

    def _subject(self) -> Node:
        tok = self._next()
        if tok.kind == "iri":
            return Iri(tok.value)
        if tok.kind == "pname":
            return Iri(self._resolve_pname(tok))
        if tok.kind == "blank":
            return BlankNode(tok.value)
        raise TurtleParseError(f"expected a subject, found {tok.value!r}", tok.line, tok.column)

    def _predicate_object_list(self, subject: Node) -> None:
        while True:
            predicate = self._verb()
            self._object_list(subject, predicate)
            if self._peek().kind == "semicolon":
                while self._peek().kind == "semicolon":
                    self._next()
                if self._peek().kind in ("dot", "rbracket"):
                    return  # trailing ';'
                continue
            return

    def _verb(self) -> Iri:
        tok = self._next()
        if tok.kind == "a":
            return Iri(RDF_TYPE)
        if tok.kind == "iri":
            return Iri(tok.value)
        if tok.kind == "pname":
            return Iri(self._resolve_pname(tok))
        raise TurtleParseError(f"expected a predicate, found {tok.value!r}", tok.line, tok.column)

    def _object_list(self, subject: Node, predicate: Iri) -> None:
        while True:
            obj = self._object()
            self.doc.triples.append((subject, predicate, obj))
            if self._peek().kind == "comma":
                self._next()
                continue
            return

    def _object(self) -> Object:
        tok = self._peek()
        if tok.kind == "lbracket":
            return self._blank_property_list()
        tok = self._next()
        if tok.kind == "iri":
            return Iri(tok.value)
        if tok.kind == "pname":
            return Iri(self._resolve_pname(tok))
        if tok.kind == "blank":
            return BlankNode(tok.value)
        if tok.kind == "string":
            return self._literal_tail(tok.value)
        if tok.kind == "number":
            return Literal(tok.value, datatype=tok.extra)
        if tok.kind == "boolean":
            return Literal(tok.value, datatype=XSD + "boolean")
        raise TurtleParseError(f"expected an object, found {tok.value!r}", tok.line, tok.column)

    def _literal_tail(self, lexical: str) -> Literal:
        tok = self._peek()
        if tok.kind == "langtag":
            self._next()
            return Literal(lexical, lang=tok.value)
        if tok.kind == "carets":
            self._next()
            dtok = self._next()
            if dtok.kind == "iri":
                return Literal(lexical, datatype=dtok.value)
            if dtok.kind == "pname":
                return Literal(lexical, datatype=self._resolve_pname(dtok))
            raise TurtleParseError("expected a datatype IRI after '^^'", dtok.line, dtok.column)
        return Literal(lexical)

    def _blank_property_list(self) -> BlankNode:
        open_tok = self._expect("lbracket", "'['")
        node = self._fresh_blank()
        if self._peek().kind == "rbracket":
            self._next()
            return node
        self._predicate_object_list(node)
        tok = self._next()
        if tok.kind != "rbracket":
            raise TurtleParseError("unterminated blank node property list", open_tok.line, open_tok.column)
        return node

    def _resolve_pname(self, tok: _Token) -> str:
        prefix, _, local = tok.value.partition(":")
        base = self.doc.prefixes.get(prefix)
        if base is None:
            raise TurtleParseError(f"undeclared prefix {prefix + ':'!r}", tok.line, tok.column)
        return base + local


# ---------------------------------------------------------------------------
# Generic writer (label-faithful: parse(write(doc)) reproduces doc exactly)
# ---------------------------------------------------------------------------

def write_turtle(doc: TripleDocument) -> str:
    lines = [f"@prefix {p}: <{iri}> ." for p, iri in doc.prefixes.items()]
    if lines and doc.triples:
        lines.append("")

    groups: list[tuple[Node, list[tuple[Iri, list[Object]]]]] = []
    for subject, predicate, obj in doc.triples:
        if not groups or groups[-1][0] != subject:
            groups.append((subject, []))
        preds = groups[-1][1]
        if not preds or preds[-1][0] != predicate:
            preds.append((predicate, []))
        preds[-1][1].append(obj)

    for subject, preds in groups:
        subj_text = _node_text(subject, doc.prefixes)
        for i, (predicate, objects) in enumerate(preds):
            pred_text = "a" if predicate.value == RDF_TYPE else _node_text(predicate, doc.prefixes)
            obj_text = ", ".join(_object_text(o, doc.prefixes) for o in objects)
            head = f"{subj_text} " if i == 0 else "  "
            tail = " ." if i == len(preds) - 1 else " ;"
            lines.append(f"{head}{pred_text} {obj_text}{tail}")
    return "\n".join(lines) + "\n"


def _compact(iri: str, prefixes: dict[str, str]) -> Optional[str]:
    for prefix, base in prefixes.items():
        if iri.startswith(base):
            local = iri[len(base):]
            if re.fullmatch(r"[A-Za-z_][A-Za-z0-9_\-]*", local):
                return f"{prefix}:{local}"
    return None


def _node_text(node: Node, prefixes: dict[str, str]) -> str:
    if isinstance(node, Iri):
        return _compact(node.value, prefixes) or f"<{node.value}>"
    return f"_:{node.label}"


def _escape(text: str) -> str:
    return (
        text.replace("\\", "\\\\")
        .replace('"', '\\"')
        .replace("\n", "\\n")
        .replace("\r", "\\r")
        .replace("\t", "\\t")
        .replace("\b", "\\b")
        .replace("\f", "\\f")
    )


def _object_text(obj: Object, prefixes: dict[str, str]) -> str:
    if isinstance(obj, Literal):
        base = f'"{_escape(obj.lexical)}"'
        if obj.lang:
            return f"{base}@{obj.lang}"
        if obj.datatype:
            dt_text = _compact(obj.datatype, prefixes) or f"<{obj.datatype}>"
            return f"{base}^^{dt_text}"
        return base
    return _node_text(obj, prefixes)


# ---------------------------------------------------------------------------
# Record mapping
# ---------------------------------------------------------------------------

def record_subject_iri(record: MetadataRecord, schema: SchemaDefinition) -> str:
    """Deterministic subject for a record: an explicit `identifier` IRI value
    when present, else a URN derived from the schema id and the name element."""
    ident = record.first("identifier")
    if isinstance(ident, IriValue):
        return ident.iri
    name = record.first("name")
    name_text = name.content if isinstance(name, TextValue) else ""
    digest = hashlib.sha256(name_text.encode("utf-8")).hexdigest()[:16]
    return f"urn:ersmeta:record:{record.schema_id}:{digest}"


def to_turtle(record: MetadataRecord, schema: SchemaDefinition) -> str:
    """Render a record as Turtle: one subject, nested values as blank nodes,
    prefixes for every namespace used, deterministic schema order."""
    known = {el.id for el in schema.elements}
    for element_id in record.values:
        if element_id not in known:
            raise SerializationError(f"record uses element {element_id!r} not declared by schema {schema.id!r}")

    body: list[str] = []
    used_iris: list[str] = [RECORD_TYPE_IRI]
    needs_xsd = False

    def render_value(el: ElementDefinition, value: Value) -> str:
        nonlocal needs_xsd
        if isinstance(value, TextValue):
            return f'"{_escape(value.content)}"'
        if isinstance(value, IriValue):
            return f"<{value.iri}>"
        if isinstance(value, DateValue):
            needs_xsd = True
            return f'"{value.value.isoformat()}"^^xsd:date'
        if isinstance(value, IntegerValue):
            needs_xsd = True
            return f'"{value.value}"^^xsd:integer'
        if isinstance(value, NumberValue):
            needs_xsd = True
            return f'"{value.value!r}"^^xsd:double'
        if isinstance(value, BooleanValue):
            needs_xsd = True
            return f'"{"true" if value.value else "false"}"^^xsd:boolean'
        if isinstance(value, TermValue):
            if value.iri:
                return f"<{value.iri}>"
            return f'"{_escape(value.label)}"'
        if isinstance(value, NestedValue):
            return render_nested(el, value)
        raise SerializationError(f"unsupported value object {value!r}")

    def render_nested(el: ElementDefinition, value: NestedValue) -> str:
        sub = schema.sub_schema_by_id(value.sub_schema)
        if sub is None:
            raise SerializationError(
                f"element {el.id!r} holds a nested value for unknown sub-schema {value.sub_schema!r}"
            )
        for fid in value.fields:
            if sub.field_by_id(fid) is None:
                raise SerializationError(
                    f"nested value under {el.id!r} uses field {fid!r} not declared by sub-schema {sub.id!r}"
                )
        parts = []
        for f in sub.fields:
            vals = value.fields.get(f.id)
            if not vals:
                continue
            if not f.multi_valued and len(vals) > 1:
                raise SerializationError(
                    f"field {sub.id}.{f.id} is single-valued but the record holds {len(vals)} values"
                )
            iri = schema.element_iri(f)
            used_iris.append(iri)
            rendered = ", ".join(render_value(f, v) for v in vals)
            parts.append(f"{_pred(iri)} {rendered}")
        if not parts:
            return "[]"
        return "[ " + " ; ".join(parts) + " ]"

    prefix_bases: dict[str, str] = dict(schema.namespaces)

    def _pred(iri: str) -> str:
        return _compact(iri, prefix_bases) or f"<{iri}>"

    for el in schema.elements:
        vals = record.values.get(el.id)
        if not vals:
            continue
        if not el.multi_valued and len(vals) > 1:
            raise SerializationError(
                f"element {el.id!r} is single-valued but the record holds {len(vals)} values"
            )
        iri = schema.element_iri(el)
        used_iris.append(iri)
        rendered = ", ".join(render_value(el, v) for v in vals)
        body.append(f"{_pred(iri)} {rendered}")

    used_prefixes = []
    for prefix, base in prefix_bases.items():
        if prefix == "xsd":
            continue
        if any(iri.startswith(base) and _compact(iri, {prefix: base}) for iri in used_iris):
            used_prefixes.append((prefix, base))
    if needs_xsd:
        used_prefixes.append(("xsd", XSD))

    lines = [f"@prefix {p}: <{base}> ." for p, base in used_prefixes]
    lines.append("")
    subject = record_subject_iri(record, schema)
    type_text = _compact(RECORD_TYPE_IRI, prefix_bases) or f"<{RECORD_TYPE_IRI}>"
    if body:
        lines.append(f"<{subject}> a {type_text} ;")
        for i, part in enumerate(body):
            tail = " ." if i == len(body) - 1 else " ;"
            lines.append(f"  {part}{tail}")
    else:
        lines.append(f"<{subject}> a {type_text} .")
    return "\n".join(lines) + "\n"


def from_turtle(text: str, schema: SchemaDefinition, strict: bool = True) -> MetadataRecord:
    """Rebuild a record from Turtle produced by :func:`to_turtle`.

    Requires exactly one non-blank subject. Unknown predicates follow the
    strictness flag; values must match the declared valueType. Vocabulary
    terms are canonicalized through the element's vocabulary.
    """
    doc = parse_turtle(text)
    subjects = []
    for s, _, _ in doc.triples:
        if isinstance(s, Iri) and s not in subjects:
            subjects.append(s)
    if len(subjects) != 1:
        raise RecordParseError(f"expected exactly one record subject, found {len(subjects)}")
    subject = subjects[0]

    bnode_triples: dict[str, list[tuple[Iri, Object]]] = {}
    for s, p, o in doc.triples:
        if isinstance(s, BlankNode):
            bnode_triples.setdefault(s.label, []).append((p, o))

    element_by_iri = {schema.element_iri(el): el for el in schema.elements}
    record = MetadataRecord(schema_id=schema.id)

    for s, p, o in doc.triples:
        if s != subject:
            continue
        if p.value == RDF_TYPE:
            continue
        el = element_by_iri.get(p.value)
        if el is None:
            if strict:
                raise RecordParseError(f"predicate {p.value!r} is not mapped by schema {schema.id!r}")
            record.unknowns[p.value] = _plain(o)
            continue
        value = _value_from_object(el, o, schema, bnode_triples, strict, record.unknowns, el.id)
        existing = record.values.setdefault(el.id, [])
        if not el.multi_valued and existing:
            raise RecordParseError(f"element {el.id!r} is single-valued but the document repeats it")
        existing.append(value)
    return record


def _plain(obj: Object) -> str:
    if isinstance(obj, Literal):
        return obj.lexical
    if isinstance(obj, Iri):
        return obj.value
    return f"_:{obj.label}"


def _value_from_object(
    el: ElementDefinition,
    obj: Object,
    schema: SchemaDefinition,
    bnode_triples: dict[str, list[tuple[Iri, Object]]],
    strict: bool,
    unknowns: dict,
    path: str,
) -> Value:
    vt = el.value_type
    if vt == "text":
        if isinstance(obj, Literal) and obj.datatype in (None, XSD + "string"):
            return TextValue(obj.lexical)
        raise RecordParseError(f"element {path!r} expects a plain literal")
    if vt == "iri":
        if isinstance(obj, Iri):
            return IriValue(obj.value)
        raise RecordParseError(f"element {path!r} expects an IRI object")
    if vt == "date":
        if isinstance(obj, Literal) and obj.datatype == XSD + "date":
            try:
                return DateValue(dt.date.fromisoformat(obj.lexical))
            except ValueError as exc:
                raise RecordParseError(f"element {path!r}: {obj.lexical!r} is not an ISO-8601 date") from exc
        raise RecordParseError(f"element {path!r} expects an xsd:date literal")
    if vt == "integer":
        if isinstance(obj, Literal) and obj.datatype == XSD + "integer":
            return IntegerValue(int(obj.lexical))
        raise RecordParseError(f"element {path!r} expects an xsd:integer literal")
    if vt == "number":
        if isinstance(obj, Literal) and obj.datatype in (XSD + "double", XSD + "decimal", XSD + "integer"):
            return NumberValue(float(obj.lexical))
        raise RecordParseError(f"element {path!r} expects a numeric literal")
    if vt == "boolean":
        if isinstance(obj, Literal) and obj.datatype == XSD + "boolean":
            return BooleanValue(obj.lexical == "true")
        raise RecordParseError(f"element {path!r} expects an xsd:boolean literal")
    if vt == "vocabularyTerm":
        if isinstance(obj, Iri):
            return make_term(schema, el, obj.value)
        if isinstance(obj, Literal) and obj.datatype in (None, XSD + "string"):
            return make_term(schema, el, obj.lexical)
        raise RecordParseError(f"element {path!r} expects a term label or IRI")
    sub_id = el.sub_schema_ref
    if sub_id is not None:
        if not isinstance(obj, BlankNode):
            raise RecordParseError(f"element {path!r} expects a blank node")
        sub = schema.sub_schema_by_id(sub_id)
        if sub is None:
            raise RecordParseError(f"element {path!r} references unknown sub-schema {sub_id!r}")
        return _nested_from_bnode(sub, obj, schema, bnode_triples, strict, unknowns, path)
    raise RecordParseError(f"element {path!r} has unsupported valueType {vt!r}")


def _nested_from_bnode(
    sub: SubSchema,
    node: BlankNode,
    schema: SchemaDefinition,
    bnode_triples: dict[str, list[tuple[Iri, Object]]],
    strict: bool,
    unknowns: dict,
    path: str,
) -> NestedValue:
    field_by_iri = {schema.element_iri(f): f for f in sub.fields}
    fields: dict[str, list[Value]] = {}
    for p, o in bnode_triples.get(node.label, []):
        f = field_by_iri.get(p.value)
        if f is None:
            if strict:
                raise RecordParseError(
                    f"predicate {p.value!r} under {path!r} is not a field of sub-schema {sub.id!r}"
                )
            unknowns[f"{path}.{p.value}"] = _plain(o)
            continue
        value = _value_from_object(f, o, schema, bnode_triples, strict, unknowns, f"{path}.{f.id}")
        existing = fields.setdefault(f.id, [])
        if not f.multi_valued and existing:
            raise RecordParseError(f"field {path}.{f.id} is single-valued but the document repeats it")
        existing.append(value)
    return NestedValue(sub_schema=sub.id, fields=fields)
