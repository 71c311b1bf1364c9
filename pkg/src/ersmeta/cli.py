"""Command-line frontend: extraction, validation, scoring, conversion, serving.

Exit codes are stable: 0 success, 1 validation nonconformant, 2 usage
error, 3 I/O or transport error. Human-readable tables go to stdout;
machine output is available behind --json and is byte-identical to the
library serialization.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Optional

from . import forge
from .crosswalk import ConversionError, CrosswalkError, convert, load_bundled_crosswalk
from .record import RecordParseError, canonical_json, from_json, to_json
from .schema import SchemaDefinition, SchemaError, load_bundled_schema, load_schema_file
from .turtle import TurtleParseError, from_turtle
from .validator import completeness, validate

EXIT_OK = 0
EXIT_NONCONFORMANT = 1
EXIT_USAGE = 2
EXIT_IO = 3

SCHEMA_ENV = "ERSMETA_SCHEMA"


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OSError, SchemaError, RecordParseError, TurtleParseError,
            CrosswalkError, ConversionError, forge.ForgeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ersmeta",
        description="Create, validate, convert, and score energy research software metadata.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_extract = sub.add_parser("extract", help="extract candidate metadata from a repository URL")
    p_extract.add_argument("--url", required=True, help="GitHub or GitLab repository URL")
    p_extract.add_argument("--out", help="write the record here instead of stdout")
    p_extract.add_argument("--fixtures", help="replay recorded API responses from this directory")
    p_extract.add_argument("--schema", help="schema definition file (default: bundled)")
    p_extract.set_defaults(func=_cmd_extract)

    p_validate = sub.add_parser("validate", help="validate a record file against the schema")
    p_validate.add_argument("--in", dest="infile", required=True, help="record file")
    p_validate.add_argument("--format", choices=["json", "turtle"], default="json")
    p_validate.add_argument("--lax", action="store_true", help="tolerate unknown elements")
    p_validate.add_argument("--json", action="store_true", help="machine-readable report")
    p_validate.add_argument("--schema", help="schema definition file (default: bundled)")
    p_validate.set_defaults(func=_cmd_validate)

    p_score = sub.add_parser("score", help="report per-tier and per-area completeness")
    p_score.add_argument("--in", dest="infile", required=True, help="record file (JSON)")
    p_score.add_argument("--json", action="store_true", help="machine-readable report")
    p_score.add_argument("--schema", help="schema definition file (default: bundled)")
    p_score.set_defaults(func=_cmd_score)

    p_convert = sub.add_parser("convert", help="convert a record to another schema")
    p_convert.add_argument("--in", dest="infile", required=True, help="record file (JSON)")
    p_convert.add_argument("--to", dest="target", required=True, choices=["codemeta", "cff"])
    p_convert.add_argument("--out", help="write the converted document here instead of stdout")
    p_convert.add_argument("--schema", help="schema definition file (default: bundled)")
    p_convert.set_defaults(func=_cmd_convert)

    p_serve = sub.add_parser("serve", help="run the HTTP backend")
    p_serve.add_argument("--port", type=int, default=8420)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--schema", help="schema definition file (default: bundled)")
    p_serve.add_argument("--fixtures", help="serve extraction from recorded API responses")
    p_serve.add_argument("--allow-origin", default="*", help="CORS origin for the curation UI")
    p_serve.set_defaults(func=_cmd_serve)
    return parser


def _load_schema(args: argparse.Namespace) -> SchemaDefinition:
    path = getattr(args, "schema", None) or os.environ.get(SCHEMA_ENV)
    if path:
        return load_schema_file(path)
    return load_bundled_schema()


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _write_out(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _cmd_extract(args: argparse.Namespace) -> int:
    schema = _load_schema(args)
    transport: forge.Transport
    if args.fixtures:
        transport = forge.FixtureTransport(args.fixtures)
    else:
        transport = forge.HttpTransport()
    record, report = forge.extract(args.url, transport, schema)
    _write_out(to_json(record, schema), args.out)
    print(f"extracted {len(report.extracted)} element(s) from {args.url}", file=sys.stderr)
    for element_id, source in report.extracted.items():
        print(f"  {element_id}  <-  {source}", file=sys.stderr)
    for field_path, reason in report.skipped:
        print(f"  skipped {field_path}: {reason}", file=sys.stderr)
    return EXIT_OK


def _load_record(args: argparse.Namespace, schema: SchemaDefinition, record_format: str = "json"):
    text = _read(args.infile)
    strict = not getattr(args, "lax", False)
    if record_format == "turtle":
        return from_turtle(text, schema, strict=strict)
    return from_json(text, schema, strict=strict)


def _cmd_validate(args: argparse.Namespace) -> int:
    schema = _load_schema(args)
    record = _load_record(args, schema, args.format)
    report = validate(record, schema, strict=not args.lax)
    if args.json:
        sys.stdout.write(canonical_json(report.to_payload()))
    else:
        for f in report.findings:
            print(f"{f.severity.upper():9}  {f.constraint:20}  {f.element_path:30}  {f.message}")
        print(f"conformant: {'yes' if report.conformant else 'no'}")
    return EXIT_OK if report.conformant else EXIT_NONCONFORMANT


def _cmd_score(args: argparse.Namespace) -> int:
    schema = _load_schema(args)
    record = _load_record(args, schema)
    report = completeness(record, schema)
    if args.json:
        sys.stdout.write(canonical_json(report.to_payload()))
        return EXIT_OK
    print(f"{'tier':<14}{'filled':>8}{'total':>8}")
    for tier, (filled, total) in report.per_tier.items():
        print(f"{tier:<14}{filled:>8}{total:>8}")
    print()
    print(f"{'area':<14}{'filled':>8}{'total':>8}")
    for area, (filled, total) in report.per_area.items():
        print(f"{area:<14}{filled:>8}{total:>8}")
    print()
    print(f"mandatory complete: {'yes' if report.mandatory_complete else 'no'}")
    return EXIT_OK


def _cmd_convert(args: argparse.Namespace) -> int:
    schema = _load_schema(args)
    record = _load_record(args, schema)
    if args.target == "codemeta":
        crosswalk, target_format = load_bundled_crosswalk("ersmeta-codemeta"), "codemeta-json"
    else:
        crosswalk, target_format = load_bundled_crosswalk("ersmeta-cff"), "cff-yaml-like"
    document, report = convert(record, crosswalk, target_format)
    _write_out(document, args.out)
    print(f"mapped {len(report.mapped)}, dropped {len(report.dropped)}, "
          f"synthesized {len(report.synthesized)}", file=sys.stderr)
    for source in report.dropped:
        print(f"  dropped {source}", file=sys.stderr)
    return EXIT_OK


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    schema = _load_schema(args)
    app = create_app(schema=schema, fixtures_dir=args.fixtures, allow_origin=args.allow_origin)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
