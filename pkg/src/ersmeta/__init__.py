"""Schema-driven toolkit for energy research software metadata.

Load a schema, extract candidate metadata from code forges, validate and
score records, and exchange them as JSON, Turtle, CodeMeta, or citation
files.
"""

from .schema import (
    ElementDefinition,
    SchemaConsistencyError,
    SchemaDefinition,
    SchemaError,
    SchemaParseError,
    SchemaStats,
    SubSchema,
    Term,
    ThematicArea,
    Vocabulary,
    element_by_id,
    load_bundled_manifest,
    load_bundled_schema,
    load_schema,
    load_schema_file,
    resolve_term,
    schema_stats,
    serialize_schema,
)
from .record import (
    BooleanValue,
    DateValue,
    IntegerValue,
    IriValue,
    MetadataRecord,
    NestedValue,
    NumberValue,
    RecordError,
    RecordParseError,
    SerializationError,
    TermValue,
    TextValue,
    Value,
    from_json,
    from_payload,
    to_json,
)
from .turtle import (
    TripleDocument,
    TurtleParseError,
    UnsupportedConstructError,
    from_turtle,
    parse_turtle,
    to_turtle,
    write_turtle,
)
from .validator import (
    CompletenessReport,
    Finding,
    ValidationReport,
    completeness,
    quality_gate,
    validate,
)
from .crosswalk import (
    ConversionError,
    ConversionReport,
    Crosswalk,
    CrosswalkError,
    MappingRule,
    convert,
    convert_record,
    invert_crosswalk,
    load_bundled_crosswalk,
    load_crosswalk,
    parse_external,
)
from .forge import (
    ExtractionReport,
    FixtureTransport,
    ForgeError,
    ForgeRef,
    HttpTransport,
    RawForgeData,
    extract,
    fetch_raw,
    map_to_record,
    parse_repo_url,
)

__version__ = "0.1.0"
