import json

import pytest

from ersmeta.forge import (
    AuthError,
    FixtureTransport,
    ForgeRef,
    MalformedUrlError,
    NotFoundError,
    RateLimitError,
    TransportResponse,
    UnsupportedHostError,
    extract,
    fetch_raw,
    map_to_record,
    parse_repo_url,
)
from ersmeta.record import TextValue, to_json


class StubTransport:
    """Programmable transport for error-path tests."""

    def __init__(self, responses):
        self.responses = responses  # exact URL path -> TransportResponse
        self.calls = []

    def get(self, url):
        from urllib.parse import urlparse

        self.calls.append(url)
        path = urlparse(url).path
        if path in self.responses:
            return self.responses[path]
        return TransportResponse(status=404, headers={}, body={"message": "Not Found"})


# ---------------------------------------------------------------------------
# URL parsing
# ---------------------------------------------------------------------------

def test_parse_github_url():
    ref = parse_repo_url("https://github.com/acme/grid-sim")
    assert ref == ForgeRef(forge="github", host="github.com", owner="acme", repo="grid-sim")


def test_parse_gitlab_nested_groups():
    ref = parse_repo_url("https://gitlab.com/a/b/c")
    assert ref == ForgeRef(forge="gitlab", host="gitlab.com", owner="a/b", repo="c")


def test_parse_self_hosted_gitlab():
    ref = parse_repo_url("https://gitlab.energy-institute.example/sims/grid")
    assert ref.forge == "gitlab"
    assert ref.host == "gitlab.energy-institute.example"


def test_unsupported_host():
    with pytest.raises(UnsupportedHostError):
        parse_repo_url("https://bitbucket.org/x/y")


def test_strip_git_suffix_and_trailing_slash():
    assert parse_repo_url("https://github.com/acme/grid-sim.git").repo == "grid-sim"
    assert parse_repo_url("https://github.com/acme/grid-sim/").repo == "grid-sim"


def test_strip_tree_and_blob_suffixes():
    assert parse_repo_url("https://github.com/acme/grid-sim/tree/main/docs").repo == "grid-sim"
    assert parse_repo_url("https://github.com/acme/grid-sim/blob/main/README.md").repo == "grid-sim"
    assert parse_repo_url("https://gitlab.com/a/b/-/tree/main").owner == "a"


def test_scheme_is_optional():
    assert parse_repo_url("github.com/acme/grid-sim").forge == "github"


def test_malformed_urls():
    with pytest.raises(MalformedUrlError):
        parse_repo_url("https://github.com/acme")
    with pytest.raises(MalformedUrlError):
        parse_repo_url("")


# ---------------------------------------------------------------------------
# Fetching
# ---------------------------------------------------------------------------

def test_fixture_fetch_has_expected_topics(fixtures_dir):
    ref = parse_repo_url("https://github.com/acme/grid-sim")
    raw = fetch_raw(ref, FixtureTransport(fixtures_dir))
    assert raw.topics == ["energy", "simulation"]
    assert raw.repo_info["name"] == "grid-sim"
    assert raw.license_info["license"]["spdx_id"] == "MIT"
    assert raw.latest_release["tag_name"] == "v1.4.2"
    assert [c["login"] for c in raw.contributors] == ["avasquez", "jkleinmann", "grid-sim-bot"]


def test_missing_release_is_tolerated():
    repo = {"name": "x", "html_url": "https://github.com/o/x", "topics": []}
    transport = StubTransport({
        "/repos/o/x/topics": TransportResponse(200, {}, {"names": []}),
        "/repos/o/x": TransportResponse(200, {}, repo),
    })
    raw = fetch_raw(ForgeRef("github", "github.com", "o", "x"), transport)
    assert raw.latest_release is None
    assert ("latestRelease", "absent") in raw.notes


def test_repo_not_found():
    transport = StubTransport({})
    with pytest.raises(NotFoundError):
        fetch_raw(ForgeRef("github", "github.com", "o", "gone"), transport)


def test_rate_limit_error_carries_retry_after():
    transport = StubTransport({
        "/repos/o/x": TransportResponse(429, {"Retry-After": "42"}, {}),
    })
    with pytest.raises(RateLimitError) as excinfo:
        fetch_raw(ForgeRef("github", "github.com", "o", "x"), transport)
    assert excinfo.value.retry_after == 42.0


def test_github_secondary_rate_limit_via_403():
    transport = StubTransport({
        "/repos/o/x": TransportResponse(403, {"X-RateLimit-Remaining": "0", "Retry-After": "9"}, {}),
    })
    with pytest.raises(RateLimitError):
        fetch_raw(ForgeRef("github", "github.com", "o", "x"), transport)


def test_auth_error():
    transport = StubTransport({"/repos/o/x": TransportResponse(401, {}, {})})
    with pytest.raises(AuthError):
        fetch_raw(ForgeRef("github", "github.com", "o", "x"), transport)


def test_gitlab_fetch_paths(fixtures_dir):
    repo = {"name": "grid", "web_url": "https://gitlab.com/sims/grid",
            "topics": ["energy"], "license": {"key": "MIT"}}
    transport = StubTransport({
        "/api/v4/projects/sims%2Fgrid/releases": TransportResponse(200, {}, [{"tag_name": "2.0"}]),
        "/api/v4/projects/sims%2Fgrid/members": TransportResponse(200, {}, [{"name": "Sam Gridd", "username": "sgridd"}]),
        "/api/v4/projects/sims%2Fgrid": TransportResponse(200, {}, repo),
    })
    raw = fetch_raw(ForgeRef("gitlab", "gitlab.com", "sims", "grid"), transport)
    assert raw.topics == ["energy"]
    assert raw.latest_release == {"tag_name": "2.0"}
    assert raw.contributors[0]["username"] == "sgridd"


# ---------------------------------------------------------------------------
# Mapping
# ---------------------------------------------------------------------------

def test_mapping_attribution(schema, fixtures_dir):
    ref = parse_repo_url("https://github.com/acme/grid-sim")
    raw = fetch_raw(ref, FixtureTransport(fixtures_dir))
    record, report = map_to_record(raw, schema)
    assert record.values["name"] == [TextValue("grid-sim")]
    assert report.extracted["name"] == "repoInfo.name"
    assert record.values["keywords"] == [TextValue("energy"), TextValue("simulation")]
    assert [v.fields["name"][0].content for v in record.values["author"]] == [
        "avasquez", "jkleinmann", "grid-sim-bot",
    ]


def test_attribution_covers_every_extracted_element(schema, fixtures_dir):
    record, report = extract("https://github.com/acme/grid-sim",
                             FixtureTransport(fixtures_dir), schema)
    assert set(record.values) == set(report.extracted)


def test_absent_license_goes_to_skipped(schema):
    from ersmeta.forge import RawForgeData

    raw = RawForgeData(forge="github", repo_info={"name": "x", "html_url": "https://github.com/o/x"})
    record, report = map_to_record(raw, schema)
    assert "license" not in record.values
    assert ("licenseInfo.license.spdx_id", "absent") in report.skipped


def test_extracted_values_are_verbatim_copies(schema, fixtures_dir):
    ref = parse_repo_url("https://github.com/acme/grid-sim")
    raw = fetch_raw(ref, FixtureTransport(fixtures_dir))
    record, _ = map_to_record(raw, schema)
    assert record.values["description"][0].content == raw.repo_info["description"]
    assert record.values["version"][0].content == raw.latest_release["tag_name"]
    assert record.values["codeRepository"][0].iri == raw.repo_info["html_url"]


# ---------------------------------------------------------------------------
# End to end
# ---------------------------------------------------------------------------

def test_extract_matches_golden_byte_for_byte(schema, fixtures_dir, golden_dir):
    record, report = extract("https://github.com/acme/grid-sim",
                             FixtureTransport(fixtures_dir), schema)
    golden = (golden_dir / "acme-grid-sim.metadata.json").read_text(encoding="utf-8")
    assert to_json(record, schema) == golden
    golden_report = json.loads((golden_dir / "acme-grid-sim.report.json").read_text(encoding="utf-8"))
    assert report.to_payload() == golden_report


def test_unsupported_url_fails_before_any_transport_call(schema):
    transport = StubTransport({})
    with pytest.raises(UnsupportedHostError):
        extract("https://bitbucket.org/x/y", transport, schema)
    assert transport.calls == []


def test_rate_limited_extraction_surfaces_retry_after(schema):
    transport = StubTransport({
        "/repos/o/x": TransportResponse(429, {"Retry-After": "120"}, {}),
    })
    with pytest.raises(RateLimitError) as excinfo:
        extract("https://github.com/o/x", transport, schema)
    assert excinfo.value.retry_after == 120.0
