"""Candidate metadata extraction from code-forge APIs.

A small transport abstraction separates the HTTP plumbing from the
extraction logic, so tests and demos run fully offline against recorded
fixture directories. The forge-field-to-element mapping lives in a data
file and every produced element is attributed to its source field.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, Protocol
from urllib.parse import unquote, urlparse, quote

from .record import IriValue, MetadataRecord, NestedValue, TextValue
from .schema import SchemaDefinition

GITHUB_TOKEN_ENV = "ERSMETA_GITHUB_TOKEN"
GITLAB_TOKEN_ENV = "ERSMETA_GITLAB_TOKEN"

_MAPPING_PATH = Path(__file__).parent / "data" / "forge_mapping.json"
BUNDLED_FIXTURES_DIR = Path(__file__).parent / "data" / "fixtures"


class ForgeError(Exception):
    """Base class for extraction failures."""


class MalformedUrlError(ForgeError):
    pass


class UnsupportedHostError(ForgeError):
    pass


class NotFoundError(ForgeError):
    pass


class AuthError(ForgeError):
    pass


class RateLimitError(ForgeError):
    def __init__(self, message: str, retry_after: Optional[float] = None):
        self.retry_after = retry_after
        super().__init__(message)


class TransportError(ForgeError):
    pass


@dataclass(frozen=True)
class ForgeRef:
    forge: str  # "github" | "gitlab"
    host: str
    owner: str
    repo: str


@dataclass
class RawForgeData:
    """Verbatim API payloads, normalized into named buckets for auditability."""

    forge: str
    repo_info: dict
    license_info: Optional[dict] = None
    topics: list[str] = field(default_factory=list)
    latest_release: Optional[dict] = None
    contributors: list[dict] = field(default_factory=list)
    notes: list[tuple[str, str]] = field(default_factory=list)


@dataclass
class ExtractionReport:
    extracted: dict[str, str] = field(default_factory=dict)  # element id -> source field path
    skipped: list[tuple[str, str]] = field(default_factory=list)  # (api field, reason)

    def to_payload(self) -> dict:
        return {
            "extracted": dict(self.extracted),
            "skipped": [[f, r] for f, r in self.skipped],
        }


# ---------------------------------------------------------------------------
# URL parsing
# ---------------------------------------------------------------------------

_PATH_SUFFIX_MARKERS = ("tree", "blob", "-")


def parse_repo_url(url: str) -> ForgeRef:
    """Recognize GitHub and GitLab repository URLs.

    GitLab nested groups fold into the owner part; `.git`, trailing slashes,
    and tree/blob suffixes are stripped. Self-hosted GitLab is recognized by
    a `gitlab` component in the host name.
    """
    candidate = url.strip()
    if not candidate:
        raise MalformedUrlError("empty URL")
    if "://" not in candidate:
        candidate = "https://" + candidate
    parsed = urlparse(candidate)
    host = (parsed.netloc or "").lower()
    if host.startswith("www."):
        host = host[4:]
    if not host:
        raise MalformedUrlError(f"no host in URL {url!r}")

    segments = [s for s in parsed.path.split("/") if s]
    for i, segment in enumerate(segments):
        if i >= 2 and segment in _PATH_SUFFIX_MARKERS:
            segments = segments[:i]
            break
    if segments and segments[-1].endswith(".git"):
        segments[-1] = segments[-1][: -len(".git")]

    if host == "github.com":
        forge = "github"
    elif host == "gitlab.com" or "gitlab" in host.split("."):
        forge = "gitlab"
    else:
        raise UnsupportedHostError(f"unsupported forge host {host!r}")

    if forge == "github" and len(segments) != 2:
        raise MalformedUrlError(f"expected github.com/<owner>/<repo>, got path {parsed.path!r}")
    if len(segments) < 2:
        raise MalformedUrlError(f"expected <owner>/<repo> in URL path, got {parsed.path!r}")

    owner = "/".join(segments[:-1])
    repo = segments[-1]
    if not owner or not repo:
        raise MalformedUrlError(f"empty owner or repository name in {url!r}")
    return ForgeRef(forge=forge, host=host, owner=owner, repo=repo)


# ---------------------------------------------------------------------------
# Transports
# ---------------------------------------------------------------------------

@dataclass
class TransportResponse:
    status: int
    headers: dict[str, str]
    body: Any


class Transport(Protocol):
    def get(self, url: str) -> TransportResponse:  # pragma: no cover - protocol
        ...


class FixtureTransport:
    """Replays recorded endpoint responses from a directory keyed by
    endpoint path: `<root>/<path>.json`, percent-escapes decoded.

    Missing files answer 404, which the client treats like the live API.
    Stateless and safe for concurrent use.
    """

    def __init__(self, root: str | Path):
        self.root = Path(root)

    def get(self, url: str) -> TransportResponse:
        path = unquote(urlparse(url).path).lstrip("/")
        file_path = self.root / (path + ".json")
        if not file_path.is_file():
            return TransportResponse(status=404, headers={}, body={"message": "Not Found"})
        return TransportResponse(status=200, headers={}, body=json.loads(file_path.read_text(encoding="utf-8")))


class HttpTransport:
    """Live transport over `requests`, with optional bearer tokens from the
    environment and a single retry on transient failures."""

    def __init__(self, github_token: Optional[str] = None, gitlab_token: Optional[str] = None,
                 timeout: float = 30.0, max_quick_retry_after: float = 2.0):
        import os

        self.github_token = github_token if github_token is not None else os.environ.get(GITHUB_TOKEN_ENV)
        self.gitlab_token = gitlab_token if gitlab_token is not None else os.environ.get(GITLAB_TOKEN_ENV)
        self.timeout = timeout
        self.max_quick_retry_after = max_quick_retry_after

    def _headers(self, url: str) -> dict[str, str]:
        host = urlparse(url).netloc.lower()
        if host == "api.github.com":
            headers = {"Accept": "application/vnd.github+json"}
            if self.github_token:
                headers["Authorization"] = f"Bearer {self.github_token}"
            return headers
        headers = {}
        if self.gitlab_token:
            headers["Authorization"] = f"Bearer {self.gitlab_token}"
        return headers

    def get(self, url: str) -> TransportResponse:
        import requests

        last_exc: Optional[Exception] = None
        for attempt in range(2):
            try:
                resp = requests.get(url, headers=self._headers(url), timeout=self.timeout)
            except requests.RequestException as exc:
                last_exc = exc
                time.sleep(0.5 * (attempt + 1))
                continue
            if resp.status_code == 429 and attempt == 0:
                retry_after = _retry_after_seconds(resp.headers)
                if retry_after is not None and retry_after <= self.max_quick_retry_after:
                    time.sleep(retry_after)
                    continue
            if resp.status_code >= 500 and attempt == 0:
                time.sleep(0.5)
                continue
            try:
                body = resp.json()
            except ValueError:
                body = {"raw": resp.text}
            return TransportResponse(status=resp.status_code, headers=dict(resp.headers), body=body)
        raise TransportError(f"transport failure fetching {url!r}: {last_exc}")


def _retry_after_seconds(headers: dict) -> Optional[float]:
    value = headers.get("Retry-After") or headers.get("retry-after")
    if value is None:
        return None
    try:
        return float(value)
    except (TypeError, ValueError):
        return None


# ---------------------------------------------------------------------------
# Fetching
# ---------------------------------------------------------------------------

def fetch_raw(ref: ForgeRef, transport: Transport) -> RawForgeData:
    """Aggregate the repository, license, topics, release, and contributor
    endpoints. Only the repository endpoint is required; the others leave
    their field empty and a note behind when absent."""
    if ref.forge == "github":
        return _fetch_github(ref, transport)
    return _fetch_gitlab(ref, transport)


def _get(transport: Transport, url: str, required: bool) -> tuple[Optional[Any], Optional[str]]:
    response = transport.get(url)
    status = response.status
    if status == 200:
        return response.body, None
    if status == 404:
        if required:
            raise NotFoundError(f"not found: {url}")
        return None, "absent"
    if status == 429:
        raise RateLimitError(f"rate limited fetching {url}", retry_after=_retry_after_seconds(response.headers))
    if status == 403 and str(response.headers.get("X-RateLimit-Remaining", "")) == "0":
        raise RateLimitError(f"rate limited fetching {url}", retry_after=_retry_after_seconds(response.headers))
    if status in (401, 403):
        raise AuthError(f"authentication failed fetching {url} (HTTP {status})")
    raise TransportError(f"unexpected HTTP {status} fetching {url}")


def _fetch_github(ref: ForgeRef, transport: Transport) -> RawForgeData:
    base = f"https://api.github.com/repos/{ref.owner}/{ref.repo}"
    repo_info, _ = _get(transport, base, required=True)
    raw = RawForgeData(forge="github", repo_info=repo_info)

    topics_doc, note = _get(transport, base + "/topics", required=False)
    if topics_doc is not None:
        raw.topics = list(topics_doc.get("names", []))
    elif isinstance(repo_info.get("topics"), list):
        raw.topics = list(repo_info["topics"])
    else:
        raw.notes.append(("topics", note or "absent"))

    raw.license_info, note = _get(transport, base + "/license", required=False)
    if raw.license_info is None:
        raw.notes.append(("licenseInfo", note or "absent"))

    raw.latest_release, note = _get(transport, base + "/releases/latest", required=False)
    if raw.latest_release is None:
        raw.notes.append(("latestRelease", note or "absent"))

    contributors, note = _get(transport, base + "/contributors", required=False)
    if contributors is None:
        raw.notes.append(("contributors", note or "absent"))
    else:
        raw.contributors = list(contributors)
    return raw


def _fetch_gitlab(ref: ForgeRef, transport: Transport) -> RawForgeData:
    project_id = quote(f"{ref.owner}/{ref.repo}", safe="")
    base = f"https://{ref.host}/api/v4/projects/{project_id}"
    repo_info, _ = _get(transport, base, required=True)
    raw = RawForgeData(forge="gitlab", repo_info=repo_info)

    if isinstance(repo_info.get("topics"), list):
        raw.topics = list(repo_info["topics"])
    else:
        raw.notes.append(("topics", "absent"))
    if not isinstance(repo_info.get("license"), dict):
        raw.notes.append(("license", "absent"))

    releases, note = _get(transport, base + "/releases", required=False)
    if releases:
        raw.latest_release = releases[0]
    else:
        raw.notes.append(("latestRelease", note or "absent"))

    members, note = _get(transport, base + "/members", required=False)
    if members is None:
        raw.notes.append(("contributors", note or "absent"))
    else:
        raw.contributors = list(members)
    return raw


# ---------------------------------------------------------------------------
# Mapping raw data onto schema elements
# ---------------------------------------------------------------------------

def _load_mapping() -> list[dict]:
    return json.loads(_MAPPING_PATH.read_text(encoding="utf-8"))["elements"]


def _resolve_path(raw: RawForgeData, path: str) -> Any:
    buckets = {
        "repoInfo": raw.repo_info,
        "licenseInfo": raw.license_info,
        "topics": raw.topics,
        "latestRelease": raw.latest_release,
        "contributors": raw.contributors,
    }
    parts = path.split(".")
    current: Any = buckets.get(parts[0])
    for part in parts[1:]:
        if not isinstance(current, dict):
            return None
        current = current.get(part)
    return current


def map_to_record(raw: RawForgeData, schema: SchemaDefinition) -> tuple[MetadataRecord, ExtractionReport]:
    """Apply the bundled field-mapping table; unmappable fields go to the
    report's skipped list, never to exceptions."""
    record = MetadataRecord(schema_id=schema.id)
    report = ExtractionReport()

    for entry in _load_mapping():
        element_id = entry["element"]
        el = schema.element_by_id(element_id)
        path = entry["source"].get(raw.forge)
        if el is None:
            report.skipped.append((path or element_id, "element not declared by schema"))
            continue
        if path is None:
            report.skipped.append((element_id, f"no {raw.forge} source configured"))
            continue
        value = _resolve_path(raw, path)
        if value is None or value == "" or value == []:
            report.skipped.append((path, "absent"))
            continue

        if entry.get("kind") == "persons":
            persons = _persons(value, schema)
            if not persons:
                report.skipped.append((path, "no usable person entries"))
                continue
            record.values[element_id] = persons
        elif el.multi_valued:
            items = value if isinstance(value, list) else [value]
            texts = [TextValue(str(item)) for item in items if item not in (None, "")]
            if not texts:
                report.skipped.append((path, "absent"))
                continue
            record.values[element_id] = texts
        elif el.value_type == "iri":
            record.values[element_id] = [IriValue(str(value))]
        else:
            record.values[element_id] = [TextValue(str(value))]
        report.extracted[element_id] = path
    return record, report


def _persons(entries: Any, schema: SchemaDefinition) -> list[NestedValue]:
    if not isinstance(entries, list):
        return []
    sub = schema.sub_schema_by_id("person")
    if sub is None or sub.field_by_id("name") is None:
        return []
    persons = []
    for entry in entries:
        if not isinstance(entry, dict):
            continue
        display = entry.get("name") or entry.get("login") or entry.get("username")
        if not display:
            continue
        persons.append(NestedValue(sub_schema="person", fields={"name": [TextValue(str(display))]}))
    return persons


def extract(url: str, transport: Transport, schema: SchemaDefinition) -> tuple[MetadataRecord, ExtractionReport]:
    """URL to curated-candidate record: parse, fetch, map."""
    ref = parse_repo_url(url)
    raw = fetch_raw(ref, transport)
    return map_to_record(raw, schema)
