"""Importing annotation projects from a remote service.

The remote protocol hides behind a two-method adapter: list the projects a
key can read, fetch one project payload in the canonical format. Two
adapters ship: a local-directory adapter (reads canonical files, used by
tests and offline work) and an HTTP adapter speaking a minimal REST shape
(``GET {endpoint}/projects``, ``GET {endpoint}/projects/{id}``, bearer
auth). A small fixture server implementing that shape lives here too.

API keys are secrets: they are excluded from reprs and never written to
logs or project files.
"""

from __future__ import annotations

import hashlib
import json
import logging
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Protocol

import httpx

from .model import (
    Project,
    ProjectFormatError,
    project_from_jsonable,
    validate_project,
)

log = logging.getLogger(__name__)


class RemoteError(Exception):
    pass


class AuthenticationError(RemoteError):
    """The endpoint rejected the API key."""


class NetworkError(RemoteError):
    """The endpoint could not be reached."""


class UnknownRemoteProject(RemoteError):
    pass


class TranslationError(RemoteError):
    """The remote payload cannot be turned into a valid project."""


@dataclass(frozen=True, slots=True)
class RemoteCredentials:
    endpoint: str
    api_key: str = field(repr=False)

    def __post_init__(self):
        if not self.api_key:
            raise ValueError("api_key must be non-empty")


@dataclass(frozen=True, slots=True)
class RemoteProjectDescriptor:
    remote_id: str
    name: str
    last_modified: str


class RemoteAdapter(Protocol):
    def list_projects(self) -> list[RemoteProjectDescriptor]: ...

    def fetch_project(self, remote_id: str) -> dict: ...


class LocalDirAdapter:
    """Reads canonical-format files from a directory; the file's project id
    is its remote id."""

    def __init__(self, root: str | Path):
        self.root = Path(root)

    def _paths(self) -> list[Path]:
        if not self.root.is_dir():
            raise NetworkError(f"not a directory: {self.root}")
        return sorted(self.root.glob("*.json"))

    def list_projects(self) -> list[RemoteProjectDescriptor]:
        descriptors = []
        for path in self._paths():
            try:
                doc = json.loads(path.read_text(encoding="utf-8"))
            except (OSError, json.JSONDecodeError) as exc:
                raise TranslationError(f"{path.name}: {exc}") from exc
            mtime = datetime.fromtimestamp(path.stat().st_mtime, timezone.utc)
            descriptors.append(
                RemoteProjectDescriptor(
                    remote_id=str(doc.get("id", path.stem)),
                    name=str(doc.get("name", path.stem)),
                    last_modified=mtime.isoformat(),
                )
            )
        return descriptors

    def fetch_project(self, remote_id: str) -> dict:
        for path in self._paths():
            try:
                doc = json.loads(path.read_text(encoding="utf-8"))
            except (OSError, json.JSONDecodeError) as exc:
                raise TranslationError(f"{path.name}: {exc}") from exc
            if str(doc.get("id", path.stem)) == remote_id:
                return doc
        raise UnknownRemoteProject(remote_id)


class HttpAdapter:
    def __init__(self, creds: RemoteCredentials, timeout: float = 10.0):
        self.creds = creds
        self.timeout = timeout

    def _get(self, url: str):
        headers = {"Authorization": f"Bearer {self.creds.api_key}"}
        try:
            response = httpx.get(url, headers=headers, timeout=self.timeout)
        except httpx.HTTPError as exc:
            raise NetworkError(f"cannot reach {self.creds.endpoint}") from exc
        if response.status_code in (401, 403):
            raise AuthenticationError("endpoint rejected the API key")
        if response.status_code == 404:
            raise UnknownRemoteProject(url.rsplit("/", 1)[-1])
        if response.status_code != 200:
            raise RemoteError(f"unexpected status {response.status_code} from {url}")
        return response.json()

    def list_projects(self) -> list[RemoteProjectDescriptor]:
        payload = self._get(f"{self.creds.endpoint.rstrip('/')}/projects")
        if not isinstance(payload, list):
            raise TranslationError("project listing is not an array")
        out = []
        for entry in payload:
            try:
                out.append(
                    RemoteProjectDescriptor(
                        remote_id=str(entry["id"]),
                        name=str(entry["name"]),
                        last_modified=str(entry.get("last_modified", "")),
                    )
                )
            except (KeyError, TypeError) as exc:
                raise TranslationError(f"malformed descriptor: {entry!r}") from exc
        return out

    def fetch_project(self, remote_id: str) -> dict:
        payload = self._get(f"{self.creds.endpoint.rstrip('/')}/projects/{remote_id}")
        if not isinstance(payload, dict):
            raise TranslationError("project payload is not an object")
        return payload


def adapter_for(creds: RemoteCredentials) -> RemoteAdapter:
    endpoint = creds.endpoint
    if endpoint.startswith(("http://", "https://")):
        return HttpAdapter(creds)
    if endpoint.startswith("file://"):
        endpoint = endpoint[len("file://") :]
    return LocalDirAdapter(endpoint)


def _synthesize_annotation_id(text: str, tag: str, ranges) -> str:
    payload = json.dumps([text, tag, ranges], sort_keys=True).encode("utf-8")
    return "ann-" + hashlib.sha256(payload).hexdigest()[:12]


def _translate(doc: dict) -> Project:
    """Canonical payload -> validated Project.

    Annotations missing an id get a content-hash id of (text, tag, ranges),
    so re-imports of an unchanged remote reproduce identical entities.
    """
    if not isinstance(doc, dict):
        raise TranslationError("payload is not an object")
    doc = dict(doc)
    annotations = doc.get("annotations")
    if isinstance(annotations, list):
        filled = []
        for ann in annotations:
            if isinstance(ann, dict) and "id" not in ann:
                try:
                    ann = dict(ann)
                    ann["id"] = _synthesize_annotation_id(
                        ann["text"], ann["tag"], ann["ranges"]
                    )
                except KeyError as exc:
                    raise TranslationError(
                        f"annotation missing required field {exc}"
                    ) from exc
            filled.append(ann)
        doc["annotations"] = filled
    try:
        project = project_from_jsonable(doc)
    except ProjectFormatError as exc:
        raise TranslationError(str(exc)) from exc
    violations = validate_project(project)
    if violations:
        summary = "; ".join(str(v) for v in violations[:3])
        raise TranslationError(f"remote payload is inconsistent: {summary}")
    return project


def list_remote_projects(creds: RemoteCredentials) -> list[RemoteProjectDescriptor]:
    log.info("listing projects at %s", creds.endpoint)
    return adapter_for(creds).list_projects()


def import_project(creds: RemoteCredentials, remote_id: str) -> Project:
    """Fetch and translate one remote project.

    Deterministic for a fixed remote state, so re-importing an unchanged
    project yields a structurally equal result.
    """
    log.info("importing project %s from %s", remote_id, creds.endpoint)
    return _translate(adapter_for(creds).fetch_project(remote_id))


def update_project(
    creds: RemoteCredentials, remote_id: str, existing: Project
) -> Project:
    """Re-import; remote ids are primary keys, so entities unchanged on the
    remote keep their ids (content-hash ids cover id-less annotations)."""
    updated = import_project(creds, remote_id)
    if updated.id != existing.id:
        log.warning(
            "remote %s changed project id %s -> %s", remote_id, existing.id, updated.id
        )
    return updated


# ---------------------------------------------------------------------------
# Fixture server (test/demo double for the real annotation backend)
# ---------------------------------------------------------------------------


class FixtureRemoteServer:
    """Serves a directory of canonical project files over the documented
    REST shape. ``api_key=None`` disables auth checking."""

    def __init__(self, root: str | Path, api_key: str | None = None, port: int = 0):
        self.adapter = LocalDirAdapter(root)
        self.api_key = api_key
        outer = self

        class Handler(BaseHTTPRequestHandler):
            def log_message(self, *args):  # keep test output quiet
                pass

            def _send(self, status: int, payload) -> None:
                body = json.dumps(payload, ensure_ascii=False).encode("utf-8")
                self.send_response(status)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(body)))
                self.end_headers()
                self.wfile.write(body)

            def do_GET(self):
                if outer.api_key is not None:
                    expected = f"Bearer {outer.api_key}"
                    if self.headers.get("Authorization") != expected:
                        self._send(401, {"code": 401, "message": "bad api key"})
                        return
                if self.path == "/projects":
                    listing = [
                        {
                            "id": d.remote_id,
                            "name": d.name,
                            "last_modified": d.last_modified,
                        }
                        for d in outer.adapter.list_projects()
                    ]
                    self._send(200, listing)
                elif self.path.startswith("/projects/"):
                    remote_id = self.path[len("/projects/") :]
                    try:
                        self._send(200, outer.adapter.fetch_project(remote_id))
                    except UnknownRemoteProject:
                        self._send(404, {"code": 404, "message": "unknown project"})
                else:
                    self._send(404, {"code": 404, "message": "unknown path"})

        self._server = ThreadingHTTPServer(("127.0.0.1", port), Handler)
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)

    @property
    def endpoint(self) -> str:
        host, port = self._server.server_address[:2]
        return f"http://{host}:{port}"

    def start(self) -> "FixtureRemoteServer":
        self._thread.start()
        return self

    def stop(self) -> None:
        self._server.shutdown()
        self._server.server_close()

    def __enter__(self) -> "FixtureRemoteServer":
        return self.start()

    def __exit__(self, *exc) -> None:
        self.stop()
