"""Minimal registry server: versioned archive storage over HTTP.

Storage layout mirrors URL paths on disk:
``{root}/{kind}/{org}/{slug}/{version}/{index.tar.gz,manifest.json,archive.sha256}``.
Version allocation is atomic; concurrent uploads to one slug serialize.
"""

from __future__ import annotations

import hashlib
import json
import re
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from .errors import CorruptionError, RegistryError
from .registry import ARCHIVE_NAME, verify_archive

KINDS = ("indexes", "spaces")

_store_lock = threading.Lock()

_PATH_RE = re.compile(
    r"^/(?P<kind>indexes|spaces)/(?P<org>[a-z0-9][a-z0-9-]*)/"
    r"(?P<slug>[a-z0-9][a-z0-9-]*)(?P<rest>/.*)?$"
)


def store_archive(
    root: Path, kind: str, org: str, slug: str, archive: bytes
) -> int:
    """Verify and store one archive; returns the allocated version."""
    if kind not in KINDS:
        raise RegistryError(f"unknown archive kind {kind!r}")
    manifest_doc: dict = {}
    if kind == "indexes":
        manifest_doc = verify_archive(archive).to_dict()
    with _store_lock:
        base = Path(root) / kind / org / slug
        versions = (
            [int(p.name) for p in base.glob("*") if p.name.isdigit()]
            if base.is_dir()
            else []
        )
        version = max(versions) + 1 if versions else 0
        dest = base / str(version)
        dest.mkdir(parents=True)
        digest = hashlib.sha256(archive).hexdigest()
        manifest_doc["version"] = version
        manifest_doc["archive_sha256"] = digest
        (dest / ARCHIVE_NAME).write_bytes(archive)
        (dest / "archive.sha256").write_text(digest + "\n")
        (dest / "manifest.json").write_text(
            json.dumps(manifest_doc, indent=2, ensure_ascii=False) + "\n"
        )
    return version


class _Handler(BaseHTTPRequestHandler):
    server_version = "plugsearch-registry/0.1"

    def log_message(self, fmt, *args):  # keep test output quiet
        pass

    @property
    def root(self) -> Path:
        return self.server.registry_root  # type: ignore[attr-defined]

    def _send_json(self, status: int, body: dict) -> None:
        data = json.dumps(body).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def _send_bytes(self, data: bytes, content_type: str) -> None:
        self.send_response(200)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def do_PUT(self):  # noqa: N802 - http.server naming
        token = self.server.auth_token  # type: ignore[attr-defined]
        if token:
            supplied = self.headers.get("Authorization", "")
            if supplied != f"Bearer {token}":
                self._send_json(401, {"error": "unauthorized"})
                return
        m = _PATH_RE.match(self.path)
        if not m or m.group("rest"):
            self._send_json(404, {"error": "not found", "detail": self.path})
            return
        length = int(self.headers.get("Content-Length", 0))
        archive = self.rfile.read(length)
        try:
            version = store_archive(
                self.root, m.group("kind"), m.group("org"), m.group("slug"), archive
            )
        except CorruptionError as exc:
            self._send_json(400, {"error": "publish rejected", "detail": str(exc)})
            return
        url = (
            f"{self.server.public_url}/{m.group('kind')}"  # type: ignore[attr-defined]
            f"/{m.group('org')}/{m.group('slug')}/{version}"
        )
        self._send_json(200, {"version": version, "url": url})

    def do_GET(self):  # noqa: N802
        m = _PATH_RE.match(self.path)
        if not m:
            self._send_json(404, {"error": "not found", "detail": self.path})
            return
        base = self.root / m.group("kind") / m.group("org") / m.group("slug")
        rest = (m.group("rest") or "").strip("/")
        versions = (
            sorted(int(p.name) for p in base.glob("*") if p.name.isdigit())
            if base.is_dir()
            else []
        )
        if not versions:
            self._send_json(404, {"error": "not found", "detail": self.path})
            return
        if rest == "latest":
            self.send_response(302)
            self.send_header(
                "Location", f"{self.path.rsplit('/latest', 1)[0]}/{versions[-1]}/manifest.json"
            )
            self.end_headers()
            return
        parts = rest.split("/") if rest else []
        if not parts or not parts[0].isdigit():
            self._send_json(404, {"error": "not found", "detail": self.path})
            return
        vdir = base / parts[0]
        if not vdir.is_dir():
            self._send_json(404, {"error": "not found", "detail": self.path})
            return
        if len(parts) == 1:
            self._send_bytes((vdir / ARCHIVE_NAME).read_bytes(), "application/gzip")
        elif parts[1] in ("manifest.json", "archive.sha256", ARCHIVE_NAME):
            content_type = (
                "application/json" if parts[1].endswith(".json") else "text/plain"
            )
            target = vdir / parts[1]
            if not target.is_file():
                self._send_json(404, {"error": "not found", "detail": self.path})
                return
            self._send_bytes(target.read_bytes(), content_type)
        else:
            self._send_json(404, {"error": "not found", "detail": self.path})


class RegistryServer:
    """Background registry server for tests and local sharing."""

    def __init__(self, root_dir: str | Path, bind: str = "127.0.0.1:0",
                 token: str | None = None):
        host, _, port = bind.partition(":")
        try:
            self._httpd = ThreadingHTTPServer((host, int(port or 0)), _Handler)
        except OSError as exc:
            raise RegistryError(f"cannot bind registry to {bind}: {exc}") from exc
        self._httpd.registry_root = Path(root_dir)  # type: ignore[attr-defined]
        self._httpd.auth_token = token  # type: ignore[attr-defined]
        self.host, self.port = self._httpd.server_address[:2]
        self.url = f"http://{self.host}:{self.port}"
        self._httpd.public_url = self.url  # type: ignore[attr-defined]
        self._thread = threading.Thread(
            target=self._httpd.serve_forever, daemon=True
        )
        self._thread.start()

    def stop(self) -> None:
        self._httpd.shutdown()
        self._httpd.server_close()
        self._thread.join(timeout=5)

    def __enter__(self) -> "RegistryServer":
        return self

    def __exit__(self, *exc) -> None:
        self.stop()


def serve_registry(
    root_dir: str | Path, bind: str = "127.0.0.1:8320", token: str | None = None
) -> RegistryServer:
    """Start a registry server; returns a handle with ``.url`` and ``.stop()``."""
    return RegistryServer(root_dir, bind, token)
