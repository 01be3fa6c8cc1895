"""Pack indexes into checksummed archives and push/pull them to a registry.

Archives are reproducible gzip tarballs: entries in sorted order, zeroed
timestamps, fixed ownership. A registry is addressed by a base URL with
scheme http, https, or file; the ``file`` scheme uses the same on-disk
layout as the HTTP server and enables fully offline round trips.
"""

from __future__ import annotations

import gzip
import hashlib
import io
import json
import os
import re
import shutil
import tarfile
import tempfile
import warnings
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from urllib.parse import urlparse

from .errors import (
    AuthError,
    CorruptionError,
    IndexIntegrityError,
    NotFoundError,
    RegistryError,
    TransportError,
)
from .index.format import INDEX_FILES

DEFAULT_QUOTA_BYTES = 50 * 10**9
ARCHIVE_NAME = "index.tar.gz"
TOKEN_ENV_VAR = "PLUGSEARCH_TOKEN"

_NAME_RE = re.compile(r"^[a-z0-9][a-z0-9-]*$")


class QuotaWarning(UserWarning):
    """A packed index exceeds the configured size quota."""


@dataclass(frozen=True)
class IndexManifest:
    """Machine metadata describing one packed index version."""

    slug: str
    version: int
    created_at: str
    analyzer: dict
    bm25: dict
    stats: dict
    files: list[dict]  # {name, size, sha256}
    total_bytes: int

    def to_dict(self) -> dict:
        return {
            "slug": self.slug,
            "version": self.version,
            "created_at": self.created_at,
            "analyzer": self.analyzer,
            "bm25": self.bm25,
            "stats": self.stats,
            "files": self.files,
            "total_bytes": self.total_bytes,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "IndexManifest":
        return cls(
            slug=d["slug"],
            version=d["version"],
            created_at=d["created_at"],
            analyzer=d["analyzer"],
            bm25=d["bm25"],
            stats=d["stats"],
            files=d["files"],
            total_bytes=d["total_bytes"],
        )


@dataclass(frozen=True)
class RegistryLocation:
    """Where to push and pull archives."""

    base: str  # http(s):// or file:// URL
    org: str
    token: str | None = field(default=None, repr=False)

    def __post_init__(self):
        scheme = urlparse(self.base).scheme
        if scheme not in ("http", "https", "file"):
            raise RegistryError(f"unsupported registry scheme {scheme!r}")
        _validate_name(self.org, "org")

    @property
    def is_file(self) -> bool:
        return urlparse(self.base).scheme == "file"

    @property
    def root_dir(self) -> Path:
        parsed = urlparse(self.base)
        return Path(parsed.path)

    def resolve_token(self) -> str | None:
        return self.token or os.environ.get(TOKEN_ENV_VAR)


def _validate_name(name: str, kind: str) -> None:
    if not _NAME_RE.match(name):
        raise RegistryError(
            f"invalid {kind} {name!r}: must match [a-z0-9][a-z0-9-]*"
        )


def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _sha256_file(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def build_archive_bytes(files: dict[str, bytes]) -> bytes:
    """Deterministic .tar.gz: sorted entries, zeroed metadata, gzip -6."""
    tar_buf = io.BytesIO()
    with tarfile.open(fileobj=tar_buf, mode="w") as tar:
        for name in sorted(files):
            info = tarfile.TarInfo(name=name)
            data = files[name]
            info.size = len(data)
            info.mtime = 0
            info.uid = info.gid = 0
            info.uname = info.gname = ""
            info.mode = 0o644
            tar.addfile(info, io.BytesIO(data))
    gz_buf = io.BytesIO()
    with gzip.GzipFile(fileobj=gz_buf, mode="wb", compresslevel=6, mtime=0) as gz:
        gz.write(tar_buf.getvalue())
    return gz_buf.getvalue()


def pack_index(
    index_path: str | Path,
    out_path: str | Path,
    slug: str = "index",
    version: int = 0,
    quota_bytes: int = DEFAULT_QUOTA_BYTES,
    k1: float = 0.9,
    b: float = 0.4,
) -> tuple[Path, IndexManifest]:
    """Archive the five index files plus manifest.json at archive root."""
    src = Path(index_path)
    contents: dict[str, bytes] = {}
    file_entries: list[dict] = []
    for name in INDEX_FILES:
        path = src / name
        if not path.is_file():
            raise IndexIntegrityError(f"incomplete index: missing {path}")
        data = path.read_bytes()
        contents[name] = data
        file_entries.append(
            {"name": name, "size": len(data), "sha256": _sha256(data)}
        )
    total_bytes = sum(e["size"] for e in file_entries)

    stats = json.loads(contents["stats.json"])
    analyzer = json.loads(contents["analyzer.json"])
    manifest = IndexManifest(
        slug=slug,
        version=version,
        created_at=datetime.now(timezone.utc).isoformat(),
        analyzer=analyzer,
        bm25={"k1": k1, "b": b},
        stats={
            k: stats[k] for k in ("num_docs", "num_terms", "total_tokens", "avgdl")
        },
        files=file_entries,
        total_bytes=total_bytes,
    )
    if total_bytes > quota_bytes:
        warnings.warn(
            f"packed index is {total_bytes} bytes, over the "
            f"{quota_bytes}-byte quota",
            QuotaWarning,
            stacklevel=2,
        )

    contents["manifest.json"] = (
        json.dumps(manifest.to_dict(), indent=2, ensure_ascii=False) + "\n"
    ).encode("utf-8")
    archive = build_archive_bytes(contents)

    out = Path(out_path)
    if out.is_dir() or str(out).endswith(os.sep):
        out.mkdir(parents=True, exist_ok=True)
        out = out / ARCHIVE_NAME
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
    out.write_bytes(archive)
    return out, manifest


def verify_archive(archive: bytes) -> IndexManifest:
    """All-or-nothing digest verification of an index archive's contents."""
    try:
        with tarfile.open(fileobj=io.BytesIO(archive), mode="r:gz") as tar:
            names = tar.getnames()
            if "manifest.json" not in names:
                raise CorruptionError("archive lacks manifest.json")
            manifest = IndexManifest.from_dict(
                json.loads(tar.extractfile("manifest.json").read())
            )
            for entry in manifest.files:
                member = tar.extractfile(entry["name"])
                if member is None:
                    raise CorruptionError(f"archive lacks {entry['name']}")
                data = member.read()
                if len(data) != entry["size"] or _sha256(data) != entry["sha256"]:
                    raise CorruptionError(
                        f"digest mismatch for {entry['name']}"
                    )
    except CorruptionError:
        raise
    except Exception as exc:  # noqa: BLE001 - any decode failure is corruption
        raise CorruptionError(f"unreadable archive: {exc}") from exc
    return manifest


def _extract_archive(archive: bytes, dest: Path) -> None:
    dest.mkdir(parents=True, exist_ok=True)
    with tarfile.open(fileobj=io.BytesIO(archive), mode="r:gz") as tar:
        for member in tar.getmembers():
            if "/" in member.name or member.name.startswith("."):
                raise CorruptionError(f"unexpected archive member {member.name!r}")
            (dest / member.name).write_bytes(tar.extractfile(member).read())


class RegistryClient:
    """Push/pull versioned archives; counts transfers for cache testing."""

    def __init__(self, registry: RegistryLocation):
        self.registry = registry
        self.transfers = 0  # archive/manifest fetch + push operations

    # -- low-level transport ----------------------------------------------

    def _http(self):
        import requests

        return requests

    def _url(self, kind: str, org: str, slug: str, *rest) -> str:
        parts = [self.registry.base.rstrip("/"), kind, org, slug]
        parts.extend(str(r) for r in rest)
        return "/".join(parts)

    def push_archive(self, kind: str, slug: str, archive: bytes) -> tuple[int, str]:
        """Upload one archive; returns (allocated version, canonical URL)."""
        _validate_name(slug, "slug")
        org = self.registry.org
        self.transfers += 1
        if self.registry.is_file:
            from .registry_server import store_archive

            version = store_archive(
                self.registry.root_dir, kind, org, slug, archive
            )
            return version, self._url(kind, org, slug, version)

        url = self._url(kind, org, slug)
        headers = {}
        token = self.registry.resolve_token()
        if token:
            headers["Authorization"] = f"Bearer {token}"
        try:
            resp = self._http().put(url, data=archive, headers=headers, timeout=120)
        except OSError as exc:
            raise TransportError(f"push to {url} failed: {exc}") from exc
        if resp.status_code == 401:
            raise AuthError(f"registry rejected credentials for {url}")
        if resp.status_code == 400:
            raise RegistryError(f"publish rejected: {resp.text}")
        if resp.status_code >= 300:
            raise RegistryError(f"push to {url} failed: HTTP {resp.status_code}")
        body = resp.json()
        return body["version"], body["url"]

    def fetch(self, kind: str, org: str, slug: str, *rest) -> bytes:
        self.transfers += 1
        if self.registry.is_file:
            path = self.registry.root_dir.joinpath(
                kind, org, slug, *[str(r) for r in rest]
            )
            target = path / ARCHIVE_NAME if path.is_dir() else path
            try:
                return target.read_bytes()
            except FileNotFoundError as exc:
                raise NotFoundError(f"not found at registry: {path}") from exc

        url = self._url(kind, org, slug, *rest)
        try:
            resp = self._http().get(url, timeout=120)
        except OSError as exc:
            raise TransportError(f"fetch of {url} failed: {exc}") from exc
        if resp.status_code == 404:
            raise NotFoundError(f"not found at registry: {url}")
        if resp.status_code >= 300:
            raise RegistryError(f"fetch of {url} failed: HTTP {resp.status_code}")
        return resp.content

    def latest_version(self, kind: str, slug: str) -> int:
        org = self.registry.org
        if self.registry.is_file:
            base = self.registry.root_dir / kind / org / slug
            versions = sorted(
                int(p.name) for p in base.glob("*") if p.name.isdigit()
            ) if base.is_dir() else []
            if not versions:
                raise NotFoundError(f"unknown slug {slug!r} at registry")
            return versions[-1]
        manifest = json.loads(self.fetch(kind, org, slug, "latest"))
        return manifest["version"]


def push_index_to_hub(
    slug: str,
    index_path: str | Path,
    registry: RegistryLocation,
    quota_bytes: int = DEFAULT_QUOTA_BYTES,
) -> str:
    """Pack and upload an index; returns the canonical version URL."""
    with tempfile.TemporaryDirectory() as tmp:
        archive_path, _ = pack_index(
            index_path, Path(tmp) / ARCHIVE_NAME, slug=slug, quota_bytes=quota_bytes
        )
        archive = archive_path.read_bytes()
    client = RegistryClient(registry)
    _, url = client.push_archive("indexes", slug, archive)
    return url


def load_index_from_hub(
    slug: str,
    registry: RegistryLocation,
    cache_dir: str | Path,
    version: int | None = None,
) -> Path:
    """Download, verify, and unpack an index; cached by (org, slug, version)."""
    _validate_name(slug, "slug")
    client = RegistryClient(registry)
    cache = Path(cache_dir)

    if version is None:
        version = client.latest_version("indexes", slug)

    dest = cache / registry.org / slug / str(version)
    marker = dest / ".complete"
    if marker.is_file():
        return dest

    archive = client.fetch("indexes", registry.org, slug, version)
    expected = None
    try:
        stored_manifest = json.loads(
            client.fetch("indexes", registry.org, slug, version, "manifest.json")
        )
        expected = stored_manifest.get("archive_sha256")
    except RegistryError:
        pass  # older layout without a standalone manifest; fall back to content checks
    if expected is not None and _sha256(archive) != expected:
        shutil.rmtree(dest, ignore_errors=True)
        raise CorruptionError(
            f"archive digest mismatch for {slug} v{version}; cache purged"
        )

    try:
        verify_archive(archive)
        _extract_archive(archive, dest)
    except CorruptionError:
        shutil.rmtree(dest, ignore_errors=True)
        raise
    marker.write_text("")
    return dest
