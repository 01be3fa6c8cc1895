"""Partition a document stream into size-bounded shard files.

Shard files hold the canonical indexing records, one per line:
``{"id": ..., "contents": ...}`` with LF terminators and no extra
whitespace. Document metadata goes to a per-shard sidecar file so the
index records stay bit-compatible with the plain id/contents shape.
"""

from __future__ import annotations

import json
import re
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .errors import SizeParseError
from .ingest import Document

_SIZE_RE = re.compile(r"^\s*(\d+)\s*([A-Za-z]*)\s*$")

_UNITS = {
    "": 1,
    "B": 1,
    "KB": 10**3,
    "MB": 10**6,
    "GB": 10**9,
    "KIB": 2**10,
    "MIB": 2**20,
    "GIB": 2**30,
}

MANIFEST_NAME = "manifest.json"


class OversizeDocumentWarning(UserWarning):
    """A single document exceeded the shard size limit and got its own shard."""


@dataclass
class ShardManifest:
    """Accounting of how a dataset was partitioned into shard files."""

    shards_path: str
    shard_files: list[str]
    shard_size_limit: int
    total_docs: int
    per_shard_docs: list[int]
    column_to_index: str = "contents"
    meta_files: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "shards_path": self.shards_path,
            "shard_files": self.shard_files,
            "shard_size_limit": self.shard_size_limit,
            "total_docs": self.total_docs,
            "per_shard_docs": self.per_shard_docs,
            "column_to_index": self.column_to_index,
            "meta_files": self.meta_files,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ShardManifest":
        return cls(**d)

    def save(self, path: Path | str | None = None) -> Path:
        target = Path(path) if path else Path(self.shards_path) / MANIFEST_NAME
        target.write_text(
            json.dumps(self.to_dict(), indent=2) + "\n", encoding="utf-8"
        )
        return target

    @classmethod
    def load(cls, shards_path: Path | str) -> "ShardManifest":
        p = Path(shards_path)
        if p.is_dir():
            p = p / MANIFEST_NAME
        return cls.from_dict(json.loads(p.read_text(encoding="utf-8")))


def parse_size(spec: str | int) -> int:
    """Parse a size like "1GB" into an exact byte count (SI units)."""
    if isinstance(spec, int):
        if spec < 0:
            raise SizeParseError(f"negative size: {spec}")
        return spec
    m = _SIZE_RE.match(spec)
    if not m:
        raise SizeParseError(f"cannot parse size spec {spec!r}")
    number, unit = m.group(1), m.group(2).upper()
    if unit not in _UNITS:
        raise SizeParseError(f"unknown size unit {unit!r} in {spec!r}")
    return int(number) * _UNITS[unit]


def doc_to_index_record(doc: Document, column_to_index: str = "text") -> dict:
    """Map a Document to the canonical two-field index record."""
    return {"id": doc.id, "contents": doc.text}


def _record_line(doc: Document) -> str:
    return json.dumps(
        {"id": doc.id, "contents": doc.text},
        ensure_ascii=False,
        separators=(",", ":"),
    )


def shard_dataset(
    stream: Iterable[Document],
    shard_size: str | int,
    column_to_index: str = "text",
    shards_path: str | Path = "shards",
) -> ShardManifest:
    """Write size-bounded shard files by greedy accumulation.

    A document is appended to the current shard unless the shard is
    non-empty and adding the document's accounted size (UTF-8 byte length
    of its text) would exceed the limit. Oversize documents get a dedicated
    shard plus a warning; text is never dropped.
    """
    limit = parse_size(shard_size)
    out = Path(shards_path)
    out.mkdir(parents=True, exist_ok=True)

    shard_files: list[str] = []
    meta_files: list[str] = []
    per_shard_docs: list[int] = []
    total_docs = 0

    doc_fh = meta_fh = None
    current_bytes = 0

    def open_shard() -> None:
        nonlocal doc_fh, meta_fh, current_bytes
        i = len(shard_files)
        name = f"docs-{i:05d}.jsonl"
        meta_name = f"docs-{i:05d}.meta.jsonl"
        doc_fh = open(out / name, "w", encoding="utf-8", newline="\n")
        meta_fh = open(out / meta_name, "w", encoding="utf-8", newline="\n")
        shard_files.append(name)
        meta_files.append(meta_name)
        per_shard_docs.append(0)
        current_bytes = 0

    def close_shard() -> None:
        nonlocal doc_fh, meta_fh
        if doc_fh is not None:
            doc_fh.close()
            meta_fh.close()
            doc_fh = meta_fh = None

    for doc in stream:
        size = len(doc.text.encode("utf-8"))
        if size > limit:
            warnings.warn(
                f"document {doc.id!r} ({size} bytes) exceeds shard size "
                f"limit {limit}; writing to a dedicated shard",
                OversizeDocumentWarning,
                stacklevel=2,
            )
        if doc_fh is None or (
            per_shard_docs[-1] > 0 and current_bytes + size > limit
        ):
            close_shard()
            open_shard()
        doc_fh.write(_record_line(doc) + "\n")
        meta_fh.write(
            json.dumps(
                {"id": doc.id, "metadata": doc.metadata},
                ensure_ascii=False,
                separators=(",", ":"),
            )
            + "\n"
        )
        current_bytes += size
        per_shard_docs[-1] += 1
        total_docs += 1

    close_shard()

    manifest = ShardManifest(
        shards_path=str(out),
        shard_files=shard_files,
        shard_size_limit=limit,
        total_docs=total_docs,
        per_shard_docs=per_shard_docs,
        column_to_index=column_to_index,
        meta_files=meta_files,
    )
    manifest.save()
    return manifest
