"""Lazy shard-backed document access.

Full records are materialized one at a time by (shard ordinal, byte
offset), so paging through results reads only the requested page.
``read_count`` tracks record fetches for I/O accounting.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import BinaryIO

from .errors import IndexIntegrityError
from .index.reader import IndexReader
from .preprocess import ShardManifest


@dataclass(frozen=True)
class DocRecord:
    external_id: str
    text: str
    metadata: dict[str, str] = field(default_factory=dict)


class Docstore:
    """Random access to shard records referenced by an index's doc table."""

    def __init__(self, reader: IndexReader, shards_path: str | Path | None = None):
        self.reader = reader
        path = shards_path if shards_path is not None else reader.shards_path
        if path is None:
            raise IndexIntegrityError(
                "index records no shards path; pass shards_path explicitly"
            )
        self.shards_path = Path(path)
        manifest = ShardManifest.load(self.shards_path)
        self._shard_files = manifest.shard_files
        self._meta_files = manifest.meta_files
        self._handles: dict[tuple[str, int], BinaryIO] = {}
        self.read_count = 0

    def _handle(self, kind: str, ord_: int) -> BinaryIO:
        key = (kind, ord_)
        fh = self._handles.get(key)
        if fh is None:
            names = self._shard_files if kind == "doc" else self._meta_files
            fh = open(self.shards_path / names[ord_], "rb")
            self._handles[key] = fh
        return fh

    def get(self, internal_docid: int) -> DocRecord:
        """Materialize one record; counts as a single docstore read."""
        self.read_count += 1
        ord_ = int(self.reader.doc_shard_ords[internal_docid])
        offset = int(self.reader.doc_offsets[internal_docid])
        fh = self._handle("doc", ord_)
        fh.seek(offset)
        record = json.loads(fh.readline())

        metadata: dict[str, str] = {}
        meta_plus1 = int(self.reader.doc_meta_offsets[internal_docid])
        if meta_plus1 > 0 and ord_ < len(self._meta_files):
            mfh = self._handle("meta", ord_)
            mfh.seek(meta_plus1 - 1)
            metadata = json.loads(mfh.readline()).get("metadata", {})

        return DocRecord(
            external_id=str(record["id"]),
            text=record["contents"],
            metadata=metadata,
        )

    def get_by_external_id(self, external_id: str) -> DocRecord | None:
        docid = self.reader.internal_id(external_id)
        if docid is None:
            return None
        return self.get(docid)

    def close(self) -> None:
        for fh in self._handles.values():
            fh.close()
        self._handles.clear()

    def __enter__(self) -> "Docstore":
        return self

    def __exit__(self, *exc) -> None:
        self.close()
