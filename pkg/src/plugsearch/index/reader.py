"""Read-only access to an on-disk index; safe for concurrent readers."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ..analysis import Analyzer
from ..errors import IndexIntegrityError
from . import varint
from .format import (
    ANALYZER_FILE,
    DOCS_FILE,
    DOCS_MAGIC,
    INDEX_FILES,
    POSTINGS_FILE,
    POSTINGS_MAGIC,
    STATS_FILE,
    TERMS_FILE,
    TERMS_MAGIC,
    read_varint,
)
from .build import IndexStats

_POSTINGS_CACHE_SIZE = 4096


class IndexReader:
    """Immutable view over the five index files."""

    def __init__(self, index_path: str | Path):
        self.path = Path(index_path)
        for name in INDEX_FILES:
            if not (self.path / name).is_file():
                raise IndexIntegrityError(f"index file missing: {self.path / name}")

        stats_doc = json.loads((self.path / STATS_FILE).read_text("utf-8"))
        try:
            self.stats = IndexStats(
                num_docs=stats_doc["num_docs"],
                num_terms=stats_doc["num_terms"],
                total_tokens=stats_doc["total_tokens"],
                avgdl=stats_doc["avgdl"],
                build_seconds=stats_doc.get("build_seconds", 0.0),
            )
        except KeyError as exc:
            raise IndexIntegrityError(f"corrupt {STATS_FILE}: missing {exc}") from exc
        self.shards_path = stats_doc.get("shards_path")

        analyzer_doc = json.loads((self.path / ANALYZER_FILE).read_text("utf-8"))
        self.analyzer = Analyzer.from_dict(analyzer_doc)
        self.analyzer_hash = analyzer_doc.get(
            "config_hash", self.analyzer.config_hash()
        )

        self._terms = self._load_terms()
        self._load_docs()
        self._postings_buf = (self.path / POSTINGS_FILE).read_bytes()
        if not self._postings_buf.startswith(POSTINGS_MAGIC):
            raise IndexIntegrityError(f"bad magic in {POSTINGS_FILE}")

    def _load_terms(self) -> dict[str, tuple[int, int, int]]:
        buf = (self.path / TERMS_FILE).read_bytes()
        if not buf.startswith(TERMS_MAGIC):
            raise IndexIntegrityError(f"bad magic in {TERMS_FILE}")
        pos = len(TERMS_MAGIC)
        count, pos = read_varint(buf, pos)
        terms: dict[str, tuple[int, int, int]] = {}
        try:
            for _ in range(count):
                tlen, pos = read_varint(buf, pos)
                term = buf[pos : pos + tlen].decode("utf-8")
                pos += tlen
                df, pos = read_varint(buf, pos)
                offset, pos = read_varint(buf, pos)
                nbytes, pos = read_varint(buf, pos)
                terms[term] = (df, offset, nbytes)
        except (IndexError, UnicodeDecodeError) as exc:
            raise IndexIntegrityError(f"corrupt {TERMS_FILE}") from exc
        return terms

    def _load_docs(self) -> None:
        buf = (self.path / DOCS_FILE).read_bytes()
        if not buf.startswith(DOCS_MAGIC):
            raise IndexIntegrityError(f"bad magic in {DOCS_FILE}")
        pos = len(DOCS_MAGIC)
        count, pos = read_varint(buf, pos)
        extids: list[str] = []
        doclens = np.empty(count, dtype=np.int64)
        shard_ords = np.empty(count, dtype=np.int64)
        offsets = np.empty(count, dtype=np.int64)
        meta_offs = np.empty(count, dtype=np.int64)
        try:
            for i in range(count):
                ilen, pos = read_varint(buf, pos)
                extids.append(buf[pos : pos + ilen].decode("utf-8"))
                pos += ilen
                doclens[i], pos = read_varint(buf, pos)
                shard_ords[i], pos = read_varint(buf, pos)
                offsets[i], pos = read_varint(buf, pos)
                meta_offs[i], pos = read_varint(buf, pos)
        except (IndexError, UnicodeDecodeError) as exc:
            raise IndexIntegrityError(f"corrupt {DOCS_FILE}") from exc
        self.external_ids = extids
        self.doc_lengths = doclens
        self.doc_shard_ords = shard_ords
        self.doc_offsets = offsets
        self.doc_meta_offsets = meta_offs
        self._ext2int: dict[str, int] | None = None
        self._postings_cache: dict[str, tuple[np.ndarray, np.ndarray]] = {}

    # -- lookups -----------------------------------------------------------

    @property
    def num_docs(self) -> int:
        return self.stats.num_docs

    def internal_id(self, external_id: str) -> int | None:
        if self._ext2int is None:
            self._ext2int = {e: i for i, e in enumerate(self.external_ids)}
        return self._ext2int.get(external_id)

    def df(self, term: str) -> int:
        entry = self._terms.get(term)
        return entry[0] if entry else 0

    def terms(self):
        return self._terms.keys()

    def postings(self, term: str) -> tuple[np.ndarray, np.ndarray] | None:
        """(docids, tfs) arrays for one term, or None when absent.

        Decoded postings are kept in a bounded cache; returned arrays are
        shared and must not be mutated.
        """
        cached = self._postings_cache.get(term)
        if cached is not None:
            return cached
        entry = self._terms.get(term)
        if entry is None:
            return None
        df, offset, nbytes = entry
        flat = varint.decode_stream(self._postings_buf[offset : offset + nbytes])
        if flat.size != 2 * df:
            raise IndexIntegrityError(
                f"postings length mismatch for term {term!r}"
            )
        docids = np.cumsum(flat[0::2]).astype(np.int64)
        tfs = flat[1::2].astype(np.int64)
        if len(self._postings_cache) >= _POSTINGS_CACHE_SIZE:
            self._postings_cache.pop(next(iter(self._postings_cache)))
        self._postings_cache[term] = (docids, tfs)
        return docids, tfs


def open_index(index_path: str | Path) -> IndexReader:
    return IndexReader(index_path)
