"""Build an immutable inverted index from shard files.

Shards are inverted in parallel workers and merged in shard order, so the
output bytes are identical regardless of the thread count.
"""

from __future__ import annotations

import json
import time
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from ..analysis import Analyzer, AnalyzerConfig, build_analyzer
from ..errors import DuplicateIdError, EmptyCorpusError, IndexIntegrityError, LoadError
from ..preprocess import ShardManifest
from . import varint
from .format import (
    ANALYZER_FILE,
    DOCS_FILE,
    DOCS_MAGIC,
    POSTINGS_FILE,
    POSTINGS_MAGIC,
    STATS_FILE,
    TERMS_FILE,
    TERMS_MAGIC,
)


@dataclass(frozen=True)
class IndexStats:
    """Corpus-level statistics recorded at build time."""

    num_docs: int
    num_terms: int
    total_tokens: int
    avgdl: float
    build_seconds: float = 0.0

    def to_dict(self) -> dict:
        return {
            "num_docs": self.num_docs,
            "num_terms": self.num_terms,
            "total_tokens": self.total_tokens,
            "avgdl": self.avgdl,
            "build_seconds": self.build_seconds,
        }


def _line_offsets(data: bytes) -> list[tuple[int, bytes]]:
    """(byte offset, line content) pairs for LF-terminated data."""
    out = []
    pos = 0
    for line in data.split(b"\n"):
        if line:
            out.append((pos, line))
        pos += len(line) + 1
    return out


def _invert_shard(args) -> tuple:
    shard_ord, shard_path, meta_path, analyzer = args
    data = Path(shard_path).read_bytes()
    docs: list[tuple[str, int, int, int]] = []  # extid, doclen, offset, meta+1
    postings: dict[str, list[tuple[int, int]]] = {}

    # offset+1 per meta line, or 0 when the record carries no metadata so
    # readers skip the sidecar seek entirely
    meta_offsets: list[int] = []
    if meta_path is not None and Path(meta_path).is_file():
        meta_offsets = [
            0 if line.endswith(b'"metadata":{}}') else off + 1
            for off, line in _line_offsets(Path(meta_path).read_bytes())
        ]

    for local_idx, (offset, line) in enumerate(_line_offsets(data)):
        try:
            record = json.loads(line)
            extid = record["id"]
            contents = record["contents"]
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise LoadError(
                f"malformed shard line in {Path(shard_path).name} "
                f"(doc {local_idx}): {exc}"
            ) from exc
        counts = Counter(analyzer.iter_terms(contents))
        doclen = sum(counts.values())
        meta_off = meta_offsets[local_idx] if local_idx < len(meta_offsets) else 0
        docs.append((str(extid), doclen, offset, meta_off))
        for term, tf in counts.items():
            postings.setdefault(term, []).append((local_idx, tf))

    return shard_ord, docs, postings


def build_index(
    shards_path: str | Path,
    index_path: str | Path,
    analyzer_config: AnalyzerConfig | Analyzer | None = None,
    threads: int = 1,
) -> IndexStats:
    """Index all shards under ``shards_path`` into ``index_path``."""
    t0 = time.monotonic()
    shards_dir = Path(shards_path)
    try:
        manifest = ShardManifest.load(shards_dir)
    except FileNotFoundError as exc:
        raise IndexIntegrityError(f"no shard manifest under {shards_dir}") from exc
    if not manifest.shard_files:
        raise EmptyCorpusError(f"no shards listed in {shards_dir}")

    if analyzer_config is None:
        analyzer_config = AnalyzerConfig()
    analyzer = (
        analyzer_config
        if isinstance(analyzer_config, Analyzer)
        else build_analyzer(analyzer_config)
    )

    meta_by_shard = dict(zip(manifest.shard_files, manifest.meta_files))
    jobs = [
        (
            ord_,
            shards_dir / name,
            shards_dir / meta_by_shard[name] if name in meta_by_shard else None,
            analyzer,
        )
        for ord_, name in enumerate(manifest.shard_files)
    ]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_invert_shard, jobs))
    else:
        results = [_invert_shard(job) for job in jobs]
    results.sort(key=lambda r: r[0])

    # Deterministic ordered merge: docids dense in shard order.
    extids: list[str] = []
    doclens: list[int] = []
    shard_ords: list[int] = []
    offsets: list[int] = []
    meta_offs: list[int] = []
    merged: dict[str, list[tuple[int, int]]] = {}
    seen: set[str] = set()
    for shard_ord, docs, postings in results:
        base = len(extids)
        for extid, doclen, offset, meta_off in docs:
            if extid in seen:
                raise DuplicateIdError(f"duplicate document id {extid!r}")
            seen.add(extid)
            extids.append(extid)
            doclens.append(doclen)
            shard_ords.append(shard_ord)
            offsets.append(offset)
            meta_offs.append(meta_off)
        for term, entries in postings.items():
            merged.setdefault(term, []).extend(
                (base + local, tf) for local, tf in entries
            )

    num_docs = len(extids)
    if num_docs == 0:
        raise EmptyCorpusError(f"shards under {shards_dir} contain no documents")
    total_tokens = sum(doclens)
    terms_sorted = sorted(merged)

    out = Path(index_path)
    out.mkdir(parents=True, exist_ok=True)

    # postings.bin + terms.dict
    term_entries: list[tuple[str, int, int, int]] = []  # term, df, offset, nbytes
    with open(out / POSTINGS_FILE, "wb") as pf:
        pf.write(POSTINGS_MAGIC)
        pos = len(POSTINGS_MAGIC)
        for term in terms_sorted:
            entries = merged[term]
            flat = []
            prev = 0
            for docid, tf in entries:
                flat.append(docid - prev)
                flat.append(tf)
                prev = docid
            blob = varint.encode_stream(flat)
            pf.write(blob)
            term_entries.append((term, len(entries), pos, len(blob)))
            pos += len(blob)

    with open(out / TERMS_FILE, "wb") as tf_:
        tf_.write(TERMS_MAGIC)
        tf_.write(varint.encode_stream([len(term_entries)]))
        for term, df, offset, nbytes in term_entries:
            raw = term.encode("utf-8")
            tf_.write(varint.encode_stream([len(raw)]))
            tf_.write(raw)
            tf_.write(varint.encode_stream([df, offset, nbytes]))

    with open(out / DOCS_FILE, "wb") as df_:
        df_.write(DOCS_MAGIC)
        df_.write(varint.encode_stream([num_docs]))
        for i in range(num_docs):
            raw = extids[i].encode("utf-8")
            df_.write(varint.encode_stream([len(raw)]))
            df_.write(raw)
            df_.write(
                varint.encode_stream(
                    [doclens[i], shard_ords[i], offsets[i], meta_offs[i]]
                )
            )

    stats = IndexStats(
        num_docs=num_docs,
        num_terms=len(terms_sorted),
        total_tokens=total_tokens,
        avgdl=total_tokens / num_docs,
        build_seconds=round(time.monotonic() - t0, 6),
    )
    # build_seconds stays out of stats.json so rebuilds are byte-identical
    stats_doc = stats.to_dict()
    del stats_doc["build_seconds"]
    stats_doc["shards_path"] = str(shards_dir)
    (out / STATS_FILE).write_text(
        json.dumps(stats_doc, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )

    analyzer_doc = analyzer.to_dict()
    analyzer_doc["config_hash"] = analyzer.config_hash()
    (out / ANALYZER_FILE).write_text(
        json.dumps(analyzer_doc, indent=2, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )
    return stats


def index_stats(index_path: str | Path) -> IndexStats:
    """Read build-time stats without scanning postings."""
    path = Path(index_path) / STATS_FILE
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
        return IndexStats(
            num_docs=doc["num_docs"],
            num_terms=doc["num_terms"],
            total_tokens=doc["total_tokens"],
            avgdl=doc["avgdl"],
            build_seconds=doc.get("build_seconds", 0.0),
        )
    except (OSError, ValueError, KeyError) as exc:
        raise IndexIntegrityError(f"missing or corrupt {path}") from exc
