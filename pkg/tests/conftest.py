import json
from pathlib import Path

import pytest

from plugsearch.analysis import AnalyzerConfig
from plugsearch.docstore import Docstore
from plugsearch.index import build_index, open_index
from plugsearch.ingest import load_jsonl
from plugsearch.preprocess import shard_dataset

TINY_CORPUS = [("D1", "a b"), ("D2", "a a b"), ("D3", "c")]


def write_jsonl(path: Path, docs) -> Path:
    with open(path, "w", encoding="utf-8") as fh:
        for doc_id, text in docs:
            fh.write(json.dumps({"id": doc_id, "text": text}) + "\n")
    return path


def build_corpus_index(
    tmp_path: Path,
    docs,
    shard_size="1GB",
    analyzer_config: AnalyzerConfig | None = None,
    threads: int = 1,
    name: str = "corpus",
):
    """jsonl source -> shards -> index; returns (reader, shards_path, index_path)."""
    src = write_jsonl(tmp_path / f"{name}.jsonl", docs)
    shards = tmp_path / f"{name}-shards"
    index_path = tmp_path / f"{name}-index"
    stream = load_jsonl(str(src), "text", "id")
    shard_dataset(stream, shard_size, "text", shards)
    build_index(shards, index_path, analyzer_config or AnalyzerConfig(), threads)
    return open_index(index_path), shards, index_path


@pytest.fixture
def tiny_index(tmp_path):
    reader, shards, index_path = build_corpus_index(tmp_path, TINY_CORPUS)
    return reader


@pytest.fixture
def tiny_index_paths(tmp_path):
    return build_corpus_index(tmp_path, TINY_CORPUS)


@pytest.fixture
def tiny_docstore(tiny_index_paths):
    reader, shards, _ = tiny_index_paths
    store = Docstore(reader, shards)
    yield store
    store.close()
