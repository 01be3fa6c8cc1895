"""plugsearch: take any text dataset from raw files to a deployed BM25 search app."""

__version__ = "0.1.0"

from .analysis import Analyzer, AnalyzerConfig, build_analyzer
from .docstore import Docstore
from .index import IndexReader, IndexStats, build_index, index_stats, open_index
from .ingest import Document, DocumentStream, SourceSpec, load_csv, load_jsonl, load_text_dir
from .preprocess import ShardManifest, doc_to_index_record, parse_size, shard_dataset
from .registry import (
    IndexManifest,
    RegistryLocation,
    load_index_from_hub,
    pack_index,
    push_index_to_hub,
)
from .registry_server import serve_registry
from .scaffold import create_app, create_space_from_local, list_templates
from .search import (
    RankedIds,
    ResultPage,
    make_snippet,
    result_indices,
    result_page,
    score_bm25,
)

__all__ = [
    "Analyzer",
    "AnalyzerConfig",
    "build_analyzer",
    "Docstore",
    "IndexReader",
    "IndexStats",
    "build_index",
    "index_stats",
    "open_index",
    "Document",
    "DocumentStream",
    "SourceSpec",
    "load_csv",
    "load_jsonl",
    "load_text_dir",
    "ShardManifest",
    "doc_to_index_record",
    "parse_size",
    "shard_dataset",
    "IndexManifest",
    "RegistryLocation",
    "load_index_from_hub",
    "pack_index",
    "push_index_to_hub",
    "serve_registry",
    "create_app",
    "create_space_from_local",
    "list_templates",
    "RankedIds",
    "ResultPage",
    "make_snippet",
    "result_indices",
    "result_page",
    "score_bm25",
]
