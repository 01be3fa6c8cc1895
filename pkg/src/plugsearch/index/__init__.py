"""Inverted index: build, on-disk format, read access."""

from .build import IndexStats, build_index, index_stats
from .format import INDEX_FILES
from .reader import IndexReader, open_index

__all__ = [
    "IndexStats",
    "build_index",
    "index_stats",
    "INDEX_FILES",
    "IndexReader",
    "open_index",
]
