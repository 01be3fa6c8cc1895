"""On-disk index layout: file names, magics, scalar varint access.

All binary files are little-endian varint streams behind a 5-byte magic.
"""

from __future__ import annotations

TERMS_FILE = "terms.dict"
POSTINGS_FILE = "postings.bin"
DOCS_FILE = "docs.tbl"
STATS_FILE = "stats.json"
ANALYZER_FILE = "analyzer.json"

INDEX_FILES = (TERMS_FILE, POSTINGS_FILE, DOCS_FILE, STATS_FILE, ANALYZER_FILE)

TERMS_MAGIC = b"PSTD\x01"
POSTINGS_MAGIC = b"PSPB\x01"
DOCS_MAGIC = b"PSDT\x01"


def read_varint(buf: bytes, pos: int) -> tuple[int, int]:
    """Read one varint at ``pos``; returns (value, next_pos)."""
    value = 0
    shift = 0
    while True:
        byte = buf[pos]
        pos += 1
        value |= (byte & 0x7F) << shift
        if byte < 0x80:
            return value, pos
        shift += 7
