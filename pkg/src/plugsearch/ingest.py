"""Load documents from local files, directories, or remote streams.

All loaders yield :class:`Document` objects in deterministic source order
(file order, then line order) and support either fully materialized or
single-pass streaming iteration.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterator

from .errors import DuplicateIdError, FieldMissingError, LoadError, SchemaError

TEXT_EXTENSIONS = (".txt",)


@dataclass(frozen=True)
class Document:
    """One searchable record: stable id, text payload, opaque metadata."""

    id: str
    text: str
    metadata: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class SourceSpec:
    """Dispatcher description of a document source."""

    format: str  # jsonl | csv | text-dir
    location: str
    text_field: str = "text"
    id_field: str | None = None
    delimiter: str = ","
    recursive: bool = False


class DocumentStream:
    """Iterable of Documents over one source.

    Materialized streams cache all documents and may be iterated repeatedly.
    Streaming mode is single-pass: a second iteration requires ``reopen()``.
    """

    def __init__(
        self,
        factory: Callable[[], Iterator[Document]],
        *,
        streaming: bool = False,
        count_hint: int | None = None,
    ):
        self._factory = factory
        self.streaming = streaming
        self.count_hint = count_hint
        self._docs: list[Document] | None = None
        self._consumed = False
        if not streaming:
            self._docs = list(factory())

    def __iter__(self) -> Iterator[Document]:
        if self._docs is not None:
            return iter(self._docs)
        if self._consumed:
            raise RuntimeError(
                "streaming DocumentStream already consumed; call reopen()"
            )
        self._consumed = True
        return self._factory()

    def reopen(self) -> "DocumentStream":
        """Re-open the underlying source for another single pass."""
        return DocumentStream(
            self._factory, streaming=True, count_hint=self.count_hint
        )

    def __len__(self) -> int:
        if self._docs is None:
            raise TypeError("streaming DocumentStream has no length")
        return len(self._docs)


def _is_url(location: str) -> bool:
    return location.startswith(("http://", "https://"))


def _open_binary_lines(location: str) -> Iterator[bytes]:
    """Yield raw lines (LF or CRLF stripped) from a path or HTTP(S) URL."""
    if _is_url(location):
        import requests

        with requests.get(location, stream=True, timeout=60) as resp:
            resp.raise_for_status()
            for raw in resp.iter_lines(decode_unicode=False):
                yield raw
    else:
        with open(location, "rb") as fh:
            for raw in fh:
                yield raw.rstrip(b"\r\n")


def _decode(raw: bytes, errors: str, counters: dict[str, int]) -> str:
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError:
        if errors == "strict":
            raise LoadError("invalid UTF-8 in source record")
        counters["utf8_replacements"] += 1
        return raw.decode("utf-8", errors="replace")


def load_jsonl(
    location: str,
    text_field: str = "text",
    id_field: str | None = None,
    streaming: bool = False,
    encoding_errors: str = "replace",
) -> DocumentStream:
    """Load one JSON object per line from a file or URL.

    Synthetic ids ``doc-{line_index}`` (0-based) are assigned when
    ``id_field`` is absent. Duplicate explicit ids are a load error.
    """

    def gen() -> Iterator[Document]:
        counters = {"utf8_replacements": 0}
        seen: set[str] = set()
        for lineno, raw in enumerate(_open_binary_lines(location)):
            if not raw.strip():
                continue
            line = _decode(raw, encoding_errors, counters)
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise LoadError(
                    f"malformed JSON at line {lineno + 1}: {exc.msg}",
                    line=lineno + 1,
                ) from exc
            if text_field not in record:
                raise FieldMissingError(
                    f"record {lineno} lacks text field {text_field!r}",
                    line=lineno + 1,
                )
            if id_field is not None:
                if id_field not in record:
                    raise FieldMissingError(
                        f"record {lineno} lacks id field {id_field!r}",
                        line=lineno + 1,
                    )
                doc_id = str(record[id_field])
                if doc_id in seen:
                    raise DuplicateIdError(
                        f"duplicate id {doc_id!r} at line {lineno + 1}",
                        line=lineno + 1,
                    )
                seen.add(doc_id)
            else:
                doc_id = f"doc-{lineno}"
            metadata = {
                k: v if isinstance(v, str) else json.dumps(v, ensure_ascii=False)
                for k, v in record.items()
                if k != text_field and k != id_field
            }
            yield Document(id=doc_id, text=str(record[text_field]), metadata=metadata)

    return DocumentStream(gen, streaming=streaming)


def load_csv(
    location: str,
    text_field: str = "text",
    id_field: str | None = None,
    delimiter: str = ",",
    streaming: bool = False,
    encoding_errors: str = "replace",
) -> DocumentStream:
    """Load a delimited tabular file; first row is the header.

    Columns other than the text and id columns become metadata entries
    keyed by header name.
    """

    def gen() -> Iterator[Document]:
        if _is_url(location):
            import requests

            resp = requests.get(location, stream=True, timeout=60)
            resp.raise_for_status()
            text_io: io.TextIOBase = io.TextIOWrapper(
                resp.raw, encoding="utf-8", errors=encoding_errors, newline=""
            )
        else:
            text_io = open(
                location, encoding="utf-8", errors=encoding_errors, newline=""
            )
        with text_io:
            reader = csv.reader(text_io, delimiter=delimiter)
            try:
                header = next(reader)
            except StopIteration:
                raise SchemaError("empty tabular source: no header row")
            if text_field not in header:
                raise SchemaError(
                    f"header {header!r} lacks text field {text_field!r}"
                )
            if id_field is not None and id_field not in header:
                raise SchemaError(f"header {header!r} lacks id field {id_field!r}")
            seen: set[str] = set()
            for rownum, row in enumerate(reader):
                if len(row) != len(header):
                    raise LoadError(
                        f"ragged row {rownum}: {len(row)} cells under "
                        f"{len(header)}-column header",
                        line=rownum + 2,
                    )
                record = dict(zip(header, row))
                if id_field is not None:
                    doc_id = record[id_field]
                    if doc_id in seen:
                        raise DuplicateIdError(
                            f"duplicate id {doc_id!r} at row {rownum}",
                            line=rownum + 2,
                        )
                    seen.add(doc_id)
                else:
                    doc_id = f"doc-{rownum}"
                metadata = {
                    k: v
                    for k, v in record.items()
                    if k != text_field and k != id_field
                }
                yield Document(
                    id=doc_id, text=record[text_field], metadata=metadata
                )

    return DocumentStream(gen, streaming=streaming)


def load_text_dir(
    location: str,
    recursive: bool = False,
    extensions: tuple[str, ...] = TEXT_EXTENSIONS,
    on_error: str = "abort",
    encoding_errors: str = "replace",
) -> DocumentStream:
    """Load one Document per text file under a directory.

    Ids are paths relative to ``location`` with ``/`` separators; files are
    visited in lexicographic path order. ``on_error`` is "abort" or "skip"
    for unreadable files.
    """
    root = Path(location)
    if not root.is_dir():
        raise LoadError(f"not a directory: {location}")

    def gen() -> Iterator[Document]:
        pattern = "**/*" if recursive else "*"
        paths = sorted(
            p for p in root.glob(pattern)
            if p.is_file() and p.suffix in extensions
        )
        counters = {"utf8_replacements": 0}
        for path in paths:
            rel = path.relative_to(root).as_posix()
            try:
                raw = path.read_bytes()
            except OSError as exc:
                if on_error == "skip":
                    continue
                raise LoadError(f"unreadable file {rel}: {exc}") from exc
            yield Document(id=rel, text=_decode(raw, encoding_errors, counters))

    return DocumentStream(gen)


def load_source(spec: SourceSpec, streaming: bool = False) -> DocumentStream:
    """Dispatch to the loader named by ``spec.format``."""
    if spec.format == "jsonl":
        return load_jsonl(
            spec.location, spec.text_field, spec.id_field, streaming=streaming
        )
    if spec.format == "csv":
        return load_csv(
            spec.location,
            spec.text_field,
            spec.id_field,
            delimiter=spec.delimiter,
            streaming=streaming,
        )
    if spec.format == "text-dir":
        return load_text_dir(spec.location, recursive=spec.recursive)
    raise LoadError(f"unknown source format {spec.format!r}")
