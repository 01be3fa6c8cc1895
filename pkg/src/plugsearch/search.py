"""BM25 ranked retrieval and lazy result pagination.

Queries use disjunctive (OR) semantics: a document's score is the sum of
per-term BM25 contributions over the query's analyzed tokens, duplicates
counted with multiplicity. Ties break by ascending internal docid, making
every ranking total and reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .analysis import Analyzer
from .docstore import Docstore
from .errors import EmptyQueryError, ConfigError, PageRangeError, ParameterError
from .index.reader import IndexReader

DEFAULT_K1 = 0.9
DEFAULT_B = 0.4
SNIPPET_WINDOW = 30
MARK_OPEN = "⟦"
MARK_CLOSE = "⟧"


@dataclass(frozen=True)
class RankedIds:
    """Ranked (internal docid, score) pairs for one query."""

    query: str
    pairs: tuple[tuple[int, float], ...]
    num_requested: int
    terms: tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.pairs)


@dataclass(frozen=True)
class ResultRow:
    id: str
    score: float
    text: str
    metadata: dict[str, str]
    snippet: str


@dataclass(frozen=True)
class ResultPage:
    page_number: int  # normalized, 0-based
    results_per_page: int
    total_results: int
    rows: tuple[ResultRow, ...] = field(default_factory=tuple)


def idf(df: int, N: int) -> float:
    return math.log(1.0 + (N - df + 0.5) / (df + 0.5))


def score_bm25(
    tf: int,
    df: int,
    dl: int,
    N: int,
    avgdl: float,
    k1: float = DEFAULT_K1,
    b: float = DEFAULT_B,
) -> float:
    """One term's BM25 contribution to one document's score."""
    if df > N or df < 0 or N < 1:
        raise ParameterError(f"df={df} out of range for N={N}")
    if tf < 0 or dl < 0 or avgdl <= 0:
        raise ParameterError("tf and dl must be non-negative, avgdl positive")
    if k1 < 0 or not 0 <= b <= 1:
        raise ParameterError(f"k1={k1} must be >= 0 and b={b} in [0, 1]")
    if tf == 0:
        return 0.0
    return idf(df, N) * (tf * (k1 + 1.0)) / (tf + k1 * (1.0 - b + b * dl / avgdl))


def _open(index) -> IndexReader:
    if isinstance(index, IndexReader):
        return index
    return IndexReader(Path(index))


def result_indices(
    query: str,
    num_results: int,
    index: str | Path | IndexReader,
    analyzer: Analyzer | None = None,
    k1: float = DEFAULT_K1,
    b: float = DEFAULT_B,
    allow_analyzer_mismatch: bool = False,
) -> RankedIds:
    """Top ``num_results`` documents for ``query`` under BM25.

    The index's recorded analyzer is used unless an override is given; an
    override whose config hash differs from the index's is an error unless
    ``allow_analyzer_mismatch`` is set.
    """
    if num_results < 1:
        raise ParameterError(f"num_results must be positive, got {num_results}")
    if k1 < 0 or not 0 <= b <= 1:
        raise ParameterError(f"k1={k1} must be >= 0 and b={b} in [0, 1]")
    reader = _open(index)
    if analyzer is None:
        analyzer = reader.analyzer
    elif (
        analyzer.config_hash() != reader.analyzer_hash
        and not allow_analyzer_mismatch
    ):
        raise ConfigError(
            "query analyzer differs from the analyzer recorded in the index; "
            "pass allow_analyzer_mismatch=True to override"
        )

    tokens = analyzer.terms(query)
    if not tokens:
        raise EmptyQueryError(f"query {query!r} analyzed to zero tokens")

    N = reader.num_docs
    avgdl = reader.stats.avgdl
    doclens = reader.doc_lengths
    scores = np.zeros(N, dtype=np.float64)
    matched = np.zeros(N, dtype=bool)

    for term in tokens:  # duplicates contribute with multiplicity
        post = reader.postings(term)
        if post is None:
            continue
        docids, tfs = post
        df = len(docids)
        w = idf(df, N)
        tf_f = tfs.astype(np.float64)
        dl_f = doclens[docids].astype(np.float64)
        contrib = w * (tf_f * (k1 + 1.0)) / (tf_f + k1 * (1.0 - b + b * dl_f / avgdl))
        scores[docids] += contrib
        matched[docids] = True

    ids = np.flatnonzero(matched)
    if ids.size == 0:
        return RankedIds(query, (), num_results, tuple(tokens))
    top_scores = scores[ids]
    if ids.size > num_results:
        # shrink to the candidates that can appear in the top k before the
        # full sort: everything scoring at or above the k-th largest score
        # (threshold ties included, so docid tie-breaking stays exact)
        kth = np.partition(top_scores, ids.size - num_results)[
            ids.size - num_results
        ]
        keep = np.flatnonzero(top_scores >= kth)
        ids = ids[keep]
        top_scores = top_scores[keep]
    order = np.lexsort((ids, -top_scores))[:num_results]
    top = ids[order]
    pairs = tuple((int(d), float(scores[d])) for d in top)
    return RankedIds(query, pairs, num_results, tuple(tokens))


def _num_pages(total: int, per_page: int) -> int:
    return (total + per_page - 1) // per_page


def result_page(
    docstore: Docstore,
    ranked: RankedIds,
    page: int,
    results_per_page: int,
    analyzer: Analyzer | None = None,
    snippet_window: int = SNIPPET_WINDOW,
) -> ResultPage:
    """Materialize one page of ranked results from the docstore.

    Negative pages index from the end (-1 = last). Only the requested
    page's documents are read.
    """
    if results_per_page < 1:
        raise ParameterError(
            f"results_per_page must be positive, got {results_per_page}"
        )
    total = len(ranked.pairs)
    if total == 0:
        if page == 0:
            return ResultPage(0, results_per_page, 0)
        raise PageRangeError(
            f"page {page} out of range: no results", num_pages=0
        )
    num_pages = _num_pages(total, results_per_page)
    page_idx = page + num_pages if page < 0 else page
    if not 0 <= page_idx < num_pages:
        raise PageRangeError(
            f"page {page} out of range; valid span 0..{num_pages - 1} "
            f"(or -1..-{num_pages})",
            num_pages=num_pages,
        )
    if analyzer is None:
        analyzer = docstore.reader.analyzer

    rows = []
    for docid, score in ranked.pairs[
        page_idx * results_per_page : (page_idx + 1) * results_per_page
    ]:
        rec = docstore.get(docid)
        rows.append(
            ResultRow(
                id=rec.external_id,
                score=score,
                text=rec.text,
                metadata=rec.metadata,
                snippet=make_snippet(
                    rec.text, ranked.terms, window=snippet_window, analyzer=analyzer
                ),
            )
        )
    return ResultPage(page_idx, results_per_page, total, tuple(rows))


def make_snippet(
    text: str,
    query_terms,
    window: int = SNIPPET_WINDOW,
    analyzer: Analyzer | None = None,
) -> str:
    """Window of ``window`` whitespace tokens centered on the first match.

    Matched tokens are wrapped in marker delimiters; with no match the
    leading window is returned unmarked.
    """
    display = text.split()
    if not display:
        return ""
    qset = set(query_terms)

    if analyzer is not None:
        token_terms = analyzer.token_terms
        disjoint = qset.isdisjoint

        def matches(token: str) -> bool:
            return not disjoint(token_terms(token))

    else:

        def matches(token: str) -> bool:
            return token.casefold() in qset

    first = next((i for i, tok in enumerate(display) if matches(tok)), None)
    start = 0 if first is None else max(0, first - (window - 1) // 2)
    end = min(len(display), start + window)
    start = max(0, end - window)
    parts = [
        f"{MARK_OPEN}{tok}{MARK_CLOSE}" if matches(tok) else tok
        for tok in display[start:end]
    ]
    return " ".join(parts)
