import math
import random

import pytest

from plugsearch.analysis import AnalyzerConfig
from plugsearch.docstore import Docstore
from plugsearch.errors import (
    ConfigError,
    EmptyQueryError,
    PageRangeError,
    ParameterError,
)
from plugsearch.search import make_snippet, result_indices, result_page, score_bm25

from conftest import TINY_CORPUS, build_corpus_index
from oracle import oracle_idf, oracle_rank


class TestScoreBm25:
    def test_zero_tf_contributes_zero(self):
        assert score_bm25(0, 1, 5, 10, 4.0) == 0.0

    def test_b_zero_removes_length_dependence(self):
        s1 = score_bm25(2, 3, 1, 10, 4.0, k1=0.9, b=0.0)
        s2 = score_bm25(2, 3, 100, 10, 4.0, k1=0.9, b=0.0)
        assert s1 == s2

    def test_matches_closed_form(self):
        tf, df, dl, N, avgdl, k1, b = 2, 3, 5, 10, 4.0, 0.9, 0.4
        expected = oracle_idf(df, N) * (tf * (k1 + 1.0)) / (
            tf + k1 * (1.0 - b + b * dl / avgdl)
        )
        assert score_bm25(tf, df, dl, N, avgdl, k1, b) == pytest.approx(expected)

    def test_increasing_in_tf(self):
        scores = [score_bm25(tf, 2, 4, 10, 4.0) for tf in (1, 2, 5, 20)]
        assert scores == sorted(scores)
        assert len(set(scores)) == len(scores)

    def test_decreasing_in_df(self):
        scores = [score_bm25(2, df, 4, 10, 4.0) for df in (1, 3, 7, 10)]
        assert scores == sorted(scores, reverse=True)

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(tf=1, df=11, dl=1, N=10, avgdl=1.0),  # df > N
            dict(tf=1, df=1, dl=1, N=10, avgdl=1.0, k1=-0.1),
            dict(tf=1, df=1, dl=1, N=10, avgdl=1.0, b=1.5),
            dict(tf=1, df=1, dl=1, N=10, avgdl=0.0),
        ],
    )
    def test_domain_violations(self, kwargs):
        with pytest.raises(ParameterError):
            score_bm25(**kwargs)

    def test_derived_corpus_ordering(self):
        # corpus {D1="a b", D2="a a b", D3="c"}, query "a": oracle evaluates
        # the closed form for all docs
        docs = [["a", "b"], ["a", "a", "b"], ["c"]]
        ranked = oracle_rank(docs, ["a"], k1=0.9, b=0.4)
        assert [i for i, _ in ranked] == [1, 0]
        assert ranked[0][1] > ranked[1][1] > 0


class TestResultIndices:
    def test_matches_oracle_on_tiny_corpus(self, tiny_index):
        ranked = result_indices("a", 10, tiny_index)
        expected = oracle_rank([["a", "b"], ["a", "a", "b"], ["c"]], ["a"], topk=10)
        assert [d for d, _ in ranked.pairs] == [d for d, _ in expected]
        for (d1, s1), (d2, s2) in zip(ranked.pairs, expected):
            assert s1 == pytest.approx(s2, rel=1e-9)

    def test_absent_term_is_empty(self, tiny_index):
        ranked = result_indices("zzz", 10, tiny_index)
        assert ranked.pairs == ()

    def test_all_stopwords_is_empty_query_error(self, tmp_path):
        reader, _, _ = build_corpus_index(
            tmp_path,
            TINY_CORPUS,
            analyzer_config=AnalyzerConfig(stopwords="en"),
        )
        with pytest.raises(EmptyQueryError):
            result_indices("the of", 10, reader)

    def test_num_requested_truncates(self, tiny_index):
        ranked = result_indices("a", 1, tiny_index)
        assert len(ranked.pairs) == 1
        assert ranked.pairs[0][0] == 1  # D2

    def test_scores_non_increasing_ties_by_docid(self, tmp_path):
        docs = [(f"d{i}", "same text here") for i in range(9)]
        reader, _, _ = build_corpus_index(tmp_path, docs)
        ranked = result_indices("same", 20, reader)
        scores = [s for _, s in ranked.pairs]
        assert scores == sorted(scores, reverse=True)
        assert [d for d, _ in ranked.pairs] == list(range(9))  # tie-break

    def test_duplicate_query_terms_count_with_multiplicity(self, tiny_index):
        once = result_indices("a", 10, tiny_index)
        twice = result_indices("a a", 10, tiny_index)
        for (_, s1), (_, s2) in zip(once.pairs, twice.pairs):
            assert s2 == pytest.approx(2 * s1, rel=1e-12)

    def test_analyzer_mismatch_is_config_error(self, tiny_index):
        from plugsearch.analysis import build_analyzer

        other = build_analyzer(AnalyzerConfig(lowercase=False))
        with pytest.raises(ConfigError):
            result_indices("a", 10, tiny_index, analyzer=other)
        ranked = result_indices(
            "a", 10, tiny_index, analyzer=other, allow_analyzer_mismatch=True
        )
        assert ranked.pairs

    def test_open_by_path(self, tiny_index_paths):
        _, _, index_path = tiny_index_paths
        ranked = result_indices("a", 10, index_path)
        assert [d for d, _ in ranked.pairs] == [1, 0]

    def test_bm25_parameters_change_scores_deterministically(self, tiny_index):
        r1 = result_indices("a b", 10, tiny_index, k1=0.9, b=0.4)
        r2 = result_indices("a b", 10, tiny_index, k1=1.2, b=0.75)
        assert r1.pairs != r2.pairs
        assert result_indices("a b", 10, tiny_index, k1=1.2, b=0.75).pairs == r2.pairs


def test_oracle_equivalence_randomized(tmp_path):
    # random corpora vs the brute-force scorer: same ids, same order,
    # scores within 1e-9 relative (the full-size battery runs in acceptance)
    rng = random.Random(11)
    for trial in range(10):
        vocab = [f"w{i}" for i in range(rng.randint(2, 20))]
        docs = [
            (f"doc{i}", " ".join(rng.choices(vocab, k=rng.randint(1, 12))))
            for i in range(rng.randint(1, 50))
        ]
        reader, _, _ = build_corpus_index(
            tmp_path, docs, shard_size="150B", name=f"r{trial}"
        )
        docs_tokens = [text.split() for _, text in docs]
        for _ in range(10):
            query_terms = rng.choices(vocab, k=rng.randint(1, 3))
            expected = oracle_rank(docs_tokens, query_terms, topk=10)
            ranked = result_indices(" ".join(query_terms), 10, reader)
            assert [d for d, _ in ranked.pairs] == [d for d, _ in expected]
            for (_, s1), (_, s2) in zip(ranked.pairs, expected):
                assert math.isclose(s1, s2, rel_tol=1e-9)


class TestResultPage:
    @pytest.fixture()
    def many_results(self, tmp_path_factory):
        tmp = tmp_path_factory.mktemp("many")
        docs = [(f"d{i:03d}", f"common word{i}") for i in range(45)]
        reader, shards, _ = build_corpus_index(tmp, docs, shard_size="120B")
        ranked = result_indices("common", 1000, reader)
        return reader, shards, ranked

    def test_last_page_by_negative_index(self, many_results):
        reader, shards, ranked = many_results
        store = Docstore(reader, shards)
        last = result_page(store, ranked, -1, 20)
        page2 = result_page(store, ranked, 2, 20)
        assert last == page2
        assert len(last.rows) == 5  # 45 results, 20/page

    def test_partial_last_page(self, many_results):
        reader, shards, ranked = many_results
        store = Docstore(reader, shards)
        assert len(result_page(store, ranked, 2, 20).rows) == 5

    def test_page_out_of_range(self, many_results):
        reader, shards, ranked = many_results
        store = Docstore(reader, shards)
        with pytest.raises(PageRangeError, match="valid span"):
            result_page(store, ranked, 3, 20)
        with pytest.raises(PageRangeError):
            result_page(store, ranked, -4, 20)

    def test_empty_ranked_page_zero(self, many_results, tiny_docstore):
        from plugsearch.search import RankedIds

        empty = RankedIds("zzz", (), 10, ("zzz",))
        page = result_page(tiny_docstore, empty, 0, 20)
        assert page.rows == ()
        assert page.total_results == 0

    def test_docstore_reads_bounded_by_page_size(self, many_results):
        reader, shards, ranked = many_results
        store = Docstore(reader, shards)
        store.read_count = 0
        result_page(store, ranked, 1, 20)
        assert store.read_count <= 20

    def test_pages_partition_ranking(self, many_results):
        reader, shards, ranked = many_results
        store = Docstore(reader, shards)
        for per_page in (1, 7, 20, 45, 60):
            num_pages = -(-len(ranked.pairs) // per_page)
            seen = []
            for page in range(num_pages):
                seen.extend(
                    row.id for row in result_page(store, ranked, page, per_page).rows
                )
            assert seen == [reader.external_ids[d] for d, _ in ranked.pairs]
            # page -k equals page (num_pages - k)
            for k in range(1, num_pages + 1):
                assert (
                    result_page(store, ranked, -k, per_page)
                    == result_page(store, ranked, num_pages - k, per_page)
                )

    def test_rows_carry_full_record(self, tiny_index_paths):
        reader, shards, _ = tiny_index_paths
        store = Docstore(reader, shards)
        ranked = result_indices("a", 10, reader)
        page = result_page(store, ranked, 0, 20)
        row = page.rows[0]
        assert row.id == "D2"
        assert row.text == "a a b"
        assert "⟦a⟧" in row.snippet


class TestMakeSnippet:
    def test_window_centered_on_first_match(self):
        assert make_snippet("x y fox z", ["fox"], window=3) == "y ⟦fox⟧ z"

    def test_empty_text(self):
        assert make_snippet("", ["fox"], window=3) == ""

    def test_no_match_leading_window(self):
        assert make_snippet("a b c d", ["zzz"], window=2) == "a b"

    def test_all_matches_in_window_marked(self):
        assert make_snippet("fox a fox", ["fox"], window=5) == "⟦fox⟧ a ⟦fox⟧"

    def test_analyzer_backed_matching(self, tiny_index):
        snippet = make_snippet(
            "The Fox! ran", ["fox"], window=5, analyzer=tiny_index.analyzer
        )
        assert snippet == "The ⟦Fox!⟧ ran"


def test_rank_of_duplicated_text_never_degrades(tmp_path):
    # appending a copy of an existing document: engine still matches the
    # oracle, and the text's best rank does not get worse
    base = [("a1", "fox jumps"), ("a2", "lazy dog sleeps"), ("a3", "fox fox den")]
    reader, _, _ = build_corpus_index(tmp_path, base, name="before")
    before = result_indices("fox", 10, reader)
    rank_before = [reader.external_ids[d] for d, _ in before.pairs].index("a1")

    extended = base + [("a4", "fox jumps")]
    reader2, _, _ = build_corpus_index(tmp_path, extended, name="after")
    after = result_indices("fox", 10, reader2)
    expected = oracle_rank([t.split() for _, t in extended], ["fox"], topk=10)
    assert [d for d, _ in after.pairs] == [d for d, _ in expected]
    ids_after = [reader2.external_ids[d] for d, _ in after.pairs]
    rank_after = min(ids_after.index("a1"), ids_after.index("a4"))
    assert rank_after <= rank_before
