"""Lexical leg checks: BM25 form, normalization, search, persistence.

The random-corpus comparisons use the brute-force references in oracles.py,
which score every document with naive loops and share no code with src/.
"""

import math
import random

import pytest

from faqrank.analyzer import SimpleAnalyzer, default_analyzer
from faqrank.corpus import FaqCorpus, FaqEntry
from faqrank.errors import ConfigError, UnknownDocumentError, ValidationError
from faqrank.lexical import (
    BM25Params,
    LexicalIndex,
    NormalizationParams,
    build_index,
    load_index,
    raw_score,
    save_index,
    search_lexical,
    similarity,
)
from oracles import ref_bm25, ref_search_lexical

LN2 = 0.6931471805599453

# Analyzer with no stopwords: every token is a content word, which keeps the
# arithmetic in the hand-traced cases free of list lookups.
plain = SimpleAnalyzer(stopwords=frozenset())


def corpus_of(questions: list[str]) -> FaqCorpus:
    return FaqCorpus(
        entries=tuple(
            FaqEntry(id=f"d{i:03d}", question=q, answer=f"answer {i}")
            for i, q in enumerate(questions)
        )
    )


def random_corpus(rng: random.Random, max_docs: int = 20) -> FaqCorpus:
    vocab = [f"w{i}" for i in range(rng.randint(3, 12))]
    n = rng.randint(1, max_docs)
    return corpus_of(
        [" ".join(rng.choices(vocab, k=rng.randint(1, 8))) for _ in range(n)]
    )


def random_query(rng: random.Random) -> str:
    vocab = [f"w{i}" for i in range(14)]
    return " ".join(rng.choices(vocab, k=rng.randint(1, 6)))


class TestBM25Form:
    def test_hand_anchored_single_term(self):
        """Two docs, one shares the single query term.

        df=1, N=2 -> idf = ln(1 + 1.5/1.5) = ln 2. Both docs have two tokens,
        so dl = avgdl and the tf part is tf(k+1)/(tf + k(1-b+b)) =
        2.2/2.2 = 1. Expected raw score: ln 2 exactly.
        """
        corpus = corpus_of(["alpha beta", "gamma delta"])
        index = build_index(corpus, plain)
        assert raw_score(index, ("alpha",), "d000") == pytest.approx(LN2, abs=1e-12)

    def test_term_frequency_saturates(self):
        """Doubling tf raises the score but by less than double (k bounds it)."""
        corpus = corpus_of(["topic filler one two", "topic topic filler one"])
        index = build_index(corpus, plain)
        once = raw_score(index, ("topic",), "d000")
        twice = raw_score(index, ("topic",), "d001")
        assert once < twice < 2 * once

    def test_repeated_query_token_counts_per_occurrence(self):
        corpus = corpus_of(["alpha beta", "gamma delta"])
        index = build_index(corpus, plain)
        assert raw_score(index, ("alpha", "alpha"), "d000") == pytest.approx(
            2 * raw_score(index, ("alpha",), "d000")
        )

    def test_no_overlap_scores_zero(self):
        index = build_index(corpus_of(["alpha beta"]), plain)
        assert raw_score(index, ("nothing", "matches"), "d000") == 0.0

    def test_unknown_doc_raises(self):
        index = build_index(corpus_of(["alpha"]), plain)
        with pytest.raises(UnknownDocumentError):
            raw_score(index, ("alpha",), "missing")

    def test_matches_brute_force_on_random_corpora(self):
        rng = random.Random(42)
        for _ in range(60):
            corpus = random_corpus(rng)
            index = build_index(corpus, plain)
            docs = {e.id: list(plain.analyze(e.question).tokens) for e in corpus}
            tokens = tuple(random_query(rng).split())
            for doc_id in docs:
                assert raw_score(index, tokens, doc_id) == pytest.approx(
                    ref_bm25(docs, tokens, doc_id), abs=1e-9
                )

    def test_param_bounds(self):
        with pytest.raises(ConfigError):
            BM25Params(k=-0.1)
        with pytest.raises(ConfigError):
            BM25Params(b=1.5)


class TestIndexConstruction:
    def test_postings_and_stats(self):
        corpus = corpus_of(["alpha beta alpha", "beta gamma"])
        index = build_index(corpus, plain)
        assert index.doc_count == 2
        assert index.avg_doc_length == 2.5
        assert dict(index.postings["alpha"]) == {"d000": 2}
        assert dict(index.postings["beta"]) == {"d000": 1, "d001": 1}
        assert index.doc_lengths == {"d000": 3, "d001": 2}

    def test_full_scale_document_count(self):
        corpus = corpus_of([f"question number {i}" for i in range(1786)])
        index = build_index(corpus, plain)
        assert index.doc_count == 1786

    def test_rebuild_produces_byte_identical_snapshots(self, tmp_path):
        corpus = corpus_of(["alpha beta", "gamma beta delta"])
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        save_index(build_index(corpus, plain), a)
        save_index(build_index(corpus, plain), b)
        assert a.read_bytes() == b.read_bytes()

    def test_invariants_enforced(self):
        with pytest.raises(ValidationError):
            LexicalIndex(postings={}, doc_lengths={"d": 2}, doc_count=2,
                         avg_doc_length=2.0)
        with pytest.raises(ValidationError):
            LexicalIndex(postings={"x": (("ghost", 1),)}, doc_lengths={"d": 1},
                         doc_count=1, avg_doc_length=1.0)
        with pytest.raises(ValidationError):
            LexicalIndex(postings={}, doc_lengths={"d": 2}, doc_count=1,
                         avg_doc_length=1.0)


class TestNormalization:
    def test_divisor_arithmetic(self):
        """3 content words and 2 dependencies -> 3*4 + 2*2 = 16."""
        norm = NormalizationParams()
        assert norm.divisor(3, 2) == 16.0
        assert norm.divisor(2, 1) == 10.0
        assert norm.divisor(1, 0) == 4.0

    def test_similarity_is_raw_over_divisor(self):
        corpus = corpus_of(["alpha beta", "gamma delta"])
        index = build_index(corpus, plain)
        raw = raw_score(index, ("alpha", "beta"), "d000")
        sim = similarity(index, plain, "alpha beta", "d000")
        assert sim == pytest.approx(raw / 10.0, abs=1e-12)

    def test_stopword_only_query_has_zero_similarity(self):
        analyzer = default_analyzer()
        corpus = corpus_of(["where is the office", "how to renew"])
        index = build_index(corpus, analyzer)
        # "where is the" matches indexed tokens, but carries no content words.
        assert similarity(index, analyzer, "where is the", "d000") == 0.0
        assert search_lexical(index, analyzer, "where is the", 5) == []

    def test_normalization_preserves_ranking(self):
        rng = random.Random(7)
        for _ in range(40):
            corpus = random_corpus(rng)
            index = build_index(corpus, plain)
            query = random_query(rng)
            tokens = plain.analyze(query).tokens
            raw_ranked = sorted(
                (
                    (doc_id, raw_score(index, tokens, doc_id))
                    for doc_id in index.doc_lengths
                ),
                key=lambda pair: (-pair[1], pair[0]),
            )
            raw_ids = [d for d, s in raw_ranked if s != 0.0]
            got = search_lexical(index, plain, query, len(corpus))
            assert [d.faq_id for d in got] == raw_ids

    def test_divisor_bounds(self):
        with pytest.raises(ConfigError):
            NormalizationParams(k1=0.0)
        with pytest.raises(ConfigError):
            NormalizationParams(k2=-1.0)


class TestSearchLexical:
    def test_matches_brute_force(self):
        rng = random.Random(11)
        for _ in range(50):
            corpus = random_corpus(rng)
            index = build_index(corpus, plain)
            query = random_query(rng)
            analyzed = plain.analyze(query)
            divisor = NormalizationParams().divisor(
                analyzed.content_word_count, analyzed.dependency_relation_count
            )
            docs = {e.id: list(plain.analyze(e.question).tokens) for e in corpus}
            expected = ref_search_lexical(docs, list(analyzed.tokens), divisor, 10)
            got = search_lexical(index, plain, query, 10)
            assert [d.faq_id for d in got] == [doc_id for doc_id, _ in expected]
            for doc, (_, score) in zip(got, expected):
                assert doc.score == pytest.approx(score, abs=1e-9)

    def test_ties_break_by_ascending_id(self):
        corpus = corpus_of(["alpha beta", "alpha beta"])
        index = build_index(corpus, plain)
        got = search_lexical(index, plain, "alpha", 2)
        assert [d.faq_id for d in got] == ["d000", "d001"]
        assert got[0].score == got[1].score

    def test_zero_scoring_docs_are_excluded(self):
        corpus = corpus_of(["alpha", "beta", "gamma"])
        index = build_index(corpus, plain)
        got = search_lexical(index, plain, "alpha", 10)
        assert [d.faq_id for d in got] == ["d000"]

    def test_k_truncates(self):
        corpus = corpus_of(["common alpha", "common beta", "common gamma"])
        index = build_index(corpus, plain)
        assert len(search_lexical(index, plain, "common", 2)) == 2

    def test_k_must_be_positive(self):
        index = build_index(corpus_of(["alpha"]), plain)
        with pytest.raises(ValidationError):
            search_lexical(index, plain, "alpha", 0)

    def test_scores_are_non_negative_and_sorted(self):
        rng = random.Random(3)
        for _ in range(25):
            corpus = random_corpus(rng)
            index = build_index(corpus, plain)
            got = search_lexical(index, plain, random_query(rng), 10)
            assert all(d.score > 0 for d in got)
            assert all(a.score >= b.score for a, b in zip(got, got[1:]))


class TestPersistence:
    def test_round_trip_equality(self, tmp_path):
        corpus = corpus_of(["alpha beta", "gamma beta", "delta"])
        index = build_index(corpus, default_analyzer(), BM25Params(k=1.5, b=0.6))
        path = tmp_path / "index.json"
        save_index(index, path)
        assert load_index(path) == index

    def test_version_field_checked(self, tmp_path):
        corpus = corpus_of(["alpha"])
        path = tmp_path / "index.json"
        save_index(build_index(corpus, plain), path)
        snapshot = path.read_text(encoding="utf-8").replace(
            '"format_version":1', '"format_version":99'
        )
        path.write_text(snapshot, encoding="utf-8")
        with pytest.raises(ValidationError, match="format_version"):
            load_index(path)

    def test_fingerprint_recorded(self, tmp_path):
        analyzer = default_analyzer()
        index = build_index(corpus_of(["alpha"]), analyzer)
        assert index.analyzer_fingerprint == analyzer.fingerprint


def test_searches_do_not_mutate_the_index():
    corpus = corpus_of(["alpha beta", "beta gamma"])
    index = build_index(corpus, plain)
    before = (dict(index.postings), dict(index.doc_lengths), index.avg_doc_length)
    search_lexical(index, plain, "alpha beta gamma", 5)
    similarity(index, plain, "beta", "d001")
    after = (dict(index.postings), dict(index.doc_lengths), index.avg_doc_length)
    assert before == after
