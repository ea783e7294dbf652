import math
import random

import pytest

from faqrank.analyzer import SimpleAnalyzer, default_analyzer
from faqrank.corpus import FaqCorpus, FaqEntry
from faqrank.errors import ConfigError, TransportError, ValidationError
from faqrank.fusion import (
    FusionParams,
    Group,
    fuse,
    fused_score,
    search_fused,
)
from faqrank.lexical import build_index
from faqrank.ranking import ScoredDoc
from faqrank.relevance import OverlapScorer
from oracles import fuse_order_is_unique, ref_fuse

plain = SimpleAnalyzer(stopwords=frozenset())


def docs(*pairs):
    return [ScoredDoc(faq_id=i, score=s) for i, s in pairs]


class TestFusedScore:
    def test_arithmetic(self):
        assert fused_score(0.25, 0.4, 10.0) == 2.9
        assert fused_score(0.0, 0.7, 10.0) == 0.7
        assert fused_score(0.5, 0.0, 10.0) == 5.0
        assert fused_score(0.5, 0.9, 0.0) == 0.9


class TestFuseHandCases:
    def test_partition_at_alpha(self):
        out = fuse(docs(("a", 0.5), ("b", 0.1)), docs(("b", 0.2)))
        assert [(c.faq_id, c.group) for c in out] == [
            ("a", Group.HIGH_LEXICAL),
            ("b", Group.FUSED),
        ]
        assert out[0].fused_score == 5.0
        assert out[1].fused_score == pytest.approx(1.2, abs=1e-12)

    def test_alpha_boundary_is_strict(self):
        out = fuse(docs(("a", 0.3)), [])
        assert out[0].group is Group.FUSED

    def test_high_group_orders_by_similarity_not_fused(self):
        """b's fused score is larger, but a has the stronger question match."""
        out = fuse(docs(("a", 0.5), ("b", 0.4)), docs(("a", 0.0), ("b", 5.0)))
        assert [c.faq_id for c in out] == ["a", "b"]
        assert out[0].fused_score < out[1].fused_score

    def test_high_precedes_fused_regardless_of_magnitude(self):
        out = fuse(docs(("a", 0.31)), docs(("b", 999.0)))
        assert [c.faq_id for c in out] == ["a", "b"]
        assert out[0].group is Group.HIGH_LEXICAL

    def test_ties_break_by_ascending_id(self):
        out = fuse(docs(("b", 0.5), ("a", 0.5)), docs(("d", 0.2), ("c", 0.2)))
        assert [c.faq_id for c in out] == ["a", "b", "c", "d"]

    def test_missing_leg_scores_default_to_zero(self):
        out = fuse(docs(("a", 0.2)), docs(("b", 0.6)))
        by_id = {c.faq_id: c for c in out}
        assert by_id["a"].relevance == 0.0
        assert by_id["b"].similarity == 0.0
        assert by_id["b"].fused_score == 0.6

    def test_empty_relevance_leg(self):
        out = fuse(docs(("a", 0.2), ("b", 0.1)), [])
        assert [c.faq_id for c in out] == ["a", "b"]
        assert all(c.relevance == 0.0 for c in out)

    def test_empty_lexical_leg(self):
        out = fuse([], docs(("a", 0.4), ("b", 0.2)))
        assert [c.faq_id for c in out] == ["a", "b"]
        assert all(c.group is Group.FUSED for c in out)

    def test_both_legs_empty(self):
        assert fuse([], []) == []

    def test_alpha_minus_inf_sorts_purely_by_similarity(self):
        params = FusionParams(alpha=-math.inf)
        out = fuse(docs(("a", 0.05), ("b", 0.2)), docs(("c", 9.0)), params)
        assert all(c.group is Group.HIGH_LEXICAL for c in out)
        assert [c.faq_id for c in out] == ["b", "a", "c"]

    def test_alpha_plus_inf_sorts_purely_by_fused_score(self):
        params = FusionParams(alpha=math.inf)
        out = fuse(docs(("a", 0.9), ("b", 0.2)), docs(("b", 8.0)), params)
        assert all(c.group is Group.FUSED for c in out)
        assert [c.faq_id for c in out] == ["b", "a"]

    def test_bert_only_pool_ignores_lexical_only_candidates(self):
        params = FusionParams(pool_mode="bert-only")
        out = fuse(docs(("a", 0.2), ("b", 0.25)), docs(("b", 0.6)), params)
        assert [c.faq_id for c in out] == ["b"]
        # The excluded candidate's lexical score still feeds the pooled one.
        assert out[0].similarity == 0.25

    def test_pool_cuts_at_pool_size_but_scores_use_full_lists(self):
        params = FusionParams(alpha=10.0, pool_size=2)
        lex = docs(("a", 0.9), ("b", 0.8), ("c", 0.7))
        out = fuse(lex, docs(("c", 0.5)), params)
        assert {c.faq_id for c in out} == {"a", "b", "c"}
        by_id = {c.faq_id: c for c in out}
        # c enters through the relevance pool; its similarity comes from the
        # lexical list even though it sits below the lexical pool cut.
        assert by_id["c"].similarity == 0.7
        assert by_id["c"].fused_score == pytest.approx(7.5, abs=1e-12)

    def test_duplicate_id_within_a_leg_rejected(self):
        with pytest.raises(ValidationError, match="lexical"):
            fuse(docs(("a", 0.5), ("a", 0.4)), [])
        with pytest.raises(ValidationError, match="relevance"):
            fuse([], docs(("a", 0.5), ("a", 0.4)))

    def test_param_bounds(self):
        with pytest.raises(ConfigError):
            FusionParams(pool_size=0)
        with pytest.raises(ConfigError):
            FusionParams(pool_mode="both")


def random_legs(rng, n_ids=10):
    ids = [f"d{i}" for i in range(n_ids)]
    lex_ids = rng.sample(ids, rng.randint(0, n_ids))
    rel_ids = rng.sample(ids, rng.randint(0, n_ids))
    lex = sorted(
        ((i, round(rng.uniform(0.0, 0.8), 3)) for i in lex_ids),
        key=lambda p: (-p[1], p[0]),
    )
    rel = sorted(
        ((i, round(rng.uniform(0.0, 1.0), 3)) for i in rel_ids),
        key=lambda p: (-p[1], p[0]),
    )
    return lex, rel


class TestFuseProperties:
    def test_matches_reference_on_random_legs(self):
        rng = random.Random(23)
        for _ in range(300):
            lex, rel = random_legs(rng)
            params = FusionParams(
                alpha=rng.choice([0.0, 0.1, 0.3, 0.5]),
                t=rng.choice([1.0, 10.0, 100.0]),
                pool_size=rng.randint(1, 12),
                pool_mode=rng.choice(["union", "bert-only"]),
            )
            got = fuse(docs(*lex), docs(*rel), params)
            expected = ref_fuse(lex, rel, params.alpha, params.t,
                                params.pool_size, params.pool_mode)
            assert [
                (c.faq_id, c.similarity, c.relevance, c.fused_score, c.group.value)
                for c in got
            ] == expected

    def test_ordering_is_the_unique_valid_permutation(self):
        rng = random.Random(29)
        checked = 0
        for _ in range(200):
            lex, rel = random_legs(rng, n_ids=5)
            params = FusionParams(alpha=0.3, t=10.0, pool_size=6)
            rows = ref_fuse(lex, rel, 0.3, 10.0, 6)
            if not 1 <= len(rows) <= 6:
                continue
            got = fuse(docs(*lex), docs(*rel), params)
            assert [
                (c.faq_id, c.similarity, c.relevance, c.fused_score, c.group.value)
                for c in got
            ] == rows
            assert fuse_order_is_unique(rows)
            checked += 1
        assert checked >= 50

    def test_constant_shift_of_relevance_keeps_the_order(self):
        """Holds when the relevance leg covers every candidate; an absent
        candidate keeps relevance 0.0 and would not shift with the rest."""
        rng = random.Random(31)
        ids = [f"d{i}" for i in range(10)]
        for _ in range(100):
            lex, _ = random_legs(rng)
            rel = sorted(
                ((i, round(rng.uniform(0.0, 1.0), 3)) for i in ids),
                key=lambda p: (-p[1], p[0]),
            )
            shift = round(rng.uniform(0.5, 5.0), 3)
            shifted = [(i, s + shift) for i, s in rel]
            base = [c.faq_id for c in fuse(docs(*lex), docs(*rel))]
            moved = [c.faq_id for c in fuse(docs(*lex), docs(*shifted))]
            assert base == moved

    def test_t_is_irrelevant_when_relevance_is_all_zero(self):
        rng = random.Random(37)
        for _ in range(50):
            lex, rel = random_legs(rng)
            zeros = [(i, 0.0) for i, _ in rel]
            orders = set()
            for t in (0.5, 10.0, 400.0):
                params = FusionParams(t=t)
                orders.add(tuple(c.faq_id for c in fuse(docs(*lex), docs(*zeros), params)))
            assert len(orders) == 1


def exact_match_corpus():
    entries = [FaqEntry(id="d00", question="alpha beta", answer="alpha beta answer")]
    entries += [
        FaqEntry(id=f"d{i:02d}", question=f"filler{i} junk{i}", answer=f"text {i}")
        for i in range(1, 12)
    ]
    return FaqCorpus(entries=tuple(entries))


class ConstantScorer:
    def __init__(self, value):
        self.value = value

    def score_batch(self, pairs):
        return [self.value] * len(pairs)


class FailingScorer:
    def __init__(self):
        self.calls = 0

    def score_batch(self, pairs):
        self.calls += 1
        raise TransportError("scorer unreachable")


class TestSearchFused:
    def test_fused_top_beats_both_single_legs(self, tiny_corpus, analyzer):
        """Neither leg alone ranks faq-3 first; the combination does."""
        index = build_index(tiny_corpus, analyzer)
        scorer = OverlapScorer(analyzer=analyzer)
        result = search_fused(index, analyzer, scorer, "renew license", tiny_corpus)
        assert not result.degraded
        assert [c.faq_id for c in result.candidates] == ["faq-3", "faq-1", "faq-2"]
        # divisor 10 cancels t=10, so the fused score is raw BM25 + overlap.
        expected_top = 0.88 * math.log(8.0 / 3.0) + 1.0
        assert result.candidates[0].fused_score == pytest.approx(expected_top, abs=1e-12)

    def test_exact_question_match_lands_in_high_group(self):
        corpus = exact_match_corpus()
        index = build_index(corpus, plain)
        result = search_fused(index, plain, ConstantScorer(0.9), "alpha beta", corpus)
        top = result.candidates[0]
        assert top.faq_id == "d00"
        assert top.group is Group.HIGH_LEXICAL
        assert top.similarity == pytest.approx(0.2 * math.log(26.0 / 3.0), abs=1e-12)
        assert top.similarity > 0.3
        assert all(c.group is Group.FUSED for c in result.candidates[1:])

    def test_degraded_falls_back_to_lexical_order(self, tiny_corpus, analyzer):
        index = build_index(tiny_corpus, analyzer)
        result = search_fused(
            index, analyzer, FailingScorer(), "renew license", tiny_corpus
        )
        assert result.degraded
        assert [c.faq_id for c in result.candidates] == ["faq-1", "faq-3"]
        assert all(c.relevance == 0.0 for c in result.candidates)

    def test_degraded_fallback_ignores_pool_mode(self, tiny_corpus, analyzer):
        index = build_index(tiny_corpus, analyzer)
        params = FusionParams(pool_mode="bert-only")
        result = search_fused(
            index, analyzer, FailingScorer(), "renew license", tiny_corpus, params
        )
        assert result.degraded
        assert [c.faq_id for c in result.candidates] == ["faq-1", "faq-3"]

    def test_degraded_not_allowed_raises(self, tiny_corpus, analyzer):
        index = build_index(tiny_corpus, analyzer)
        with pytest.raises(TransportError):
            search_fused(
                index, analyzer, FailingScorer(), "renew license", tiny_corpus,
                degraded_ok=False,
            )

    def test_concurrent_equals_sequential(self, tiny_corpus, analyzer):
        index = build_index(tiny_corpus, analyzer)
        scorer = OverlapScorer(analyzer=analyzer)
        for query in ("renew license", "bus timetable", "office desk", "nothing here"):
            a = search_fused(index, analyzer, scorer, query, tiny_corpus, concurrent=True)
            b = search_fused(index, analyzer, scorer, query, tiny_corpus, concurrent=False)
            assert a == b

    def test_pool_size_caps_both_legs(self):
        corpus = exact_match_corpus()
        index = build_index(corpus, plain)
        params = FusionParams(pool_size=3)
        result = search_fused(index, plain, ConstantScorer(0.5), "alpha beta", corpus, params)
        # Lexical leg returns only d00; relevance contributes its top 3.
        assert len(result.candidates) == 3
        assert result.candidates[0].faq_id == "d00"
