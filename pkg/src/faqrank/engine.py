"""Search engine assembly: one object wiring corpus, index, analyzer, scorer.

Both the CLI and the HTTP service build a SearchEngine from an AppConfig and
go through the same search methods, which is what makes their rankings agree
by construction (and lets the conformance tests compare them directly).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isfinite

from .analyzer import SimpleAnalyzer, analyzer_from_file, default_analyzer
from .config import AppConfig
from .corpus import FaqCorpus, FaqEntry, RunEntry, load_faq_corpus
from .errors import ConfigError, ValidationError
from .fusion import FusedSearchResult, Group, search_fused
from .lexical import LexicalIndex, build_index, load_index, search_lexical
from .ranking import ScoredDoc
from .relevance import OverlapScorer, RelevanceScorer, RemoteScorer, search_relevance

METHODS = ("fused", "lexical", "relevance")


def make_scorer(config: AppConfig, analyzer: SimpleAnalyzer) -> RelevanceScorer:
    if config.scorer.kind == "remote":
        return RemoteScorer(
            config.scorer.url,
            timeout=config.scorer.timeout,
            max_batch=config.scorer.max_batch,
            retries=config.scorer.retries,
        )
    return OverlapScorer(analyzer=analyzer)


@dataclass
class SearchEngine:
    config: AppConfig
    corpus: FaqCorpus
    analyzer: SimpleAnalyzer
    index: LexicalIndex
    scorer: RelevanceScorer

    @classmethod
    def build(cls, config: AppConfig) -> "SearchEngine":
        if not config.corpus_path:
            raise ConfigError("corpus_path is required")
        corpus = load_faq_corpus(config.corpus_path)
        analyzer = (
            analyzer_from_file(config.stopwords_path)
            if config.stopwords_path
            else default_analyzer()
        )
        if config.index_path:
            index = load_index(config.index_path)
            if index.analyzer_fingerprint and index.analyzer_fingerprint != analyzer.fingerprint:
                raise ValidationError(
                    "index snapshot was built with a different stopword list "
                    f"(fingerprint {index.analyzer_fingerprint[:12]}... != "
                    f"{analyzer.fingerprint[:12]}...)"
                )
        else:
            index = build_index(corpus, analyzer, config.bm25)
        return cls(
            config=config,
            corpus=corpus,
            analyzer=analyzer,
            index=index,
            scorer=make_scorer(config, analyzer),
        )

    def entry(self, faq_id: str) -> FaqEntry | None:
        return self.corpus.get(faq_id)

    def search(
        self, query: str, top_k: int = 10, degraded_ok: bool = True
    ) -> FusedSearchResult:
        result = search_fused(
            self.index,
            self.analyzer,
            self.scorer,
            query,
            self.corpus,
            params=self.config.fusion,
            norm=self.config.normalization,
            degraded_ok=degraded_ok,
        )
        return FusedSearchResult(
            candidates=result.candidates[:top_k], degraded=result.degraded
        )

    def search_leg(self, method: str, query: str, k: int) -> list[ScoredDoc]:
        if method == "lexical":
            return search_lexical(
                self.index, self.analyzer, query, k, self.config.normalization
            )
        if method == "relevance":
            return search_relevance(self.scorer, query, self.corpus, k)
        raise ConfigError(f"unknown leg {method!r}")

    def run_entries(
        self, qid: str, query: str, method: str, top_k: int, tag: str | None = None
    ) -> list[RunEntry]:
        """Ranked results for one query as run-file entries.

        Fused runs need a score column that is non-increasing with rank even
        though the grouped ordering is not a single-score sort, so the
        HIGH_LEXICAL block is written as offset + similarity with the offset
        chosen above every FUSED-group score.
        """
        tag = tag or method
        if method == "fused":
            result = self.search(query, top_k=top_k, degraded_ok=False)
            fused_ceiling = max(
                [
                    c.fused_score
                    for c in result.candidates
                    if c.group is Group.FUSED
                ]
                + ([self.config.fusion.alpha * self.config.fusion.t]
                   if isfinite(self.config.fusion.alpha) else [])
                + [0.0]
            )
            offset = fused_ceiling + 1.0
            scores = [
                offset + c.similarity if c.group is Group.HIGH_LEXICAL else c.fused_score
                for c in result.candidates
            ]
            ids = [c.faq_id for c in result.candidates]
        elif method in ("lexical", "relevance"):
            docs = self.search_leg(method, query, top_k)
            scores = [d.score for d in docs]
            ids = [d.faq_id for d in docs]
        else:
            raise ConfigError(f"unknown method {method!r}")
        return [
            RunEntry(qid=qid, faq_id=faq_id, rank=rank, score=score, tag=tag)
            for rank, (faq_id, score) in enumerate(zip(ids, scores), start=1)
        ]

    def result_rows(self, result: FusedSearchResult) -> list[dict]:
        """JSON-ready rows joining candidates with their corpus entries."""
        rows = []
        for candidate in result.candidates:
            entry = self.corpus.get(candidate.faq_id)
            rows.append(
                {
                    "faq_id": candidate.faq_id,
                    "question": entry.question if entry else "",
                    "answer": entry.answer if entry else "",
                    "similarity": candidate.similarity,
                    "relevance": candidate.relevance,
                    "fused_score": candidate.fused_score,
                    "group": candidate.group.value,
                }
            )
        return rows

    def scorer_status(self) -> dict:
        reachable = (
            self.scorer.health() if isinstance(self.scorer, RemoteScorer) else True
        )
        return {"kind": self.config.scorer.kind, "reachable": reachable}
