"""faqrank: FAQ retrieval fusing lexical question match with answer relevance.

A query is matched against FAQ questions with BM25 (normalized by query
length) and against FAQ answers with a learned or heuristic relevance scorer;
the two signals merge into one ranking where confident lexical matches come
first and everything else orders by a weighted sum. Includes the training-
data generator for the relevance model, an evaluation toolkit for graded
judgments, and CLI/HTTP front ends.
"""

from .analyzer import AnalyzedText, Analyzer, SimpleAnalyzer, default_analyzer
from .config import AppConfig, ScorerConfig, ServiceConfig, load_config
from .corpus import (
    FaqCorpus,
    FaqEntry,
    QueryRecord,
    RunEntry,
    load_faq_corpus,
    load_query_set,
    read_run,
    write_run,
)
from .engine import SearchEngine
from .errors import (
    AnalysisError,
    ConfigError,
    EmptyCorpusError,
    FaqRankError,
    ParseError,
    ProtocolError,
    TransportError,
    UnknownDocumentError,
    ValidationError,
)
from .evalkit import EvalConfig, EvalReport, evaluate_run, kfold_split, score_bucket_report
from .fusion import (
    FusedCandidate,
    FusedSearchResult,
    FusionParams,
    Group,
    fuse,
    fused_score,
    search_fused,
)
from .lexical import (
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
from .ranking import ScoredDoc
from .relevance import (
    OverlapScorer,
    RelevanceExample,
    RemoteScorer,
    generate_training_pairs,
    read_examples,
    search_relevance,
    split_paraphrase_triples,
    write_examples,
)
from .service import create_app

__version__ = "0.1.0"

__all__ = [
    "AnalyzedText",
    "Analyzer",
    "AnalysisError",
    "AppConfig",
    "BM25Params",
    "ConfigError",
    "EmptyCorpusError",
    "EvalConfig",
    "EvalReport",
    "FaqCorpus",
    "FaqEntry",
    "FaqRankError",
    "FusedCandidate",
    "FusedSearchResult",
    "FusionParams",
    "Group",
    "LexicalIndex",
    "NormalizationParams",
    "OverlapScorer",
    "ParseError",
    "ProtocolError",
    "QueryRecord",
    "RelevanceExample",
    "RemoteScorer",
    "RunEntry",
    "ScoredDoc",
    "ScorerConfig",
    "SearchEngine",
    "ServiceConfig",
    "SimpleAnalyzer",
    "TransportError",
    "UnknownDocumentError",
    "ValidationError",
    "build_index",
    "create_app",
    "default_analyzer",
    "evaluate_run",
    "fuse",
    "fused_score",
    "generate_training_pairs",
    "kfold_split",
    "load_config",
    "load_faq_corpus",
    "load_index",
    "load_query_set",
    "raw_score",
    "read_examples",
    "read_run",
    "save_index",
    "score_bucket_report",
    "search_fused",
    "search_lexical",
    "search_relevance",
    "similarity",
    "split_paraphrase_triples",
    "write_examples",
    "write_run",
]
