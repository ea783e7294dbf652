"""Text analysis: tokenization, content words, and a dependency-count proxy.

The default analyzer lowercases, strips punctuation, and counts content words
against a stopword list. Dependency relations are approximated by
max(0, content_words - 1), i.e. every content word after the first is assumed
to attach somewhere. Both numbers feed the query-length normalization divisor
in the lexical module, so they must be deterministic for a fixed stopword
list; the list's sha256 is exposed as ``fingerprint`` and recorded in index
snapshots.

Alternative analyzers plug in through the ``Analyzer`` protocol.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Protocol, runtime_checkable

from .errors import AnalysisError, ValidationError

_TOKEN_RE = re.compile(r"\w+")


@dataclass(frozen=True)
class AnalyzedText:
    """Analysis result for one piece of text.

    ``tokens`` is the full normalized token sequence (stopwords included);
    ``content_words`` is the subsequence that survives the stopword filter.
    """

    tokens: tuple[str, ...]
    content_words: tuple[str, ...]
    dependency_relation_count: int

    def __post_init__(self) -> None:
        if self.dependency_relation_count < 0:
            raise ValidationError("dependency_relation_count must be >= 0")
        if len(self.content_words) > len(self.tokens):
            raise ValidationError("content word count cannot exceed token count")

    @property
    def content_word_count(self) -> int:
        return len(self.content_words)


@runtime_checkable
class Analyzer(Protocol):
    """Anything that turns text into an AnalyzedText."""

    def analyze(self, text: str) -> AnalyzedText: ...


def _fingerprint(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


@dataclass(frozen=True)
class SimpleAnalyzer:
    """Regex tokenizer plus stopword filter; the package default."""

    stopwords: frozenset[str]
    fingerprint: str = field(default="")

    def __post_init__(self) -> None:
        if not self.fingerprint:
            canonical = "\n".join(sorted(self.stopwords)).encode("utf-8")
            object.__setattr__(self, "fingerprint", _fingerprint(canonical))

    def analyze(self, text: str) -> AnalyzedText:
        tokens = tuple(_TOKEN_RE.findall(text.lower()))
        content = tuple(t for t in tokens if t not in self.stopwords)
        return AnalyzedText(
            tokens=tokens,
            content_words=content,
            dependency_relation_count=max(0, len(content) - 1),
        )


def load_stopwords(path: str | Path) -> frozenset[str]:
    """Read a stopword file: one lowercase token per line, UTF-8, blanks ignored."""
    raw = Path(path).read_text(encoding="utf-8")
    words = set()
    for line in raw.splitlines():
        token = line.strip()
        if not token:
            continue
        if token != token.lower():
            raise ValidationError(f"stopword {token!r} is not lowercase")
        words.add(token)
    return frozenset(words)


def analyzer_from_file(path: str | Path) -> SimpleAnalyzer:
    """Build the default analyzer from a stopword file, fingerprinting its bytes."""
    data = Path(path).read_bytes()
    return SimpleAnalyzer(stopwords=load_stopwords(path), fingerprint=_fingerprint(data))


def default_stopwords_path() -> Path:
    return Path(str(resources.files("faqrank").joinpath("data/stopwords.txt")))


def default_analyzer() -> SimpleAnalyzer:
    """Analyzer over the stopword list shipped with the package."""
    return analyzer_from_file(default_stopwords_path())


def run_analyzer(analyzer: Analyzer, text: str) -> AnalyzedText:
    """Invoke an analyzer, surfacing plugin failures as AnalysisError."""
    try:
        result = analyzer.analyze(text)
    except AnalysisError:
        raise
    except Exception as exc:
        raise AnalysisError(f"analyzer {type(analyzer).__name__} failed: {exc}") from exc
    if not isinstance(result, AnalyzedText):
        raise AnalysisError(
            f"analyzer {type(analyzer).__name__} returned {type(result).__name__}, "
            "expected AnalyzedText"
        )
    return result
