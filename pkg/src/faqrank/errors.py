"""Exception taxonomy shared across the package.

Everything raised deliberately derives from FaqRankError so callers (and the
CLI exit-code mapping) can tell our failures from genuine bugs.
"""

from __future__ import annotations


class FaqRankError(Exception):
    """Base class for all errors raised by faqrank."""


class ParseError(FaqRankError):
    """A file could not be parsed. Carries the 1-based line number when known."""

    def __init__(self, message: str, *, path: str | None = None, line: int | None = None):
        self.path = path
        self.line = line
        prefix = ""
        if path is not None:
            prefix += str(path)
        if line is not None:
            prefix += f":{line}"
        super().__init__(f"{prefix}: {message}" if prefix else message)


class ValidationError(FaqRankError):
    """Well-formed input that violates a documented contract."""


class EmptyCorpusError(ValidationError):
    """A corpus with zero entries where at least one is required."""


class AnalysisError(FaqRankError):
    """A text analyzer (built-in or plugin) failed on an input."""


class UnknownDocumentError(ValidationError):
    """A document id that does not exist in the index or corpus."""


class TransportError(FaqRankError):
    """The remote scorer could not be reached (timeout, refused, reset)."""


class ProtocolError(FaqRankError):
    """The remote scorer answered, but the reply violates the wire contract."""


class ConfigError(FaqRankError):
    """Invalid, unknown, or out-of-bounds configuration."""
