"""Exception taxonomy.

Deliberate failures derive from ModelServerError; anything else escaping the
package is a bug.
"""

from __future__ import annotations


class ModelServerError(Exception):
    """Base class for all errors raised by model_server."""


class DataError(ModelServerError):
    """Training or dataset input violates the documented schema."""


class TrainError(ModelServerError):
    """Training could not run to completion (resources, degenerate setup)."""


class CheckpointError(ModelServerError):
    """A checkpoint directory is missing, incomplete, or from another format."""
