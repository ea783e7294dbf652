"""model_server: a reference relevance model behind the /v1/score protocol.

Trains a small Transformer pair classifier on generated question-answer
pairs and serves the positive-class probability as the relevance score any
/v1/score client (such as faqrank's remote scorer) can consume.
"""

from .data import Example, read_examples, train_dev_split, write_examples
from .datasets import load_stackexchange_dir
from .errors import CheckpointError, DataError, ModelServerError, TrainError
from .model import (
    PRESETS,
    ArchSpec,
    ModelBundle,
    PairClassifier,
    load_checkpoint,
    save_checkpoint,
)
from .server import create_app
from .textenc import PairEncoder, Vocab, build_vocab, tokenize
from .train import TrainConfig, TrainResult, evaluate_accuracy, train

__version__ = "0.1.0"

__all__ = [
    "ArchSpec",
    "CheckpointError",
    "DataError",
    "Example",
    "ModelBundle",
    "ModelServerError",
    "PairClassifier",
    "PairEncoder",
    "PRESETS",
    "TrainConfig",
    "TrainError",
    "TrainResult",
    "Vocab",
    "build_vocab",
    "create_app",
    "evaluate_accuracy",
    "load_checkpoint",
    "load_stackexchange_dir",
    "read_examples",
    "save_checkpoint",
    "tokenize",
    "train",
    "train_dev_split",
    "write_examples",
]
