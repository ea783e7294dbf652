"""Application configuration: defaults, JSON file, environment, CLI flags.

Later layers win: defaults < config file < FAQRANK_* environment variables <
explicit flag overrides. Unknown keys in a config file are rejected rather
than ignored so typos fail loudly, and every numeric parameter is bounds-
checked by the owning dataclass.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

from .errors import ConfigError
from .fusion import FusionParams
from .lexical import BM25Params, NormalizationParams

SCORER_KINDS = ("builtin", "remote")


@dataclass(frozen=True)
class ScorerConfig:
    kind: str = "builtin"
    url: str | None = None
    timeout: float = 5.0
    max_batch: int = 64
    retries: int = 2

    def __post_init__(self) -> None:
        if self.kind not in SCORER_KINDS:
            raise ConfigError(f"scorer kind must be one of {SCORER_KINDS}, got {self.kind!r}")
        if self.kind == "remote" and not self.url:
            raise ConfigError("scorer kind 'remote' requires a url")
        if self.timeout <= 0:
            raise ConfigError(f"scorer timeout must be > 0, got {self.timeout}")
        if self.max_batch < 1:
            raise ConfigError(f"scorer max_batch must be >= 1, got {self.max_batch}")
        if self.retries < 0:
            raise ConfigError(f"scorer retries must be >= 0, got {self.retries}")


@dataclass(frozen=True)
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8080

    def __post_init__(self) -> None:
        if not 1 <= self.port <= 65535:
            raise ConfigError(f"service port must be in 1..65535, got {self.port}")


@dataclass(frozen=True)
class AppConfig:
    corpus_path: str | None = None
    stopwords_path: str | None = None
    index_path: str | None = None
    bm25: BM25Params = field(default_factory=BM25Params)
    normalization: NormalizationParams = field(default_factory=NormalizationParams)
    fusion: FusionParams = field(default_factory=FusionParams)
    scorer: ScorerConfig = field(default_factory=ScorerConfig)
    service: ServiceConfig = field(default_factory=ServiceConfig)


# dotted key -> (env var, python type). The single source of truth for what
# exists; file loading, env overrides, and flag overrides all consult it.
_SCHEMA: dict[str, tuple[str, type]] = {
    "corpus_path": ("FAQRANK_CORPUS", str),
    "stopwords_path": ("FAQRANK_STOPWORDS", str),
    "index_path": ("FAQRANK_INDEX", str),
    "bm25.k": ("FAQRANK_BM25_K", float),
    "bm25.b": ("FAQRANK_BM25_B", float),
    "normalization.k1": ("FAQRANK_NORM_K1", float),
    "normalization.k2": ("FAQRANK_NORM_K2", float),
    "fusion.alpha": ("FAQRANK_FUSION_ALPHA", float),
    "fusion.t": ("FAQRANK_FUSION_T", float),
    "fusion.pool_size": ("FAQRANK_FUSION_POOL_SIZE", int),
    "fusion.pool_mode": ("FAQRANK_FUSION_POOL_MODE", str),
    "scorer.kind": ("FAQRANK_SCORER_KIND", str),
    "scorer.url": ("FAQRANK_SCORER_URL", str),
    "scorer.timeout": ("FAQRANK_SCORER_TIMEOUT", float),
    "scorer.max_batch": ("FAQRANK_SCORER_MAX_BATCH", int),
    "scorer.retries": ("FAQRANK_SCORER_RETRIES", int),
    "service.host": ("FAQRANK_SERVICE_HOST", str),
    "service.port": ("FAQRANK_SERVICE_PORT", int),
}


def _defaults() -> dict[str, Any]:
    return {
        "corpus_path": None,
        "stopwords_path": None,
        "index_path": None,
        "bm25.k": 1.2,
        "bm25.b": 0.75,
        "normalization.k1": 4.0,
        "normalization.k2": 2.0,
        "fusion.alpha": 0.3,
        "fusion.t": 10.0,
        "fusion.pool_size": 10,
        "fusion.pool_mode": "union",
        "scorer.kind": "builtin",
        "scorer.url": None,
        "scorer.timeout": 5.0,
        "scorer.max_batch": 64,
        "scorer.retries": 2,
        "service.host": "127.0.0.1",
        "service.port": 8080,
    }


def _coerce(key: str, value: Any) -> Any:
    if value is None:
        return None
    expected = _SCHEMA[key][1]
    if expected is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"config key {key!r} must be a number, got {value!r}")
        return float(value)
    if expected is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"config key {key!r} must be an integer, got {value!r}")
        return value
    if not isinstance(value, str):
        raise ConfigError(f"config key {key!r} must be a string, got {value!r}")
    return value


def _flatten_file(data: Any) -> dict[str, Any]:
    if not isinstance(data, dict):
        raise ConfigError("config file must contain a JSON object")
    flat: dict[str, Any] = {}
    for key, value in data.items():
        if isinstance(value, dict):
            for subkey, subvalue in value.items():
                flat[f"{key}.{subkey}"] = subvalue
        else:
            flat[key] = value
    unknown = sorted(set(flat) - set(_SCHEMA))
    if unknown:
        raise ConfigError(f"unknown config keys: {unknown}")
    return flat


def _parse_env(name: str, raw: str, expected: type, key: str) -> Any:
    try:
        if expected is float:
            return float(raw)
        if expected is int:
            return int(raw)
        return raw
    except ValueError as exc:
        raise ConfigError(f"{name}={raw!r} is not a valid {expected.__name__} for {key}") from exc


def load_config(
    path: str | Path | None = None,
    env: Mapping[str, str] | None = None,
    overrides: Mapping[str, Any] | None = None,
) -> AppConfig:
    """Layer defaults, config file, environment, and flag overrides."""
    values = _defaults()
    if path is not None:
        try:
            raw = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from exc
        try:
            data = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
        for key, value in _flatten_file(data).items():
            values[key] = _coerce(key, value)
    env = os.environ if env is None else env
    for key, (env_name, expected) in _SCHEMA.items():
        if env_name in env:
            values[key] = _parse_env(env_name, env[env_name], expected, key)
    for key, value in (overrides or {}).items():
        if key not in _SCHEMA:
            raise ConfigError(f"unknown config key {key!r}")
        if value is not None:
            values[key] = _coerce(key, value)
    return _build(values)


def _build(values: dict[str, Any]) -> AppConfig:
    return AppConfig(
        corpus_path=values["corpus_path"],
        stopwords_path=values["stopwords_path"],
        index_path=values["index_path"],
        bm25=BM25Params(k=values["bm25.k"], b=values["bm25.b"]),
        normalization=NormalizationParams(
            k1=values["normalization.k1"], k2=values["normalization.k2"]
        ),
        fusion=FusionParams(
            alpha=values["fusion.alpha"],
            t=values["fusion.t"],
            pool_size=values["fusion.pool_size"],
            pool_mode=values["fusion.pool_mode"],
        ),
        scorer=ScorerConfig(
            kind=values["scorer.kind"],
            url=values["scorer.url"],
            timeout=values["scorer.timeout"],
            max_batch=values["scorer.max_batch"],
            retries=values["scorer.retries"],
        ),
        service=ServiceConfig(host=values["service.host"], port=values["service.port"]),
    )


def config_to_dict(config: AppConfig) -> dict[str, Any]:
    """Full nested dict; load_config on its JSON dump reproduces the config."""
    return {
        "corpus_path": config.corpus_path,
        "stopwords_path": config.stopwords_path,
        "index_path": config.index_path,
        "bm25": {"k": config.bm25.k, "b": config.bm25.b},
        "normalization": {
            "k1": config.normalization.k1,
            "k2": config.normalization.k2,
        },
        "fusion": {
            "alpha": config.fusion.alpha,
            "t": config.fusion.t,
            "pool_size": config.fusion.pool_size,
            "pool_mode": config.fusion.pool_mode,
        },
        "scorer": {
            "kind": config.scorer.kind,
            "url": config.scorer.url,
            "timeout": config.scorer.timeout,
            "max_batch": config.scorer.max_batch,
            "retries": config.scorer.retries,
        },
        "service": {"host": config.service.host, "port": config.service.port},
    }
