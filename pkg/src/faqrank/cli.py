"""Command-line interface.

Configuration flags sit on the group and override the config file and
FAQRANK_* environment variables. Failures print a single machine-readable
JSON line on stderr and exit with 2 (bad config), 3 (IO), 4 (remote scorer
hard failure), or 1 (other validation problems).
"""

from __future__ import annotations

import functools
import json
import sys
from pathlib import Path

import click

from .analyzer import analyzer_from_file, default_analyzer
from .config import AppConfig, config_to_dict, load_config
from .corpus import load_faq_corpus, load_query_set, read_run, write_run
from .engine import METHODS, SearchEngine
from .errors import (
    ConfigError,
    EmptyCorpusError,
    FaqRankError,
    ParseError,
    ProtocolError,
    TransportError,
    ValidationError,
)
from .evalkit import (
    EvalConfig,
    bucket_report_to_csv,
    evaluate_run,
    kfold_split,
    score_bucket_report,
)
from .lexical import build_index, save_index


def _fail(code: int, kind: str, exc: BaseException) -> None:
    click.echo(
        json.dumps({"error": {"code": code, "kind": kind, "message": str(exc)}}),
        err=True,
    )
    sys.exit(code)


def guarded(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ConfigError as exc:
            _fail(2, "config", exc)
        except (TransportError, ProtocolError) as exc:
            _fail(4, "scorer", exc)
        except (ParseError, EmptyCorpusError, OSError) as exc:
            _fail(3, "io", exc)
        except ValidationError as exc:
            _fail(1, "validation", exc)
        except FaqRankError as exc:
            _fail(1, "error", exc)

    return wrapper


_FLAG_KEYS = {
    "corpus": "corpus_path",
    "stopwords": "stopwords_path",
    "index": "index_path",
    "bm25_k": "bm25.k",
    "bm25_b": "bm25.b",
    "norm_k1": "normalization.k1",
    "norm_k2": "normalization.k2",
    "alpha": "fusion.alpha",
    "fusion_t": "fusion.t",
    "pool_size": "fusion.pool_size",
    "pool_mode": "fusion.pool_mode",
    "scorer_kind": "scorer.kind",
    "scorer_url": "scorer.url",
    "scorer_timeout": "scorer.timeout",
    "scorer_max_batch": "scorer.max_batch",
    "scorer_retries": "scorer.retries",
    "host": "service.host",
    "port": "service.port",
}


@click.group()
@click.option("--config", "config_path", type=click.Path(), default=None,
              help="JSON config file.")
@click.option("--corpus", type=click.Path(), default=None, help="FAQ corpus JSONL.")
@click.option("--stopwords", type=click.Path(), default=None,
              help="Stopword list (one lowercase token per line).")
@click.option("--index", type=click.Path(), default=None,
              help="Prebuilt index snapshot to load instead of indexing.")
@click.option("--bm25-k", type=float, default=None)
@click.option("--bm25-b", type=float, default=None)
@click.option("--norm-k1", type=float, default=None)
@click.option("--norm-k2", type=float, default=None)
@click.option("--alpha", type=float, default=None, help="High-lexical threshold.")
@click.option("--t", "fusion_t", type=float, default=None, help="Similarity weight in fusion.")
@click.option("--pool-size", type=int, default=None)
@click.option("--pool-mode", type=click.Choice(["union", "bert-only"]), default=None)
@click.option("--scorer", "scorer_kind", type=click.Choice(["builtin", "remote"]), default=None)
@click.option("--scorer-url", type=str, default=None)
@click.option("--scorer-timeout", type=float, default=None)
@click.option("--scorer-max-batch", type=int, default=None)
@click.option("--scorer-retries", type=int, default=None)
@click.option("--host", type=str, default=None)
@click.option("--port", type=int, default=None)
@click.pass_context
def main(ctx: click.Context, config_path: str | None, **flags) -> None:
    """FAQ retrieval: lexical question match fused with answer relevance."""
    ctx.obj = {
        "path": config_path,
        "overrides": {
            _FLAG_KEYS[name]: value for name, value in flags.items() if value is not None
        },
    }


def _app_config(ctx: click.Context) -> AppConfig:
    return load_config(path=ctx.obj["path"], overrides=ctx.obj["overrides"])


def _analyzer_for(config: AppConfig):
    return (
        analyzer_from_file(config.stopwords_path)
        if config.stopwords_path
        else default_analyzer()
    )


@main.command("index")
@click.option("--out", required=True, type=click.Path(), help="Snapshot path to write.")
@click.pass_context
@guarded
def index_cmd(ctx: click.Context, out: str) -> None:
    """Build the lexical index and save a snapshot."""
    config = _app_config(ctx)
    if not config.corpus_path:
        raise ConfigError("corpus_path is required")
    corpus = load_faq_corpus(config.corpus_path)
    built = build_index(corpus, _analyzer_for(config), config.bm25)
    save_index(built, out)
    click.echo(f"indexed {built.doc_count} documents -> {out}")


@main.command("search")
@click.option("--query", "-q", required=True, type=str)
@click.option("--top-k", "--top", "top_k", type=int, default=10, show_default=True)
@click.option("--method", type=click.Choice(list(METHODS)), default="fused",
              show_default=True)
@click.option("--json", "as_json", is_flag=True, help="Emit one JSON object.")
@click.pass_context
@guarded
def search_cmd(ctx: click.Context, query: str, top_k: int, method: str, as_json: bool) -> None:
    """Rank FAQ entries for one query."""
    engine = SearchEngine.build(_app_config(ctx))
    if method == "fused":
        result = engine.search(query, top_k=top_k)
        rows = engine.result_rows(result)
        if as_json:
            click.echo(json.dumps({"results": rows, "degraded": result.degraded}))
            return
        if result.degraded:
            click.echo("warning: relevance scorer unreachable, lexical-only results",
                       err=True)
        for rank, row in enumerate(rows, start=1):
            click.echo(
                f"{rank:>3}  {row['group']:<12} sim={row['similarity']:.4f} "
                f"rel={row['relevance']:.4f} fused={row['fused_score']:.4f}  "
                f"{row['faq_id']}  {row['question']}"
            )
        return
    docs = engine.search_leg(method, query, top_k)
    if as_json:
        click.echo(json.dumps(
            {"results": [{"faq_id": d.faq_id, "score": d.score} for d in docs]}
        ))
        return
    for rank, doc in enumerate(docs, start=1):
        entry = engine.entry(doc.faq_id)
        question = entry.question if entry else ""
        click.echo(f"{rank:>3}  score={doc.score:.4f}  {doc.faq_id}  {question}")


@main.command("evaluate")
@click.option("--queries", "queries_path", required=True, type=click.Path())
@click.option("--method", type=click.Choice(list(METHODS)), default="fused",
              show_default=True)
@click.option("--top-k", type=int, default=10, show_default=True)
@click.option("--run-out", type=click.Path(), default=None, help="Write the run file here.")
@click.option("--report-json", type=click.Path(), default=None)
@click.pass_context
@guarded
def evaluate_cmd(
    ctx: click.Context,
    queries_path: str,
    method: str,
    top_k: int,
    run_out: str | None,
    report_json: str | None,
) -> None:
    """Run retrieval over a query set and report MAP/MRR/P@5/SR@k/nDCG."""
    engine = SearchEngine.build(_app_config(ctx))
    queries = load_query_set(queries_path)
    missing = sorted(
        {fid for q in queries for fid in q.judgments if fid not in engine.corpus}
    )
    if missing:
        raise ValidationError(f"judged ids not present in the corpus: {missing[:5]}")
    entries = []
    for query in queries:
        entries.extend(
            engine.run_entries(query.qid, query.text, method, top_k=top_k)
        )
    if run_out:
        write_run(entries, run_out)
    report = evaluate_run(entries, queries, EvalConfig())
    if report_json:
        Path(report_json).write_text(
            json.dumps(report.to_json_dict(), indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )
    click.echo(report.to_text_table(), nl=False)


@main.command("gen-training")
@click.option("--out", required=True, type=click.Path())
@click.option("--neg-ratio", type=int, default=24, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--same-source", is_flag=True,
              help="Sample negatives only from the entry's own source.")
@click.option("--extra-corpus", "extra", multiple=True, type=click.Path(),
              help="Additional corpora pooled with the main one.")
@click.pass_context
@guarded
def gen_training_cmd(
    ctx: click.Context,
    out: str,
    neg_ratio: int,
    seed: int,
    same_source: bool,
    extra: tuple[str, ...],
) -> None:
    """Generate question-answer training pairs with sampled negatives."""
    from .relevance import generate_training_pairs, write_examples

    config = _app_config(ctx)
    if not config.corpus_path:
        raise ConfigError("corpus_path is required")
    corpora = [load_faq_corpus(config.corpus_path)]
    corpora += [load_faq_corpus(path) for path in extra]
    examples = generate_training_pairs(
        corpora, neg_ratio=neg_ratio, seed=seed, same_source=same_source
    )
    write_examples(examples, out)
    positives = sum(1 for e in examples if e.label == 1)
    click.echo(f"wrote {len(examples)} pairs ({positives} positive) -> {out}")


@main.command("split")
@click.option("--queries", "queries_path", required=True, type=click.Path())
@click.option("--folds", type=int, default=5, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", required=True, type=click.Path())
@click.pass_context
@guarded
def split_cmd(ctx: click.Context, queries_path: str, folds: int, seed: int, out: str) -> None:
    """Write rotated train/dev/test folds over a query set."""
    queries = load_query_set(queries_path)
    # The ratios follow from the rotation geometry once folds is chosen.
    ratios = ((folds - 2) / folds, 1 / folds, 1 / folds)
    splits = kfold_split([q.qid for q in queries], folds=folds, ratios=ratios, seed=seed)
    payload = {
        "seed": seed,
        "folds": [
            {
                "train": sorted(s.train),
                "dev": sorted(s.dev),
                "test": sorted(s.test),
            }
            for s in splits
        ],
    }
    Path(out).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    click.echo(f"wrote {folds} folds over {len(queries)} queries -> {out}")


@main.command("bucket-report")
@click.option("--run", "run_path", required=True, type=click.Path())
@click.option("--queries", "queries_path", required=True, type=click.Path())
@click.option("--edges", type=str, default="0,0.2,0.4,0.6,0.8", show_default=True,
              help="Comma-separated bucket edges.")
@click.option("--out", required=True, type=click.Path())
@click.pass_context
@guarded
def bucket_report_cmd(
    ctx: click.Context, run_path: str, queries_path: str, edges: str, out: str
) -> None:
    """Cross rank-1 score buckets with rank-1 correctness, as CSV."""
    try:
        edge_values = [float(part) for part in edges.split(",") if part.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad --edges value: {exc}") from exc
    run = read_run(run_path)
    queries = load_query_set(queries_path)
    rows = score_bucket_report(run, queries, EvalConfig(), edge_values)
    bucket_report_to_csv(rows, out)
    click.echo(f"wrote {len(rows)} buckets -> {out}")


@main.command("serve")
@click.pass_context
@guarded
def serve_cmd(ctx: click.Context) -> None:
    """Serve the HTTP API (POST /v1/search, GET /v1/faq/{id}, GET /health)."""
    import uvicorn

    from .service import create_app

    config = _app_config(ctx)
    engine = SearchEngine.build(config)
    app = create_app(config, engine)
    uvicorn.run(app, host=config.service.host, port=config.service.port,
                log_level="warning")


@main.command("dump-config")
@click.pass_context
@guarded
def dump_config_cmd(ctx: click.Context) -> None:
    """Print the effective configuration as JSON."""
    config = _app_config(ctx)
    click.echo(json.dumps(config_to_dict(config), indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
