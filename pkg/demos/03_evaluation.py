"""Evaluation walkthrough: graded judgments, run files, metrics, buckets.

    python demos/03_evaluation.py
"""

import tempfile
from pathlib import Path

from faqrank import (
    AppConfig,
    EvalConfig,
    SearchEngine,
    evaluate_run,
    kfold_split,
    load_query_set,
    read_run,
    score_bucket_report,
    write_run,
)

DATA = Path(__file__).parent / "data"

engine = SearchEngine.build(AppConfig(corpus_path=str(DATA / "faq.jsonl")))
queries = load_query_set(DATA / "queries.jsonl")
print(f"{len(queries)} queries, grades per query like {queries[0].judgments}")

# Produce one run file per method. Run entries carry qid, rank, score, tag;
# write_run checks rank contiguity and score monotonicity.
runs = {}
for method in ("lexical", "relevance", "fused"):
    entries = []
    for q in queries:
        entries.extend(engine.run_entries(q.qid, q.text, method, top_k=5))
    runs[method] = entries

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "fused.run"
    write_run(runs["fused"], path)
    print(f"\nrun file lines look like: {path.read_text().splitlines()[0]!r}")
    assert list(read_run(path)) == runs["fused"]

# Grades A/B/C count as relevant for the binary metrics; nDCG uses graded
# gains (A=3, B=2, C=1, D=0).
config = EvalConfig()
print(f"\n{'method':<10} {'MAP':>6} {'MRR':>6} {'P@5':>6} {'nDCG':>6}")
for method, entries in runs.items():
    report = evaluate_run(entries, queries, config)
    print(f"{method:<10} {report.map:>6.3f} {report.mrr:>6.3f} "
          f"{report.p_at_k:>6.3f} {report.ndcg:>6.3f}")

# Does the retrieval score predict correctness? Bucket rank-1 scores against
# whether the top hit was judged relevant.
rows = score_bucket_report(runs["fused"], queries, config, edges=(0.5, 1.0, 2.0, 4.0))
print("\nrank-1 score buckets (low, high, correct, incorrect):")
for row in rows:
    print(f"  [{row.low:>5}, {row.high:>5})  {row.top1_correct:>2} {row.top1_incorrect:>2}")

# Rotated folds for parameter tuning: test folds partition the query set,
# dev is the next fold over, train is everything else.
splits = kfold_split([q.qid for q in queries], folds=4, ratios=(0.5, 0.25, 0.25), seed=1)
print("\n4-fold rotation over the query ids:")
for i, split in enumerate(splits):
    print(f"  fold {i}: test={sorted(split.test)} dev={sorted(split.dev)}")
