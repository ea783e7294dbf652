"""Fused search walkthrough: two legs, one ranking.

The lexical leg matches the query against stored questions; the relevance
leg scores the query against stored answers. Fusion pools both legs' top
candidates, trusts strong question matches outright (similarity > alpha),
and ranks the rest by similarity * t + relevance.

    python demos/02_fused_search.py
"""

from pathlib import Path

from faqrank import (
    FusionParams,
    OverlapScorer,
    build_index,
    default_analyzer,
    load_faq_corpus,
    search_fused,
    search_lexical,
    search_relevance,
)

DATA = Path(__file__).parent / "data"

corpus = load_faq_corpus(DATA / "faq.jsonl")
analyzer = default_analyzer()
index = build_index(corpus, analyzer)

# The built-in scorer is a content-word overlap ratio. A trained model can be
# plugged in through the same score_batch protocol (see RemoteScorer).
scorer = OverlapScorer(analyzer=analyzer)

# "pay my ticket" shares no useful vocabulary with the right question
# ("How do I pay a parking fine?") but its answer mentions paying a ticket.
query = "pay my ticket"

print(f"query: {query!r}\n")
print("lexical leg (question match):")
for doc in search_lexical(index, analyzer, query, k=3):
    print(f"  {doc.score:.4f}  {doc.faq_id}  {corpus.get(doc.faq_id).question}")

print("\nrelevance leg (answer match):")
for doc in search_relevance(scorer, query, corpus, k=3):
    print(f"  {doc.score:.4f}  {doc.faq_id}  {corpus.get(doc.faq_id).question}")

result = search_fused(index, analyzer, scorer, query, corpus)
print("\nfused ranking:")
for rank, c in enumerate(result.candidates[:5], start=1):
    print(
        f"  {rank}. [{c.group.value}] sim={c.similarity:.4f} "
        f"rel={c.relevance:.4f} fused={c.fused_score:.4f}  {c.faq_id}"
    )

# An exact question hit clears the alpha threshold and is trusted outright,
# ahead of anything the fused score could say.
query = "how do i renew my parking permit"
result = search_fused(index, analyzer, scorer, query, corpus)
top = result.candidates[0]
print(f"\nquery: {query!r}")
print(f"top candidate {top.faq_id} in group {top.group.value} (sim {top.similarity:.3f})")

# If a remote scorer is configured and unreachable, search degrades to the
# lexical leg alone instead of failing, and says so.
class DownScorer:
    def score_batch(self, pairs):
        from faqrank import TransportError
        raise TransportError("connection refused")

result = search_fused(index, analyzer, DownScorer(), "pay my ticket", corpus)
print(f"\nwith the scorer down: degraded={result.degraded}, "
      f"{len(result.candidates)} lexical candidates")

# Tighter pooling: bert-only mode draws candidates from the relevance leg
# alone; union (the default) merges both legs' top pool_size.
params = FusionParams(pool_size=5, pool_mode="bert-only")
result = search_fused(index, analyzer, scorer, "pay my ticket", corpus, params)
print(f"bert-only pool of 5 -> {len(result.candidates)} candidates")
