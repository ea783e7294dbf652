"""Lexical leg walkthrough: index a corpus, score, and search.

Run from the repository root:

    python demos/01_lexical_search.py
"""

from pathlib import Path

from faqrank import (
    build_index,
    default_analyzer,
    load_faq_corpus,
    raw_score,
    search_lexical,
    similarity,
)

DATA = Path(__file__).parent / "data"

corpus = load_faq_corpus(DATA / "faq.jsonl")
print(f"loaded {len(corpus)} FAQ entries from {corpus.source!r}")

# The analyzer lowercases, tokenizes on word characters, and knows the
# stopword list. Content words are what's left after stopword removal.
analyzer = default_analyzer()
analyzed = analyzer.analyze("How do I renew my parking permit?")
print("tokens:       ", analyzed.tokens)
print("content words:", analyzed.content_words)

# The index covers question text only; answers belong to the relevance leg.
index = build_index(corpus, analyzer)
print(f"\nindexed {index.doc_count} questions, avg length {index.avg_doc_length:.2f}")
print(f"idf('parking') = {index.idf('parking'):.4f}")
print(f"idf('library') = {index.idf('library'):.4f}")

query = "renew parking permit"

# Raw BM25 grows with query length; the similarity used everywhere downstream
# divides by a per-query constant so scores are comparable across queries.
tokens = analyzer.analyze(query).tokens
print(f"\nquery {query!r}")
print(f"  raw BM25 for faq-001:   {raw_score(index, tokens, 'faq-001'):.4f}")
print(f"  similarity for faq-001: {similarity(index, analyzer, query, 'faq-001'):.4f}")

print("\ntop 5 by lexical similarity:")
for rank, doc in enumerate(search_lexical(index, analyzer, query, k=5), start=1):
    entry = corpus.get(doc.faq_id)
    print(f"  {rank}. {doc.score:.4f}  {doc.faq_id}  {entry.question}")
