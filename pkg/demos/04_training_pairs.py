"""Training-data generation for a learned relevance scorer.

Each FAQ entry yields one positive (question, own answer) pair and
neg_ratio negatives (question, random other answer). Sampling is seeded,
so a dataset can be regenerated byte-for-byte.

    python demos/04_training_pairs.py
"""

import tempfile
from pathlib import Path

from faqrank import (
    generate_training_pairs,
    load_faq_corpus,
    read_examples,
    split_paraphrase_triples,
    write_examples,
)

DATA = Path(__file__).parent / "data"

corpus = load_faq_corpus(DATA / "faq.jsonl")
examples = generate_training_pairs([corpus], neg_ratio=4, seed=42)

positives = [e for e in examples if e.label == 1]
negatives = [e for e in examples if e.label == 0]
print(f"{len(corpus)} entries -> {len(positives)} positives + {len(negatives)} negatives")

print("\nfirst entry's block (1 positive, then its negatives):")
for e in examples[:5]:
    print(f"  label={e.label}  {e.left[:38]:<38} | {e.right[:42]}")

# Deterministic: the same seed reproduces the same file.
with tempfile.TemporaryDirectory() as tmp:
    a, b = Path(tmp) / "a.jsonl", Path(tmp) / "b.jsonl"
    write_examples(examples, a)
    write_examples(generate_training_pairs([corpus], neg_ratio=4, seed=42), b)
    print(f"\nseed 42 twice -> identical files: {a.read_bytes() == b.read_bytes()}")
    assert read_examples(a) == examples

# Query logs with paraphrases can be converted too: a (query, question,
# answer) triple yields two positive pairs, deduplicated.
triples = [
    ("renew parking permit", "How do I renew my parking permit?",
     "Parking permits can be renewed online or at the transport counter."),
    ("extend my permit", "How do I renew my parking permit?",
     "Parking permits can be renewed online or at the transport counter."),
]
pairs = split_paraphrase_triples(triples)
print(f"\n{len(triples)} paraphrase triples -> {len(pairs)} positive pairs:")
for p in pairs:
    print(f"  {p.left!r}")
