import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from faqrank import FaqCorpus, FaqEntry, default_analyzer


def write_jsonl(path, records):
    with open(path, "w", encoding="utf-8") as handle:
        for record in records:
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")


@pytest.fixture(scope="session")
def analyzer():
    return default_analyzer()


@pytest.fixture()
def tiny_corpus():
    """Three entries arranged so each retrieval leg disagrees on rank 1.

    For query "renew license": the lexical leg prefers faq-1 (question shares
    the rare term "renew" and is short), the relevance leg prefers faq-2 (its
    answer contains both query words, winning the id tie-break over faq-3),
    and only faq-3 is actually right.
    """
    return FaqCorpus(
        entries=(
            FaqEntry(id="faq-1", question="renew permit",
                     answer="Visit the permit desk on floor two.", source="demo"),
            FaqEntry(id="faq-2", question="bus timetable information",
                     answer="You can renew a parking license online.", source="demo"),
            FaqEntry(id="faq-3", question="license update office desk",
                     answer="To renew your license go to the office.", source="demo"),
        ),
        source="demo",
    )


@pytest.fixture()
def corpus_file(tmp_path, tiny_corpus):
    path = tmp_path / "corpus.jsonl"
    write_jsonl(
        path,
        [
            {"id": e.id, "question": e.question, "answer": e.answer, "source": e.source}
            for e in tiny_corpus
        ],
    )
    return path
