import json
import sys
from pathlib import Path

import pytest

TESTS_DIR = Path(__file__).parent
DATA_DIR = TESTS_DIR / "data"
REPO_ROOT = TESTS_DIR.parent
BUNDLED_DATASET = REPO_ROOT / "data" / "usage_questions.tsv"

sys.path.insert(0, str(TESTS_DIR))  # make `oracles` importable


@pytest.fixture(scope="session")
def planted_corpus():
    rows = []
    with open(DATA_DIR / "planted_corpus.jsonl", encoding="utf-8") as fh:
        for line in fh:
            rows.append(json.loads(line))
    return rows


@pytest.fixture(scope="session")
def planted_sentences(planted_corpus):
    from usageq.textproc import analyze

    return [analyze(row["text"], row["id"])[0] for row in planted_corpus]


@pytest.fixture(scope="session")
def bundled_records():
    from usageq.dataset import load_dataset

    return load_dataset(BUNDLED_DATASET)


def make_candidate(text, category, review_id="r1"):
    """Analyze one sentence and wrap it as a candidate for question tests."""
    from usageq.candidates import CandidateSentence, detect_activity
    from usageq.textproc import analyze

    sent = analyze(text, review_id)[0]
    mentions = tuple(detect_activity(sent))
    return CandidateSentence(sent, category, (), mentions)
