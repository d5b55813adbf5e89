from pathlib import Path

import pytest

from metricmatch import HashBackend, load_corpus

DATA = Path(__file__).parent / "data"
GOLDEN = DATA / "golden"


@pytest.fixture(scope="session")
def fixture_corpus_path() -> Path:
    return DATA / "fixture_corpus.json"


@pytest.fixture(scope="session")
def corpus(fixture_corpus_path):
    return load_corpus(fixture_corpus_path)


@pytest.fixture(scope="session")
def hash_backend():
    return HashBackend(dim=16, seed=0)
