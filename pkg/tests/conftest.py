import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "scripts"))

import gen_corpus  # noqa: E402


@pytest.fixture(scope="session")
def corpus_dir(tmp_path_factory):
    """The synthetic planted-clone trace corpus (30 goals, 4 planted pairs)."""
    d = tmp_path_factory.mktemp("corpus")
    gen_corpus.write_corpus(d)
    return d
