import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hyperseq.corpus import corpus_entries, run_corpus


@pytest.fixture(scope="session")
def corpus_results():
    return run_corpus()


@pytest.fixture(scope="session")
def corpus_proofs():
    return [(e.name, e.system, e.build()) for e in corpus_entries()]
