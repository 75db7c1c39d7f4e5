import os
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))  # make synthcorpus importable

from aspectaux import conllu
from aspectaux.embeddings import EmbeddingMatrix, Vocabulary
from aspectaux.llda import SeedList

FIXTURES = Path(__file__).parent / "fixtures"
REPO = Path(__file__).parent.parent
MINI = REPO / "data" / "mini"

# Hand-set 4-d vectors for the running examples.  cos(coffee, menu) = 0.8,
# cos(pasta, menu) = 0.98, cos(waiters, staff) = 0.8; food and service
# tokens are orthogonal, price seeds are far from everything.
_FIXTURE_VECTORS = {
    "coffee": (1.0, 0.0, 0.0, 0.0),
    "menu": (0.8, 0.6, 0.0, 0.0),
    "pasta": (0.9, 0.436, 0.0, 0.0),
    "waiters": (0.0, 0.0, 1.0, 0.0),
    "staff": (0.0, 0.0, 0.8, 0.6),
    "charge": (0.0, 1.0, 0.0, 0.0),
    "cheap": (-0.6, 0.8, 0.0, 0.0),
}


def fixture_embedding() -> EmbeddingMatrix:
    tokens = list(_FIXTURE_VECTORS)
    vocab = Vocabulary(token_to_id={t: i for i, t in enumerate(tokens)},
                       id_to_token=tokens,
                       counts=np.ones(len(tokens), dtype=np.int64))
    return EmbeddingMatrix(vocab=vocab,
                           input_vectors=np.array([_FIXTURE_VECTORS[t] for t in tokens]))


def fixture_seeds() -> dict[str, SeedList]:
    return {
        "food": SeedList("food", [("menu", 0.05), ("delicious", 0.04)]),
        "service": SeedList("service", [("staff", 0.06), ("waiters", 0.05)]),
        "price": SeedList("price", [("charge", 0.06), ("cheap", 0.05)]),
    }


@pytest.fixture()
def running_embedding():
    return fixture_embedding()


@pytest.fixture()
def running_seeds():
    return fixture_seeds()


@pytest.fixture(scope="session")
def golden_phrases():
    """Golden parses for the three rule phrases plus a no-rule control."""
    return {sid: toks for sid, toks in conllu.read_conllu(FIXTURES / "golden_phrases.conllu")}


@pytest.fixture(scope="session")
def running_examples():
    """Golden parses for the three running-example sentences s1..s3."""
    return {sid: toks for sid, toks in conllu.read_conllu(FIXTURES / "running_examples.conllu")}


@pytest.fixture(scope="session")
def mini_paths():
    return {
        "semeval_train": MINI / "semeval_train.xml",
        "semeval_test": MINI / "semeval_test.xml",
        "semeval_train_parses": MINI / "semeval_train.conllu",
        "semeval_test_parses": MINI / "semeval_test.conllu",
        "sentihood_train": MINI / "sentihood_train.json",
        "sentihood_test": MINI / "sentihood_test.json",
        "sentihood_train_parses": MINI / "sentihood_train.conllu",
        "sentihood_test_parses": MINI / "sentihood_test.conllu",
    }


def real_data_dir() -> Path | None:
    """Directory with the real benchmark files, if the user provided one."""
    env = os.environ.get("ASPECTAUX_DATA_DIR")
    if env and Path(env).is_dir():
        return Path(env)
    default = REPO / "data" / "real"
    return default if default.is_dir() else None
