import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from corpora import (  # noqa: E402
    avodah_project,
    breakdown_project,
    piyyut_project,
    psalms_project,
    rollup_project,
    similarity_corpus,
)


@pytest.fixture(scope="session")
def breakdown():
    return breakdown_project()


@pytest.fixture(scope="session")
def avodah():
    return avodah_project()


@pytest.fixture(scope="session")
def psalms():
    return psalms_project()


@pytest.fixture(scope="session")
def piyyut():
    return piyyut_project()


@pytest.fixture(scope="session")
def corpus12():
    return similarity_corpus(n_texts=12)


@pytest.fixture(scope="session")
def corpus20():
    return similarity_corpus(n_texts=20, length=400, seed=9, project_id="corpus20")


@pytest.fixture(scope="session")
def rollup():
    return rollup_project()
