import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ersmeta.schema import load_bundled_manifest, load_bundled_schema

FIXTURES_DIR = Path(__file__).parent.parent / "src" / "ersmeta" / "data" / "fixtures"
GOLDEN_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def schema():
    return load_bundled_schema()


@pytest.fixture(scope="session")
def manifest():
    return load_bundled_manifest()


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES_DIR


@pytest.fixture(scope="session")
def golden_dir():
    return GOLDEN_DIR
