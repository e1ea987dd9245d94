import os
import pathlib

import pytest

REPO_ROOT = pathlib.Path(__file__).resolve().parents[2]


@pytest.fixture(scope="session")
def fixtures_dir():
    env = os.environ.get("FAIRSLICE_FIXTURES")
    path = pathlib.Path(env) if env else REPO_ROOT / "fixtures"
    if not path.is_dir():
        pytest.skip("fixture corpus not found")
    return path
