import sys
from pathlib import Path

import pytest
from hypothesis import settings

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

settings.register_profile("desk", max_examples=60, deadline=None)
settings.load_profile("desk")

RUNNING = "a(b(e,f),c,d())"


@pytest.fixture
def fixtures_dir() -> Path:
    return ROOT / "fixtures"


@pytest.fixture
def schemas_dir() -> Path:
    return ROOT / "schemas"
