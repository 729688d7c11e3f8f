import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from extractor_support import FIXTURE_GOALS, FIXTURE_V


@pytest.fixture
def project(tmp_path):
    root = tmp_path / "proj"
    root.mkdir()
    (root / "theorems.v").write_text(FIXTURE_V, encoding="utf-8")
    goals = tmp_path / "goals.json"
    goals.write_text(json.dumps(FIXTURE_GOALS), encoding="utf-8")
    return root, goals
