import json
import os
import shutil
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[2]


@pytest.fixture(scope="session")
def cli():
    path = os.environ.get("ABELWAVE_CLI") or shutil.which("abelwave")
    if not path:
        candidate = ROOT / "build" / "tools" / "abelwave"
        path = str(candidate) if candidate.exists() else None
    if not path:
        pytest.skip("abelwave executable not found")
    return path


@pytest.fixture(scope="session")
def schemas():
    base = Path(os.environ.get("ABELWAVE_SCHEMAS", ROOT / "schemas"))
    return {p.name.split(".")[0]: json.loads(p.read_text()) for p in base.glob("*.schema.json")}
