import sys
from pathlib import Path

import pytest

from cyctower.hyperelliptic import CurveModel
from cyctower.records import parse_record

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"
EXAMPLE_RECORD = FIXTURES / "example_curve.json"
WEIL_RECORDS = sorted((FIXTURES / "weil").glob("*.json"))

sys.path.insert(0, str(Path(__file__).resolve().parent))


@pytest.fixture
def example_curve() -> CurveModel:
    return CurveModel(2, (0, 1, 1), (1, 0, 0, 1), "example")


@pytest.fixture
def example_record():
    return parse_record(EXAMPLE_RECORD.read_bytes())
