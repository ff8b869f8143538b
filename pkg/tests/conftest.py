import json
from pathlib import Path
from typing import Any

import pytest

from src.ideal_dimension import DimensionEngine
from src.quad_forms import RankEngine
from src.regularity import SubspaceSampler

FIXTURES = Path(__file__).resolve().parents[1] / 'fixtures'


def fixture_path(kind: str, name: str) -> Path:
    return FIXTURES / kind / (name + '.json')


def load_fixture(kind: str, name: str) -> Any:
    return json.loads(fixture_path(kind, name).read_text(encoding='utf-8'))


@pytest.fixture(scope='session')
def dimension_engine() -> DimensionEngine:
    return DimensionEngine()


@pytest.fixture(scope='session')
def rank_engine(dimension_engine) -> RankEngine:
    return RankEngine(dimension_engine)


@pytest.fixture
def sampler() -> SubspaceSampler:
    return SubspaceSampler(7)
