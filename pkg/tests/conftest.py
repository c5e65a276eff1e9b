from pathlib import Path

import pytest

from paretonav import ObjectiveSpec, build_population

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def toy_population():
    """3 models, 2 minimize objectives, hand-checkable ranks."""
    return build_population(
        ["a", "b", "c"],
        [ObjectiveSpec("u"), ObjectiveSpec("v")],
        [[1.0, 3.0], [3.0, 1.0], [2.0, 2.0]],
    )
