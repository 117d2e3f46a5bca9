import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from llmastar.env import Environment

GOLDEN_DIR = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def demo_env() -> Environment:
    """The worked-example map: two horizontal barriers and one vertical."""
    return Environment.create(
        [0, 50], [0, 30],
        horizontal_barriers=[[10, 0, 25], [15, 30, 50]],
        vertical_barriers=[[25, 10, 22]],
    )


@pytest.fixture(scope="session")
def demo_query():
    return (5, 5), (20, 20)


@pytest.fixture(scope="session")
def demo_path():
    return [(5, 5), (26, 9), (25, 23), (20, 20)]
