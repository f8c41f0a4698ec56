import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from tgnn import builtin_registry, cycle_graph


@pytest.fixture(scope="session")
def registry():
    return builtin_registry()


@pytest.fixture(scope="session")
def t1(registry):
    return registry.get("T1")


@pytest.fixture(scope="session")
def t2(registry):
    return registry.get("T2")


@pytest.fixture(scope="session")
def ttri(registry):
    return registry.get("Ttri")


@pytest.fixture(scope="session")
def tp(registry):
    return registry.get("Tp")


@pytest.fixture(scope="session")
def c3():
    return cycle_graph(3)


@pytest.fixture(scope="session")
def c6():
    return cycle_graph(6)
