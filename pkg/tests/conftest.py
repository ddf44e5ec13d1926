import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fgt import groups
from fgt.config import EngineConfig


@pytest.fixture(scope="session")
def s3():
    return groups.symmetric(3)


@pytest.fixture(scope="session")
def s4():
    return groups.symmetric(4)


@pytest.fixture(scope="session")
def a4():
    return groups.alternating(4)


@pytest.fixture(scope="session")
def a5():
    return groups.alternating(5)


@pytest.fixture(scope="session")
def q8():
    return groups.quaternion8()


@pytest.fixture(scope="session")
def d4():
    return groups.dihedral(8)


@pytest.fixture(scope="session")
def d12():
    return groups.dihedral(12)


@pytest.fixture(scope="session")
def sl23():
    return groups.special_linear_2_3()


@pytest.fixture(scope="session")
def cfg():
    return EngineConfig()


def transposition(g):
    """First element of order 2 in a symmetric-group fixture."""
    return next(i for i in range(g.order) if g.elem_order[i] == 2)


def three_cycle(g):
    return next(i for i in range(g.order) if g.elem_order[i] == 3)
