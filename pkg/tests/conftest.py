import sys
from pathlib import Path

import pytest

from sandnet import Graph, Roster, StudentRecord

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture
def triangle():
    return Graph(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def star4():
    """Center 0, leaves 1..3."""
    return Graph(4, [(0, 1), (0, 2), (0, 3)])


@pytest.fixture
def path2():
    return Graph(2, [(0, 1)])


@pytest.fixture
def path3():
    return Graph(3, [(0, 1), (1, 2)])


def record(uid, semester="F2012", grade=85.0, gender="F", major="CS", year=3, intergrade=None):
    return StudentRecord(
        uid=uid,
        semester=semester,
        group=uid[0],
        grade=grade,
        gender=gender,
        major=major,
        year=year,
        intergrade=intergrade,
    )


@pytest.fixture
def tiny_roster():
    return Roster(
        [
            record("A1", grade=92.0, gender="F", major="CS", year=3, intergrade=88.0),
            record("A2", grade=85.0, gender="M", major="PW", year=2, intergrade=90.0),
            record("B1", grade=78.0, gender="F", major="CS", year=3, intergrade=75.0),
            record("B2", grade=64.0, gender="O", major="MGT", year=4, intergrade=70.0),
        ]
    )
