from __future__ import annotations

from pathlib import Path

import pytest

from jsc.inputs import parse_input

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "data"
FIXTURES = Path(__file__).resolve().parent / "fixtures"
GOLDEN = Path(__file__).resolve().parent / "golden"

ODD_EVEN = [[[0, 1], [0, 0]], [[0, 0], [1, 0]]]
POSITIVE_PAIR = [[[2, 1], [1, 2]], [[1, 1], [1, 2]]]


def load(name):
    path = DATA / name if (DATA / name).exists() else FIXTURES / name
    return parse_input(path)


@pytest.fixture
def root():
    return ROOT
