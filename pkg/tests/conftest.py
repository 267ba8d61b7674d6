import os

import pytest

from ccc.instance import parse_instance

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")


def load_instance(name):
    with open(os.path.join(DATA_DIR, name), "r", encoding="utf-8") as fh:
        return parse_instance(fh.read())


@pytest.fixture
def sample8():
    """8-node instance with supernodes {0,1} {2,3} {4,5,6} {7}, hostile (1,2)."""
    return load_instance("sample8.ccc")


@pytest.fixture
def sample8_path():
    return os.path.join(DATA_DIR, "sample8.ccc")
