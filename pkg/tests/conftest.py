import pytest

from dexcheck import load_defaults


@pytest.fixture(scope="session")
def reg():
    return load_defaults()
