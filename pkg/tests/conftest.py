import pytest

from azed import default_registry, parse

E1_TEXT = "info-about(dog(), non-subjectivity(nice-kind()))"
OPPOSITION_TEXT = (
    "each-of(localised-discourse(@Lssp, dog()), localised-discourse(@Rssp, nice-kind()))"
)


@pytest.fixture(scope="session")
def reg():
    return default_registry()


@pytest.fixture
def e1():
    return parse(E1_TEXT)
