import pytest

from ixcomplex.concept import parse_concept

from helpers import CONCEPTS_DIR


@pytest.fixture(scope="session")
def v1_text() -> str:
    return (CONCEPTS_DIR / "v1.concept").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def v2_text() -> str:
    return (CONCEPTS_DIR / "v2.concept").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def v1_concept(v1_text):
    return parse_concept(v1_text)


@pytest.fixture(scope="session")
def v2_concept(v2_text):
    return parse_concept(v2_text)
