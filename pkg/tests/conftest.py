import pytest

from blockcrit import enumeration


@pytest.fixture(scope="session")
def tables3():
    return enumeration.tables_build(3)


@pytest.fixture(scope="session")
def tables6():
    return enumeration.tables_build(6)


@pytest.fixture(scope="session")
def tables8():
    return enumeration.tables_build(8)
