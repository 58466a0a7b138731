import pytest  # type: ignore[import-not-found]

from feilab.config import ARITY_CAP_ENV, ConfigLogging
from feilab.families import AllFunctions, FamilySpec, named_function
from feilab.spectrum import TruthTable
from tests.enums import KnownTable


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    """Keep a cap exported by the shell out of every test."""
    monkeypatch.delenv(ARITY_CAP_ENV, raising=False)


@pytest.fixture
def config_logging():
    return ConfigLogging()


@pytest.fixture
def majority3():
    return named_function(FamilySpec.parse("named:majority,n=3"))


@pytest.fixture
def and2():
    return TruthTable.from_hex(KnownTable.AND_2.value)


@pytest.fixture
def parity3():
    return named_function(FamilySpec.parse("named:parity,n=3"))


@pytest.fixture
def constant4():
    return named_function(FamilySpec.parse("named:constant,n=4"))


@pytest.fixture(scope="session")
def small_tables():
    """Every function of arity 1, 2 and 3 (276 tables)."""
    return [tt for n in (1, 2, 3) for tt in AllFunctions(n)]

