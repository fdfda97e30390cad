import pytest

from mcgcover.homology import standard_model
from mcgcover.mcg import Catalog
from mcgcover.surface import SurfacePresentation


@pytest.fixture(scope="session")
def pres2():
    return SurfacePresentation(2)


@pytest.fixture(scope="session")
def pres3():
    return SurfacePresentation(3)


@pytest.fixture(scope="session")
def model222():
    return standard_model(2, 2, 2)


@pytest.fixture(scope="session")
def cat22(pres2):
    return Catalog(pres2, 2)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
