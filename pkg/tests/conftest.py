import pytest

from gravnano.core import PhysicalConstants, unit_sphere

_ACCEPTANCE_LINES = []


def record_criterion(number, passed, detail):
    line = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}"
    _ACCEPTANCE_LINES.append(line)
    print(line)
    return passed


@pytest.fixture
def unit_constants():
    return PhysicalConstants(G=1.0, hbar=1.0)


@pytest.fixture
def unit():
    return unit_sphere()


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
