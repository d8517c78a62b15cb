from pathlib import Path

import pytest

from lrsomega import formulas
from lrsomega.lrs_core import load

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def fixture_path(name: str) -> Path:
    return FIXTURES / name


@pytest.fixture
def lrs_fixture():
    return lambda name: load(FIXTURES / f"{name}.json")


@pytest.fixture(scope="session")
def solver():
    s = formulas.find_solver()
    if s is None:
        pytest.skip("no SMT solver configured (set LRSOMEGA_SOLVER or put z3 on PATH)")
    return s


# one line per acceptance criterion, printed after the run
ACCEPTANCE: dict[int, str] = {}


def record(number: int, ok: bool | None, detail: str):
    status = "SKIP" if ok is None else "PASS" if ok else "FAIL"
    ACCEPTANCE[number] = f"criterion {number}: {status}  {detail}"


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
