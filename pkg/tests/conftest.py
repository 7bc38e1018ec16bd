import pytest

from tsl.claims import FINITE_CORPUS
from tsl.presentations import parse_presentation

ACCEPTANCE_LINES = []


def record(criterion, ok, detail=""):
    line = f"{'PASS' if ok else 'FAIL'} criterion {criterion}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def corpus():
    return {name: parse_presentation(text) for name, text in FINITE_CORPUS.items()}
