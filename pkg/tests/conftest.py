import pytest

from structid.cases import corpus


@pytest.fixture(scope="session")
def cases():
    return {c.name: c for c in corpus()}


@pytest.fixture(scope="session")
def models(cases):
    return {name: c.model for name, c in cases.items()}


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
