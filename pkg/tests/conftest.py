import pytest

from forgetfulness import _kernels

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session", autouse=True)
def _compiled_kernels():
    _kernels.warm_up()


@pytest.fixture
def acceptance():
    """Append one ``PASS``/``FAIL`` line per criterion to the session summary."""

    def record(label: str, ok: bool, detail: str) -> None:
        ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {label}: {detail}")

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
