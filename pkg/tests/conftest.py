import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from dupdist.exact_engine import SearchConfig, build_table, f_n_m_all  # noqa: E402


@pytest.fixture(scope="session")
def table20():
    return build_table(SearchConfig(20))


@pytest.fixture(scope="session")
def fnm20():
    return f_n_m_all(SearchConfig(20))


ACCEPTANCE_LINES: list[str] = []


def record(name: str, ok: bool, detail: str = "") -> None:
    """Print and keep one PASS/FAIL line for an acceptance criterion."""
    line = f"{'PASS' if ok else 'FAIL'}: {name}" + (f" ({detail})" if detail else "")
    print(line)
    ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
