import os

import pytest

# Keep test runs away from the user's class-number cache file.
os.environ.pop("HYPERLAT_CACHE", None)

ACCEPTANCE_LINES = []


def record_criterion(number, name, ok, detail=""):
    line = f"{'PASS' if ok else 'FAIL'}  criterion {number}: {name}  {detail}".rstrip()
    ACCEPTANCE_LINES.append((number, line))
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def forms_20000():
    from oracles import reduced_forms_table
    return reduced_forms_table(20000)
