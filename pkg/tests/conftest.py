import sys

import pytest
from hypothesis import settings

from partcert.exact import PartitionTable

settings.register_profile("partcert", deadline=None, derandomize=True, print_blob=True)
settings.load_profile("partcert")


@pytest.fixture(scope="session")
def table():
    t = PartitionTable()
    t.extend(20_002, exact=True)
    return t


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
