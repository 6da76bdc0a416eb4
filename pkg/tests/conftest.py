import sys

import pytest

from testkit import FOX, fixed_keys

from quotesig.quoter import sign


@pytest.fixture(scope="session")
def keys():
    return fixed_keys()


@pytest.fixture(scope="session")
def fox_sig(keys):
    return sign(FOX, keys.secret)


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in acceptance.RESULTS:
        terminalreporter.write_line(line)
