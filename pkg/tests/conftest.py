import sys

import pytest

from dspl import build_prime_table


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Echo the acceptance verdict lines where capture cannot eat them."""
    mod = sys.modules.get("test_acceptance") or \
        sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "ACCEPTANCE_LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def table_small():
    """Primes to 2 * 10^4; enough for factorizing anything up to 4 * 10^8."""
    return build_prime_table(20_000)


@pytest.fixture(scope="session")
def table_medium():
    return build_prime_table(1_100_000)


@pytest.fixture(scope="session")
def table_10m():
    """Shared by the heavyweight acceptance checks (x = 10^7 scale)."""
    return build_prime_table(10_000_001)
