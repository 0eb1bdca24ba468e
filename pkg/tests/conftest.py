from fractions import Fraction

import pytest

from silverline.polynomials import SilverPolynomial
from silverline.reals import silver_number

# bit strings b_1..b_N of the named silver polynomials
NAMED = {
    "golden": "11",
    "tribonacci": "111",
    "tetranacci": "1111",
    "supergolden": "101",
    "plastic": "011",
}


def silver(name_or_bits):
    return SilverPolynomial.from_string(NAMED.get(name_or_bits, name_or_bits))


def root_of(name_or_bits, width=Fraction(1, 10**30)):
    return silver_number(silver(name_or_bits), width)


@pytest.fixture(scope="session")
def golden():
    return silver("golden")


@pytest.fixture(scope="session")
def tribonacci():
    return silver("tribonacci")


@pytest.fixture(scope="session")
def golden_root():
    return root_of("golden")


@pytest.fixture(scope="session")
def tribonacci_root():
    return root_of("tribonacci")


def pytest_terminal_summary(terminalreporter):
    """Print the acceptance table when the acceptance module ran."""
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        passed, seconds, title, detail = RESULTS[n]
        line = f"criterion {n:>2}  {'PASS' if passed else 'FAIL'}  {seconds:7.2f}s  {title}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)
