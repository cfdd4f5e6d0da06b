import pytest

from _support import ACCEPTANCE, PAPER, PRODUCT
from quadescape import build_evaluators, validate_params


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[key]
        terminalreporter.write_line(
            f"criterion {key}: {'PASS' if passed else 'FAIL'}  {detail}")


@pytest.fixture(scope="session")
def paper():
    return validate_params(*PAPER)


@pytest.fixture(scope="session")
def product():
    return validate_params(*PRODUCT)


@pytest.fixture(scope="session")
def paper_ev(paper):
    return build_evaluators(paper)


@pytest.fixture(scope="session")
def product_ev(product):
    return build_evaluators(product)
