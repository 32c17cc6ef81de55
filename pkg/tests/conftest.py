import pytest

from kleinbench.group import klein_group
from kleinbench.picard import build_g_action, trivial_module
from kleinbench.subgroups import subgroups_up_to_conjugacy


@pytest.fixture(scope="session")
def G():
    return klein_group()


@pytest.fixture(scope="session")
def inventory(G):
    return subgroups_up_to_conjugacy(G)


@pytest.fixture(scope="session")
def by_id(inventory):
    return {s.class_id: s for s in inventory}


@pytest.fixture(scope="session")
def dp2(G):
    return build_g_action(G)


@pytest.fixture(scope="session")
def p2(G):
    return trivial_module(G)


@pytest.fixture(scope="session")
def chain():
    from kleinbench.fibrations import build_theorem_chain

    return build_theorem_chain()


# acceptance lines ---------------------------------------------------------------

ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def record_criterion():
    """Store the one-line verdict of an acceptance criterion; printed at the end of the run."""

    def record(number: int, passed: bool, text: str) -> None:
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {text}"
        ACCEPTANCE_LINES[number] = line
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
