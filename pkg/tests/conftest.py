import pytest

from filmcasimir.sweep import figure_preset, run_sweep

# acceptance lines collected during the run, echoed in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def fig1_tables():
    return [run_sweep(s) for s in figure_preset("fig1")]


@pytest.fixture(scope="session")
def fig3_tables():
    return [run_sweep(s) for s in figure_preset("fig3")]


@pytest.fixture(scope="session")
def fig5_tables():
    return [run_sweep(s) for s in figure_preset("fig5")]
