import numpy as np
import pytest

from excitonprobe import default_grid, fmo_preset, sweep_spectrum

# one line per acceptance criterion, filled in by tests/test_acceptance.py
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def preset():
    return fmo_preset()


@pytest.fixture(scope="session")
def preset_grid(preset):
    net, _ = preset
    return default_grid(net)


@pytest.fixture(scope="session")
def baseline_spectrum(preset, preset_grid):
    net, wg = preset
    return sweep_spectrum(net, wg, preset_grid)


@pytest.fixture()
def rng():
    return np.random.default_rng(20260816)
