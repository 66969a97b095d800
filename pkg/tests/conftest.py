import os
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

HERE = Path(__file__).parent
sys.path.insert(0, str(HERE))

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow], max_examples=100
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

DATA = HERE / "data"
ROOT = HERE.parent


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture(scope="session")
def toy_hepmc(tmp_path_factory):
    """Path to a 100-event toy HepMC2 file."""
    from pyfads.hepmc import write_events
    from pyfads.toygen import generate_events

    path = tmp_path_factory.mktemp("toy") / "toy100.hepmc"
    with open(path, "w") as f:
        write_events(generate_events(100, seed=2024), f)
    return path


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
