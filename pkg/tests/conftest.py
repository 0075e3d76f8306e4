import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("ccx", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ccx")


@pytest.fixture
def rng():
    return np.random.default_rng(20240521)


def random_disc(rng, size, radius=1.0):
    r = radius * np.sqrt(rng.random(size))
    return r * np.exp(2j * np.pi * rng.random(size))


# one line per acceptance criterion, printed after the run
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
