import math

import pytest

from shequid_witness.config import ExperimentConfig, RunParams
from shequid_witness.noise_sim import NoiseParams
from shequid_witness.superfluid import DriveParams, Geometry

# phase at the default operating point with A = 0.5 (mpmath, 40 digits)
PHI_DEFAULT = 1141115.52940621054327570373109281241103


def small_phi_geometry(phi_target=0.5):
    # phase scales as sigma^2
    return Geometry(sigma=4e-6 * math.sqrt(phi_target / PHI_DEFAULT))


@pytest.fixture
def default_config():
    return ExperimentConfig()


@pytest.fixture
def quiet_short():
    """Zero-noise, 20 s at 100 Hz."""
    return ExperimentConfig(noise=NoiseParams.quiet(), run=RunParams(duration=20.0, sample_rate=100.0))


@pytest.fixture
def small_phi_config():
    """QG, zero noise, phi ~ 0.5 rad, millimetre modulation so the harmonics are well above rounding."""
    return ExperimentConfig(
        geometry=small_phi_geometry(),
        drive=DriveParams(delta_d=1e-3),
        noise=NoiseParams.quiet(),
        run=RunParams(duration=20.0, sample_rate=100.0),
    )


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
