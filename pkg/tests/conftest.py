import dataclasses
import os

import pytest
from hypothesis import HealthCheck, settings

from radarlte.config import LteConfig, SimulationConfig

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=300, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def short_cfg(tmp_path):
    """A 50 ms scenario with a small SINR window; fast enough for unit tests."""
    return SimulationConfig(
        seed=7,
        radar_distances_km=(50.0,),
        lte=LteConfig(sinr_window_tti=(0, 10)),
        sim_duration_s=0.05,
        output_dir=tmp_path / "out",
    )


def replace(obj, **kw):
    return dataclasses.replace(obj, **kw)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
