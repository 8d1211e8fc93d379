import os

import pytest
from hypothesis import HealthCheck, settings

from chromalab.graph import SampleSpec, sample_gnp

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def gnp(n, p, seed, trial=0):
    return sample_gnp(SampleSpec(n, p, seed, trial))


@pytest.fixture
def sample():
    return gnp


_VERDICTS: list[str] = []


@pytest.fixture
def verdict():
    """Record one PASS/FAIL line for the terminal summary, then assert."""

    def record(label, ok, detail=""):
        _VERDICTS.append(f"{label:<34} {'PASS' if ok else 'FAIL'}  {detail}".rstrip())
        assert ok, f"{label}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance")
        for line in sorted(_VERDICTS):
            terminalreporter.write_line(line)
