"""Suite-wide fixtures and the acceptance summary hook."""

from __future__ import annotations

import random

import pytest

from mcclink.synth import SynthConfig, synthesize

# One line per acceptance criterion, printed in the terminal summary so
# every run ends with an explicit PASS/FAIL roll call.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(0xC0FFEE)


@pytest.fixture(scope="session")
def small_synth():
    """A small but non-trivial community, shared across read-only tests."""
    cfg = SynthConfig(
        n_real=28, n_fake=4, target_edges=120, requests_per_fake=14, seed=11
    )
    return synthesize(cfg)


@pytest.fixture(scope="session")
def default_synth():
    """One default-config community, shared across read-only tests."""
    return synthesize(SynthConfig(seed=0))
