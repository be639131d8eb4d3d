import math

import pytest

from thermnoise.model import DEFAULT_MATERIALS, BeamSubstrate, Material, build_stack

K0 = 2 * math.pi / 1.064e-6


@pytest.fixture
def sio2():
    return DEFAULT_MATERIALS["SiO2"]


@pytest.fixture
def ta2o5():
    return DEFAULT_MATERIALS["Ta2O5"]


@pytest.fixture
def sapphire():
    return DEFAULT_MATERIALS["sapphire"]


@pytest.fixture
def k0():
    return K0


def fp_stack(j, l=8, eta_fp=math.pi):
    m = DEFAULT_MATERIALS
    return build_stack(33, l, j, eta_fp, m["SiO2"], m["Ta2O5"], m["sapphire"], K0)


def beam_with_sigma(sigma, w0=1e-4):
    return BeamSubstrate(w0, Material("sub", 1.45, E=72e9, sigma=sigma, phi_s=1e-6), 300.0)


@pytest.fixture
def beam02():
    return beam_with_sigma(0.2)


# one line per acceptance criterion, echoed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
