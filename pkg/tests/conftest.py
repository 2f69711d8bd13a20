import math

import numpy as np
import pytest

import xdiscord as xd

FAMILY = dict(a=0.6717, b=0.125, c=0.125, d=0.0783)
FAMILY_KS = (0.2839, 0.2827, 0.2822, 0.2817, 0.2805)


def family_state(k, literal=False, k1=None, k2=None):
    a, b, c, d = FAMILY["a"], FAMILY["b"], FAMILY["c"], FAMILY["d"]
    k1 = k if k1 is None else k1
    k2 = k if k2 is None else k2
    v_scale = math.sqrt(a * c) if literal else math.sqrt(b * c)
    return xd.validate_xstate(a, b, c, d, k1 * math.sqrt(a * d), k2 * v_scale)


@pytest.fixture
def bell():
    return xd.validate_xstate(0.5, 0, 0, 0.5, 0.5, 0)


@pytest.fixture
def mixed():
    return xd.validate_xstate(0.25, 0.25, 0.25, 0.25, 0, 0)


@pytest.fixture
def lu_state():
    """k1 = 0, k2 = 0.8 member of the a=0.6717 family (u = 0, v = 0.1)."""
    return xd.validate_xstate(0.6717, 0.125, 0.125, 0.0783, 0.0, 0.1)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# --- acceptance report -------------------------------------------------------

ACCEPTANCE_LINES: dict[str, str] = {}


@pytest.fixture
def acceptance_report():
    """Record one PASS/FAIL line per acceptance criterion."""

    def record(key, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {key}: {detail}"
        ACCEPTANCE_LINES[key] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES, key=lambda k: (int(k.split(".")[0]), k)):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
