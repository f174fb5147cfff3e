"""Shared fixtures: reference geometries and cached drive solutions.

The acceptance module registers one PASS/FAIL line per criterion; the
terminal-summary hook below reprints them after the run so the verdicts
stay visible even with captured stdout.
"""

import pytest

from lpmimo import em, geometry


@pytest.fixture(scope="session")
def lb_geometry():
    return geometry.reference_fixture("LB")


@pytest.fixture(scope="session")
def hb_geometry():
    return geometry.reference_fixture("HB")


@pytest.fixture(scope="session")
def lb_solution(lb_geometry):
    return em.solve_drive(lb_geometry, 800.0)


@pytest.fixture(scope="session")
def hb_solution(hb_geometry):
    return em.solve_drive(hb_geometry, 2400.0)


@pytest.fixture(scope="session")
def lb_pattern(lb_solution, lb_geometry):
    return em.far_field(lb_solution, lb_geometry)


@pytest.fixture(scope="session")
def hb_pattern(hb_solution, hb_geometry):
    return em.far_field(hb_solution, hb_geometry)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "acceptance_lines", None)
    if lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
