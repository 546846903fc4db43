from functools import lru_cache

import hypothesis
import pytest

from torusrank import periodic

hypothesis.settings.register_profile("default", max_examples=60, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.load_profile("default")


@lru_cache(maxsize=None)
def crystal(n):
    return periodic.crystal_torus(n)


@lru_cache(maxsize=None)
def tri(n):
    return periodic.tri_torus(n)


@lru_cache(maxsize=None)
def rp(n):
    return periodic.cross_polytope_rp(n)


@pytest.fixture
def crystal_torus():
    return crystal


@pytest.fixture
def tri_torus():
    return tri


@pytest.fixture
def rp_space():
    return rp


ACCEPTANCE: dict[int, list[tuple[str, bool]]] = {}


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance.py" not in report.nodeid:
        return
    for key, value in report.user_properties:
        if key == "criterion":
            ACCEPTANCE.setdefault(value, []).append((report.nodeid.split("::")[-1], report.passed))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[num]
        ok = sum(p for _, p in parts)
        failing = [name for name, p in parts if not p]
        line = f"criterion {num:2d}: {'PASS' if ok == len(parts) else 'FAIL'}  ({ok}/{len(parts)} cases)"
        if failing:
            line += "  failing: " + ", ".join(failing)
        terminalreporter.write_line(line)
