import functools
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from bjlab import integrate, make_params, solve_spectrum  # noqa: E402


@functools.lru_cache(maxsize=None)
def cached_run(m, vbar, epsilon, t_final, omega_s=0.0):
    """Default-step trajectory, shared across test modules."""
    return integrate(make_params(m, vbar, epsilon, omega_s), t_final)


@functools.lru_cache(maxsize=None)
def cached_spectrum(m, vbar, epsilon, omega_s=0.0):
    return solve_spectrum(make_params(m, vbar, epsilon, omega_s))


@pytest.fixture
def run():
    return cached_run


@pytest.fixture
def spectrum():
    return cached_spectrum


_ACCEPTANCE = []


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    _ACCEPTANCE.append((marker.args[0], call.excinfo is None, item.name))


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, name in sorted(_ACCEPTANCE, key=lambda r: (int(r[0].rstrip("abc")), r[0])):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  C{label:<4} {name}")
