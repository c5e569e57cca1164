import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from trapgen import analytic

settings.register_profile(
    "trapgen", deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture])
settings.load_profile("trapgen")


@pytest.fixture
def sys_equal():
    """Unit-magnification 4f system at 808 nm."""
    return analytic.SystemSpec(0.5, 0.5, 808e-9)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


_VERDICTS = pytest.StashKey[dict]()


@pytest.fixture
def verdict(request):
    """Record one PASS/FAIL line for an acceptance criterion, then assert it.

    ``checks`` is a list of ``(label, ok, detail)``.
    """
    capman = request.config.pluginmanager.getplugin("capturemanager")

    def record(number: int, title: str, checks):
        ok = all(c[1] for c in checks)
        parts = "; ".join(f"{label} {'ok' if good else 'MISS'} [{detail}]" for label, good, detail in checks)
        line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'} {title}: {parts}"
        request.config.stash.setdefault(_VERDICTS, {})[number] = line
        with capman.global_and_fixture_disabled():
            print("\n" + line, flush=True)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_VERDICTS, {})
    if lines:
        terminalreporter.section("acceptance criteria")
        for n in sorted(lines):
            terminalreporter.write_line(lines[n])
