import pytest
from hypothesis import HealthCheck, settings

from congruence_lab import families

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("CONGRUENCE_LAB_CACHE", str(tmp_path / "cache"))


@pytest.fixture(scope="session")
def pairs_at_2():
    return {name: families.family_pair(name, 2) for name in families.FAMILIES}


@pytest.fixture(scope="session")
def intro():
    return families.intro_pair()


ACCEPTANCE_LINES = []


@pytest.fixture
def record_criterion():
    """record_criterion(n, ok, detail) prints and stores one pass/fail line."""

    def record(n, ok, detail):
        line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        print(line)
        ACCEPTANCE_LINES.append((n, line))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
