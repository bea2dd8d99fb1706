import pytest
from hypothesis import HealthCheck, settings

from reesalg.polyring import QQ, PrimeField, RingSpec

settings.register_profile(
    "repo",
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("repo")

ACCEPTANCE = []


def record_acceptance(number, title, passed, seconds, detail=""):
    ACCEPTANCE.append((number, title, passed, seconds, detail))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, seconds, detail in sorted(ACCEPTANCE):
        status = "PASS" if passed else "FAIL"
        line = f"[{status}] criterion {number}: {title} ({seconds:.2f} s)"
        if detail:
            line += f" -- {detail}"
        terminalreporter.write_line(line)


@pytest.fixture
def R2():
    return RingSpec(2)


@pytest.fixture
def R3():
    return RingSpec(3)


@pytest.fixture
def RT():
    """k[x1..x3, T1..T3] over the rationals."""
    return RingSpec(3, 3, QQ)


@pytest.fixture
def GF():
    return PrimeField(32003)
