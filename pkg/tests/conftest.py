import random

import pytest
from hypothesis import HealthCheck, settings

from sphincs_streebog import get_backend, keygen, paramset_lookup

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(params=["streebog256", "sha256"])
def backend_id(request):
    return request.param


@pytest.fixture
def toy():
    return paramset_lookup("toy")


@pytest.fixture(scope="session")
def toy_keys():
    """Fixed-seed toy keypairs, one per backend."""
    p = paramset_lookup("toy")
    return {b: keygen(p, get_backend(b), bytes(range(48))) for b in ("streebog256", "sha256")}


@pytest.fixture
def rng():
    return random.Random(1234)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
