import pytest

from packset import kernels
from packset.field import make_prime_field

BACKENDS = [kernels.NUMPY_KERNELS] + ([kernels.NUMBA_KERNELS] if kernels.NUMBA_KERNELS else [])

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(params=BACKENDS, ids=lambda ks: ks.name)
def backend(request):
    return request.param


@pytest.fixture
def f11():
    return make_prime_field(11)


@pytest.fixture
def f7():
    return make_prime_field(7)


@pytest.fixture
def f101():
    return make_prime_field(101)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
