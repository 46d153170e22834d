import numpy as np
import pytest

_ACCEPTANCE_LINES = []


def pytest_addoption(parser):
    parser.addoption(
        "--fig2-rel-tol",
        type=float,
        default=0.05,
        help="relative tolerance for the Delta S vs B_RW agreement check (criterion 7)",
    )


@pytest.fixture
def fig2_rel_tol(request):
    return request.config.getoption("--fig2-rel-tol")


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture
def report_line():
    def _report(criterion, passed, detail):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {criterion}: {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return passed

    return _report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_unitary(rng, d):
    z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_hermitian(rng, d):
    z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return 0.5 * (z + z.conj().T)


def random_density(rng, d, rank=None):
    rank = d if rank is None else rank
    z = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    rho = z @ z.conj().T
    return rho / np.trace(rho).real
