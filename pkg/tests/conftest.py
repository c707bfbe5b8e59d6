import numpy as np
import pytest

from paircorr import empirical, sunrise
from paircorr.hilbert import embedding_constants


@pytest.fixture(scope="session")
def decomposition():
    return sunrise.build_decomposition(sunrise.DEFAULT_DEPTH)


@pytest.fixture(scope="session")
def constants():
    return embedding_constants()


def random_dataset(n, seed, T=None):
    rng = np.random.default_rng(seed)
    T = T or 40.0 + 2.5 * n
    g = np.sort(rng.uniform(5.0, T, n))
    return empirical.ZeroDataset(g, T, f"random-{seed}")


@pytest.fixture
def zeros_file(tmp_path):
    p = tmp_path / "zeros.txt"
    p.write_text("# first three ordinates\n14.134725\n21.022040\n25.010858\n")
    return p


# one line per acceptance criterion, echoed at the end of the run
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])
