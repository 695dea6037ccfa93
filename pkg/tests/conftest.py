import numpy as np
import pytest

from exprclust import _fallback, kernels

try:
    from exprclust import _kernels
except ImportError:
    _kernels = None

IMPLS = [pytest.param(_fallback, id="python"),
         pytest.param(_kernels, id="cython",
                      marks=pytest.mark.skipif(_kernels is None, reason="extension not built"))]


@pytest.fixture(params=IMPLS)
def impl(request):
    return request.param


@pytest.fixture(params=IMPLS)
def backend(request, monkeypatch):
    """Route every kernel call through one implementation."""
    monkeypatch.setattr(kernels, "_impl", request.param)
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def two_blobs():
    return np.array([(0, 0), (0, 1), (10, 0), (10, 1)], dtype=float)


def merge_split_scenario():
    """Seven tight blobs; the initial partition is {A}, {B,C}, {D,E,F,G}.

    A and BC have nearby centroids (1.58 apart); DEFG is wide along x
    (std 3), and its halves DE and FG are 6 apart.
    """
    offsets = np.array([(0, 0), (0.2, 0), (0, 0.2), (-0.2, 0), (0, -0.2)])
    blobs = {"A": (0, 0), "B": (1.5, 0), "C": (1.5, 1), "D": (10, 0),
             "E": (10, 1), "F": (16, 0), "G": (16, 1)}
    data = np.vstack([np.array(c) + offsets for c in blobs.values()])
    tags = np.repeat(list(blobs), len(offsets))
    init = np.vstack([data[np.isin(tags, g)].mean(axis=0) for g in (["A"], ["B", "C"], ["D", "E", "F", "G"])])
    return data, tags, init


def pytest_terminal_summary(terminalreporter):
    try:
        import test_acceptance
    except ImportError:
        return
    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(test_acceptance.RESULTS, key=lambda s: int(s.split(".")[0].split()[-1])):
            terminalreporter.write_line(line)
