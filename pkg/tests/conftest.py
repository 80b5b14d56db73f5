from pathlib import Path

import numpy as np
import pytest

from cfrefine import available_backends, get_kernels, load_abalone

ABALONE_PATH = Path(__file__).resolve().parent.parent / "data" / "abalone.data"


def pytest_generate_tests(metafunc):
    # anything asking for backend_name runs once per installed backend
    if "backend_name" in metafunc.fixturenames:
        metafunc.parametrize("backend_name", available_backends())


@pytest.fixture
def kernels(backend_name):
    return get_kernels(backend_name)


@pytest.fixture(scope="session")
def abalone():
    return load_abalone(ABALONE_PATH)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_labeled_dataset(rng, n_rows=None, dim=None, n_classes=None):
    """Small random dataset with class structure, for metric properties."""
    n_rows = n_rows or int(rng.integers(20, 120))
    dim = dim or int(rng.integers(1, 5))
    n_classes = n_classes or int(rng.integers(2, 6))
    centers = rng.uniform(-4.0, 4.0, size=(n_classes, dim))
    labels = rng.integers(0, n_classes, size=n_rows)
    points = centers[labels] + rng.normal(0.0, 0.6, size=(n_rows, dim))
    return points, labels
