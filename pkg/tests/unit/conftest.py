import logging

import numpy as np
import pytest
from biunimodular.fourier import bjorck_sequence
from biunimodular.linalg import fourier_matrix

logging.basicConfig()
logging.getLogger("biunimodular").setLevel(logging.DEBUG)

OMEGA3 = np.exp(2j * np.pi / 3)


def max_abs(a, b):
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def l1_value(matrix, v):
    return float(np.sum(np.abs(np.asarray(matrix) @ np.asarray(v))))


@pytest.fixture
def f2():
    return fourier_matrix(2)


@pytest.fixture
def f3():
    return fourier_matrix(3)


@pytest.fixture
def f7():
    return fourier_matrix(7)


@pytest.fixture
def bjorck7():
    return np.asarray(bjorck_sequence(7).vector.entries)


@pytest.fixture
def workers_unset(monkeypatch: pytest.MonkeyPatch):
    monkeypatch.delenv("BIUNI_WORKERS", raising=False)
