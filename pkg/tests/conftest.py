import numpy as np
import pytest


def random_psd(rng, dim, floor=0.0, trace_one=True):
    """Wishart-style PSD matrix, optionally trace-normalized, plus ``floor * I``."""
    g = rng.standard_normal((dim, dim))
    m = g @ g.T
    if trace_one:
        m /= np.trace(m)
    return m + floor * np.eye(dim)


def random_orthogonal(rng, dim):
    q, r = np.linalg.qr(rng.standard_normal((dim, dim)))
    return q * np.sign(np.diag(r))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
