"""Dense symmetric spectral calculus.

Every finite matrix representation of a covariance-like operator goes through
this module: eigendecomposition, matrix functions via the spectrum, and the
trace of a real power. Matrices are plain ``numpy`` arrays; ``sym_matrix``
validates and symmetrizes them.
"""

from typing import Callable, NamedTuple

import numpy as np
import scipy.linalg

from rkrd.errors import InvalidInput, NotPSD, NumericalFailure

CLAMP_RTOL = 1e-10
IMAG_RTOL = 1e-7


class Spectrum(NamedTuple):
    """Eigenvalues in descending order and the matching orthonormal columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self):
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.T


def sym_matrix(m):
    """Return ``m`` as a float symmetric matrix, ``(m + m.T) / 2``.

    Raises
    ------
    InvalidInput
        If ``m`` is not a non-empty square matrix of finite values.
    """
    a = np.array(m, dtype=float)
    if a.ndim == 0:
        a = a.reshape(1, 1)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise InvalidInput(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidInput("matrix has non-finite entries")
    return (a + a.T) / 2


def sym_eig(m):
    """Eigendecomposition of a symmetric matrix, eigenvalues descending.

    Ties keep the solver's relative order (stable sort), so output is
    deterministic for a given input.
    """
    a = sym_matrix(m)
    try:
        w, v = scipy.linalg.eigh(a)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise NumericalFailure(f"symmetric eigensolver failed: {exc}") from exc
    order = np.argsort(-w, kind="stable")
    return Spectrum(w[order], v[:, order])


def clamp_threshold(eigenvalues):
    """Magnitude below which an eigenvalue counts as numerically zero."""
    top = float(np.max(eigenvalues)) if len(eigenvalues) else 0.0
    return CLAMP_RTOL * max(top, 0.0)


def clamp_spectrum(eigenvalues):
    """Zero out slightly negative eigenvalues; raise on clearly negative ones."""
    eps = clamp_threshold(eigenvalues)
    lowest = float(np.min(eigenvalues))
    if lowest < -eps:
        raise NotPSD(f"eigenvalue {lowest:.3e} below clamping tolerance -{eps:.3e}")
    return np.where(eigenvalues < 0, 0.0, eigenvalues)


def spectral_apply(m, f: Callable[[np.ndarray], np.ndarray], clamp_negatives=False):
    """Return ``V diag(f(mu)) V^T`` for ``m = V diag(mu) V^T``.

    ``f`` receives the whole eigenvalue vector. With ``clamp_negatives`` the
    eigenvalues in ``[-eps, 0)`` are set to zero first, ``eps = 1e-10 * max(mu)``;
    anything more negative raises :class:`NotPSD`.
    """
    spec = sym_eig(m)
    mu = clamp_spectrum(spec.eigenvalues) if clamp_negatives else spec.eigenvalues
    v = spec.eigenvectors
    return sym_matrix((v * np.asarray(f(mu), dtype=float)) @ v.T)


def matrix_power(m, p):
    """Real power of a PSD matrix, with ``0 ** p := 0`` for any ``p``.

    For negative ``p`` this is the Moore-Penrose pseudo-power on the support.
    Eigenvalues below the clamping tolerance count as zero.
    """
    def power(mu):
        out = np.zeros_like(mu)
        keep = mu > clamp_threshold(mu)
        out[keep] = mu[keep] ** p
        return out

    return spectral_apply(m, power, clamp_negatives=True)


def trace_power(m, alpha):
    """``sum_i clamp(mu_i) ** alpha`` over the eigenvalues of a PSD matrix."""
    if not alpha > 0:
        raise InvalidInput(f"alpha must be positive, got {alpha}")
    mu = clamp_spectrum(sym_eig(m).eigenvalues)
    return float(np.sum(mu[mu > 0] ** alpha))


def general_eigvals(m):
    """Eigenvalues of a general real square matrix, asserted real.

    Imaginary parts must satisfy ``|Im| <= 1e-7 * (1 + |Re|)``; they are then
    dropped. Output is sorted descending.
    """
    a = np.array(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise InvalidInput(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidInput("matrix has non-finite entries")
    try:
        w = scipy.linalg.eigvals(a)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise NumericalFailure(f"general eigensolver failed: {exc}") from exc
    bad = np.abs(w.imag) > IMAG_RTOL * (1 + np.abs(w.real))
    if np.any(bad):
        worst = w[bad][np.argmax(np.abs(w[bad].imag))]
        raise NumericalFailure(f"eigenvalue {worst} has a non-negligible imaginary part")
    return np.sort(w.real)[::-1]
