"""Empirical regularized kernel Renyi divergence from two sample sets.

The canonical route works with one symmetric ``n_p x n_p`` matrix

    G = (1/n_p) [ f(lam) K_xx + K_xy U diag(dd_i / n_q) U^T K_yx ],
    f(t) = t^((1-alpha)/alpha),  dd_i = (f(mu_i + lam) - f(lam)) / mu_i,

where ``(1/n_q) K_yy = U diag(mu) U^T``. Its spectrum is the nonzero spectrum
of the sandwiched operator built from the empirical covariance operators, so
the statistic is ``log tr(G^alpha) / (alpha - 1)``.

The ``2n x 2n`` block construction on the coefficient space of
``span(phi(x_i), phi(y_j))`` is kept as an independent cross-check.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product

import numpy as np
import scipy.linalg

from rkrd.errors import InvalidInput, NumericalFailure
from rkrd.kernels import as_samples, gram
from rkrd.qrd import KERNEL_MASS_TOL
from rkrd.spectral import (
    clamp_spectrum,
    clamp_threshold,
    general_eigvals,
    sym_eig,
    sym_matrix,
    trace_power,
)

SYMMETRIC = "symmetric"
BLOCK = "block"


@dataclass(frozen=True)
class RkrdEstimate:
    value: float
    alpha: float
    lam: float
    n_p: int
    n_q: int
    bandwidth: object
    method: str = SYMMETRIC
    notes: tuple = field(default_factory=tuple)

    def as_dict(self):
        return {
            "alpha": self.alpha,
            "lambda": self.lam,
            "n_p": self.n_p,
            "n_q": self.n_q,
            "value": self.value,
            "bandwidth": self.bandwidth,
            "method": self.method,
            "notes": list(self.notes),
        }


@dataclass(frozen=True)
class SpectralStats:
    """Plug-in spectral quantities of the empirical covariance operators."""

    top_eig_q: float
    trace_gap_p: float
    norm_gap_p: float
    trace_alpha_p: float


def _check_alpha_lam(alpha, lam):
    alpha = float(alpha)
    lam = float(lam)
    if not (np.isfinite(alpha) and alpha > 1):
        raise InvalidInput(f"alpha must be a finite number > 1, got {alpha}")
    if not (np.isfinite(lam) and lam >= 0):
        raise InvalidInput(f"lambda must be a finite number >= 0, got {lam}")
    return alpha, lam


def divided_difference(mu, lam, p):
    """``((mu + lam)^p - lam^p) / mu`` for ``mu >= 0``, ``lam > 0``.

    Evaluated as ``lam^p * expm1(p * log1p(mu / lam)) / mu`` so tiny ``mu``
    does not cancel; at ``mu = 0`` it is the derivative ``p * lam^(p-1)``.
    """
    mu = np.asarray(mu, dtype=float)
    out = np.empty_like(mu)
    pos = mu > 0
    out[pos] = lam**p * np.expm1(p * np.log1p(mu[pos] / lam)) / mu[pos]
    out[~pos] = p * lam ** (p - 1)
    return out


class GramProblem:
    """Gram blocks and the spectrum of ``(1/n_q) K_yy`` for one sample pair.

    Building this once lets a grid of ``(alpha, lam)`` values share the
    ``O(n^3)`` work.
    """

    def __init__(self, spec, xs, ys):
        xs = as_samples(xs)
        ys = as_samples(ys)
        if xs.d != ys.d:
            raise InvalidInput(f"dimension mismatch: {xs.d} vs {ys.d}")
        self.spec = spec.resolve(xs, ys)
        self.xs = xs
        self.ys = ys
        self.n_p = xs.n
        self.n_q = ys.n
        self.k_xx = gram(self.spec, xs, xs)
        self.k_xy = gram(self.spec, xs, ys)
        self.k_yy = gram(self.spec, ys, ys)
        spec_q = sym_eig(self.k_yy / self.n_q)
        self.mu_q = clamp_spectrum(spec_q.eigenvalues)
        self.u_q = spec_q.eigenvectors
        self.k_xy_u = self.k_xy @ self.u_q

    @property
    def bandwidth(self):
        return self.spec.bandwidth_value()

    def g_matrix(self, alpha, lam):
        """The symmetric matrix ``G``; None if the divergence is infinite."""
        alpha, lam = _check_alpha_lam(alpha, lam)
        p = (1 - alpha) / alpha
        mu = self.mu_q
        if lam > 0:
            weights = divided_difference(mu, lam, p) / self.n_q
            a = self.k_xy_u
            g = lam**p * self.k_xx + (a * weights) @ a.T
            return g / self.n_p
        # lam = 0: only the span of the y-features is reachable.
        eps = clamp_threshold(mu)
        keep = mu > eps
        a = self.k_xy_u[:, keep]
        inv = 1.0 / (self.n_q * mu[keep])
        residual = (np.trace(self.k_xx) - np.sum(a * a * inv)) / self.n_p
        if residual > KERNEL_MASS_TOL + self.n_q * eps:
            return None
        g = (a * (mu[keep] ** p * inv)) @ a.T
        return g / self.n_p

    def value(self, alpha, lam):
        g = self.g_matrix(alpha, lam)
        if g is None:
            return np.inf
        q = trace_power(sym_matrix(g), alpha)
        if q <= 0:
            return np.inf
        return float(np.log(q) / (alpha - 1))

    def estimate(self, alpha, lam):
        alpha, lam = _check_alpha_lam(alpha, lam)
        notes = ()
        if lam == 0:
            notes = ("lambda = 0: unregularized estimate, no finite-sample guarantee",)
        return RkrdEstimate(
            value=self.value(alpha, lam),
            alpha=alpha,
            lam=lam,
            n_p=self.n_p,
            n_q=self.n_q,
            bandwidth=self.bandwidth,
            method=SYMMETRIC,
            notes=notes,
        )

    def spectral_stats(self, alpha):
        mu_p = clamp_spectrum(sym_eig(self.k_xx / self.n_p).eigenvalues)
        return SpectralStats(
            top_eig_q=float(np.max(self.mu_q)),
            trace_gap_p=float(max(0.0, 1.0 - np.sum(mu_p**2))),
            norm_gap_p=float(np.max(mu_p - mu_p**2)),
            trace_alpha_p=float(np.sum(mu_p[mu_p > 0] ** alpha)),
        )


def estimate_symmetric(spec, xs, ys, alpha, lam):
    """Estimate ``D_{alpha,lam}(Sigma_p_hat || Sigma_q_hat)`` via the ``n_p x n_p`` route."""
    return GramProblem(spec, xs, ys).estimate(alpha, lam)


def estimate_grid(spec, xs, ys, alphas, lambdas, workers=None):
    """Estimates over the product grid, sharing one Gram problem.

    Results are ordered alpha-major, lambda-minor.
    """
    problem = GramProblem(spec, xs, ys)
    points = list(product(alphas, lambdas))
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda al: problem.estimate(*al), points))
    return [problem.estimate(a, l) for a, l in points]


def _real_part(m, what):
    if np.iscomplexobj(m):
        scale = 1 + np.max(np.abs(m.real))
        if np.max(np.abs(m.imag)) > 1e-7 * scale:
            raise NumericalFailure(f"{what} has a non-negligible imaginary part")
        m = m.real
    return np.asarray(m, dtype=float)


def _block_power(c, s):
    """``c^s`` for the block-triangular reference matrix ``c``.

    Positive-definite spectrum: Schur-based fractional power. Otherwise the
    eigendecomposition with ``0^s := 0`` on numerically null eigenvalues.
    """
    w = general_eigvals(c)
    if np.min(w) > clamp_threshold(w):
        return _real_part(scipy.linalg.fractional_matrix_power(c, s), "matrix power")
    w, v = scipy.linalg.eig(c)
    w = _real_part(w, "reference spectrum")
    v = _real_part(v, "reference eigenvectors")
    null = w <= clamp_threshold(w)
    power = np.zeros_like(w)
    power[~null] = w[~null] ** s
    try:
        return np.linalg.solve(v.T, (v * power).T).T
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"reference eigenvector matrix is singular: {exc}") from exc


def estimate_block(spec, xs, ys, alpha, lam):
    """Estimate via the non-symmetric ``2n x 2n`` block matrices.

    ``K_p = [[K_xx, K_xy], [0, 0]]`` and ``K_q = [[0, 0], [K_yx, K_yy]]``
    represent the empirical covariance operators on coefficient vectors.
    Requires equal sample counts.
    """
    xs = as_samples(xs)
    ys = as_samples(ys)
    alpha, lam = _check_alpha_lam(alpha, lam)
    if xs.n != ys.n:
        raise InvalidInput(f"block route needs equal sample counts, got {xs.n} and {ys.n}")
    if xs.d != ys.d:
        raise InvalidInput(f"dimension mismatch: {xs.d} vs {ys.d}")
    spec = spec.resolve(xs, ys)
    n = xs.n
    k_xy = gram(spec, xs, ys)
    zero = np.zeros((n, n))
    k_p = np.block([[gram(spec, xs, xs), k_xy], [zero, zero]])
    k_q = np.block([[zero, zero], [k_xy.T, gram(spec, ys, ys)]])
    s = (1 - alpha) / (2 * alpha)
    c_s = _block_power(k_q / n + lam * np.eye(2 * n), s)
    m = c_s @ (k_p / n) @ c_s
    w = general_eigvals(m)
    w = np.where(w < 0, 0.0, w)
    q = float(np.sum(w**alpha))
    value = float(np.log(q) / (alpha - 1)) if q > 0 else np.inf
    return RkrdEstimate(
        value=value,
        alpha=alpha,
        lam=lam,
        n_p=n,
        n_q=n,
        bandwidth=spec.bandwidth_value(),
        method=BLOCK,
    )


def spectral_stats(spec, xs, ys, alpha):
    """Plug-in spectral statistics feeding the deviation bound."""
    return GramProblem(spec, xs, ys).spectral_stats(alpha)


__all__ = [
    "BLOCK",
    "SYMMETRIC",
    "GramProblem",
    "RkrdEstimate",
    "SpectralStats",
    "divided_difference",
    "estimate_block",
    "estimate_grid",
    "estimate_symmetric",
    "spectral_stats",
]
