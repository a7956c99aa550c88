"""Gaussian mechanism with exact (epsilon, delta) calibration.

The calibration uses the exact characterization of the Gaussian mechanism:
``(eps, delta)``-DP holds iff

    Phi(D/(2s) - eps*s/D) - exp(eps) * Phi(-D/(2s) - eps*s/D) <= delta

for noise standard deviation ``s`` and L2 sensitivity ``D``.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfc

from rkrd.errors import CalibrationFailure, InvalidInput
from rkrd.kernels import SampleSet

D = "D"
D_PRIME = "D'"
_STREAM = {D: 0, D_PRIME: 1}


def gaussian_cdf(x):
    """Standard normal CDF through ``erfc``; accurate in both tails."""
    return 0.5 * erfc(-np.asarray(x, dtype=float) / math.sqrt(2.0))


def balle_condition(sigma, delta_sens, epsilon):
    """Left-hand side of the exact Gaussian-mechanism privacy condition."""
    if min(sigma, delta_sens, epsilon) <= 0:
        raise InvalidInput("sigma, sensitivity and epsilon must be positive")
    a = delta_sens / (2 * sigma)
    b = epsilon * sigma / delta_sens
    first = gaussian_cdf(a - b)
    second = gaussian_cdf(-a - b)
    if second == 0:
        return float(first)
    return float(first - math.exp(epsilon) * second)


def calibrate_sigma(epsilon, delta, delta_sens, rtol=1e-10):
    """Smallest noise scale satisfying ``(epsilon, delta)``-DP, by bisection.

    The condition is decreasing in sigma; the search bracket is
    ``[1e-6 * D, 1e3 * D]``. The returned value satisfies the condition.
    """
    if epsilon <= 0 or delta_sens <= 0 or not 0 < delta < 1:
        raise InvalidInput("need epsilon > 0, sensitivity > 0 and 0 < delta < 1")
    lo = 1e-6 * delta_sens
    hi = 1e3 * delta_sens
    if balle_condition(hi, delta_sens, epsilon) > delta:
        raise CalibrationFailure(f"no sigma <= {hi:g} achieves delta = {delta:g}")
    if balle_condition(lo, delta_sens, epsilon) <= delta:
        raise CalibrationFailure(f"delta = {delta:g} already holds at sigma = {lo:g}")
    while (hi - lo) > rtol * hi:
        mid = 0.5 * (lo + hi)
        if balle_condition(mid, delta_sens, epsilon) <= delta:
            hi = mid
        else:
            lo = mid
    return hi


def classic_sigma(epsilon, delta, delta_sens):
    """Textbook calibration ``D * sqrt(2 log(1.25/delta)) / epsilon``."""
    return delta_sens * math.sqrt(2 * math.log(1.25 / delta)) / epsilon


def gaussian_renyi(alpha, delta_sens, sigma):
    """Renyi divergence of order ``alpha`` between two isotropic Gaussians."""
    if alpha <= 0 or sigma <= 0 or delta_sens < 0:
        raise InvalidInput("need alpha > 0, sigma > 0 and sensitivity >= 0")
    return alpha * delta_sens**2 / (2 * sigma**2)


@dataclass(frozen=True, eq=False)
class GaussianMechanism:
    """``f(D) + N(0, sigma^2 I)`` on a pair of adjacent inputs."""

    sigma: float
    center_d: np.ndarray
    center_d_prime: np.ndarray
    seed: object = 0

    def __post_init__(self):
        c = np.array(self.center_d, dtype=float).ravel()
        c2 = np.array(self.center_d_prime, dtype=float).ravel()
        if c.shape != c2.shape or c.size < 1:
            raise InvalidInput("centers must be non-empty vectors of equal length")
        if not self.sigma > 0:
            raise InvalidInput(f"sigma must be positive, got {self.sigma}")
        object.__setattr__(self, "center_d", c)
        object.__setattr__(self, "center_d_prime", c2)

    @classmethod
    def with_sensitivity(cls, dim, delta_sens, sigma, seed=0):
        """Centers at the origin and at ``delta_sens * e_1``."""
        c2 = np.zeros(dim)
        c2[0] = delta_sens
        return cls(sigma, np.zeros(dim), c2, seed)

    @property
    def dim(self):
        return self.center_d.size

    @property
    def sensitivity(self):
        return float(np.linalg.norm(self.center_d - self.center_d_prime))

    def sample(self, which, n):
        """``n`` draws on ``D`` or ``D'``; deterministic per ``(seed, which, n)``."""
        if which not in _STREAM:
            raise InvalidInput(f"which must be {D!r} or {D_PRIME!r}, got {which!r}")
        if n < 1:
            raise InvalidInput("need at least one sample")
        center = self.center_d if which == D else self.center_d_prime
        entropy = [int(v) for v in np.ravel(self.seed)] + [_STREAM[which]]
        rng = np.random.default_rng(entropy)
        return SampleSet(center + self.sigma * rng.standard_normal((n, self.dim)))
