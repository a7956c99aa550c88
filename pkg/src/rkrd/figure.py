"""Desk-scale reproduction of the Gaussian-mechanism RKRD curves.

Four panels on ``d = 30`` outputs. Panel noise scales are standard deviations,
and each panel carries the Renyi reference ``alpha * D^2 / (2 sigma^2)``.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from rkrd.estimator import GramProblem
from rkrd.kernels import KernelSpec
from rkrd.mechanisms import D, D_PRIME, GaussianMechanism, calibrate_sigma, gaussian_renyi


@dataclass(frozen=True)
class Panel:
    name: str
    sensitivity: float
    sigma: float
    epsilon: Optional[float] = None
    delta: Optional[float] = None

    @property
    def lambda0(self):
        if self.epsilon is None:
            return None
        return self.delta * np.exp(-self.epsilon)


PANELS = (
    Panel("top_left", 0.0, 0.01),
    Panel("top_right", 10.0, 21.0444, 1.0, 0.005),
    Panel("bottom_left", 10.0, 6.0669, 2.0, 0.2),
    Panel("bottom_right", 10.0, 7.1850, 3.0, 0.03),
)
# Reference (epsilon, delta) drawn as dotted lines on the bottom panels.
REFERENCE_CLAIM = (1.0, 0.005)

ALPHAS = (2.0, 6.0, 12.0)
SAMPLE_SIZES = (100, 200, 300, 400, 600, 800)
N_SEEDS = 5
DIM = 30


def lambda_grid(points=25, lo=1e-6, hi=1.0):
    return np.logspace(np.log10(lo), np.log10(hi), points)


def panel_seed(base_seed, panel_index, n, run):
    return [int(base_seed), panel_index, int(n), run]


def panel_curves(panel, panel_index, alphas, lambdas, sizes, seeds, base_seed=0, spec=None):
    """Per-(alpha, lambda, n) RKRD values over ``seeds`` runs.

    Returns an array of shape ``(len(alphas), len(lambdas), len(sizes), seeds)``.
    """
    spec = spec or KernelSpec()
    out = np.empty((len(alphas), len(lambdas), len(sizes), seeds))
    for k, n in enumerate(sizes):
        for run in range(seeds):
            mech = GaussianMechanism.with_sensitivity(
                DIM, panel.sensitivity, panel.sigma, panel_seed(base_seed, panel_index, n, run)
            )
            problem = GramProblem(spec, mech.sample(D, n), mech.sample(D_PRIME, n))
            for i, a in enumerate(alphas):
                for j, lam in enumerate(lambdas):
                    out[i, j, k, run] = problem.value(a, lam)
    return out


def panel_manifest(panel, alphas):
    entry = {
        "name": panel.name,
        "dim": DIM,
        "sensitivity": panel.sensitivity,
        "sigma": panel.sigma,
        "epsilon": panel.epsilon,
        "delta": panel.delta,
        "lambda0": panel.lambda0,
        "rd": {f"{a:g}": gaussian_renyi(a, panel.sensitivity, panel.sigma) for a in alphas},
    }
    if panel.epsilon is not None:
        entry["calibrated_sigma"] = calibrate_sigma(panel.epsilon, panel.delta, panel.sensitivity)
        if panel.name.startswith("bottom"):
            eps, delta = REFERENCE_CLAIM
            entry["reference_claim"] = {
                "epsilon": eps,
                "delta": delta,
                "lambda0": delta * np.exp(-eps),
            }
    return entry
