"""Regularized kernel Renyi divergence estimation and privacy auditing."""

__version__ = "0.1.0"

from rkrd.audit import AuditClaim, AuditReport, resolve_lambda, run_audit
from rkrd.bounds import BoundResult, bernstein_t, bn_bound
from rkrd.errors import (
    CalibrationFailure,
    DegenerateSpectrum,
    FormatError,
    InvalidInput,
    NotPSD,
    NumericalFailure,
    RkrdError,
)
from rkrd.estimator import (
    GramProblem,
    RkrdEstimate,
    SpectralStats,
    estimate_block,
    estimate_grid,
    estimate_symmetric,
    spectral_stats,
)
from rkrd.kernels import KernelSpec, SampleSet, gram, median_bandwidth
from rkrd.mechanisms import (
    GaussianMechanism,
    balle_condition,
    calibrate_sigma,
    gaussian_renyi,
)
from rkrd.qrd import KrausChannel, apply_channel, qrd, qrd_reg, random_channel

__all__ = [
    "apply_channel",
    "AuditClaim",
    "AuditReport",
    "balle_condition",
    "bernstein_t",
    "bn_bound",
    "BoundResult",
    "calibrate_sigma",
    "CalibrationFailure",
    "DegenerateSpectrum",
    "estimate_block",
    "estimate_grid",
    "estimate_symmetric",
    "FormatError",
    "gaussian_renyi",
    "GaussianMechanism",
    "gram",
    "GramProblem",
    "InvalidInput",
    "KernelSpec",
    "KrausChannel",
    "median_bandwidth",
    "NotPSD",
    "NumericalFailure",
    "qrd",
    "qrd_reg",
    "random_channel",
    "resolve_lambda",
    "RkrdError",
    "RkrdEstimate",
    "run_audit",
    "SampleSet",
    "spectral_stats",
    "SpectralStats",
]
