"""One-sided privacy audit: reject when the statistic exceeds ``epsilon + B_n``."""

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from rkrd.bounds import BoundResult, bn_bound, bn_from_t, bernstein_t
from rkrd.errors import InvalidInput
from rkrd.estimator import GramProblem

EPS_DP = "eps_dp"
EPS_DELTA_DP = "eps_delta_dp"
RDP = "rdp"
RKRDP = "rkrdp"
CLAIM_KINDS = (EPS_DP, EPS_DELTA_DP, RDP, RKRDP)

REJECT = "reject"
FAIL_TO_REJECT = "fail_to_reject"

# Used for eps_dp / rdp claims when no lambda is supplied; any lambda > 0 gives
# a valid test, only the power changes.
DEFAULT_LAMBDA = 0.1


@dataclass(frozen=True)
class AuditClaim:
    kind: str
    epsilon: float
    alpha: float = 2.0
    delta: Optional[float] = None
    lam: Optional[float] = None
    level_x0: float = 0.05

    def __post_init__(self):
        if self.kind not in CLAIM_KINDS:
            raise InvalidInput(f"unknown claim kind {self.kind!r}")
        if not self.epsilon >= 0:
            raise InvalidInput(f"epsilon must be non-negative, got {self.epsilon}")
        if self.kind == EPS_DELTA_DP:
            if self.delta is None or not self.delta > 0:
                raise InvalidInput("an (epsilon, delta) claim needs delta > 0")
        elif self.delta is not None:
            raise InvalidInput(f"delta is only meaningful for {EPS_DELTA_DP} claims")
        if self.kind == RKRDP and self.lam is None:
            raise InvalidInput("an RKRDP claim needs lambda")
        if self.lam is not None and not self.lam > 0:
            raise InvalidInput(f"lambda must be positive, got {self.lam}")
        if not self.alpha > 1:
            raise InvalidInput(f"alpha must exceed 1, got {self.alpha}")
        if not 0 < self.level_x0 < 1:
            raise InvalidInput(f"level must lie in (0, 1), got {self.level_x0}")

    def as_dict(self):
        return {
            "kind": self.kind,
            "epsilon": self.epsilon,
            "delta": self.delta,
            "alpha": self.alpha,
            "lambda": self.lam,
            "level_x0": self.level_x0,
        }


@dataclass(frozen=True)
class AuditReport:
    claim: AuditClaim
    statistic: float
    threshold: float
    bound: BoundResult
    decision: str
    lambda_used: float
    bandwidth: object
    n_p: int
    n_q: int
    notes: tuple = field(default_factory=tuple)


def decide(statistic, threshold):
    return REJECT if statistic > threshold else FAIL_TO_REJECT


def resolve_lambda(claim):
    """Regularization implied by a claim.

    ``(eps, delta)``-DP implies RKRDP at ``lambda = delta * exp(-eps)``; RDP and
    pure DP imply RKRDP at every lambda, so the claim's own value (or a default)
    is used.
    """
    if claim.kind == EPS_DELTA_DP:
        return claim.delta * math.exp(-claim.epsilon)
    if claim.lam is not None:
        return float(claim.lam)
    return DEFAULT_LAMBDA


def run_audit(claim, spec, xs, ys, problem=None):
    """Test the claim on samples ``xs`` (from ``f(D)``) and ``ys`` (from ``f(D')``)."""
    problem = problem or GramProblem(spec, xs, ys)
    lam = resolve_lambda(claim)
    notes = [
        "threshold uses plug-in spectral statistics in place of population ones",
    ]
    if claim.kind in (EPS_DP, RDP) and claim.lam is None:
        notes.append(f"no lambda given; default lambda = {DEFAULT_LAMBDA} used")
    if claim.kind == EPS_DP:
        notes.append(
            f"pure DP audited at alpha = {claim.alpha:g}; alpha affects power, not level"
        )
    statistic = problem.value(claim.alpha, lam)
    stats = problem.spectral_stats(claim.alpha)
    if claim.alpha >= 2:
        bound = bn_bound(problem.n_p, claim.level_x0, claim.alpha, lam, stats)
    else:
        ell, t = bernstein_t(problem.n_p, claim.level_x0, stats)
        bound = BoundResult(
            t=t,
            b_n=bn_from_t(t, claim.alpha, lam, stats),
            ell=ell,
            x0=claim.level_x0,
            valid=False,
            validity_reason=f"alpha = {claim.alpha:g} < 2: bound carries no guarantee",
        )
    if not bound.valid:
        notes.append(f"bound not guaranteed: {bound.validity_reason}")
    threshold = claim.epsilon + bound.b_n
    return AuditReport(
        claim=claim,
        statistic=statistic,
        threshold=threshold,
        bound=bound,
        decision=decide(statistic, threshold),
        lambda_used=lam,
        bandwidth=problem.bandwidth,
        n_p=problem.n_p,
        n_q=problem.n_q,
        notes=tuple(notes),
    )


def report_to_dict(report, seed=None, version=None):
    """Serialize to the report JSON schema."""
    claim = report.claim.as_dict()
    claim["lambda"] = report.lambda_used
    b = report.bound
    return {
        "claim": claim,
        "statistic": _json_float(report.statistic),
        "threshold": _json_float(report.threshold),
        "b_n": _json_float(b.b_n),
        "t": b.t,
        "ell": b.ell,
        "valid": b.valid,
        "validity_reason": b.validity_reason,
        "bandwidth": report.bandwidth,
        "n_p": report.n_p,
        "n_q": report.n_q,
        "decision": report.decision,
        "seed": seed,
        "version": version,
    }


def verify_report(data):
    """Recompute the decision of a serialized report from statistic and threshold."""
    return decide(float(data["statistic"]), float(data["threshold"]))


def _json_float(x):
    x = float(x)
    if np.isfinite(x):
        return x
    return "inf" if x > 0 else "-inf"


__all__ = [
    "AuditClaim",
    "AuditReport",
    "CLAIM_KINDS",
    "DEFAULT_LAMBDA",
    "FAIL_TO_REJECT",
    "REJECT",
    "decide",
    "report_to_dict",
    "resolve_lambda",
    "run_audit",
    "verify_report",
]
