"""Finite-sample deviation bound for the empirical divergence.

With ``g = ||S_p - S_p^2||`` and ``r = Tr(S_p - S_p^2)``:

    ell = log(14 r / (g x0))
    t   = (ell/3 + sqrt((ell/3)^2 + 2 n ell g)) / n
    B_n = (||S_q|| + (1 + 1/alpha) lam)^(alpha-1) (2 alpha lam^(1-alpha) + 4 (alpha-1))
          / ((alpha-1) tr[S_p^alpha]) * t

Population quantities are replaced by the plug-in ``SpectralStats``.
"""

from dataclasses import dataclass

import numpy as np

from rkrd.errors import DegenerateSpectrum, InvalidInput


@dataclass(frozen=True)
class BoundResult:
    t: float
    b_n: float
    ell: float
    x0: float
    valid: bool
    validity_reason: str
    plug_in: bool = True


def _check_level(x0):
    x0 = float(x0)
    if not 0 < x0 < 1:
        raise InvalidInput(f"confidence level x0 must lie in (0, 1), got {x0}")
    return x0


def bernstein_t(n, x0, stats):
    """Return ``(ell, t)``, the log factor and operator-norm deviation radius."""
    if int(n) != n or n < 1:
        raise InvalidInput(f"sample count must be a positive integer, got {n}")
    x0 = _check_level(x0)
    gap = stats.norm_gap_p
    if not gap > 0:
        raise DegenerateSpectrum(
            "||S_p - S_p^2|| = 0 (rank-1 empirical covariance); effective rank undefined"
        )
    ell = float(np.log(14.0 * stats.trace_gap_p / (gap * x0)))
    t = (ell / 3 + np.sqrt((ell / 3) ** 2 + 2 * n * ell * gap)) / n
    return ell, float(t)


def bernstein_floor(n, stats):
    """Smallest ``t`` for which the operator Bernstein tail bound applies.

    With ``U = 1/n`` and ``sigma^2 = ||S_p - S_p^2|| / n``.
    """
    u = 1.0 / n
    var = stats.norm_gap_p / n
    return (u + np.sqrt(u * u + 36 * var)) / 6


def bn_from_t(t, alpha, lam, stats):
    """Divergence deviation bound for a given operator-norm radius ``t``."""
    alpha = float(alpha)
    lam = float(lam)
    lead = (stats.top_eig_q + (1 + 1 / alpha) * lam) ** (alpha - 1)
    with np.errstate(over="ignore"):
        body = 2 * alpha * lam ** (1 - alpha) + 4 * (alpha - 1)
        return float(lead * body / ((alpha - 1) * stats.trace_alpha_p) * t)


def bn_bound(n, x0, alpha, lam, stats):
    """Evaluate the deviation bound and check the conditions it relies on.

    ``valid`` is False when ``t > lam / alpha`` or when ``t`` lies below the
    Bernstein applicability floor; the number is still reported.
    """
    alpha = float(alpha)
    lam = float(lam)
    if not alpha >= 2:
        raise InvalidInput(f"the deviation bound needs alpha >= 2, got {alpha}")
    if not lam > 0:
        raise InvalidInput("the deviation bound is vacuous for lambda = 0")
    ell, t = bernstein_t(n, x0, stats)
    b_n = bn_from_t(t, alpha, lam, stats)
    reasons = []
    if t > lam / alpha:
        reasons.append(f"t = {t:.4g} exceeds lambda/alpha = {lam / alpha:.4g}")
    floor = bernstein_floor(n, stats)
    if t < floor:
        reasons.append(f"t = {t:.4g} below the Bernstein floor {floor:.4g}")
    if not np.isfinite(b_n):
        reasons.append("bound overflows")
    return BoundResult(
        t=t,
        b_n=b_n,
        ell=ell,
        x0=float(x0),
        valid=not reasons,
        validity_reason="; ".join(reasons) if reasons else "ok",
    )
