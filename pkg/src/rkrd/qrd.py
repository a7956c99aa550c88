"""Sandwiched quantum Renyi divergence on finite PSD matrices.

``qrd(a, b, alpha)`` evaluates

    1/(alpha-1) * log( tr[(B^s A B^s)^alpha] / tr[A] ),   s = (1-alpha)/(2 alpha)

and ``qrd_reg`` the ridge-regularized variant with ``B + lam * I`` in place
of ``B``. Kraus channels are provided for data-processing checks.
"""

from dataclasses import dataclass

import numpy as np

from rkrd.errors import InvalidInput
from rkrd.spectral import (
    clamp_spectrum,
    clamp_threshold,
    sym_eig,
    sym_matrix,
    trace_power,
)

KERNEL_MASS_TOL = 1e-10


def _check_alpha(alpha):
    alpha = float(alpha)
    if not np.isfinite(alpha) or alpha <= 0:
        raise InvalidInput(f"alpha must be a positive finite number, got {alpha}")
    if alpha == 1.0:
        raise InvalidInput("alpha = 1 (the relative-entropy limit) is not supported")
    return alpha


def _check_pair(a, b):
    a = sym_matrix(a)
    b = sym_matrix(b)
    if a.shape != b.shape:
        raise InvalidInput(f"dimension mismatch: {a.shape} vs {b.shape}")
    clamp_spectrum(sym_eig(a).eigenvalues)
    tr_a = float(np.trace(a))
    if not tr_a > 0:
        raise InvalidInput("the first argument must have positive trace")
    return a, b, tr_a


def sandwich(a, b, alpha):
    """Return ``B^s A B^s`` with ``s = (1-alpha)/(2 alpha)``, or None if infinite.

    ``B^s`` acts as zero on numerically null directions of ``B``. For
    ``alpha > 1`` (negative ``s``) a null direction carrying A-mass above
    ``1e-10 * tr(A)`` makes the divergence infinite and None is returned.
    """
    spec = sym_eig(b)
    mu = clamp_spectrum(spec.eigenvalues)
    v = spec.eigenvectors
    s = (1 - alpha) / (2 * alpha)
    null = mu <= clamp_threshold(mu)
    if alpha > 1 and np.any(null):
        vn = v[:, null]
        mass = np.einsum("ij,ik,kj->j", vn, a, vn)
        if np.any(mass > KERNEL_MASS_TOL * np.trace(a)):
            return None
    power = np.zeros_like(mu)
    power[~null] = mu[~null] ** s
    b_s = (v * power) @ v.T
    return sym_matrix(b_s @ a @ b_s)


def qrd(a, b, alpha):
    """Sandwiched quantum Renyi divergence ``D_alpha(A || B)`` in nats.

    Returns ``inf`` when ``alpha > 1`` and the kernel of ``B`` is not contained
    in the kernel of ``A`` (numerically), or when the trace vanishes for
    ``alpha < 1``.
    """
    alpha = _check_alpha(alpha)
    a, b, tr_a = _check_pair(a, b)
    m = sandwich(a, b, alpha)
    if m is None:
        return np.inf
    q = trace_power(m, alpha)
    if q <= 0:
        return np.inf
    return float(np.log(q / tr_a) / (alpha - 1))


def qrd_reg(a, b, alpha, lam):
    """Regularized divergence ``D_alpha(A || B + lam I)``."""
    lam = float(lam)
    if not lam >= 0 or not np.isfinite(lam):
        raise InvalidInput(f"lambda must be a finite non-negative number, got {lam}")
    b = sym_matrix(b)
    return qrd(a, b + lam * np.eye(b.shape[0]), alpha)


@dataclass(frozen=True)
class KrausChannel:
    """Trace-preserving channel ``M -> sum_k K_k M K_k^T``."""

    operators: tuple

    def __post_init__(self):
        ops = tuple(np.array(k, dtype=float) for k in self.operators)
        if not ops:
            raise InvalidInput("a channel needs at least one Kraus operator")
        shapes = {k.shape for k in ops}
        if len(shapes) != 1 or ops[0].ndim != 2:
            raise InvalidInput(f"Kraus operators must share one 2-d shape, got {shapes}")
        total = sum(k.T @ k for k in ops)
        if np.max(np.abs(total - np.eye(ops[0].shape[1]))) > 1e-10:
            raise InvalidInput("Kraus operators are not trace preserving")
        object.__setattr__(self, "operators", ops)

    @property
    def dim_in(self):
        return self.operators[0].shape[1]

    @property
    def dim_out(self):
        return self.operators[0].shape[0]


def apply_channel(channel, m):
    m = sym_matrix(m)
    if m.shape[0] != channel.dim_in:
        raise InvalidInput(
            f"channel expects dimension {channel.dim_in}, got {m.shape[0]}"
        )
    return sym_matrix(sum(k @ m @ k.T for k in channel.operators))


def random_channel(dim_in, dim_out, n_kraus, seed):
    """Seeded random channel obtained by slicing a random isometry.

    A ``(dim_out * n_kraus) x dim_in`` Gaussian matrix is orthonormalized
    (QR) and cut into ``n_kraus`` blocks of ``dim_out`` rows.
    """
    if min(dim_in, dim_out, n_kraus) < 1:
        raise InvalidInput("dimensions and Kraus count must be at least 1")
    if dim_out * n_kraus < dim_in:
        raise InvalidInput(
            f"no isometry from dimension {dim_in} into {dim_out * n_kraus}"
        )
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim_out * n_kraus, dim_in))
    q, r = np.linalg.qr(g)
    q = q * np.sign(np.diag(r))
    return KrausChannel(tuple(q[k * dim_out:(k + 1) * dim_out] for k in range(n_kraus)))
