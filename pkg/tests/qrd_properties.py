"""Seeded trial generators for the divergence property suite.

Each ``check_*`` runs ``trials`` random instances and returns the largest
violation observed (<= 0 means the property held with room to spare).
"""

import numpy as np

from rkrd.qrd import apply_channel, qrd, qrd_reg, random_channel

ALPHAS = (0.6, 2.0, 2.5, 6.0, 12.0)
LAMBDAS = (0.0, 1e-3, 0.1, 1.0)


def psd(rng, dim, trace=1.0, floor=0.0):
    g = rng.standard_normal((dim, dim))
    m = g @ g.T + floor * np.eye(dim)
    return trace * m / np.trace(m)


def orthogonal(rng, dim):
    q, r = np.linalg.qr(rng.standard_normal((dim, dim)))
    return q * np.sign(np.diag(r))


def _pick(rng, values):
    return values[rng.integers(len(values))]


def _pair(rng, dim):
    # B gets a floor so lambda = 0 stays finite and well conditioned
    return psd(rng, dim), psd(rng, dim, floor=0.2 * dim)


def check_unitary(trials=200, seed=1):
    rng = np.random.default_rng(seed)
    worst = -np.inf
    for _ in range(trials):
        dim = int(rng.integers(2, 5))
        a, b = _pair(rng, dim)
        u = orthogonal(rng, dim)
        alpha, lam = _pick(rng, ALPHAS), _pick(rng, LAMBDAS)
        d0 = qrd_reg(a, b, alpha, lam)
        d1 = qrd_reg(u @ a @ u.T, u @ b @ u.T, alpha, lam)
        worst = max(worst, abs(d0 - d1) - 1e-9)
    return worst


def check_normalization(lambdas=(0.0, 1e-3, 0.1, 1.0, 3.0)):
    worst = -np.inf
    for alpha in ALPHAS:
        for lam in lambdas:
            err = abs(qrd_reg([[1.0]], [[0.5]], alpha, lam) + np.log(0.5 + lam))
            worst = max(worst, err - 1e-12)
    return worst


def check_order(trials=200, seed=2):
    """A >= B gives D >= 0 (lambda = 0); A <= B gives D_lambda <= 0."""
    rng = np.random.default_rng(seed)
    worst = -np.inf
    for _ in range(trials):
        dim = int(rng.integers(2, 5))
        a = psd(rng, dim, floor=0.1)
        root = np.linalg.cholesky(a)
        s = orthogonal(rng, dim)
        shrink = s @ np.diag(rng.uniform(0.1, 0.9, dim)) @ s.T
        below = root @ shrink @ root.T
        alpha, lam = _pick(rng, ALPHAS), _pick(rng, LAMBDAS)
        worst = max(worst, -qrd(a, below, alpha) - 1e-9)
        above = a + psd(rng, dim, trace=rng.uniform(0.1, 1.0))
        worst = max(worst, qrd_reg(a, above, alpha, lam) - 1e-9)
    return worst


def check_lambda_monotone(trials=200, seed=3):
    rng = np.random.default_rng(seed)
    worst = -np.inf
    for _ in range(trials):
        dim = int(rng.integers(2, 5))
        a, b = _pair(rng, dim)
        alpha = _pick(rng, ALPHAS)
        lam2, lam1 = sorted(rng.choice(LAMBDAS, 2, replace=False))
        worst = max(worst, qrd_reg(a, b, alpha, lam1) - qrd_reg(a, b, alpha, lam2) - 1e-9)
    return worst


def check_alpha_monotone(trials=200, seed=4):
    rng = np.random.default_rng(seed)
    worst = -np.inf
    for _ in range(trials):
        dim = int(rng.integers(2, 5))
        a, b = _pair(rng, dim)
        lam = _pick(rng, LAMBDAS)
        a2, a1 = sorted(rng.choice(ALPHAS, 2, replace=False))
        worst = max(worst, qrd_reg(a, b, a2, lam) - qrd_reg(a, b, a1, lam) - 1e-9)
    return worst


def check_tensor_sandwich(trials=200, seed=5):
    rng = np.random.default_rng(seed)
    worst = -np.inf
    for _ in range(trials):
        a, c = psd(rng, 2), psd(rng, 3)
        b, d = psd(rng, 2, floor=0.2), psd(rng, 3, floor=0.2)
        alpha = _pick(rng, ALPHAS)
        lam = float(rng.uniform(1e-3, 3.0))
        mid = qrd_reg(np.kron(a, c), np.kron(b, d), alpha, lam)
        low = qrd_reg(a, b, alpha, np.sqrt(lam)) + qrd_reg(c, d, alpha, np.sqrt(lam))
        high = qrd_reg(a, b, alpha, lam / 3) + qrd_reg(c, d, alpha, lam / 3)
        worst = max(worst, low - mid - 1e-9, mid - high - 1e-9)
    return worst


def check_direct_sum_mean(trials=200, seed=6):
    rng = np.random.default_rng(seed)
    worst = -np.inf
    for _ in range(trials):
        ta, tc = rng.uniform(0.05, 0.5, 2)
        tb, td = rng.uniform(0.05, 0.5, 2)
        a, c = psd(rng, 2, trace=ta), psd(rng, 3, trace=tc)
        b, d = psd(rng, 2, trace=tb, floor=0.2), psd(rng, 3, trace=td, floor=0.2)
        alpha, lam = _pick(rng, ALPHAS), _pick(rng, LAMBDAS)
        z23 = np.zeros((2, 3))
        lhs = qrd_reg(np.block([[a, z23], [z23.T, c]]), np.block([[b, z23], [z23.T, d]]), alpha, lam)

        def g(x):
            return np.exp((alpha - 1) * x)

        mean = (ta * g(qrd_reg(a, b, alpha, lam)) + tc * g(qrd_reg(c, d, alpha, lam))) / (ta + tc)
        rhs = np.log(mean) / (alpha - 1)
        worst = max(worst, abs(lhs - rhs) - 1e-9)
    return worst


def check_dpi(trials=200, seed=7):
    rng = np.random.default_rng(seed)
    worst = -np.inf
    for k in range(trials):
        dim_in = int(rng.integers(2, 5))
        dim_out = int(rng.integers(2, 5))
        n_kraus = int(rng.integers(-(-dim_in // dim_out), 4))
        ch = random_channel(dim_in, dim_out, n_kraus, seed=1000 + k)
        a, b = _pair(rng, dim_in)
        alpha = _pick(rng, ALPHAS)
        before = qrd(a, b, alpha)
        after = qrd(apply_channel(ch, a), apply_channel(ch, b), alpha)
        worst = max(worst, after - before - 1e-9)
    return worst


def check_mixture_convexity(trials=200, seed=8):
    """exp((alpha-1) D) is jointly convex for alpha > 1 on trace-matched pairs."""
    rng = np.random.default_rng(seed)
    worst = -np.inf
    for _ in range(trials):
        dim = int(rng.integers(2, 5))
        a1, b1 = _pair(rng, dim)
        a2, b2 = _pair(rng, dim)
        alpha = _pick(rng, [x for x in ALPHAS if x > 1])
        lam = _pick(rng, LAMBDAS)
        beta = _pick(rng, (0.25, 0.5, 0.75))

        def q(a, b):
            return np.exp((alpha - 1) * qrd_reg(a, b, alpha, lam))

        lhs = q(beta * a1 + (1 - beta) * a2, beta * b1 + (1 - beta) * b2)
        rhs = beta * q(a1, b1) + (1 - beta) * q(a2, b2)
        worst = max(worst, (lhs - rhs) / max(1.0, rhs) - 1e-9)
    return worst


def check_continuity(trials=200, seed=9, size=1e-6):
    rng = np.random.default_rng(seed)
    worst = -np.inf
    for _ in range(trials):
        dim = int(rng.integers(2, 5))
        a, b = _pair(rng, dim)
        alpha, lam = _pick(rng, ALPHAS), _pick(rng, LAMBDAS)
        da = rng.standard_normal((dim, dim))
        db = rng.standard_normal((dim, dim))
        da = size * (da + da.T) / np.linalg.norm(da + da.T, 2)
        db = size * (db + db.T) / np.linalg.norm(db + db.T, 2)
        change = abs(qrd_reg(a + da, b + db, alpha, lam) - qrd_reg(a, b, alpha, lam))
        worst = max(worst, change - 1e-3)
    return worst


ALL_CHECKS = {
    "unitary invariance": check_unitary,
    "normalization": check_normalization,
    "order signs": check_order,
    "monotone in lambda": check_lambda_monotone,
    "monotone in alpha": check_alpha_monotone,
    "tensor additivity sandwich": check_tensor_sandwich,
    "direct-sum mean identity": check_direct_sum_mean,
    "data processing (200 channels)": check_dpi,
    "mixture convexity": check_mixture_convexity,
}
