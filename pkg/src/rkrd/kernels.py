"""Sample sets, RBF kernels and Gram blocks.

All kernels satisfy ``k(x, x) = 1`` so the empirical covariance operator
``(1/n) K_xx`` has unit trace.
"""

from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.spatial.distance import cdist, pdist

from rkrd.errors import InvalidInput

RBF = "rbf"
PRODUCT_RBF = "product-rbf"
FAMILIES = (RBF, PRODUCT_RBF)


@dataclass(frozen=True, eq=False)
class SampleSet:
    """``n x d`` matrix of mechanism outputs, one draw per row."""

    rows: np.ndarray

    def __post_init__(self):
        rows = np.array(self.rows, dtype=float)
        if rows.ndim == 1:
            rows = rows.reshape(-1, 1)
        if rows.ndim != 2 or rows.shape[0] < 1 or rows.shape[1] < 1:
            raise InvalidInput(f"samples must be a non-empty n x d matrix, got {rows.shape}")
        if not np.all(np.isfinite(rows)):
            raise InvalidInput("samples contain non-finite values")
        rows.setflags(write=False)
        object.__setattr__(self, "rows", rows)

    @property
    def n(self):
        return self.rows.shape[0]

    @property
    def d(self):
        return self.rows.shape[1]

    def pooled(self, other):
        return SampleSet(np.vstack([self.rows, other.rows]))


def as_samples(x):
    return x if isinstance(x, SampleSet) else SampleSet(x)


@dataclass(frozen=True)
class KernelSpec:
    """Kernel family plus bandwidth policy.

    ``bandwidth`` is ``"median"`` or a positive float ``h``; the RBF kernel is
    ``exp(-|x - y|^2 / h^2)``. The product family multiplies one-dimensional
    RBF kernels, one per coordinate; with the median policy each coordinate
    gets its own median bandwidth.
    """

    family: str = RBF
    bandwidth: Union[str, float] = "median"

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidInput(f"unknown kernel family {self.family!r}")
        if isinstance(self.bandwidth, str):
            if self.bandwidth != "median":
                raise InvalidInput(f"unknown bandwidth policy {self.bandwidth!r}")
        else:
            h = np.asarray(self.bandwidth, dtype=float)
            if not np.all(np.isfinite(h)) or np.any(h <= 0):
                raise InvalidInput(f"fixed bandwidth must be positive, got {self.bandwidth}")

    @property
    def is_resolved(self):
        return not isinstance(self.bandwidth, str)

    def resolve(self, xs, ys=None):
        """Return a spec with a numeric bandwidth, pooling ``xs`` and ``ys``."""
        if self.is_resolved:
            return self
        pooled = as_samples(xs) if ys is None else as_samples(xs).pooled(as_samples(ys))
        if self.family == RBF:
            h = median_bandwidth(pooled)
        else:
            h = tuple(median_bandwidth(SampleSet(pooled.rows[:, [j]])) for j in range(pooled.d))
        return KernelSpec(self.family, h)

    def bandwidth_value(self):
        """Bandwidth as a JSON-friendly float or list of floats."""
        h = self.bandwidth
        if isinstance(h, str):
            return h
        if np.ndim(h) == 0:
            return float(h)
        return [float(v) for v in h]


def median_bandwidth(pooled):
    """Median heuristic: ``sqrt`` of the median pairwise squared distance.

    For an even number of pairs the lower-middle element is taken. Returns 1.0
    when the median distance is zero.
    """
    pooled = as_samples(pooled)
    if pooled.n < 2:
        raise InvalidInput("median bandwidth needs at least two samples")
    d2 = np.sort(pdist(pooled.rows, "sqeuclidean"))
    med = d2[(len(d2) - 1) // 2]
    if med == 0:
        return 1.0
    return float(np.sqrt(med))


def gram(spec, x, y):
    """Kernel block ``[k(x_i, y_j)]``; ``spec`` must have a numeric bandwidth."""
    x = as_samples(x)
    y = as_samples(y)
    if x.d != y.d:
        raise InvalidInput(f"dimension mismatch: {x.d} vs {y.d}")
    if not spec.is_resolved:
        raise InvalidInput("bandwidth must be resolved before building Gram blocks")
    h = np.asarray(spec.bandwidth, dtype=float)
    if spec.family == RBF:
        if h.ndim != 0:
            raise InvalidInput("the rbf family takes a single bandwidth")
        return np.exp(-cdist(x.rows, y.rows, "sqeuclidean") / h**2)
    h = np.broadcast_to(h, (x.d,))
    k = np.ones((x.n, y.n))
    for j in range(x.d):
        k *= np.exp(-cdist(x.rows[:, [j]], y.rows[:, [j]], "sqeuclidean") / h[j] ** 2)
    return k
