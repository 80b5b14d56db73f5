"""Phase 2: density-based refinement of leaf micro-clusters.

Each micro-cluster gets a single multivariate Gaussian fitted to its raw
member vectors.  Member densities are min-max normalized to [0, 1] within
the cluster (density scales vary wildly from cluster to cluster, the
normalization is what makes one global threshold meaningful), and members
falling strictly below the threshold ``rho`` are split off into a new
cluster.  One pass, no recursion: a refined cluster is never revisited.

All densities are handled in log space.  For tight clusters in 7
dimensions the raw density overflows/underflows a float easily; min-max
normalization is invariant to positive scaling, so shifting by the
cluster's max log-density first gives the exact same normalized values
without leaving the representable range.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .cf_tree import CFVector, MicroCluster
from .errors import NumericalError


@dataclass(frozen=True)
class RefineParams:
    """Phase-2 knobs.

    rho is the global normalized-density split threshold.  n_min is the
    smallest cluster eligible for splitting; None resolves to d + 2 at
    use, the smallest size where the fitted covariance has any chance of
    full rank plus slack.  epsilon_scale controls the ridge added to the
    covariance before factorization.
    """

    rho: float = 0.1
    n_min: int | None = None
    epsilon_scale: float = 1e-6

    def __post_init__(self):
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError(f"rho must be in [0, 1], got {self.rho}")
        if self.n_min is not None and self.n_min < 2:
            raise ValueError(f"n_min must be >= 2, got {self.n_min}")
        if not self.epsilon_scale > 0:
            raise ValueError(
                f"epsilon_scale must be positive, got {self.epsilon_scale}"
            )

    def effective_n_min(self, dim):
        return self.n_min if self.n_min is not None else dim + 2


@dataclass(frozen=True)
class GaussianModel:
    """Fitted Gaussian: mean, regularized covariance, and its Cholesky factor."""

    mu: np.ndarray
    sigma: np.ndarray
    chol: np.ndarray
    log_det: float

    @property
    def dim(self):
        return self.mu.shape[0]


def _point_matrix(dataset):
    pts = dataset.points if hasattr(dataset, "points") else dataset
    pts = np.asarray(pts, dtype=np.float64)
    if pts.ndim != 2:
        raise ValueError(f"expected an (n, d) point matrix, got shape {pts.shape}")
    return pts


def mean_vector(points):
    """Componentwise average of the points."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[0] < 1:
        raise ValueError("mean_vector needs at least one point")
    return pts.mean(axis=0)


def covariance_matrix(points, mu):
    """Maximum-likelihood covariance: (1/n) Σ (x−μ)(x−μ)ᵀ."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[0] < 2:
        raise ValueError("covariance_matrix needs at least two points")
    centered = pts - np.asarray(mu, dtype=np.float64)
    sigma = centered.T @ centered / pts.shape[0]
    # BLAS gemm does not guarantee bitwise-symmetric output; the Cholesky
    # path and the tests both rely on exact symmetry.
    return 0.5 * (sigma + sigma.T)


def fit_gaussian(points, params):
    """Fit a Gaussian to the points, ridging the covariance before factoring.

    The ridge is epsilon_scale times the mean per-dimension variance
    (floored at 1e-12 so duplicate-point clusters still factor).
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[0] < 2:
        raise ValueError("fit_gaussian needs at least two points")
    d = pts.shape[1]
    mu = mean_vector(pts)
    # overflow is detected right below and reported as NumericalError
    with np.errstate(over="ignore", invalid="ignore"):
        sigma = covariance_matrix(pts, mu)
    if not np.isfinite(sigma).all():
        raise NumericalError(
            f"covariance overflowed for a {pts.shape[0]}-point cluster; "
            "feature magnitudes are too large to square"
        )
    eps = params.epsilon_scale * max(np.trace(sigma) / d, 1e-12)
    sigma = sigma + eps * np.eye(d)
    try:
        chol = np.linalg.cholesky(sigma)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(
            f"covariance factorization failed for a {pts.shape[0]}-point "
            f"cluster even after ridging (epsilon={eps:g})"
        ) from exc
    log_det = 2.0 * float(np.log(np.diag(chol)).sum())
    return GaussianModel(mu, sigma, chol, log_det)


def log_density(x, model):
    """Log of the multivariate normal density at one point.

    −(d/2)·log(2π) − (1/2)·log|Σ| − (1/2)·(x−μ)ᵀΣ⁻¹(x−μ), with the
    quadratic form evaluated through the triangular factor.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (model.dim,):
        raise ValueError(f"point has shape {x.shape}, expected ({model.dim},)")
    return float(log_densities(x[np.newaxis, :], model)[0])


def log_densities(points, model):
    """Log-density of every row of a point matrix under the model."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != model.dim:
        raise ValueError(
            f"expected an (n, {model.dim}) matrix, got shape {pts.shape}"
        )
    y = solve_triangular(model.chol, (pts - model.mu).T, lower=True)
    quad = np.einsum("ij,ij->j", y, y)
    return -0.5 * (model.dim * np.log(2.0 * np.pi) + model.log_det + quad)


def density(x, model):
    return float(np.exp(log_density(x, model)))


def normalize_densities(log_f):
    """Min-max normalize densities given in log space.

    Returns (values in [0, 1], degenerate flag).  Computed as
    r = exp(log_f − max(log_f)); (r − min(r)) / (1 − min(r)), which equals
    min-max over the raw densities exactly while never underflowing.  When
    every ratio rounds to 1.0 (equal inputs, or inputs within ~1e-16 of
    the max) there is no representable range to normalize over; every
    value maps to 1.0 and the flag is set.
    """
    log_f = np.asarray(log_f, dtype=np.float64)
    if log_f.ndim != 1 or log_f.shape[0] < 1:
        raise ValueError("normalize_densities needs at least one value")
    if not np.isfinite(log_f).all():
        raise ValueError("log densities must all be finite")
    r = np.exp(log_f - log_f.max())
    r_min = r.min()
    if r_min == 1.0:
        return np.ones_like(log_f), True
    return (r - r_min) / (1.0 - r_min), False


def split_cluster(mc, dataset, params):
    """Split one micro-cluster on the normalized-density threshold.

    Returns [mc] unchanged when the cluster is too small (below n_min),
    its normalization is degenerate, or every member lands on one side of
    rho.  Otherwise returns [kept, below-rho], both with features
    recomputed from the raw member vectors; member ids keep their
    original relative order.
    """
    pts_all = _point_matrix(dataset)
    n_min = params.effective_n_min(pts_all.shape[1])
    if mc.cf.n < n_min:
        return [mc]
    idx = np.asarray(mc.members, dtype=np.intp)
    pts = pts_all[idx]
    model = fit_gaussian(pts, params)
    values, degenerate = normalize_densities(log_densities(pts, model))
    if degenerate:
        return [mc]
    low = values < params.rho
    if not low.any() or low.all():
        return [mc]
    kept = [m for m, moved in zip(mc.members, low) if not moved]
    below = [m for m, moved in zip(mc.members, low) if moved]
    return [
        MicroCluster(CFVector.from_points(pts[~low]), kept),
        MicroCluster(CFVector.from_points(pts[low]), below),
    ]


def refine(micro_clusters, dataset, params):
    """One refinement pass over all micro-clusters, preserving input order.

    Each cluster contributes its kept part, then its split-off part, at
    its original position.  Output size is between len(input) and
    2·len(input); member sets still partition the same rows.
    """
    out = []
    for i, mc in enumerate(micro_clusters):
        try:
            out.extend(split_cluster(mc, dataset, params))
        except NumericalError as exc:
            raise NumericalError(f"cluster {i} (size {mc.cf.n}): {exc}") from exc
    return out
