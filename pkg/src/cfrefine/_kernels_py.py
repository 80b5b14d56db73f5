"""Pure-Python (numpy) implementations of the tree's hot kernels.

Drop-in twin of the compiled ``cfrefine._cfcore`` module; ``backend``
picks one of the two at import time.  All functions operate on the raw
per-node arrays (`counts`, `ls`, `ss`) with an explicit live-entry count
``size``, so nodes can over-allocate without slicing copies.

Tie-breaks everywhere are "first index wins", which both backends honor
(strict comparisons against the running best).
"""

import numpy as np

NAME = "python"


def nearest_entry(counts, ls, size, point):
    """Index of the entry whose centroid is closest (squared Euclidean) to point."""
    centroids = ls[:size] / counts[:size, None]
    diff = centroids - point
    return int(np.argmin(np.einsum("ij,ij->i", diff, diff)))


def tentative_diameter_sq(n, ls_row, ss_row, point):
    """Squared diameter the entry would have after absorbing point.

    Uses the sufficient statistics only; negative round-off is clamped to 0.
    """
    m = int(n) + 1
    ss_total = float(ss_row.sum()) + float(point @ point)
    ls_new = ls_row + point
    d2 = (2.0 * m * ss_total - 2.0 * float(ls_new @ ls_new)) / (m * (m - 1))
    return d2 if d2 > 0.0 else 0.0


def add_point(ls_row, ss_row, point):
    """Absorb one point into an entry's linear and squared sums (in place)."""
    ls_row += point
    ss_row += point * point


def farthest_pair(counts, ls, size):
    """Indices (i, j), i < j, of the two entries with maximal centroid distance."""
    centroids = ls[:size] / counts[:size, None]
    diff = centroids[:, None, :] - centroids[None, :, :]
    d2 = np.einsum("ijk,ijk->ij", diff, diff)
    iu, ju = np.triu_indices(size, k=1)
    k = int(np.argmax(d2[iu, ju]))
    return int(iu[k]), int(ju[k])


def closest_pair(counts, ls, size):
    """Indices (i, j), i < j, of the two entries with minimal centroid distance."""
    centroids = ls[:size] / counts[:size, None]
    diff = centroids[:, None, :] - centroids[None, :, :]
    d2 = np.einsum("ijk,ijk->ij", diff, diff)
    iu, ju = np.triu_indices(size, k=1)
    k = int(np.argmin(d2[iu, ju]))
    return int(iu[k]), int(ju[k])


def assign_to_seeds(counts, ls, size, seed_a, seed_b):
    """0/1 group labels assigning every entry to its nearer seed centroid.

    Ties go to the first seed; the seeds themselves are pinned to their
    own groups even when their centroids coincide.
    """
    centroids = ls[:size] / counts[:size, None]
    da = np.einsum("ij,ij->i", centroids - centroids[seed_a], centroids - centroids[seed_a])
    db = np.einsum("ij,ij->i", centroids - centroids[seed_b], centroids - centroids[seed_b])
    out = (db < da).astype(np.int8)
    out[seed_a] = 0
    out[seed_b] = 1
    return out
