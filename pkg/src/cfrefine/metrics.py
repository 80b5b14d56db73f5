"""Supervised cluster-validity measures: entropy, purity, precision, recall.

Everything is computed from one contingency table (clusters x classes).
Summary numbers are size-weighted over clusters; precision/recall also
come as full per-(cluster, class) matrices since a single aggregate hides
most of what those measures say.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DataError


@dataclass(frozen=True)
class ContingencyTable:
    """Cluster-by-class count matrix with its marginals.

    Row i holds cluster cluster_ids[i]; column j holds class class_ids[j];
    ids are sorted ascending. counts[i, j] is the number of rows of class
    j assigned to cluster i.
    """

    counts: np.ndarray
    cluster_ids: np.ndarray
    class_ids: np.ndarray
    cluster_sizes: np.ndarray
    class_sizes: np.ndarray
    total: int

    @property
    def n_clusters(self):
        return self.counts.shape[0]

    @property
    def n_classes(self):
        return self.counts.shape[1]


@dataclass(frozen=True)
class PrecisionRecall:
    """Per-(cluster, class) precision/recall plus majority-class summaries."""

    precision: np.ndarray
    recall: np.ndarray
    majority_class: np.ndarray
    weighted_precision: float
    weighted_recall: float


def _aligned_pairs(assignments, labels):
    """Yield (cluster, class) per assigned row, whatever the container shape."""
    amap = assignments if hasattr(assignments, "keys") else dict(enumerate(assignments))
    lmap = labels if hasattr(labels, "keys") else dict(enumerate(labels))
    clusters, classes, missing = [], [], []
    for row, cluster in amap.items():
        try:
            classes.append(lmap[row])
        except KeyError:
            missing.append(row)
            continue
        clusters.append(cluster)
    if missing:
        shown = ", ".join(str(r) for r in missing[:10])
        more = f" (+{len(missing) - 10} more)" if len(missing) > 10 else ""
        raise DataError(f"assigned rows have no class label: {shown}{more}")
    return clusters, classes


def build_contingency(assignments, labels):
    """Count cluster/class co-occurrences over the assigned rows.

    Both arguments may be row_id->value mappings or plain sequences
    (index taken as row id).  The class axis covers the classes that
    occur among assigned rows.
    """
    clusters, classes = _aligned_pairs(assignments, labels)
    if not clusters:
        raise DataError("cannot build a contingency table from zero assigned rows")
    cluster_ids, ci = np.unique(np.asarray(clusters), return_inverse=True)
    class_ids, li = np.unique(np.asarray(classes), return_inverse=True)
    counts = np.zeros((cluster_ids.shape[0], class_ids.shape[0]), dtype=np.int64)
    np.add.at(counts, (ci, li), 1)
    return ContingencyTable(
        counts=counts,
        cluster_ids=cluster_ids,
        class_ids=class_ids,
        cluster_sizes=counts.sum(axis=1),
        class_sizes=counts.sum(axis=0),
        total=int(counts.sum()),
    )


def _require_nonempty(table):
    if table.total < 1:
        raise ValueError("metric undefined for an empty contingency table")


def entropy(table):
    """Size-weighted cluster entropy, log base 2, 0·log(0) = 0."""
    _require_nonempty(table)
    p = table.counts / table.cluster_sizes[:, np.newaxis]
    with np.errstate(divide="ignore", invalid="ignore"):
        plogp = np.where(p > 0, p * np.log2(p), 0.0)
    per_cluster = -plogp.sum(axis=1)
    return float((table.cluster_sizes / table.total) @ per_cluster)


def purity(table):
    """Size-weighted share of each cluster's majority class."""
    _require_nonempty(table)
    return float(table.counts.max(axis=1).sum() / table.total)


def precision_recall(table):
    """Per-(cluster, class) precision and recall plus weighted summaries.

    precision[i, j] = counts[i, j] / cluster size, recall[i, j] =
    counts[i, j] / class size (0 where a denominator is 0).  The
    summaries weight each cluster's majority-class precision/recall by
    cluster size; argmax ties go to the lowest class index.
    """
    _require_nonempty(table)
    counts = table.counts
    with np.errstate(divide="ignore", invalid="ignore"):
        precision = np.where(
            table.cluster_sizes[:, np.newaxis] > 0,
            counts / table.cluster_sizes[:, np.newaxis],
            0.0,
        )
        recall = np.where(
            table.class_sizes[np.newaxis, :] > 0,
            counts / table.class_sizes[np.newaxis, :],
            0.0,
        )
    majority = counts.argmax(axis=1)
    weights = table.cluster_sizes / table.total
    rows = np.arange(counts.shape[0])
    return PrecisionRecall(
        precision=precision,
        recall=recall,
        majority_class=table.class_ids[majority],
        weighted_precision=float(weights @ precision[rows, majority]),
        weighted_recall=float(weights @ recall[rows, majority]),
    )
