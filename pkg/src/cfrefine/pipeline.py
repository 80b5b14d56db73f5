"""End-to-end runs: ingestion already done, phases timed, report assembled.

The report is a plain JSON-ready dict.  Runs are deterministic for a
fixed dataset and config; the timings_ms block is the one exception and
is documented as such everywhere the report is consumed.
"""

import time
from dataclasses import dataclass, replace

import numpy as np

from .backend import get_kernels
from .cf_tree import CFTreeParams, CFTree, centroid, diameter, leaf_micro_clusters, radius
from .dataio import replicate
from .errors import DataError
from .gaussian import RefineParams, refine
from .metrics import build_contingency, entropy, precision_recall, purity


@dataclass(frozen=True)
class RunConfig:
    """Everything one clustering run needs besides the dataset itself."""

    threshold: float
    branching: int = 8
    rho: float = 0.1
    n_min: int | None = None
    epsilon_scale: float = 1e-6
    refine: bool = True
    input: str | None = None
    features: tuple = ()
    label: str | None = None
    has_header: bool = True
    columns: tuple | None = None
    output: str | None = None
    format: str = "json"

    def tree_params(self):
        return CFTreeParams(threshold=self.threshold, branching_factor=self.branching)

    def refine_params(self):
        return RefineParams(rho=self.rho, n_min=self.n_min,
                            epsilon_scale=self.epsilon_scale)


def _cluster_phases(dataset, config, kernels):
    """Run both phases; returns (micro_clusters, phase1_count, timings)."""
    t0 = time.perf_counter()
    tree = CFTree(dataset.dim, config.tree_params(), kernels=kernels)
    tree.insert_many(dataset.points)
    phase1 = leaf_micro_clusters(tree)
    t1 = time.perf_counter()
    if config.refine:
        clusters = refine(phase1, dataset, config.refine_params())
    else:
        clusters = phase1
    t2 = time.perf_counter()
    timings = {
        "phase1": (t1 - t0) * 1000.0,
        "phase2": (t2 - t1) * 1000.0,
        "total": (t2 - t0) * 1000.0,
    }
    return clusters, len(phase1), timings


def _assignment(clusters, n_rows):
    out = np.full(n_rows, -1, dtype=np.int64)
    for k, mc in enumerate(clusters):
        for row in mc.members:
            out[row] = k
    if (out < 0).any():
        missing = np.flatnonzero(out < 0)[:10].tolist()
        raise DataError(f"rows not covered by any cluster: {missing}")
    return out


def metrics_block(assignments, labels):
    """The four summary measures as a JSON-ready dict."""
    table = build_contingency(assignments, labels)
    pr = precision_recall(table)
    return {
        "entropy": entropy(table),
        "purity": purity(table),
        "weighted_precision": pr.weighted_precision,
        "weighted_recall": pr.weighted_recall,
    }


def run_cluster(dataset, config, kernels=None):
    """Full pipeline on a loaded dataset; returns the report dict."""
    k = kernels or get_kernels()
    clusters, phase1_count, timings = _cluster_phases(dataset, config, k)
    assignment = _assignment(clusters, dataset.n_rows)
    report = {
        "params": {
            "branching": config.branching,
            "threshold": config.threshold,
            "rho": config.rho,
            "n_min": config.refine_params().effective_n_min(dataset.dim),
            "epsilon_scale": config.epsilon_scale,
            "refine": config.refine,
            "features": list(dataset.feature_names),
            "label": dataset.label_column,
        },
        "backend": k.NAME,
        "n_rows": dataset.n_rows,
        "dim": dataset.dim,
        "phase1_cluster_count": phase1_count,
        "phase2_cluster_count": len(clusters),
        "clusters": [
            {
                "id": i,
                "size": mc.cf.n,
                "centroid": [float(v) for v in centroid(mc.cf)],
                "radius": radius(mc.cf),
                "diameter": diameter(mc.cf),
            }
            for i, mc in enumerate(clusters)
        ],
        "assignment": assignment.tolist(),
        "metrics": None,
        "timings_ms": timings,
    }
    if dataset.labels is not None:
        report["metrics"] = metrics_block(assignment.tolist(), dataset.labels.tolist())
    return report


def sweep_thresholds(t_min, t_max, t_step):
    """The T grid: t_min, t_min+step, ... capped at t_max (inclusive)."""
    if not 0 < t_min <= t_max:
        raise ValueError(f"need 0 < t_min <= t_max, got {t_min}..{t_max}")
    if not t_step > 0:
        raise ValueError(f"t_step must be positive, got {t_step}")
    # 1e-9 slack keeps 0.1-step grids from dropping their last point.
    steps = int(np.floor((t_max - t_min) / t_step + 1e-9)) + 1
    return [t_min + i * t_step for i in range(steps)]


def run_sweep(dataset, config, t_min, t_max, t_step, kernels=None):
    """Cluster once per threshold on the T grid; one row per run."""
    k = kernels or get_kernels()
    rows = []
    for t in sweep_thresholds(t_min, t_max, t_step):
        clusters, phase1_count, _ = _cluster_phases(
            dataset, replace(config, threshold=t), k
        )
        rows.append({
            "T": t,
            "phase1_count": phase1_count,
            "phase2_count": len(clusters),
            "ratio": len(clusters) / phase1_count,
        })
    return rows


def run_scale(dataset, config, max_multiple, kernels=None):
    """Time the pipeline on k-fold self-appended copies, k = 1..max_multiple.

    Replication happens outside the timed window; wall_ms covers both
    phases.  delta_ms is the increment over the previous multiple (the
    k = 1 row's delta is its own wall time).
    """
    if max_multiple < 2:
        raise ValueError(f"max_multiple must be >= 2, got {max_multiple}")
    k = kernels or get_kernels()
    rows = []
    prev_wall = 0.0
    for m in range(1, max_multiple + 1):
        rep = replicate(dataset, m)
        _, _, timings = _cluster_phases(rep, config, k)
        wall = timings["total"]
        rows.append({
            "multiple": m,
            "rows": rep.n_rows,
            "wall_ms": wall,
            "delta_ms": wall - prev_wall,
        })
        prev_wall = wall
    return rows


def run_eval(dataset, assignments):
    """Score an externally produced assignment against the dataset labels.

    assignments maps row id -> cluster id and must cover the dataset rows
    exactly; returns (metrics dict, per-(cluster, class) detail rows for
    pairs that actually occur).
    """
    if dataset.labels is None:
        raise DataError("eval needs a dataset with a label column")
    amap = assignments if hasattr(assignments, "keys") else dict(enumerate(assignments))
    missing = [r for r in range(dataset.n_rows) if r not in amap]
    if missing:
        shown = ", ".join(str(r) for r in missing[:10])
        more = f" (+{len(missing) - 10} more)" if len(missing) > 10 else ""
        raise DataError(f"assignment is missing rows: {shown}{more}")
    unknown = [r for r in amap if not 0 <= r < dataset.n_rows]
    if unknown:
        shown = ", ".join(str(r) for r in unknown[:10])
        more = f" (+{len(unknown) - 10} more)" if len(unknown) > 10 else ""
        raise DataError(f"assignment references rows outside the dataset: {shown}{more}")
    table = build_contingency(amap, dataset.labels.tolist())
    pr = precision_recall(table)
    block = {
        "entropy": entropy(table),
        "purity": purity(table),
        "weighted_precision": pr.weighted_precision,
        "weighted_recall": pr.weighted_recall,
    }
    detail = []
    names = dataset.label_names
    for i in range(table.n_clusters):
        for j in range(table.n_classes):
            count = int(table.counts[i, j])
            if count == 0:
                continue
            detail.append({
                "cluster": int(table.cluster_ids[i]),
                "class": str(names[table.class_ids[j]]) if names else str(table.class_ids[j]),
                "count": count,
                "precision": float(pr.precision[i, j]),
                "recall": float(pr.recall[i, j]),
            })
    return block, detail
