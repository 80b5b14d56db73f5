"""CSV ingestion, label extraction, and dataset self-replication.

Feature columns are selected by name and must parse as finite reals;
anything nominal stays out of the point matrix by construction (asking
for it is a parse error, not a silent drop).  An optional label column of
arbitrary strings is mapped to integer class ids in order of first
appearance, so ids are stable for a given file and never depend on sort
order of the label values.
"""

import csv
from dataclasses import dataclass

import numpy as np

from .errors import DataError

# UCI Abalone column order; the file ships without a header.
ABALONE_COLUMNS = (
    "Sex",
    "Length",
    "Diameter",
    "Height",
    "Whole weight",
    "Shucked weight",
    "Viscera weight",
    "Shell weight",
    "Rings",
)
# The seven continuous measurements (Sex is nominal, Rings is the label).
ABALONE_FEATURES = ABALONE_COLUMNS[1:8]
ABALONE_LABEL = "Rings"


@dataclass(frozen=True)
class Dataset:
    """Immutable numeric dataset: an (N, d) matrix plus optional class ids.

    labels[i] is an integer class id; label_names[id] is the original
    label string, in order of first appearance in the source file.
    """

    points: np.ndarray
    feature_names: tuple
    labels: np.ndarray | None = None
    label_names: tuple | None = None
    label_column: str | None = None

    @property
    def n_rows(self):
        return self.points.shape[0]

    @property
    def dim(self):
        return self.points.shape[1]


def load_csv(path, feature_columns, label_column=None, *, has_header=True,
             column_names=None):
    """Load selected columns of a comma-separated file as a Dataset.

    Columns are addressed by name: from the header row when has_header,
    otherwise from column_names (required in that case).  Feature columns
    appear in the point matrix in the order requested.
    """
    if has_header and column_names is not None:
        raise ValueError("column_names only applies to files without a header")
    if not has_header and column_names is None:
        raise ValueError("column_names is required when the file has no header")
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    rows = [(lineno, row) for lineno, row in enumerate(rows, start=1)
            if row and not (len(row) == 1 and row[0].strip() == "")]
    if not rows:
        raise DataError(f"{path} is empty")

    if has_header:
        names = [c.strip() for c in rows[0][1]]
        data_rows = rows[1:]
    else:
        names = list(column_names)
        data_rows = rows
    if not data_rows:
        raise DataError(f"{path} has a header but no data rows")

    index_of = {}
    for i, name in enumerate(names):
        index_of.setdefault(name, i)
    wanted = list(feature_columns) + ([label_column] if label_column else [])
    for name in wanted:
        if name not in index_of:
            raise DataError(
                f"column '{name}' not found in {path} "
                f"(available: {', '.join(names)})"
            )
    feat_idx = [index_of[c] for c in feature_columns]
    label_idx = index_of[label_column] if label_column else None

    points = np.empty((len(data_rows), len(feat_idx)), dtype=np.float64)
    raw_labels = [] if label_column else None
    for r, (lineno, row) in enumerate(data_rows):
        if len(row) != len(names):
            raise DataError(
                f"{path} line {lineno}: expected {len(names)} fields, "
                f"got {len(row)}"
            )
        for c, j in enumerate(feat_idx):
            cell = row[j]
            try:
                value = float(cell)
            except ValueError:
                raise DataError(
                    f"{path} line {lineno}, column '{feature_columns[c]}': "
                    f"cannot parse {cell!r} as a number"
                ) from None
            if not np.isfinite(value):
                raise DataError(
                    f"{path} line {lineno}, column '{feature_columns[c]}': "
                    f"non-finite value {cell!r}"
                )
            points[r, c] = value
        if label_idx is not None:
            raw_labels.append(row[label_idx])

    labels = None
    label_names = None
    if label_column:
        seen = {}
        for value in raw_labels:
            seen.setdefault(value, len(seen))
        labels = np.fromiter((seen[v] for v in raw_labels), dtype=np.int64,
                             count=len(raw_labels))
        label_names = tuple(seen)
    return Dataset(
        points=points,
        feature_names=tuple(feature_columns),
        labels=labels,
        label_names=label_names,
        label_column=label_column,
    )


def load_abalone(path):
    """Load the UCI Abalone file: 7 continuous features, Rings as label."""
    return load_csv(path, ABALONE_FEATURES, ABALONE_LABEL,
                    has_header=False, column_names=ABALONE_COLUMNS)


def replicate(ds, k):
    """Append the dataset to itself until it appears k times in total."""
    if k < 1:
        raise ValueError(f"replication factor must be >= 1, got {k}")
    if k == 1:
        return ds
    return Dataset(
        points=np.tile(ds.points, (k, 1)),
        feature_names=ds.feature_names,
        labels=None if ds.labels is None else np.tile(ds.labels, k),
        label_names=ds.label_names,
        label_column=ds.label_column,
    )


def save_csv(ds, path):
    """Write the dataset with a header; floats keep 17 significant digits."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        header = list(ds.feature_names)
        if ds.labels is not None:
            header.append(ds.label_column or "label")
        writer.writerow(header)
        for i in range(ds.n_rows):
            row = [f"{v:.17g}" for v in ds.points[i]]
            if ds.labels is not None:
                row.append(str(ds.label_names[ds.labels[i]]))
            writer.writerow(row)
