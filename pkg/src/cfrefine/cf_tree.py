"""Phase 1: incremental clustering-feature tree.

A CF entry summarizes a point set by sufficient statistics (count, linear
sum, squared sum), enough to recover centroid, radius, and diameter
without the raw points.  The tree grows by absorbing points into the
closest leaf entry as long as that entry's diameter stays under the
threshold ``T``; otherwise a new singleton entry is created.  Node
overflow (more than ``B`` entries) is resolved by splitting on the
farthest centroid pair, recursively up the tree; a root split adds one
level.  After a split chain stops, the closest sibling pair at the stop
node is merged back unless it is the pair the split just created.

Leaf entries double as micro-clusters: they carry the row ids of their
member points so a later pass can revisit the raw vectors.

Construction is single-writer; a finished tree is read-only and safe to
share between threads.
"""

from dataclasses import dataclass, field

import numpy as np

from .backend import get_kernels


def _as_vector(values, dim=None, what="values"):
    v = np.ascontiguousarray(values, dtype=np.float64)
    if v.ndim != 1:
        raise ValueError(f"{what} must be one-dimensional, got shape {v.shape}")
    if dim is not None and v.shape[0] != dim:
        raise ValueError(f"{what} has dimension {v.shape[0]}, expected {dim}")
    return v


@dataclass(frozen=True)
class DataPoint:
    """One input row: an integer id plus its feature vector."""

    row_id: int
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _as_vector(self.values))


@dataclass(frozen=True)
class CFTreeParams:
    """Tree knobs: diameter threshold T and branching factor B.

    ``branching_factor`` caps the entries of every node, leaves included;
    ``threshold`` caps the diameter a leaf entry may reach by absorption.
    """

    threshold: float
    branching_factor: int = 8

    def __post_init__(self):
        if not self.threshold > 0:
            raise ValueError(f"threshold must be positive, got {self.threshold}")
        if self.branching_factor < 2:
            raise ValueError(
                f"branching_factor must be >= 2, got {self.branching_factor}"
            )


@dataclass
class CFVector:
    """Clustering feature: point count with per-dimension linear/squared sums."""

    n: int
    ls: np.ndarray
    ss: np.ndarray

    def __post_init__(self):
        self.ls = _as_vector(self.ls, what="ls")
        self.ss = _as_vector(self.ss, dim=self.ls.shape[0], what="ss")
        if self.n < 0:
            raise ValueError(f"point count must be non-negative, got {self.n}")
        if self.n == 0 and (self.ls.any() or self.ss.any()):
            raise ValueError("empty clustering feature must have all-zero sums")

    @property
    def dim(self):
        return self.ls.shape[0]

    @classmethod
    def from_points(cls, points):
        """Exact CF of a raw point matrix (one row per point)."""
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        return cls(pts.shape[0], pts.sum(axis=0), (pts * pts).sum(axis=0))


def cf_add(a, b):
    """Componentwise merge of two disjoint clusters' features."""
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return CFVector(a.n + b.n, a.ls + b.ls, a.ss + b.ss)


def centroid(cf):
    """Mean vector of the summarized points."""
    if cf.n < 1:
        raise ValueError("centroid is undefined for an empty clustering feature")
    return cf.ls / cf.n


def radius(cf):
    """Root-mean-square distance of the members to their centroid."""
    if cf.n < 1:
        raise ValueError("radius is undefined for an empty clustering feature")
    if cf.n == 1:
        return 0.0
    c = cf.ls / cf.n
    r2 = cf.ss.sum() / cf.n - float(c @ c)
    return float(np.sqrt(max(r2, 0.0)))


def diameter(cf):
    """Root-mean-square pairwise member distance; 0 for a singleton."""
    if cf.n < 1:
        raise ValueError("diameter is undefined for an empty clustering feature")
    if cf.n == 1:
        return 0.0
    d2 = (2.0 * cf.n * cf.ss.sum() - 2.0 * float(cf.ls @ cf.ls)) / (cf.n * (cf.n - 1))
    return float(np.sqrt(max(d2, 0.0)))


@dataclass
class MicroCluster:
    """A leaf-level cluster: its CF summary and the member row ids."""

    cf: CFVector
    members: list = field(default_factory=list)

    @property
    def size(self):
        return self.cf.n


class CFNode:
    """One tree node; entry statistics live in parallel flat arrays.

    Entries 0..size-1 are live.  Internal nodes keep one child node per
    entry; leaves keep one member-id list per entry.  Arrays over-allocate
    by one slot so an overflowing insert can land before the split.
    """

    __slots__ = ("is_leaf", "dim", "capacity", "size", "counts", "ls", "ss",
                 "children", "members")

    def __init__(self, dim, capacity, is_leaf):
        room = capacity + 1
        self.is_leaf = is_leaf
        self.dim = dim
        self.capacity = capacity
        self.size = 0
        self.counts = np.zeros(room, dtype=np.int64)
        self.ls = np.zeros((room, dim), dtype=np.float64)
        self.ss = np.zeros((room, dim), dtype=np.float64)
        self.children = None if is_leaf else []
        self.members = [] if is_leaf else None

    def _ensure_room(self):
        if self.size < self.counts.shape[0]:
            return
        grow = self.counts.shape[0]
        self.counts = np.concatenate([self.counts, np.zeros(grow, dtype=np.int64)])
        self.ls = np.concatenate([self.ls, np.zeros((grow, self.dim))])
        self.ss = np.concatenate([self.ss, np.zeros((grow, self.dim))])

    def entry_cf(self, i):
        """Copy of entry i's clustering feature."""
        if not 0 <= i < self.size:
            raise IndexError(f"entry index {i} out of range for node of size {self.size}")
        return CFVector(int(self.counts[i]), self.ls[i].copy(), self.ss[i].copy())

    def totals(self):
        """Summed statistics over all live entries."""
        return (
            int(self.counts[: self.size].sum()),
            self.ls[: self.size].sum(axis=0),
            self.ss[: self.size].sum(axis=0),
        )

    def append_singleton(self, row_id, x):
        self._ensure_room()
        i = self.size
        self.counts[i] = 1
        self.ls[i] = x
        self.ss[i] = x * x
        self.members.append([row_id])
        self.size += 1

    def append_entry_from(self, other, j):
        """Append a copy of entry j of another same-kind node."""
        self._ensure_room()
        i = self.size
        self.counts[i] = other.counts[j]
        self.ls[i] = other.ls[j]
        self.ss[i] = other.ss[j]
        if self.is_leaf:
            self.members.append(other.members[j])
        else:
            self.children.append(other.children[j])
        self.size += 1

    def append_child(self, node):
        """Append an entry summarizing a child node."""
        self._ensure_room()
        i = self.size
        n, ls, ss = node.totals()
        self.counts[i] = n
        self.ls[i] = ls
        self.ss[i] = ss
        self.children.append(node)
        self.size += 1

    def set_child(self, i, node):
        """Overwrite entry i with a child node's summary."""
        n, ls, ss = node.totals()
        self.counts[i] = n
        self.ls[i] = ls
        self.ss[i] = ss
        self.children[i] = node

    def remove_entry(self, i):
        """Drop entry i, shifting later entries left."""
        s = self.size
        self.counts[i : s - 1] = self.counts[i + 1 : s]
        self.ls[i : s - 1] = self.ls[i + 1 : s]
        self.ss[i : s - 1] = self.ss[i + 1 : s]
        self.counts[s - 1] = 0
        self.ls[s - 1] = 0.0
        self.ss[s - 1] = 0.0
        if self.is_leaf:
            self.members.pop(i)
        else:
            self.children.pop(i)
        self.size -= 1


def choose_closest_entry(node, point, kernels=None):
    """Index of the node entry whose centroid is nearest to the point.

    Ties break toward the lowest index.
    """
    if node.size == 0:
        raise ValueError("cannot choose an entry in an empty node")
    k = kernels or get_kernels()
    x = _as_vector(point, dim=node.dim, what="point")
    return k.nearest_entry(node.counts, node.ls, node.size, x)


def split_node(node, kernels=None):
    """Split an overfull node on its farthest centroid pair.

    The two farthest entries seed the output nodes; every other entry
    joins the nearer seed (ties to the first).  Relative entry order is
    preserved within each side, so builds stay deterministic.
    """
    if node.size < 2:
        raise ValueError("cannot split a node with fewer than 2 entries")
    k = kernels or get_kernels()
    seed_a, seed_b = k.farthest_pair(node.counts, node.ls, node.size)
    groups = k.assign_to_seeds(node.counts, node.ls, node.size, seed_a, seed_b)
    left = CFNode(node.dim, node.capacity, node.is_leaf)
    right = CFNode(node.dim, node.capacity, node.is_leaf)
    for i in range(node.size):
        (left if groups[i] == 0 else right).append_entry_from(node, i)
    return left, right


def merge_refine(node, excluded, kernels=None):
    """Merge the closest sibling pair unless it is the freshly split pair.

    Runs at the node where a split chain stopped.  Merging concatenates
    the two children as whole nodes (their entries stay intact, so leaf
    diameters are untouched); if the merged child overflows it is split
    again immediately.  The merge is skipped entirely when even that
    re-split would leave a side over the entry cap (the farthest-pair
    redistribution makes no balance promise), since the cap must hold
    after every insert.  Leaf nodes are left alone: merging two leaf
    entries could silently breach the diameter threshold.
    """
    if node.is_leaf or node.size < 3:
        return
    k = kernels or get_kernels()
    pair = k.closest_pair(node.counts, node.ls, node.size)
    if pair == (min(excluded), max(excluded)):
        return
    i, j = pair
    merged = CFNode(node.dim, node.capacity, node.children[i].is_leaf)
    for child in (node.children[i], node.children[j]):
        for e in range(child.size):
            merged.append_entry_from(child, e)
    if merged.size <= merged.capacity:
        node.counts[i] += node.counts[j]
        node.ls[i] += node.ls[j]
        node.ss[i] += node.ss[j]
        node.children[i] = merged
        node.remove_entry(j)
        return
    left, right = split_node(merged, k)
    if left.size > left.capacity or right.size > right.capacity:
        return
    node.remove_entry(j)
    node.set_child(i, left)
    node.append_child(right)


class CFTree:
    """Incrementally built CF-tree over fixed-dimension points."""

    def __init__(self, dim, params, kernels=None):
        if dim < 1:
            raise ValueError(f"dimension must be >= 1, got {dim}")
        self.dim = dim
        self.params = params
        self.root = None
        self.n_inserted = 0
        self._k = kernels or get_kernels()
        self._t_sq = params.threshold * params.threshold

    @property
    def backend(self):
        return self._k.NAME

    def insert(self, point):
        """Insert one DataPoint; see insert_row for the raw form."""
        self.insert_row(point.row_id, point.values)

    def insert_row(self, row_id, values):
        """Insert one row id + vector, validating shape and finiteness."""
        x = _as_vector(values, dim=self.dim, what="point")
        if not np.isfinite(x).all():
            raise ValueError(f"point {row_id} contains non-finite values")
        self._insert_unchecked(row_id, x)

    def insert_many(self, points, row_ids=None):
        """Bulk insert a matrix of rows (validated once, in row order)."""
        pts = np.ascontiguousarray(points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != self.dim:
            raise ValueError(
                f"expected an (n, {self.dim}) matrix, got shape {pts.shape}"
            )
        if not np.isfinite(pts).all():
            bad = int(np.argwhere(~np.isfinite(pts).all(axis=1))[0][0])
            raise ValueError(f"row {bad} contains non-finite values")
        if row_ids is None:
            row_ids = range(self.n_inserted, self.n_inserted + pts.shape[0])
        for rid, x in zip(row_ids, pts):
            self._insert_unchecked(rid, x)

    def _insert_unchecked(self, row_id, x):
        if self.root is None:
            self.root = CFNode(self.dim, self.params.branching_factor, is_leaf=True)
            self.root.append_singleton(row_id, x)
            self.n_inserted += 1
            return
        split = self._descend(self.root, row_id, x)
        if split is not None:
            root = CFNode(self.dim, self.params.branching_factor, is_leaf=False)
            root.append_child(split[0])
            root.append_child(split[1])
            self.root = root
        self.n_inserted += 1

    def _descend(self, node, row_id, x):
        """Insert below node; returns the two halves if node had to split."""
        k = self._k
        if node.is_leaf:
            i = k.nearest_entry(node.counts, node.ls, node.size, x)
            d2 = k.tentative_diameter_sq(node.counts[i], node.ls[i], node.ss[i], x)
            if d2 <= self._t_sq:
                node.counts[i] += 1
                k.add_point(node.ls[i], node.ss[i], x)
                node.members[i].append(row_id)
                return None
            node.append_singleton(row_id, x)
        else:
            i = k.nearest_entry(node.counts, node.ls, node.size, x)
            split = self._descend(node.children[i], row_id, x)
            if split is None:
                node.counts[i] += 1
                k.add_point(node.ls[i], node.ss[i], x)
                return None
            node.set_child(i, split[0])
            node.append_child(split[1])
            if node.size <= node.capacity:
                merge_refine(node, (i, node.size - 1), k)
                return None
        if node.size > node.capacity:
            return split_node(node, k)
        return None

    def micro_clusters(self):
        return leaf_micro_clusters(self)

    @property
    def height(self):
        h, node = 0, self.root
        while node is not None and not node.is_leaf:
            h += 1
            node = node.children[0]
        return h


def leaf_micro_clusters(tree):
    """Leaf entries as micro-clusters, in left-to-right tree order."""
    out = []

    def walk(node):
        if node.is_leaf:
            for i in range(node.size):
                out.append(MicroCluster(node.entry_cf(i), list(node.members[i])))
        else:
            for child in node.children:
                walk(child)

    if tree.root is not None:
        walk(tree.root)
    return out


def build_tree(points, params, row_ids=None, kernels=None):
    """Build a tree over a point matrix in one call."""
    pts = np.ascontiguousarray(points, dtype=np.float64)
    if pts.ndim != 2:
        raise ValueError(f"expected a 2-D point matrix, got shape {pts.shape}")
    tree = CFTree(pts.shape[1], params, kernels=kernels)
    tree.insert_many(pts, row_ids=row_ids)
    return tree
