"""Multi-parameter linkage-based clustering.

A merge family interpolates several linkage rules and/or several point
metrics: the merge score of a cluster pair is the convex combination of the
per-(linkage, metric) scores, with coefficients living on a simplex.  For a
fixed instance the simplex splits into convex regions on which the whole
greedy merge sequence is constant; `build_execution_tree` enumerates that
refinement level by level and `best_parameter` picks a region minimizing the
Hamming loss against a target clustering.

Region computations are exact (rational distance tables).  A float/numpy
greedy path (`linkage_tree_float`) exists for large fixed-parameter runs like
the synthetic benchmark datasets, where only the merge order matters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .geometry import ConvexCell, GeometryError, Halfspace, find_interior_point
from .rationals import (
    Rational,
    ZERO,
    as_rational,
    as_vector,
    format_rational,
    format_vector,
    parse_vector,
    rat,
)
from .regions import AffineForm, AffineMinProblem, compute_subdivision

LINKAGES = ("single", "complete", "median", "average", "mediod")

SNAP_DENOMINATOR = 10**6


def snap(value: float, denominator: int = SNAP_DENOMINATOR):
    """Round a float onto the rational grid with the given denominator."""
    return Rational(round(value * denominator), denominator)


def lower_median(sorted_values: Sequence):
    """Smallest element with at most half the values strictly below and at
    most half strictly above (the lower median of the multiset)."""
    return sorted_values[(len(sorted_values) - 1) // 2]


# --------------------------------------------------------------------------
# Instances
# --------------------------------------------------------------------------

def euclidean_table(points) -> tuple:
    pts = [tuple(float(c) for c in p) for p in points]
    n = len(pts)
    table = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            d = snap(math.dist(pts[i], pts[j]))
            table[i][j] = table[j][i] = d
    return tuple(tuple(row) for row in table)


def manhattan_table(points) -> tuple:
    n = len(points)
    table = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            d = sum((abs(a - b) for a, b in zip(points[i], points[j])), ZERO)
            table[i][j] = table[j][i] = d
    return tuple(tuple(row) for row in table)


METRIC_BUILDERS = {"euclidean": euclidean_table, "manhattan": manhattan_table}


@dataclass(frozen=True, eq=False)
class ClusteringInstance:
    """Point set with exact pairwise-distance tables, one per metric, and an
    optional target partition to score against."""

    metrics: dict
    points: Optional[tuple] = None
    target: Optional[tuple] = None
    k: Optional[int] = None

    def __post_init__(self):
        if not self.metrics and self.points is None:
            raise ValueError("an instance needs points or at least one metric table")
        n = self.n_points
        for name, table in self.metrics.items():
            if len(table) != n or any(len(row) != n for row in table):
                raise ValueError(f"metric {name!r} table is not {n}x{n}")
            for i in range(n):
                if table[i][i] != 0:
                    raise ValueError(f"metric {name!r} has nonzero diagonal")
                for j in range(i):
                    if table[i][j] != table[j][i]:
                        raise ValueError(f"metric {name!r} is not symmetric")
        if self.target is not None:
            members = sorted(i for part in self.target for i in part)
            if members != list(range(n)):
                raise ValueError("target must partition the point indices")

    @property
    def n_points(self) -> int:
        if self.metrics:
            return len(next(iter(self.metrics.values())))
        return len(self.points)

    @classmethod
    def from_points(cls, points, metric_names=("euclidean",), target=None, k=None):
        pts = tuple(as_vector(p) for p in points)
        metrics = {name: METRIC_BUILDERS[name](pts) for name in metric_names}
        tgt = tuple(frozenset(part) for part in target) if target is not None else None
        return cls(metrics=metrics, points=pts, target=tgt, k=k)

    def to_json(self) -> dict:
        out = {
            "schema_version": 1,
            "metrics": {
                name: [[format_rational(v) for v in row] for row in table]
                for name, table in self.metrics.items()
            },
        }
        if self.points is not None:
            out["points"] = [format_vector(p) for p in self.points]
        if self.target is not None:
            out["target"] = [sorted(part) for part in self.target]
        if self.k is not None:
            out["k"] = self.k
        return out

    @classmethod
    def from_json(cls, data: dict) -> "ClusteringInstance":
        metrics = {
            name: tuple(tuple(as_rational(v) for v in row) for row in table)
            for name, table in data["metrics"].items()
        }
        points = tuple(parse_vector(p) for p in data["points"]) if "points" in data else None
        target = tuple(frozenset(part) for part in data["target"]) if "target" in data else None
        return cls(metrics=metrics, points=points, target=target, k=data.get("k"))


# --------------------------------------------------------------------------
# Merge families and merge values
# --------------------------------------------------------------------------

def merge_value(linkage: str, table, cluster_a, cluster_b):
    """Exact merge score of one linkage rule on one distance table."""
    if set(cluster_a) & set(cluster_b):
        raise ValueError("clusters must be disjoint")
    pair_distances = [table[a][b] for a in cluster_a for b in cluster_b]
    if linkage == "single":
        return min(pair_distances)
    if linkage == "complete":
        return max(pair_distances)
    if linkage == "median":
        return lower_median(sorted(pair_distances))
    if linkage == "average":
        return sum(pair_distances, ZERO) / len(pair_distances)
    if linkage == "mediod":
        return table[_medoid(table, cluster_a)][_medoid(table, cluster_b)]
    raise ValueError(f"unknown linkage {linkage!r}")


def _medoid(table, cluster) -> int:
    # Lowest-index point minimizing the summed in-cluster distance.
    best = None
    best_idx = None
    for a in cluster:
        s = sum((table[a][b] for b in cluster), ZERO)
        if best is None or s < best:
            best, best_idx = s, a
    return best_idx


@dataclass(frozen=True)
class MergeFamily:
    """Product interpolation of linkage rules and metrics.

    Components are the (linkage, metric) pairs in row-major order; a
    parameter vector rho on the simplex assigns coefficient rho_t to
    component t and 1 - sum(rho) to the last one.
    """

    linkages: tuple
    metrics: tuple

    def __post_init__(self):
        object.__setattr__(self, "linkages", tuple(self.linkages))
        object.__setattr__(self, "metrics", tuple(self.metrics))
        for l in self.linkages:
            if l not in LINKAGES:
                raise ValueError(f"unknown linkage {l!r}")
        if len(self.components) < 2:
            raise ValueError("a merge family needs at least two components")

    @property
    def components(self) -> tuple:
        return tuple((l, m) for l in self.linkages for m in self.metrics)

    @property
    def dimension(self) -> int:
        return len(self.components) - 1

    @property
    def mode(self) -> str:
        if len(self.metrics) == 1:
            return "linkage-only"
        if len(self.linkages) == 1:
            return "metric-only"
        return "full-product"

    def simplex_cell(self) -> ConvexCell:
        d = self.dimension
        rows = [Halfspace(tuple(Rational(1) for _ in range(d)), 1)]
        for t in range(d):
            unit = tuple(Rational(-1) if j == t else ZERO for j in range(d))
            rows.append(Halfspace(unit, 0))
        center = tuple(rat(1, d + 1) for _ in range(d))
        return ConvexCell(d, tuple(rows), witness=center)

    def coefficients(self, rho) -> tuple:
        rho = as_vector(rho)
        if len(rho) != self.dimension:
            raise ValueError("parameter dimension mismatch")
        total = sum(rho, ZERO)
        if any(c < 0 for c in rho) or total > 1:
            raise ValueError("parameter point lies outside the simplex")
        return rho + (1 - total,)

    def component_values(self, instance: ClusteringInstance, cluster_a, cluster_b) -> tuple:
        return tuple(
            merge_value(l, instance.metrics[m], cluster_a, cluster_b) for l, m in self.components
        )

    def affine_form(self, values) -> AffineForm:
        last = values[-1]
        return AffineForm(tuple(v - last for v in values[:-1]), last)


def interpolated_merge(family: MergeFamily, instance: ClusteringInstance, rho, cluster_a, cluster_b):
    """Convex combination of the per-component merge scores at rho."""
    coeffs = family.coefficients(rho)
    values = family.component_values(instance, cluster_a, cluster_b)
    return sum((c * v for c, v in zip(coeffs, values)), ZERO)


# --------------------------------------------------------------------------
# Incremental merge-score state (one greedy run or one execution-tree path)
# --------------------------------------------------------------------------

class ClusterState:
    """Live clusters plus per-pair component scores, maintained incrementally:
    min/max recombination for single/complete, sorted-multiset merging for
    median, weighted means for average, and per-cluster medoids for mediod.
    """

    def __init__(self, instance: ClusteringInstance, family: MergeFamily, clusters, stats, medoids):
        self.instance = instance
        self.family = family
        self.clusters = clusters  # tuple of sorted index tuples, lexicographic
        self._stats = stats  # {(a, b): per-component stat}
        self._medoids = medoids  # {cluster: per-metric medoid index}

    @classmethod
    def initial(cls, instance: ClusteringInstance, family: MergeFamily) -> "ClusterState":
        clusters = tuple((i,) for i in range(instance.n_points))
        stats = {}
        medoids = {c: tuple(c[0] for _ in family.metrics) for c in clusters}
        for i, a in enumerate(clusters):
            for b in clusters[i + 1:]:
                stats[(a, b)] = tuple(
                    cls._singleton_stat(l, instance.metrics[m][a[0]][b[0]])
                    for l, m in family.components
                )
        return cls(instance, family, clusters, stats, medoids)

    @staticmethod
    def _singleton_stat(linkage: str, d):
        if linkage in ("single", "complete"):
            return d
        if linkage == "median":
            return (d,)
        if linkage == "average":
            return (d, 1)
        return None  # mediod: derived from per-cluster medoids

    def pairs(self) -> list:
        out = []
        for i, a in enumerate(self.clusters):
            for b in self.clusters[i + 1:]:
                out.append((a, b))
        return out

    def _stat_value(self, pair, t: int):
        linkage, metric = self.family.components[t]
        if linkage == "mediod":
            a, b = pair
            ma = self._medoids[a][self.family.metrics.index(metric)]
            mb = self._medoids[b][self.family.metrics.index(metric)]
            return self.instance.metrics[metric][ma][mb]
        stat = self._stats[pair][t]
        if linkage in ("single", "complete"):
            return stat
        if linkage == "median":
            return lower_median(stat)
        if linkage == "average":
            return stat[0] / stat[1]
        raise AssertionError(linkage)

    def component_values(self, pair) -> tuple:
        return tuple(self._stat_value(pair, t) for t in range(len(self.family.components)))

    def merge_forms(self) -> dict:
        return {pair: self.family.affine_form(self.component_values(pair)) for pair in self.pairs()}

    def merge(self, pair) -> "ClusterState":
        a, b = pair
        merged = tuple(sorted(a + b))
        rest = tuple(c for c in self.clusters if c != a and c != b)
        clusters = tuple(sorted(rest + (merged,)))
        stats = {}
        for c in rest:
            combined = []
            for t, (linkage, metric) in enumerate(self.family.components):
                sa = self._stats[_key(a, c)][t]
                sb = self._stats[_key(b, c)][t]
                combined.append(self._combine_stat(linkage, sa, sb))
            stats[_key(merged, c)] = tuple(combined)
        for i, c in enumerate(rest):
            for d_ in rest[i + 1:]:
                stats[_key(c, d_)] = self._stats[_key(c, d_)]
        medoids = {c: self._medoids[c] for c in rest}
        medoids[merged] = tuple(
            _medoid(self.instance.metrics[m], merged) for m in self.family.metrics
        )
        return ClusterState(self.instance, self.family, clusters, stats, medoids)

    @staticmethod
    def _combine_stat(linkage: str, sa, sb):
        if linkage == "single":
            return sa if sa <= sb else sb
        if linkage == "complete":
            return sa if sa >= sb else sb
        if linkage == "median":
            return tuple(_merge_sorted(sa, sb))
        if linkage == "average":
            return (sa[0] + sb[0], sa[1] + sb[1])
        return None


def _key(a, b):
    return (a, b) if a <= b else (b, a)


def _merge_sorted(a, b):
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        if a[i] <= b[j]:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return out


def simulate_merge_sequence(instance: ClusteringInstance, family: MergeFamily, rho) -> tuple:
    """Greedy linkage at a fixed parameter point; exact, ties merge the
    lexicographically smallest cluster pair."""
    coeffs = family.coefficients(rho)
    state = ClusterState.initial(instance, family)
    merges = []
    while len(state.clusters) > 1:
        best = None
        best_pair = None
        for pair in state.pairs():
            v = sum((c * x for c, x in zip(coeffs, state.component_values(pair))), ZERO)
            if best is None or v < best:
                best, best_pair = v, pair
        merges.append(best_pair)
        state = state.merge(best_pair)
    return tuple(merges)


# --------------------------------------------------------------------------
# Execution tree
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ExecutionTreeNode:
    merges: tuple
    region: ConvexCell
    children: tuple = ()
    subdivision: object = None  # the Subdivision that produced the children

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def leaves(self):
        if self.is_leaf:
            yield self
        else:
            for child in self.children:
                yield from child.leaves()

    def walk(self):
        yield self
        for child in self.children:
            yield from child.walk()


def build_execution_tree(
    instance: ClusteringInstance,
    family: MergeFamily,
    parent: Optional[ConvexCell] = None,
    seed: int = 0,
) -> ExecutionTreeNode:
    """Level-by-level refinement of the parameter region into cells of
    constant merge sequence; leaves carry complete cluster trees."""
    if parent is None:
        parent = family.simplex_cell()
    if parent.dimension != family.dimension:
        raise GeometryError("parent dimension does not match the family")
    if parent.witness is None:
        witness = find_interior_point(list(parent.constraints), seed)
        if witness is None:
            raise GeometryError("parent region is degenerate")
        parent = ConvexCell(parent.dimension, parent.constraints, witness=witness)
    state = ClusterState.initial(instance, family)
    return _expand(state, (), parent, seed)


def _expand(state: ClusterState, merges: tuple, region: ConvexCell, seed: int) -> ExecutionTreeNode:
    if len(state.clusters) <= 1:
        return ExecutionTreeNode(merges, region)
    pairs = state.pairs()
    if len(pairs) == 1:
        child = _expand(state.merge(pairs[0]), merges + (pairs[0],), region, seed)
        return ExecutionTreeNode(merges, region, (child,))
    problem = AffineMinProblem(state.merge_forms())
    sub = compute_subdivision(region, problem, start=region.witness, seed=seed)
    children = []
    for pair in sorted(sub.cells):
        children.append(_expand(state.merge(pair), merges + (pair,), sub.cells[pair], seed))
    return ExecutionTreeNode(merges, region, tuple(children), sub)


def leaf_subdivision(root: ExecutionTreeNode) -> dict:
    """Leaf regions keyed by merge sequence."""
    return {leaf.merges: leaf.region for leaf in root.leaves()}


# --------------------------------------------------------------------------
# Cluster trees and Hamming loss
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ClusterTree:
    """Binary merge tree over point indices, as the ordered merge list."""

    n_points: int
    merges: tuple

    def __post_init__(self):
        if len(self.merges) != self.n_points - 1:
            raise ValueError("a complete tree over n points has n-1 merges")

    @classmethod
    def from_merges(cls, n_points: int, merges) -> "ClusterTree":
        return cls(n_points, tuple((tuple(a), tuple(b)) for a, b in merges))

    def nodes(self):
        """(members, left, right) triples; leaves have left = right = None."""
        out = {(i,): ((i,), None, None) for i in range(self.n_points)}
        for a, b in self.merges:
            merged = tuple(sorted(a + b))
            out[merged] = (merged, a, b)
        return out


def hamming_loss(tree: ClusterTree, target, k: int):
    """Minimum normalized Hamming distance between the target and any pruning
    of the tree into k clusters, over all cluster-index matchings.

    Pruning minimization is a dynamic program over the tree; the matching is
    folded in by assigning disjoint target-index subsets to subtrees.
    """
    n = tree.n_points
    if k > n:
        raise ValueError("k exceeds the number of leaves")
    if len(target) != k:
        raise ValueError("target must have k clusters")
    target_sets = [frozenset(c) for c in target]
    nodes = tree.nodes()
    root = tuple(range(n))

    overlap = {
        members: tuple(sum(1 for p in members if p in c) for c in target_sets)
        for members in nodes
    }
    impossible = -(n + 1)

    @lru_cache(maxsize=None)
    def best(members, mask) -> int:
        bits = [i for i in range(k) if mask >> i & 1]
        if len(bits) == 1:
            return overlap[members][bits[0]]
        _, left, right = nodes[members]
        if left is None:
            return impossible  # a leaf cannot be pruned into two clusters
        result = impossible
        sub = (mask - 1) & mask
        while sub:
            got = best(left, sub) + best(right, mask ^ sub)
            if got > result:
                result = got
            sub = (sub - 1) & mask
        return result

    full = (1 << k) - 1
    matched = best(root, full)
    best.cache_clear()
    return 1 - Rational(matched, n)


def best_parameter(instance: ClusteringInstance, family: MergeFamily, seed: int = 0):
    """Parameter point, loss and leaf node of a minimum-loss execution-tree
    leaf (ties: lexicographically smallest merge sequence)."""
    if instance.target is None or instance.k is None:
        raise ValueError("instance needs a target clustering and k")
    root = build_execution_tree(instance, family, seed=seed)
    best = None
    for leaf in sorted(root.leaves(), key=lambda l: l.merges):
        tree = ClusterTree.from_merges(instance.n_points, leaf.merges)
        loss = hamming_loss(tree, instance.target, instance.k)
        if best is None or loss < best[1]:
            best = (leaf.region.witness, loss, leaf)
    return best


# --------------------------------------------------------------------------
# Synthetic benchmark datasets
# --------------------------------------------------------------------------

DATASET_NAMES = ("Rings", "Disks", "Outliers", "BalancedOutliers")
POINTS_PER_COMPONENT = 50


def _dataset_floats(name: str, seed: int):
    rng = np.random.default_rng(seed)
    n = POINTS_PER_COMPONENT
    if name == "Rings":
        pts, labels = [], []
        for cluster, radius in enumerate((0.4, 0.8)):
            theta = rng.uniform(0.0, 2.0 * np.pi, n)
            pts.extend(zip(radius * np.cos(theta), radius * np.sin(theta)))
            labels.extend([cluster] * n)
        return pts, labels, 2
    if name == "Disks":
        pts, labels = [], []
        for cluster, cy in enumerate((0.4, -0.4)):
            r = 0.4 * np.sqrt(rng.uniform(0.0, 1.0, n))
            theta = rng.uniform(0.0, 2.0 * np.pi, n)
            pts.extend(zip(1.5 + r * np.cos(theta), cy + r * np.sin(theta)))
            labels.extend([cluster] * n)
        return pts, labels, 2
    if name == "Outliers":
        # The side-by-side squares form one target cluster, the line the
        # other; the stray points join the cluster of the nearest component.
        pts, labels = [], []
        for cx, cy in ((0.5, 0.5), (1.7, 0.5)):
            xs = rng.uniform(cx - 0.5, cx + 0.5, n)
            ys = rng.uniform(cy - 0.5, cy + 0.5, n)
            pts.extend(zip(xs, ys))
            labels.extend([0] * n)
        xs = rng.uniform(0.6, 1.6, n)
        pts.extend(zip(xs, np.full(n, 3.0)))
        labels.extend([1] * n)
        pts.append((1.4, 2.0))
        labels.append(1)
        pts.append((3.5, 0.6))
        labels.append(0)
        return pts, labels, 2
    if name == "BalancedOutliers":
        pts, labels = [], []
        for cluster, (cx, cy) in enumerate(((1.1, 1.8), (1.7, 0.5))):
            xs = rng.uniform(cx - 0.5, cx + 0.5, n)
            ys = rng.uniform(cy - 0.5, cy + 0.5, n)
            pts.extend(zip(xs, ys))
            labels.extend([cluster] * n)
        pts.append((0.0, 0.0))
        labels.append(1)
        pts.append((3.2, 0.5))
        labels.append(1)
        return pts, labels, 2
    raise ValueError(f"unknown dataset {name!r}")


def generate_dataset(name: str, seed: int, metric_names=("euclidean",)) -> ClusteringInstance:
    """Synthetic clustering instance (coordinates snapped to rationals with
    denominator 10^6 so all downstream geometry stays exact).

    Pass metric_names=() to skip the distance tables when only the points and
    target are needed (e.g. for the float benchmark path).
    """
    pts, labels, k = _dataset_floats(name, seed)
    points = tuple(tuple(snap(c) for c in p) for p in pts)
    target = [set() for _ in range(k)]
    for i, lab in enumerate(labels):
        target[lab].add(i)
    if metric_names:
        return ClusteringInstance.from_points(points, metric_names, target=target, k=k)
    return ClusteringInstance(
        metrics={},
        points=points,
        target=tuple(frozenset(t) for t in target),
        k=k,
    )


# --------------------------------------------------------------------------
# Float greedy path for large fixed-parameter runs
# --------------------------------------------------------------------------

def linkage_tree_float(dist: np.ndarray, linkage: str) -> ClusterTree:
    """Greedy agglomeration on a float distance matrix, one linkage rule.

    Single/complete recombine previous scores (Lance-Williams style); the
    other rules recompute the new cluster's row from the point distances.
    Only the upper triangle of the score matrix is live.
    """
    n = dist.shape[0]
    clusters: dict = {i: (i,) for i in range(n)}
    score = np.full((n, n), np.inf)
    iu = np.triu_indices(n, 1)
    score[iu] = dist[iu]
    merges = []
    for _ in range(n - 1):
        flat = int(np.argmin(score))
        i, j = divmod(flat, n)
        a, b = clusters[i], clusters[j]
        merges.append((a, b) if a <= b else (b, a))
        merged = tuple(sorted(a + b))
        others = [o for o in clusters if o not in (i, j)]
        old_i = {o: score[min(o, i), max(o, i)] for o in others}
        old_j = {o: score[min(o, j), max(o, j)] for o in others}
        clusters[i] = merged
        del clusters[j]
        for idx in (i, j):
            score[idx, :] = np.inf
            score[:, idx] = np.inf
        for o in others:
            lo, hi = (o, i) if o < i else (i, o)
            if linkage == "single":
                score[lo, hi] = min(old_i[o], old_j[o])
            elif linkage == "complete":
                score[lo, hi] = max(old_i[o], old_j[o])
            else:
                score[lo, hi] = _float_merge_value(dist, linkage, merged, clusters[o])
    return ClusterTree.from_merges(n, merges)


def _float_merge_value(dist, linkage, cluster_a, cluster_b):
    block = dist[np.ix_(cluster_a, cluster_b)].ravel()
    if linkage == "median":
        idx = (block.size - 1) // 2
        return np.partition(block, idx)[idx]
    if linkage == "average":
        return block.mean()
    if linkage == "mediod":
        ma = cluster_a[int(np.argmin(dist[np.ix_(cluster_a, cluster_a)].sum(axis=1)))]
        mb = cluster_b[int(np.argmin(dist[np.ix_(cluster_b, cluster_b)].sum(axis=1)))]
        return dist[ma, mb]
    raise ValueError(linkage)


def pairwise_euclidean(points: np.ndarray) -> np.ndarray:
    diff = points[:, None, :] - points[None, :, :]
    return np.sqrt((diff ** 2).sum(axis=-1))


def linkage_accuracy(points, labels, k: int, linkage: str) -> float:
    """Hamming accuracy (1 - loss) of one fixed linkage rule on float data."""
    pts = np.asarray(points, dtype=float)
    dist = pairwise_euclidean(pts)
    tree = linkage_tree_float(dist, linkage)
    target = [set() for _ in range(k)]
    for i, lab in enumerate(labels):
        target[lab].add(i)
    return float(1 - hamming_loss(tree, [frozenset(t) for t in target], k))


def mean_linkage_accuracy(name: str, linkage: str, n_seeds: int = 100, base_seed: int = 0) -> float:
    """Mean Hamming accuracy (percent) of a linkage rule over fresh draws."""
    total = 0.0
    for s in range(n_seeds):
        pts, labels, k = _dataset_floats(name, base_seed + s)
        total += linkage_accuracy(pts, labels, k, linkage)
    return 100.0 * total / n_seeds
