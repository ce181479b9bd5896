"""Parametric global pairwise sequence alignment.

A declarative DP family assigns each subproblem a case, and each case a small
set of update terms (an integer feature-weight vector, a referenced
subproblem, an alignment transform).  All costs are homogeneous linear
functions of the feature-cost vector rho, so for a fixed sequence pair the
parameter space splits into convex cones on which the optimal alignment is
constant.

`build_execution_dag` computes that decomposition bottom-up: per subproblem,
overlay the referenced subproblems' partitions, split each overlay cell by
the term-comparison hyperplanes, then merge cells whose optimal alignment is
identical.  `ray_search_2d` is the two-feature fast path that walks the fan
of angular sectors with one DP solve per probe point.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Sequence

from .geometry import (
    ConvexCell,
    GeometryError,
    Halfspace,
    box_cell,
    clarkson_reduce,
    dot,
    find_interior_point,
)
from .rationals import Rational, ZERO, as_vector
from .regions import (
    AffineForm,
    AffineMinProblem,
    Subdivision,
    cells_share_facet,
    compute_subdivision,
)

SPACE = "-"

TRANSFORMS = ("extend-match", "extend-mismatch", "extend-space-1", "extend-space-2", "identity")


# --------------------------------------------------------------------------
# Alignments and features
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Alignment:
    """Pair of equal-length space-extended strings plus feature counts."""

    t1: str
    t2: str
    counts: tuple

    def __post_init__(self):
        if len(self.t1) != len(self.t2):
            raise ValueError("alignment rows must have equal length")
        if any(a == SPACE and b == SPACE for a, b in zip(self.t1, self.t2)):
            raise ValueError("no column may hold two spaces")

    def cost(self, rho):
        return dot(self.counts, rho)

    @property
    def key(self):
        return (self.t1, self.t2)


def strip_spaces(t: str) -> str:
    return t.replace(SPACE, "")


def count_feature(name: str, t1: str, t2: str) -> int:
    if name == "match":
        return sum(1 for a, b in zip(t1, t2) if a == b and a != SPACE)
    if name == "mismatch":
        return sum(1 for a, b in zip(t1, t2) if a != b and a != SPACE and b != SPACE)
    if name == "space":
        return t1.count(SPACE) + t2.count(SPACE)
    if name == "gap":
        return _runs(t1) + _runs(t2)
    raise ValueError(f"unknown feature {name!r}")


def _runs(t: str) -> int:
    runs = 0
    prev = None
    for ch in t:
        if ch == SPACE and prev != SPACE:
            runs += 1
        prev = ch
    return runs


def feature_counts(features: Sequence[str], t1: str, t2: str) -> tuple:
    return tuple(count_feature(name, t1, t2) for name in features)


def enumerate_alignments(s1: str, s2: str):
    """All global alignments of the two strings (brute-force oracle)."""

    def rec(i, j):
        if i == 0 and j == 0:
            yield "", ""
            return
        if i > 0 and j > 0:
            for a, b in rec(i - 1, j - 1):
                yield a + s1[i - 1], b + s2[j - 1]
        if j > 0:
            for a, b in rec(i, j - 1):
                yield a + SPACE, b + s2[j - 1]
        if i > 0:
            for a, b in rec(i - 1, j):
                yield a + s1[i - 1], b + SPACE
    yield from rec(len(s1), len(s2))


# --------------------------------------------------------------------------
# Declarative DP specifications
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class TermSpec:
    weight: tuple  # integer feature-weight vector
    ref_table: str
    di: int
    dj: int
    transform: str


@dataclass(frozen=True)
class CaseSpec:
    table: str
    when: str  # "always" | "chars-equal" | "chars-differ"
    terms: tuple


@dataclass(frozen=True)
class AlignmentDPSpec:
    """Cases, update terms and base cases of one parametric alignment DP.

    Multiple logical tables per index pair are allowed (e.g. split by the
    kind of edit the alignment ends with); `root_table` names the one whose
    value at (m, n) is the answer.  Subproblems are ordered by nondecreasing
    i + j, with same-cell references allowed only toward earlier tables.
    """

    name: str
    features: tuple
    cases: tuple
    tables: tuple = ("main",)
    root_table: Optional[str] = None
    base_origin: tuple = ("main",)
    base_s1_prefix: Optional[tuple] = None  # (table, per-char weight vector)
    base_s2_prefix: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "features", tuple(self.features))
        object.__setattr__(self, "tables", tuple(self.tables))
        object.__setattr__(self, "cases", tuple(self.cases))
        object.__setattr__(self, "base_origin", tuple(self.base_origin))
        if self.root_table is None:
            object.__setattr__(self, "root_table", self.tables[-1])
        rank = {t: r for r, t in enumerate(self.tables)}
        if self.root_table not in rank:
            raise ValueError("root table is not declared")
        d = self.dimension
        for case in self.cases:
            if case.table not in rank:
                raise ValueError(f"case for undeclared table {case.table!r}")
            if case.when not in ("always", "chars-equal", "chars-differ"):
                raise ValueError(f"unknown case condition {case.when!r}")
            for term in case.terms:
                if len(term.weight) != d:
                    raise ValueError("term weight length must match feature count")
                if term.transform not in TRANSFORMS:
                    raise ValueError(f"unknown transform {term.transform!r}")
                if term.ref_table not in rank:
                    raise ValueError(f"term references undeclared table {term.ref_table!r}")
                if term.di > 0 or term.dj > 0:
                    raise ValueError("references must not look ahead")
                if term.di == 0 and term.dj == 0 and rank[term.ref_table] >= rank[case.table]:
                    raise ValueError("same-cell references must go to an earlier table")

    @property
    def dimension(self) -> int:
        return len(self.features)

    def case_for(self, table: str, s1: str, s2: str, i: int, j: int) -> Optional[CaseSpec]:
        for case in self.cases:
            if case.table != table:
                continue
            if case.when == "always":
                return case
            if i >= 1 and j >= 1:
                equal = s1[i - 1] == s2[j - 1]
                if case.when == ("chars-equal" if equal else "chars-differ"):
                    return case
        return None

    def base_solution(self, s1: str, s2: str, table: str, i: int, j: int):
        if i == 0 and j == 0 and table in self.base_origin:
            return Alignment("", "", (0,) * self.dimension)
        if j == 0 and i > 0 and self.base_s1_prefix and self.base_s1_prefix[0] == table:
            w = self.base_s1_prefix[1]
            return Alignment(s1[:i], SPACE * i, tuple(i * c for c in w))
        if i == 0 and j > 0 and self.base_s2_prefix and self.base_s2_prefix[0] == table:
            w = self.base_s2_prefix[1]
            return Alignment(SPACE * j, s2[:j], tuple(j * c for c in w))
        return None

    def to_json(self) -> dict:
        out = {
            "schema_version": 1,
            "name": self.name,
            "features": list(self.features),
            "tables": list(self.tables),
            "root": self.root_table,
            "cases": [
                {
                    "table": c.table,
                    "when": c.when,
                    "terms": [
                        {
                            "w": list(t.weight),
                            "ref": {"table": t.ref_table, "di": t.di, "dj": t.dj},
                            "transform": t.transform,
                        }
                        for t in c.terms
                    ],
                }
                for c in self.cases
            ],
            "base": {"origin": list(self.base_origin)},
        }
        if self.base_s1_prefix:
            out["base"]["s1_prefix"] = {"table": self.base_s1_prefix[0], "w_per_char": list(self.base_s1_prefix[1])}
        if self.base_s2_prefix:
            out["base"]["s2_prefix"] = {"table": self.base_s2_prefix[0], "w_per_char": list(self.base_s2_prefix[1])}
        return out

    @classmethod
    def from_json(cls, data: dict) -> "AlignmentDPSpec":
        cases = tuple(
            CaseSpec(
                table=c.get("table", "main"),
                when=c["when"],
                terms=tuple(
                    TermSpec(
                        weight=tuple(t["w"]),
                        ref_table=t["ref"].get("table", "main"),
                        di=t["ref"]["di"],
                        dj=t["ref"]["dj"],
                        transform=t["transform"],
                    )
                    for t in c["terms"]
                ),
            )
            for c in data["cases"]
        )
        base = data.get("base", {})
        s1p = base.get("s1_prefix")
        s2p = base.get("s2_prefix")
        return cls(
            name=data.get("name", "custom"),
            features=tuple(data["features"]),
            cases=cases,
            tables=tuple(data.get("tables", ["main"])),
            root_table=data.get("root"),
            base_origin=tuple(base.get("origin", ["main"])),
            base_s1_prefix=(s1p["table"], tuple(s1p["w_per_char"])) if s1p else None,
            base_s2_prefix=(s2p["table"], tuple(s2p["w_per_char"])) if s2p else None,
        )


def mismatch_space_spec() -> AlignmentDPSpec:
    """Two features: mismatches and spaces (one table).

    On unequal characters the mismatch term precedes the two space terms,
    with the space consuming the second sequence's character first; ties at
    equal cost resolve in that order.
    """
    return AlignmentDPSpec(
        name="mismatch-space",
        features=("mismatch", "space"),
        tables=("main",),
        base_origin=("main",),
        base_s1_prefix=("main", (0, 1)),
        base_s2_prefix=("main", (0, 1)),
        cases=(
            CaseSpec(
                "main",
                "chars-equal",
                (TermSpec((0, 0), "main", -1, -1, "extend-match"),),
            ),
            CaseSpec(
                "main",
                "chars-differ",
                (
                    TermSpec((1, 0), "main", -1, -1, "extend-mismatch"),
                    TermSpec((0, 1), "main", 0, -1, "extend-space-1"),
                    TermSpec((0, 1), "main", -1, 0, "extend-space-2"),
                ),
            ),
        ),
    )


def mismatch_space_gap_spec() -> AlignmentDPSpec:
    """Three features: mismatches, spaces and gaps (affine gap costs).

    Three tables track the edit kind the alignment ends with (substitution,
    insertion into the first row, deletion); a fourth aggregates their
    minimum.  Opening a gap pays the gap weight once, extending it only pays
    per space.
    """
    sub_terms = lambda w, tag: tuple(TermSpec(w, t, -1, -1, tag) for t in ("sub", "ins", "del"))
    return AlignmentDPSpec(
        name="mismatch-space-gap",
        features=("mismatch", "space", "gap"),
        tables=("sub", "ins", "del", "all"),
        root_table="all",
        base_origin=("sub",),
        cases=(
            CaseSpec("sub", "chars-equal", sub_terms((0, 0, 0), "extend-match")),
            CaseSpec("sub", "chars-differ", sub_terms((1, 0, 0), "extend-mismatch")),
            CaseSpec(
                "ins",
                "always",
                (
                    TermSpec((0, 1, 1), "sub", 0, -1, "extend-space-1"),
                    TermSpec((0, 1, 0), "ins", 0, -1, "extend-space-1"),
                    TermSpec((0, 1, 1), "del", 0, -1, "extend-space-1"),
                ),
            ),
            CaseSpec(
                "del",
                "always",
                (
                    TermSpec((0, 1, 1), "sub", -1, 0, "extend-space-2"),
                    TermSpec((0, 1, 1), "ins", -1, 0, "extend-space-2"),
                    TermSpec((0, 1, 0), "del", -1, 0, "extend-space-2"),
                ),
            ),
            CaseSpec(
                "all",
                "always",
                (
                    TermSpec((0, 0, 0), "sub", 0, 0, "identity"),
                    TermSpec((0, 0, 0), "ins", 0, 0, "identity"),
                    TermSpec((0, 0, 0), "del", 0, 0, "identity"),
                ),
            ),
        ),
    )


PRESETS = {
    "mismatch-space": mismatch_space_spec,
    "mismatch-space-gap": mismatch_space_gap_spec,
}


def get_preset(name: str) -> AlignmentDPSpec:
    try:
        return PRESETS[name]()
    except KeyError:
        raise ValueError(f"unknown preset {name!r}") from None


def _apply_transform(transform: str, ref: Alignment, weight, s1, s2, i, j) -> Alignment:
    counts = tuple(c + w for c, w in zip(ref.counts, weight))
    if transform == "identity":
        return Alignment(ref.t1, ref.t2, counts)
    if transform in ("extend-match", "extend-mismatch"):
        return Alignment(ref.t1 + s1[i - 1], ref.t2 + s2[j - 1], counts)
    if transform == "extend-space-1":
        return Alignment(ref.t1 + SPACE, ref.t2 + s2[j - 1], counts)
    if transform == "extend-space-2":
        return Alignment(ref.t1 + s1[i - 1], ref.t2 + SPACE, counts)
    raise ValueError(transform)


# --------------------------------------------------------------------------
# Node graph shared by the scalar DP and the execution DAG
# --------------------------------------------------------------------------

def _reachable_nodes(spec: AlignmentDPSpec, s1: str, s2: str) -> list:
    """Nodes needed for the root subproblem, topologically ordered."""
    rank = {t: r for r, t in enumerate(spec.tables)}
    root = (spec.root_table, len(s1), len(s2))
    seen = set()
    stack = [root]
    while stack:
        node = stack.pop()
        if node in seen:
            continue
        seen.add(node)
        table, i, j = node
        if spec.base_solution(s1, s2, table, i, j) is not None:
            continue
        case = spec.case_for(table, s1, s2, i, j)
        if case is None:
            continue
        for term in case.terms:
            ri, rj = i + term.di, j + term.dj
            if ri >= 0 and rj >= 0:
                stack.append((term.ref_table, ri, rj))
    return sorted(seen, key=lambda node: (node[1] + node[2], rank[node[0]]))


def _valid_terms(spec, s1, s2, node, memo) -> list:
    table, i, j = node
    case = spec.case_for(table, s1, s2, i, j)
    if case is None:
        return []
    out = []
    for term in case.terms:
        ref = (term.ref_table, i + term.di, j + term.dj)
        if ref[1] >= 0 and ref[2] >= 0 and memo.get(ref) is not None:
            out.append((term, ref))
    return out


# --------------------------------------------------------------------------
# Scalar DP (single parameter point, or lexicographic over several)
# --------------------------------------------------------------------------

def dp_solve_multi(spec: AlignmentDPSpec, s1: str, s2: str, points: Sequence):
    """DP with costs compared lexicographically over several points.

    With one point this is the plain DP; with a second point it resolves ties
    at the first as the limit behavior toward the second, which is how the
    ray search probes sector interiors adjacent to a boundary.
    """
    pts = [as_vector(p) for p in points]
    if any(len(p) != spec.dimension for p in pts):
        raise GeometryError("parameter dimension mismatch")
    memo: dict = {}
    order = _reachable_nodes(spec, s1, s2)
    for node in order:
        table, i, j = node
        base = spec.base_solution(s1, s2, table, i, j)
        if base is not None:
            memo[node] = (tuple(dot(base.counts, p) for p in pts), base)
            continue
        best = None
        for term, ref in _valid_terms(spec, s1, s2, node, memo):
            ref_cost, ref_align = memo[ref]
            cost = tuple(rc + dot(term.weight, p) for rc, p in zip(ref_cost, pts))
            if best is None or cost < best[0]:
                best = (cost, term, ref_align)
        if best is None:
            memo[node] = None
            continue
        cost, term, ref_align = best
        memo[node] = (cost, _apply_transform(term.transform, ref_align, term.weight, s1, s2, i, j))
    root = memo.get((spec.root_table, len(s1), len(s2)))
    if root is None:
        raise ValueError("the DP has no solution for this input")
    return root


def dp_solve(spec: AlignmentDPSpec, s1: str, s2: str, rho):
    """Exact minimum alignment cost and its canonical optimal alignment.

    Term ties break toward the lowest term index, consistently with the
    region machinery.
    """
    cost, alignment = dp_solve_multi(spec, s1, s2, [rho])
    return cost[0], alignment


# --------------------------------------------------------------------------
# Partitions of the parameter domain
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class AlignedRegion:
    """One behavior region: an optimal alignment and its convex pieces
    (almost always exactly one piece)."""

    alignment: Alignment
    pieces: tuple


@dataclass(frozen=True, eq=False)
class AlignmentPartition:
    parent: ConvexCell
    regions: tuple
    adjacency: Optional[frozenset] = None  # pairs of region indices

    @property
    def piece_count(self) -> int:
        return sum(len(r.pieces) for r in self.regions)

    def region_at(self, point) -> AlignedRegion:
        for region in self.regions:
            if any(cell.contains(point) for cell in region.pieces):
                return region
        raise ValueError("point outside every region")

    def boundary_keys(self) -> frozenset:
        """Distinct non-box facet lines, sign-canonicalized."""
        box_keys = {h.key() for h in self.parent.constraints}
        out = set()
        for region in self.regions:
            for cell in region.pieces:
                for h in cell.constraints:
                    if h.key() in box_keys or h.flipped().key() in box_keys:
                        continue
                    lead = next(c for c in h.normal if c != 0)
                    if lead < 0:
                        out.add(h.flipped().key())
                    else:
                        out.add(h.key())
        return frozenset(out)

    def to_json(self) -> dict:
        cells = []
        for region in self.regions:
            for cell in region.pieces:
                entry = {"label": [region.alignment.t1, region.alignment.t2]}
                entry.update(cell.to_json(encode_label=_encode_alignment_label))
                cells.append(entry)
        cells.sort(key=lambda e: (e["label"], json.dumps(e["constraints"], sort_keys=True)))
        adjacency = []
        if self.adjacency is not None:
            for a, b in self.adjacency:
                pair = sorted(
                    [
                        [self.regions[a].alignment.t1, self.regions[a].alignment.t2],
                        [self.regions[b].alignment.t1, self.regions[b].alignment.t2],
                    ]
                )
                adjacency.append(pair)
        return {
            "parent": self.parent.to_json(),
            "cells": cells,
            "adjacency": sorted(adjacency),
        }


def _encode_alignment_label(label):
    if isinstance(label, Alignment):
        return [label.t1, label.t2]
    return label


def default_domain(dimension: int) -> ConvexCell:
    """Nonnegative orthant cut to the unit box (costs are homogeneous, so
    scale is irrelevant; redundancy removal needs bounded cells)."""
    return box_cell(0, 1, dimension)


# --------------------------------------------------------------------------
# Overlay
# --------------------------------------------------------------------------

def overlay_pieces(piece_lists: Sequence[Sequence[ConvexCell]], seed: int = 0) -> list:
    """All full-dimensional intersections of one cell from each list, as
    (index tuple, reduced cell) pairs.  Empty tuples are pruned by an
    interior-point LP on each partial prefix before any reduction runs."""
    out = []

    def rec(level, prefix, constraints, witness):
        if level == len(piece_lists):
            kept = clarkson_reduce(constraints, witness, seed)
            out.append((prefix, ConvexCell(len(witness), tuple(kept), witness=witness)))
            return
        for idx, cell in enumerate(piece_lists[level]):
            rows = constraints + list(cell.constraints)
            w = find_interior_point(rows, seed)
            if w is not None:
                rec(level + 1, prefix + (idx,), rows, w)

    rec(0, (), [], None)
    return out


def compute_overlay(subdivisions: Sequence[Subdivision], seed: int = 0) -> Subdivision:
    """Common refinement of several subdivisions of the same parent; cell
    labels are the tuples of source-cell labels."""
    if not subdivisions:
        raise GeometryError("need at least one subdivision")
    parent = subdivisions[0].parent
    parent_keys = parent.constraint_keys()
    for sub in subdivisions[1:]:
        if sub.parent.constraint_keys() != parent_keys:
            raise GeometryError("subdivisions cover different parents")
    labels = [sorted(sub.cells) for sub in subdivisions]
    piece_lists = [[sub.cells[l] for l in labs] for sub, labs in zip(subdivisions, labels)]
    cells = {}
    for prefix, cell in overlay_pieces(piece_lists, seed):
        label = tuple(labs[i] for labs, i in zip(labels, prefix))
        cells[label] = cell
    keys = sorted(cells)
    adjacency = set()
    for a_idx in range(len(keys)):
        for b_idx in range(a_idx + 1, len(keys)):
            if cells_share_facet(cells[keys[a_idx]], cells[keys[b_idx]], seed):
                adjacency.add((keys[a_idx], keys[b_idx]))
    return Subdivision(parent, cells, frozenset(adjacency))


# --------------------------------------------------------------------------
# Degeneracy resolution (merge equal-alignment cells)
# --------------------------------------------------------------------------

def resolve_degeneracies(partition: AlignmentPartition, seed: int = 0) -> AlignmentPartition:
    pieces = []
    for region in partition.regions:
        for cell in region.pieces:
            pieces.append((cell, region.alignment))
    return _resolve_pieces(pieces, partition.parent, seed)


def _resolve_pieces(pieces: list, parent: ConvexCell, seed: int) -> AlignmentPartition:
    """Group pieces by alignment; when all groups carry distinct feature
    counts (the regular situation) each group's region is convex and gets
    rebuilt as a single minimal cell, which also yields facet adjacency.
    Groups with colliding counts cannot be separated by cost hyperplanes and
    are kept as connected components of their original pieces."""
    groups: dict = {}
    for cell, alignment in pieces:
        groups.setdefault(alignment.key, (alignment, []))[1].append(cell)
    counts_of = {key: align.counts for key, (align, _) in groups.items()}
    if len(set(counts_of.values())) == len(groups):
        keys = sorted(groups)
        forms = {key: AffineForm(tuple(Rational(c) for c in counts_of[key]), 0) for key in keys}
        regions = []
        neighbor_sets = []
        for key in keys:
            candidates = []
            base = forms[key]
            for other in keys:
                if other == key:
                    continue
                normal = tuple(a - b for a, b in zip(base.coeffs, forms[other].coeffs))
                candidates.append(Halfspace(normal, 0, label=other))
            rows = list(parent.constraints) + candidates
            witness = find_interior_point(rows, seed)
            assert witness is not None, "a discovered alignment lost its region"
            kept = clarkson_reduce(rows, witness, seed)
            cell = ConvexCell(parent.dimension, tuple(kept), witness=witness)
            regions.append(AlignedRegion(groups[key][0], (cell,)))
            neighbor_sets.append({h.label for h in kept if h.label is not None})
        index = {key: i for i, key in enumerate(keys)}
        adjacency = set()
        for i, nbs in enumerate(neighbor_sets):
            for other in nbs:
                adjacency.add(tuple(sorted((i, index[other]))))
        return AlignmentPartition(parent, tuple(regions), frozenset(adjacency))
    # Count collision: connected components of equal-alignment pieces.
    regions = []
    for key in sorted(groups):
        alignment, cells = groups[key]
        for component in _facet_components(cells, seed):
            regions.append(AlignedRegion(alignment, tuple(component)))
    return AlignmentPartition(parent, tuple(regions), None)


def _facet_components(cells: list, seed: int) -> list:
    n = len(cells)
    parent_idx = list(range(n))

    def find(x):
        while parent_idx[x] != x:
            parent_idx[x] = parent_idx[parent_idx[x]]
            x = parent_idx[x]
        return x

    for i in range(n):
        for j in range(i + 1, n):
            if find(i) != find(j) and cells_share_facet(cells[i], cells[j], seed):
                parent_idx[find(i)] = find(j)
    components: dict = {}
    for i in range(n):
        components.setdefault(find(i), []).append(cells[i])
    return list(components.values())


# --------------------------------------------------------------------------
# The compact execution DAG
# --------------------------------------------------------------------------

def build_execution_dag(
    spec: AlignmentDPSpec,
    s1: str,
    s2: str,
    domain: Optional[ConvexCell] = None,
    seed: int = 0,
    keep_all: bool = False,
):
    """Partition of the parameter domain by optimal alignment of (s1, s2).

    Processes subproblems in topological order; each node overlays its
    referenced partitions, subdivides every overlay cell by the term
    comparisons (with subproblem costs fixed per cell), and merges cells
    whose alignment agrees.  With keep_all=True the per-node partitions are
    returned as well.
    """
    if domain is None:
        domain = default_domain(spec.dimension)
    memo: dict = {}
    for node in _reachable_nodes(spec, s1, s2):
        memo[node] = _node_partition(spec, s1, s2, node, memo, domain, seed)
    final = memo[(spec.root_table, len(s1), len(s2))]
    if final is None:
        raise ValueError("the DP has no solution for this input")
    if keep_all:
        return final, memo
    return final


def _node_partition(spec, s1, s2, node, memo, domain, seed):
    table, i, j = node
    base = spec.base_solution(s1, s2, table, i, j)
    if base is not None:
        return AlignmentPartition(domain, (AlignedRegion(base, (domain,)),), frozenset())
    terms = _valid_terms(spec, s1, s2, node, memo)
    if not terms:
        return None
    if len(terms) == 1:
        term, ref = terms[0]
        regions = tuple(
            AlignedRegion(
                _apply_transform(term.transform, r.alignment, term.weight, s1, s2, i, j),
                r.pieces,
            )
            for r in memo[ref].regions
        )
        return AlignmentPartition(domain, regions, memo[ref].adjacency)

    ref_nodes = []
    for term, ref in terms:
        if ref not in ref_nodes:
            ref_nodes.append(ref)
    piece_lists = []
    piece_aligns = []
    for ref in ref_nodes:
        cells = []
        aligns = []
        for region in memo[ref].regions:
            for cell in region.pieces:
                cells.append(cell)
                aligns.append(region.alignment)
        piece_lists.append(cells)
        piece_aligns.append(aligns)

    pieces = []
    for prefix, ocell in overlay_pieces(piece_lists, seed):
        ref_alignment = {
            ref: piece_aligns[r][prefix[r]] for r, ref in enumerate(ref_nodes)
        }
        totals = []
        for term, ref in terms:
            counts = ref_alignment[ref].counts
            totals.append(tuple(Rational(c + w) for c, w in zip(counts, term.weight)))

        def extended(idx, cell):
            term, ref = terms[idx]
            alignment = _apply_transform(
                term.transform, ref_alignment[ref], term.weight, s1, s2, i, j
            )
            return (cell, alignment)

        if len(set(totals)) == 1:
            pieces.append(extended(0, ocell))
            continue
        forms = {idx: AffineForm(t, 0) for idx, t in enumerate(totals)}
        sub = compute_subdivision(ocell, AffineMinProblem(forms), start=ocell.witness, seed=seed)
        for idx in sorted(sub.cells):
            pieces.append(extended(idx, sub.cells[idx]))
    return _resolve_pieces(pieces, domain, seed)


# --------------------------------------------------------------------------
# d = 2 ray search
# --------------------------------------------------------------------------

def ray_search_2d(
    spec: AlignmentDPSpec,
    s1: str,
    s2: str,
    domain: Optional[ConvexCell] = None,
    seed: int = 0,
):
    """Fan of angular sectors of constant optimal alignment (two features).

    All in-model costs are homogeneous (base cases and updates contribute
    rho . w only), so every boundary is a line through the origin and the
    partition is a fan.  Returns (partition, number of DP solves issued).

    Each probe at a candidate boundary either certifies it (the optimum at
    the crossing equals the tied value) or discovers a new alignment wedged
    between the two known ones; the recursion then splits.
    """
    if spec.dimension != 2:
        raise GeometryError("the ray search needs exactly two features")
    if domain is None:
        domain = default_domain(2)
    calls = [0]

    def solve_at(primary, tiebreak=None):
        calls[0] += 1
        pts = [primary] if tiebreak is None else [primary, tiebreak]
        return dp_solve_multi(spec, s1, s2, pts)

    left_pt = (ZERO, Rational(1))
    right_pt = (Rational(1), ZERO)
    _, left_align = solve_at(left_pt, right_pt)
    _, right_align = solve_at(right_pt, left_pt)

    if left_align.counts == right_align.counts:
        # One cost class covers the quadrant; with equal strings this is one
        # region, and cost-tied distinct strings cannot be separated at all.
        partition = AlignmentPartition(domain, (AlignedRegion(left_align, (domain,)),), frozenset())
        return partition, calls[0]

    def chord_point(t):
        return (t, 1 - t)

    def crossing(a_counts, b_counts):
        g = tuple(Rational(x - y) for x, y in zip(a_counts, b_counts))
        # g . (t, 1-t) = 0  =>  t = g2 / (g2 - g1)
        return g, g[1] / (g[1] - g[0])

    def recurse(tl, align_l, tr, align_r):
        g, tm = crossing(align_l.counts, align_r.counts)
        assert tl < tm < tr, "boundary crossing escaped the probe interval"
        m = chord_point(tm)
        cost, align_m = solve_at(m)
        tied_value = dot(align_l.counts, m)
        if cost[0] < tied_value:
            return (
                recurse(tl, align_l, tm, align_m)
                + [align_m]
                + recurse(tm, align_m, tr, align_r)
            )
        return []  # boundary certified at tm

    inner = recurse(ZERO, left_align, Rational(1), right_align)
    ordered = [left_align] + inner + [right_align]
    # Deduplicate consecutive repeats that certify shared boundaries.
    sequence = [ordered[0]]
    for align in ordered[1:]:
        if align.counts != sequence[-1].counts:
            sequence.append(align)

    boundaries = []
    for a, b in zip(sequence, sequence[1:]):
        g, _ = crossing(a.counts, b.counts)
        boundaries.append(g)
    regions = []
    for k, align in enumerate(sequence):
        rows = list(domain.constraints)
        if k < len(boundaries):
            rows.append(Halfspace(boundaries[k], 0))
        if k > 0:
            rows.append(Halfspace(tuple(-c for c in boundaries[k - 1]), 0))
        witness = find_interior_point(rows, seed)
        assert witness is not None, "empty ray-search sector"
        kept = clarkson_reduce(rows, witness, seed)
        regions.append(AlignedRegion(align, (ConvexCell(2, tuple(kept), witness=witness),)))
    adjacency = frozenset((k, k + 1) for k in range(len(regions) - 1))
    return AlignmentPartition(domain, tuple(regions), adjacency), calls[0]
