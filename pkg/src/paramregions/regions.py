"""Implicit breadth-first enumeration of the cells of a convex subdivision.

A domain supplies a `CellProblem`: the behavior label at a parameter point,
and candidate halfspaces "my objective <= alternative's objective" labeled by
the alternative.  From one seed label the enumerator walks the region
adjacency graph, computing each cell once via redundancy removal; the labels
attached to retained non-parent constraints are exactly the neighbors.

The BFS frontier is sequential; the per-label cell computations are pure and
independent (safe to dispatch concurrently if a caller wants to).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Any, Optional, Protocol, Sequence

from .geometry import (
    ConvexCell,
    GeometryError,
    Halfspace,
    _clarkson_indices,
    dot,
    find_interior_point,
)
from .rationals import as_rational, as_vector


class DegenerateCellError(Exception):
    """A cell with empty interior (lower-dimensional); callers skip these."""


@dataclass(frozen=True)
class AffineForm:
    """coeffs . x + const, the universal objective shape on a cell."""

    coeffs: tuple
    const: Any

    def __post_init__(self):
        object.__setattr__(self, "coeffs", as_vector(self.coeffs))
        object.__setattr__(self, "const", as_rational(self.const))

    def value(self, point):
        return dot(self.coeffs, point) + self.const

    def minus(self, other: "AffineForm"):
        return (
            tuple(a - b for a, b in zip(self.coeffs, other.coeffs)),
            self.const - other.const,
        )


class CellProblem(Protocol):
    """What a domain must supply for its behavior regions to be enumerated."""

    def seed_label(self, point) -> Any:
        """Behavior at a parameter point (lexicographically smallest on ties)."""

    def candidate_constraints(self, label) -> Optional[list]:
        """Superset of the true facet halfspaces of `label`'s cell, each
        labeled with the neighboring behavior; None if the label can never
        be optimal on a full-dimensional set."""


def dominance_constraints(forms: dict, label) -> Optional[list]:
    """Halfspaces "forms[label] <= forms[other]" for every other behavior.

    Behaviors with identical affine objectives are collapsed onto the
    lexicographically smallest label: for a non-canonical label this returns
    None, and the coincident partners of a canonical label are skipped.
    Returns None as well when some other behavior beats `label` everywhere.
    """
    base = forms[label]
    out = []
    for other, form in sorted(forms.items()):
        if other == label:
            continue
        # base <= other  <=>  (base - other).coeffs . x <= other.const - base.const
        normal, const_diff = base.minus(form)
        offset = -const_diff
        if all(c == 0 for c in normal):
            if offset < 0:
                return None  # strictly dominated everywhere
            if offset == 0 and other < label:
                return None  # coincident; the smaller label is canonical
            continue
        out.append(Halfspace(normal, offset, label=other))
    return out


def argmin_label(forms: dict, point):
    """Lexicographically smallest label among the argmin behaviors at point."""
    best_value = None
    best_label = None
    for label in sorted(forms):
        v = forms[label].value(point)
        if best_value is None or v < best_value:
            best_value, best_label = v, label
    return best_label


class AffineMinProblem:
    """CellProblem for "behavior = argmin of labeled affine objectives".

    This is the shared shape of a clustering merge step and of a DP-term
    choice; domains with custom tie rules supply their own problem instead.
    """

    def __init__(self, forms: dict):
        self.forms = dict(forms)

    def seed_label(self, point):
        return argmin_label(self.forms, point)

    def candidate_constraints(self, label):
        return dominance_constraints(self.forms, label)


@dataclass(frozen=True, eq=False)
class Subdivision:
    """Interior-disjoint convex cells covering a parent cell, keyed by label."""

    parent: ConvexCell
    cells: dict
    adjacency: frozenset
    degenerate: tuple = ()

    def labels_at(self, point, strict: bool = False) -> list:
        return sorted(l for l, c in self.cells.items() if c.contains(point, strict))

    def to_json(self, encode_label=lambda x: x) -> dict:
        cells = [
            {"label": encode_label(label), **self.cells[label].to_json(encode_label)}
            for label in sorted(self.cells)
        ]
        adjacency = sorted([encode_label(a), encode_label(b)] for a, b in self.adjacency)
        return {
            "parent": self.parent.to_json(encode_label),
            "cells": cells,
            "adjacency": adjacency,
        }

    @classmethod
    def from_json(cls, data: dict, decode_label=lambda x: x) -> "Subdivision":
        cells = {}
        for entry in data["cells"]:
            label = decode_label(entry["label"])
            cells[label] = ConvexCell.from_json(entry, decode_label)
        adjacency = frozenset(
            tuple(sorted((decode_label(a), decode_label(b)))) for a, b in data["adjacency"]
        )
        return cls(ConvexCell.from_json(data["parent"], decode_label), cells, adjacency)


def compute_vertex_cell(parent: ConvexCell, label, problem: CellProblem, seed: int = 0):
    """The cell of `label` inside `parent`, plus its neighbor labels.

    Raises DegenerateCellError when the cell has empty interior.
    """
    candidates = problem.candidate_constraints(label)
    if candidates is None:
        raise DegenerateCellError(label)
    rows = list(parent.constraints) + list(candidates)
    witness = find_interior_point(rows, seed)
    if witness is None:
        raise DegenerateCellError(label)
    kept = _clarkson_indices(rows, witness, seed)
    n_parent = len(parent.constraints)
    cell = ConvexCell(parent.dimension, tuple(rows[i] for i in kept), witness=witness)
    neighbors = frozenset(rows[i].label for i in kept if i >= n_parent)
    return cell, neighbors


def compute_subdivision(
    parent: ConvexCell,
    problem: CellProblem,
    start=None,
    seed: int = 0,
    extra_seeds: Sequence = (),
) -> Subdivision:
    """BFS over the implicit region adjacency graph from the behavior at
    `start` (default: the parent's witness).  Visits every full-dimensional
    cell exactly once; empty-interior labels are recorded and skipped."""
    if start is None:
        start = parent.witness
    if start is None:
        raise GeometryError("compute_subdivision needs a start point or parent witness")
    start = as_vector(start)
    if not parent.contains(start):
        raise GeometryError("start point lies outside the parent cell")

    queue = deque(extra_seeds)
    queue.append(problem.seed_label(start))
    cells: dict = {}
    degenerate: set = set()
    pairs: set = set()
    while queue:
        label = queue.popleft()
        if label in cells or label in degenerate:
            continue
        try:
            cell, neighbors = compute_vertex_cell(parent, label, problem, seed)
        except DegenerateCellError:
            degenerate.add(label)
            continue
        cells[label] = cell
        for nb in sorted(neighbors):
            pairs.add(tuple(sorted((label, nb))))
            queue.append(nb)
    adjacency = frozenset(p for p in pairs if p[0] in cells and p[1] in cells)
    return Subdivision(parent, cells, adjacency, tuple(sorted(degenerate)))


def cells_share_facet(a: ConvexCell, b: ConvexCell, seed: int = 0) -> bool:
    """True when the closures of two reduced cells meet in a (d-1)-dim face."""
    b_keys = {h.key() for h in b.constraints}
    for h in a.constraints:
        if h.flipped().key() not in b_keys:
            continue
        rows = [c for c in a.constraints if c.key() != h.key()]
        rows += [c for c in b.constraints if c.key() != h.flipped().key()]
        if _has_relative_interior_on(h, rows, seed):
            return True
    return False


def _has_relative_interior_on(plane: Halfspace, rows, seed: int) -> bool:
    # Eliminate one variable via the plane's equality, then look for a point
    # strictly inside the projected constraints.
    normal, offset = plane.normal, plane.offset
    d = len(normal)
    if d == 1:
        point = (offset / normal[0],)
        return all(h.slack(point) >= 0 for h in rows)
    k = max(range(d), key=lambda j: (abs(normal[j]), -j))
    projected = []
    for h in rows:
        t = h.normal[k] / normal[k]
        new_g = tuple(h.normal[j] - t * normal[j] for j in range(d) if j != k)
        new_b = h.offset - t * offset
        if all(c == 0 for c in new_g):
            if new_b <= 0:
                return False
            continue
        projected.append(Halfspace(new_g, new_b))
    if not projected:
        return True
    return find_interior_point(projected, seed) is not None
