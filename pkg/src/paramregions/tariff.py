"""Two-part tariff pricing regions and revenue maximization.

A tariff charges a fixed fee plus a per-unit price; a menu offers several
such pairs and each buyer sample picks the utility-maximizing pair and
quantity.  Price space splits into convex regions of constant purchase
profile; revenue is affine on each region, so the revenue-maximizing prices
come from one exact LP per region.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .geometry import ConvexCell, Halfspace, solve_lp
from .rationals import Rational, ZERO, as_rational, format_rational
from .regions import Subdivision, compute_subdivision


@dataclass(frozen=True)
class TariffInstance:
    """K units for sale, N valuation samples, and an optional menu length.

    valuations[i][q-1] is sample i's value for q units; the value of buying
    nothing is zero.  Non-monotone valuations are accepted as-is.
    """

    units: int
    valuations: tuple
    menu_length: int = 1
    price_cap: Optional[Rational] = None

    def __post_init__(self):
        vals = tuple(tuple(as_rational(v) for v in row) for row in self.valuations)
        object.__setattr__(self, "valuations", vals)
        if self.units < 1 or self.menu_length < 1:
            raise ValueError("need at least one unit and one tariff")
        if not vals:
            raise ValueError("need at least one valuation sample")
        for row in vals:
            if len(row) != self.units:
                raise ValueError("each sample needs a value for 1..K units")
            if any(v < 0 for v in row):
                raise ValueError("valuations must be nonnegative")
        cap = self.price_cap
        if cap is None:
            cap = max(v for row in vals for v in row) + 1
        object.__setattr__(self, "price_cap", as_rational(cap))
        if self.price_cap <= 0:
            raise ValueError("price cap must be positive")

    @property
    def n_samples(self) -> int:
        return len(self.valuations)

    @property
    def dimension(self) -> int:
        return 2 * self.menu_length

    def value(self, i: int, q: int):
        return ZERO if q == 0 else self.valuations[i][q - 1]

    def price_box(self) -> ConvexCell:
        d = self.dimension
        cap = self.price_cap
        rows = []
        for t in range(d):
            unit = tuple(Rational(1) if j == t else ZERO for j in range(d))
            rows.append(Halfspace(unit, cap))
            rows.append(Halfspace(tuple(-c for c in unit), 0))
        mid = tuple(cap / 2 for _ in range(d))
        return ConvexCell(d, tuple(rows), witness=mid)

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "K": self.units,
            "menu_length": self.menu_length,
            "valuations": [[format_rational(v) for v in row] for row in self.valuations],
            "price_cap": format_rational(self.price_cap),
        }

    @classmethod
    def from_json(cls, data: dict) -> "TariffInstance":
        return cls(
            units=data["K"],
            valuations=tuple(tuple(as_rational(v) for v in row) for row in data["valuations"]),
            menu_length=data.get("menu_length", 1),
            price_cap=as_rational(data["price_cap"]) if "price_cap" in data else None,
        )


def utility(instance: TariffInstance, i: int, q: int, j: int, prices) -> Rational:
    """Buyer utility v_i(q) - (p1^j + p2^j q); zero when q = 0."""
    if q == 0:
        return ZERO
    p1 = prices[2 * (j - 1)]
    p2 = prices[2 * (j - 1) + 1]
    return instance.value(i, q) - p1 - q * p2


def buyer_choice(instance: TariffInstance, i: int, prices) -> tuple:
    """Utility-maximizing (quantity, tariff index) for sample i.

    Ties favor larger quantities, then smaller menu indices (the standard
    seller-favorable convention: the revenue supremum is then attained on
    closed cells).  Buying nothing is canonicalized to tariff index 1.
    """
    best = (ZERO, 0, 1)
    for q in range(1, instance.units + 1):
        for j in range(1, instance.menu_length + 1):
            u = utility(instance, i, q, j, prices)
            bu, bq, bj = best
            if u > bu or (u == bu and (q > bq or (q == bq and j < bj))):
                best = (u, q, j)
    return best[1], best[2]


def _profile_at(instance: TariffInstance, prices) -> tuple:
    return tuple(buyer_choice(instance, i, prices) for i in range(instance.n_samples))


def _zero_price_profile(instance: TariffInstance) -> tuple:
    # At the origin every buyer takes an argmax quantity of its valuation
    # (largest on ties) from the first tariff.
    profile = []
    for i in range(instance.n_samples):
        best_q = 0
        best_v = ZERO
        for q in range(1, instance.units + 1):
            v = instance.value(i, q)
            if v > best_v or (v == best_v and q > best_q):
                best_q, best_v = q, v
        profile.append((best_q, 1))
    return tuple(profile)


def _utility_coeffs(instance: TariffInstance, i: int, q: int, j: int):
    """Utility as (linear coefficients over the price vector, constant)."""
    d = instance.dimension
    coeffs = [ZERO] * d
    if q == 0:
        return tuple(coeffs), ZERO
    coeffs[2 * (j - 1)] = Rational(-1)
    coeffs[2 * (j - 1) + 1] = Rational(-q)
    return tuple(coeffs), instance.value(i, q)


class _ProfileProblem:
    """CellProblem over purchase-profile labels."""

    def __init__(self, instance: TariffInstance):
        self.instance = instance

    def seed_label(self, point):
        return _profile_at(self.instance, point)

    def candidate_constraints(self, label):
        inst = self.instance
        out = []
        for i, (q, j) in enumerate(label):
            cur_coeffs, cur_const = _utility_coeffs(inst, i, q, j)
            for alt_q in range(0, inst.units + 1):
                for alt_j in range(1, inst.menu_length + 1):
                    alt = (alt_q, alt_j) if alt_q > 0 else (0, 1)
                    if alt == (q, j):
                        continue
                    if alt_q == 0 and alt_j > 1:
                        continue  # canonicalized duplicate of (0, 1)
                    alt_coeffs, alt_const = _utility_coeffs(inst, i, alt_q, alt_j)
                    normal = tuple(a - c for a, c in zip(alt_coeffs, cur_coeffs))
                    offset = cur_const - alt_const
                    if all(c == 0 for c in normal):
                        if offset < 0:
                            return None  # the alternative dominates outright
                        continue
                    neighbor = label[:i] + (alt,) + label[i + 1:]
                    out.append(Halfspace(normal, offset, label=neighbor))
        return out


def compute_price_regions(instance: TariffInstance, seed: int = 0) -> Subdivision:
    """Regions of constant buyer behavior over the capped price box.

    Labels are per-sample (quantity, tariff-index) tuples.  The search seeds
    both at the zero-price profile and at the box witness (the former can be
    degenerate when valuations tie; the latter guarantees a full-dimensional
    start, and any start yields the same subdivision by connectivity).
    """
    box = instance.price_box()
    problem = _ProfileProblem(instance)
    return compute_subdivision(
        box,
        problem,
        start=box.witness,
        seed=seed,
        extra_seeds=(_zero_price_profile(instance),),
    )


def single_tariff_regions(instance: TariffInstance, seed: int = 0) -> Subdivision:
    """L = 1 specialization with plain quantity-tuple labels."""
    if instance.menu_length != 1:
        raise ValueError("single_tariff_regions needs menu_length == 1")
    sub = compute_price_regions(instance, seed)
    return _map_labels(sub, lambda label: tuple(q for q, _ in label))


def _map_labels(sub: Subdivision, f) -> Subdivision:
    cells = {}
    for label, cell in sub.cells.items():
        new = f(label)
        cells[new] = ConvexCell(
            cell.dimension,
            tuple(h.relabel(f(h.label)) if h.label is not None else h for h in cell.constraints),
            witness=cell.witness,
        )
    adjacency = frozenset(tuple(sorted((f(a), f(b)))) for a, b in sub.adjacency)
    return Subdivision(sub.parent, cells, adjacency, tuple(sorted(f(l) for l in sub.degenerate)))


def normalize_profile(label) -> tuple:
    """Per-sample (q, j) pairs from either label shape (plain quantities are
    the single-tariff view with j = 1)."""
    return tuple(e if isinstance(e, tuple) else (e, 1) for e in label)


def revenue_form(instance: TariffInstance, label) -> tuple:
    """Revenue on a region as coefficients over the price vector.

    Accepts both label shapes: per-sample (q, j) pairs and the plain
    quantity tuples of the single-tariff view.
    """
    d = instance.dimension
    coeffs = [ZERO] * d
    for entry in label:
        q, j = entry if isinstance(entry, tuple) else (entry, 1)
        if q > 0:
            coeffs[2 * (j - 1)] += 1
            coeffs[2 * (j - 1) + 1] += q
    return tuple(coeffs)


def maximize_revenue(instance: TariffInstance, regions: Subdivision, seed: int = 0):
    """Revenue-maximizing prices over all regions (exact LP per closed cell).

    Returns (prices, revenue, region label); ties prefer the smaller label.
    """
    best = None
    for label in sorted(regions.cells):
        coeffs = revenue_form(instance, label)
        cell = regions.cells[label]
        if all(c == 0 for c in coeffs):
            candidate = (ZERO, label, cell.witness)
        else:
            res = solve_lp(coeffs, list(cell.constraints), "max", seed=seed)
            assert res.status == "optimal"  # cells are bounded by the cap
            candidate = (res.value, label, res.point)
        if best is None or candidate[0] > best[0]:
            best = candidate
    revenue, label, point = best
    return point, revenue, label


def region_boundary_lines(instance: TariffInstance, regions: Subdivision) -> dict:
    """Distinct facet lines per sample, excluding the artificial cap facets.

    A facet u_i(q) = u_i(q') belongs to sample i; the count per sample is the
    proof-side quantity bounded by 2K + 2 (K slab lines, K zero-utility
    lines, two axes).
    """
    cap = instance.price_cap
    d = instance.dimension
    per_sample: dict = {i: set() for i in range(instance.n_samples)}
    axes = set()
    for label, cell in regions.cells.items():
        for h in cell.constraints:
            line = _line_key(h)
            if _is_cap_facet(h, cap, d):
                continue
            if h.label is None:
                axes.add(line)
                continue
            neighbor = h.label
            diff = [i for i, (a, b) in enumerate(zip(label, neighbor)) if a != b]
            for i in diff:
                per_sample[i].add(line)
    for i in per_sample:
        per_sample[i] |= axes
    return {i: len(lines) for i, lines in per_sample.items()}


def _line_key(h: Halfspace):
    lead = next(c for c in h.normal if c != 0)
    if lead < 0:
        return (tuple(-c for c in h.normal), -h.offset)
    return (h.normal, h.offset)


def _is_cap_facet(h: Halfspace, cap, d: int) -> bool:
    if sum(1 for c in h.normal if c != 0) != 1:
        return False
    lead = next(c for c in h.normal if c != 0)
    return lead > 0 and h.offset == cap * lead


def check_piece_bound(instance: TariffInstance, regions: Subdivision, constant: int = 10) -> dict:
    """Report on the output-size bound R <= C * N^2 K min(N, K) and on the
    per-sample non-redundant boundary-line counts (single-tariff case)."""
    if instance.menu_length != 1:
        raise ValueError("the piece bound applies to single tariffs")
    n, k = instance.n_samples, instance.units
    r = len(regions.cells)
    bound = constant * n * n * k * min(n, k)
    lines = region_boundary_lines(instance, regions)
    line_bound = 2 * k + 2
    return {
        "pieces": r,
        "bound": bound,
        "pieces_ok": r <= bound,
        "lines_per_sample": lines,
        "line_bound": line_bound,
        "lines_ok": all(c <= line_bound for c in lines.values()),
    }
