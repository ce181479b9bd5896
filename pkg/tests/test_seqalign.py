import random

import pytest

from paramregions.geometry import GeometryError, box_cell, sample_interior
from paramregions.rationals import rat
from paramregions.regions import Subdivision
from paramregions.seqalign import (
    Alignment,
    AlignmentDPSpec,
    build_execution_dag,
    compute_overlay,
    dp_solve,
    enumerate_alignments,
    feature_counts,
    get_preset,
    mismatch_space_gap_spec,
    mismatch_space_spec,
    ray_search_2d,
    resolve_degeneracies,
    strip_spaces,
)

ALPHABET = "ACGT"


def random_pair(rng, max_len=4):
    m = rng.randint(1, max_len)
    n = rng.randint(1, max_len)
    s1 = "".join(rng.choice(ALPHABET) for _ in range(m))
    s2 = "".join(rng.choice(ALPHABET) for _ in range(n))
    return s1, s2


def oracle_best_cost(spec, s1, s2, rho):
    best = None
    for t1, t2 in enumerate_alignments(s1, s2):
        counts = feature_counts(spec.features, t1, t2)
        cost = sum(c * r for c, r in zip(counts, rho))
        if best is None or cost < best:
            best = cost
    return best


class TestDpSolve:
    def test_identical_characters_cost_zero(self):
        spec = mismatch_space_spec()
        cost, align = dp_solve(spec, "A", "A", (rat(3), rat(2)))
        assert cost == 0
        assert (align.t1, align.t2) == ("A", "A")

    def test_single_mismatch_vs_two_spaces(self):
        spec = mismatch_space_spec()
        cost, align = dp_solve(spec, "A", "T", (rat(3), rat(1)))
        assert cost == 2
        assert (align.t1, align.t2) == ("A-", "-T")
        cost, align = dp_solve(spec, "A", "T", (rat(1), rat(3)))
        assert cost == 1
        assert (align.t1, align.t2) == ("A", "T")

    def test_gap_spec_example(self):
        spec = mismatch_space_gap_spec()
        cost, align = dp_solve(spec, "AA", "A", (rat(1), rat(1), rat(5)))
        assert cost == 6
        assert strip_spaces(align.t1) == "AA" and strip_spaces(align.t2) == "A"

    def test_costs_match_enumeration_oracle(self):
        rng = random.Random(3)
        for spec in (mismatch_space_spec(), mismatch_space_gap_spec()):
            for trial in range(15):
                s1, s2 = random_pair(rng)
                rho = tuple(rat(rng.randint(0, 9), rng.randint(1, 3)) for _ in spec.features)
                cost, align = dp_solve(spec, s1, s2, rho)
                assert cost == oracle_best_cost(spec, s1, s2, rho)
                assert strip_spaces(align.t1) == s1 and strip_spaces(align.t2) == s2

    def test_counts_consistent_with_string_features(self):
        rng = random.Random(5)
        for spec in (mismatch_space_spec(), mismatch_space_gap_spec()):
            for trial in range(10):
                s1, s2 = random_pair(rng)
                rho = tuple(rat(rng.randint(1, 7)) for _ in spec.features)
                _, align = dp_solve(spec, s1, s2, rho)
                assert align.counts == feature_counts(spec.features, align.t1, align.t2)

    def test_space_count_conservation(self):
        rng = random.Random(7)
        spec = mismatch_space_spec()
        for trial in range(10):
            s1, s2 = random_pair(rng)
            rho = (rat(rng.randint(0, 5)), rat(rng.randint(0, 5)))
            _, a = dp_solve(spec, s1, s2, rho)
            m, n = len(s1), len(s2)
            matches = sum(1 for x, y in zip(a.t1, a.t2) if x == y and x != "-")
            assert matches + a.counts[0] + a.counts[1] == len(a.t1)
            assert a.counts[1] == (len(a.t1) - m) + (len(a.t1) - n)

    def test_homogeneity_of_argmin(self):
        spec = mismatch_space_spec()
        rng = random.Random(9)
        for trial in range(8):
            s1, s2 = random_pair(rng)
            rho = (rat(rng.randint(1, 5)), rat(rng.randint(1, 5)))
            scaled = tuple(rat(7, 2) * c for c in rho)
            _, a = dp_solve(spec, s1, s2, rho)
            _, b = dp_solve(spec, s1, s2, scaled)
            assert (a.t1, a.t2) == (b.t1, b.t2)

    def test_malformed_spec_rejected(self):
        from paramregions.seqalign import CaseSpec, TermSpec

        with pytest.raises(ValueError):
            AlignmentDPSpec(
                name="bad",
                features=("mismatch",),
                cases=(CaseSpec("main", "always", (TermSpec((1,), "main", 0, 0, "identity"),)),),
            )


class TestExecutionDag:
    def test_identical_strings_one_region(self):
        part = build_execution_dag(mismatch_space_spec(), "A", "A")
        assert len(part.regions) == 1
        assert (part.regions[0].alignment.t1, part.regions[0].alignment.t2) == ("A", "A")

    def test_ab_ba_two_regions_split_on_diagonal(self):
        part = build_execution_dag(mismatch_space_spec(), "AB", "BA")
        assert len(part.regions) == 2
        assert part.boundary_keys() == frozenset({(((rat(1), rat(-1))), rat(0))})
        counts = sorted(r.alignment.counts for r in part.regions)
        assert counts == [(0, 2), (2, 0)]

    def test_single_mismatch_boundary(self):
        part = build_execution_dag(mismatch_space_spec(), "A", "T")
        assert len(part.regions) == 2
        # rho1 = 2 rho2, normalized to leading coefficient 1.
        assert part.boundary_keys() == frozenset({((rat(1), rat(-2)), rat(0))})

    def test_regions_agree_with_dp_at_samples(self):
        rng = random.Random(11)
        for spec in (mismatch_space_spec(), mismatch_space_gap_spec()):
            for trial in range(6):
                s1, s2 = random_pair(rng, max_len=3)
                part = build_execution_dag(spec, s1, s2, seed=trial)
                for region in part.regions:
                    for cell in region.pieces:
                        for p in sample_interior(cell, 20, seed=trial):
                            cost, align = dp_solve(spec, s1, s2, p)
                            assert (align.t1, align.t2) == (region.alignment.t1, region.alignment.t2)
                            assert cost == region.alignment.cost(p)

    def test_exhaustive_envelope_agreement(self):
        rng = random.Random(13)
        for spec in (mismatch_space_spec(), mismatch_space_gap_spec()):
            for trial in range(4):
                s1, s2 = random_pair(rng, max_len=3)
                part = build_execution_dag(spec, s1, s2, seed=trial)
                for region in part.regions:
                    for cell in region.pieces:
                        for p in sample_interior(cell, 10, seed=trial):
                            assert region.alignment.cost(p) == oracle_best_cost(spec, s1, s2, p)


class TestOverlay:
    def _half_subdivision(self, axis, label_low, label_high):
        from paramregions.geometry import Halfspace, reduce_cell

        parent = box_cell(0, 1, 2)
        normal = tuple(rat(1) if i == axis else rat(0) for i in range(2))
        low = reduce_cell(2, list(parent.constraints) + [Halfspace(normal, rat(1, 2))])
        high = reduce_cell(2, list(parent.constraints) + [Halfspace(tuple(-c for c in normal), rat(-1, 2))])
        return Subdivision(parent, {label_low: low, label_high: high}, frozenset({(label_low, label_high)}))

    def test_idempotent_on_itself(self):
        sub = self._half_subdivision(0, "l", "r")
        out = compute_overlay([sub, sub])
        assert set(out.cells) == {("l", "l"), ("r", "r")}

    def test_quadrants(self):
        a = self._half_subdivision(0, "l", "r")
        b = self._half_subdivision(1, "b", "t")
        out = compute_overlay([a, b])
        assert set(out.cells) == {("l", "b"), ("l", "t"), ("r", "b"), ("r", "t")}
        assert (("l", "b"), ("r", "t")) not in out.adjacency
        assert len(out.adjacency) == 4

    def test_matches_pairwise_feasibility_oracle(self):
        spec = mismatch_space_spec()
        pa = build_execution_dag(spec, "A", "B")
        pb = build_execution_dag(spec, "AB", "B")
        to_sub = lambda part: Subdivision(
            part.parent,
            {r.alignment.key: r.pieces[0] for r in part.regions},
            frozenset(),
        )
        sa, sb = to_sub(pa), to_sub(pb)
        out = compute_overlay([sa, sb])
        from paramregions.geometry import find_interior_point

        expect = set()
        for la, ca in sa.cells.items():
            for lb, cb in sb.cells.items():
                if find_interior_point(list(ca.constraints) + list(cb.constraints)) is not None:
                    expect.add((la, lb))
        assert set(out.cells) == expect

    def test_mismatched_parents_rejected(self):
        a = self._half_subdivision(0, "l", "r")
        parent2 = box_cell(0, 2, 2)
        b = Subdivision(parent2, {"x": parent2}, frozenset())
        with pytest.raises(GeometryError):
            compute_overlay([a, b])


class TestResolveDegeneracies:
    def test_all_same_alignment_collapses_to_one(self):
        from paramregions.seqalign import AlignedRegion, AlignmentPartition
        from paramregions.geometry import Halfspace, reduce_cell

        parent = box_cell(0, 1, 2)
        align = Alignment("A", "A", (0, 0))
        left = reduce_cell(2, list(parent.constraints) + [Halfspace((1, 0), rat(1, 2))])
        right = reduce_cell(2, list(parent.constraints) + [Halfspace((-1, 0), rat(-1, 2))])
        part = AlignmentPartition(parent, (AlignedRegion(align, (left,)), AlignedRegion(align, (right,))))
        out = resolve_degeneracies(part)
        assert len(out.regions) == 1
        assert out.regions[0].pieces[0].constraint_keys() <= parent.constraint_keys()

    def test_distinct_alignments_untouched(self):
        part = build_execution_dag(mismatch_space_spec(), "A", "T")
        out = resolve_degeneracies(part)
        assert len(out.regions) == len(part.regions) == 2

    def test_irrelevant_split_merged_back_and_verified_by_sampling(self):
        from paramregions.seqalign import AlignedRegion, AlignmentPartition
        from paramregions.geometry import Halfspace, reduce_cell

        spec = mismatch_space_spec()
        base = build_execution_dag(spec, "A", "T")
        parent = base.parent
        pieces = []
        for region in base.regions:
            cell = region.pieces[0]
            lo = reduce_cell(2, list(cell.constraints) + [Halfspace((0, 1), rat(1, 3))])
            hi = reduce_cell(2, list(cell.constraints) + [Halfspace((0, -1), rat(-1, 3))])
            pieces.append(AlignedRegion(region.alignment, (lo,)))
            pieces.append(AlignedRegion(region.alignment, (hi,)))
        part = AlignmentPartition(parent, tuple(pieces))
        out = resolve_degeneracies(part)
        assert len(out.regions) == 2
        for region in out.regions:
            for p in sample_interior(region.pieces[0], 15, seed=3):
                _, align = dp_solve(spec, "A", "T", p)
                assert (align.t1, align.t2) == (region.alignment.t1, region.alignment.t2)


class TestRaySearch:
    def test_single_sector(self):
        part, calls = ray_search_2d(mismatch_space_spec(), "A", "A")
        assert len(part.regions) == 1
        assert calls == 2

    def test_ab_ba_two_sectors(self):
        part, calls = ray_search_2d(mismatch_space_spec(), "AB", "BA")
        assert len(part.regions) == 2
        assert part.boundary_keys() == frozenset({((rat(1), rat(-1)), rat(0))})

    def test_agrees_with_execution_dag(self):
        rng = random.Random(17)
        spec = mismatch_space_spec()
        for trial in range(12):
            s1, s2 = random_pair(rng, max_len=4)
            ray, _ = ray_search_2d(spec, s1, s2, seed=trial)
            dag = build_execution_dag(spec, s1, s2, seed=trial)
            assert ray.boundary_keys() == dag.boundary_keys()
            ray_aligns = [(r.alignment.t1, r.alignment.t2) for r in ray.regions]
            for region in ray.regions:
                probe = region.pieces[0].witness
                dag_region = dag.region_at(probe)
                assert (dag_region.alignment.t1, dag_region.alignment.t2) in ray_aligns

    def test_requires_two_features(self):
        with pytest.raises(GeometryError):
            ray_search_2d(mismatch_space_gap_spec(), "A", "T")


class TestSpecSerialization:
    def test_round_trip(self):
        spec = mismatch_space_gap_spec()
        back = AlignmentDPSpec.from_json(spec.to_json())
        assert back == spec

    def test_presets_by_name(self):
        assert get_preset("mismatch-space").dimension == 2
        assert get_preset("mismatch-space-gap").dimension == 3
        with pytest.raises(ValueError):
            get_preset("nope")
