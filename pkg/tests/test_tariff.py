import random

import pytest

from paramregions.geometry import sample_interior
from paramregions.rationals import rat
from paramregions.tariff import (
    TariffInstance,
    buyer_choice,
    check_piece_bound,
    compute_price_regions,
    maximize_revenue,
    region_boundary_lines,
    single_tariff_regions,
)

FIXTURE = TariffInstance(units=2, valuations=[(3, 5)])


def grid_points(cap, steps):
    cells = [rat(i * int(cap.numerator), steps * int(cap.denominator)) for i in range(1, steps)]
    return [(a, b) for a in cells for b in cells]


def random_instance(rng, max_n=4, max_k=4, menu_length=1):
    n = rng.randint(1, max_n)
    k = rng.randint(1, max_k)
    vals = [[rat(rng.randint(0, 20)) for _ in range(k)] for _ in range(n)]
    return TariffInstance(units=k, valuations=vals, menu_length=menu_length)


class TestBuyerChoice:
    def test_picks_highest_utility_quantity(self):
        assert buyer_choice(FIXTURE, 0, (rat(1), rat(1))) == (2, 1)

    def test_prices_above_valuations_buy_nothing(self):
        assert buyer_choice(FIXTURE, 0, (rat(6), rat(0))) == (0, 1)

    def test_zero_utility_tie_prefers_larger_quantity(self):
        # u(0) = u(1) = u(2) = 0 at prices (1, 2).
        assert buyer_choice(FIXTURE, 0, (rat(1), rat(2))) == (2, 1)

    def test_menu_tie_prefers_smaller_index(self):
        inst = TariffInstance(units=1, valuations=[(4,)], menu_length=2)
        assert buyer_choice(inst, 0, (rat(1), rat(1), rat(1), rat(1))) == (1, 1)


class TestPriceRegions:
    def test_single_unit_two_regions(self):
        inst = TariffInstance(units=1, valuations=[(rat(7, 2),)])
        sub = single_tariff_regions(inst)
        assert set(sub.cells) == {(0,), (1,)}
        assert sub.adjacency == frozenset({((0,), (1,))})

    def test_fixture_three_regions_with_expected_boundaries(self):
        sub = single_tariff_regions(FIXTURE)
        assert set(sub.cells) == {(0,), (1,), (2,)}
        assert sub.adjacency == frozenset({((0,), (1,)), ((0,), (2,)), ((1,), (2,))})
        q2 = sub.cells[(2,)]
        # q=2 region: p2 <= 2 and p1 + 2 p2 <= 5.
        assert q2.contains((rat(1), rat(1)), strict=True)
        assert not q2.contains((rat(1), rat(52, 25)))
        assert not q2.contains((rat(4), rat(3, 4)))
        q1 = sub.cells[(1,)]
        assert q1.contains((rat(1, 2), rat(94, 40)), strict=True)

    def test_grid_oracle_every_point_in_exactly_one_region_closure(self):
        sub = single_tariff_regions(FIXTURE)
        for p in grid_points(FIXTURE.price_cap, 23):
            holders = sub.labels_at(p)
            strict = sub.labels_at(p, strict=True)
            assert len(holders) >= 1
            if strict:
                assert len(strict) == 1
                assert strict[0] == tuple(q for q, _ in ((buyer_choice(FIXTURE, 0, p)),))

    def test_interior_samples_reproduce_profiles(self):
        rng = random.Random(3)
        for trial in range(8):
            inst = random_instance(rng)
            sub = compute_price_regions(inst, seed=trial)
            for label, cell in sub.cells.items():
                for p in sample_interior(cell, 25, seed=trial):
                    got = tuple(buyer_choice(inst, i, p) for i in range(inst.n_samples))
                    assert got == label

    def test_planarity_adjacency_bound(self):
        rng = random.Random(5)
        for trial in range(8):
            inst = random_instance(rng)
            sub = compute_price_regions(inst, seed=trial)
            assert len(sub.adjacency) <= 3 * len(sub.cells)

    def test_menu_length_one_equals_single_tariff(self):
        rng = random.Random(7)
        for trial in range(6):
            inst = random_instance(rng)
            menu = compute_price_regions(inst, seed=trial)
            single = single_tariff_regions(inst, seed=trial)
            mapped = {tuple(q for q, _ in label): cell for label, cell in menu.cells.items()}
            assert set(mapped) == set(single.cells)
            for label in mapped:
                assert mapped[label].constraint_keys() == single.cells[label].constraint_keys()

    def test_menu_of_two_regions_sampled(self):
        inst = TariffInstance(units=1, valuations=[(3,), (1,)], menu_length=2)
        sub = compute_price_regions(inst)
        assert len(sub.cells) >= 3
        for label, cell in sub.cells.items():
            for p in sample_interior(cell, 10, seed=1):
                got = tuple(buyer_choice(inst, i, p) for i in range(inst.n_samples))
                assert got == label


class TestRevenue:
    def test_fixture_optimal_revenue_is_five(self):
        sub = single_tariff_regions(FIXTURE)
        prices, revenue, label = maximize_revenue(FIXTURE, sub)
        assert revenue == 5
        assert label == (2,)
        assert prices[0] + 2 * prices[1] == 5

    def test_single_sample_full_surplus(self):
        inst = TariffInstance(units=1, valuations=[(rat(13, 3),)])
        sub = single_tariff_regions(inst)
        _, revenue, _ = maximize_revenue(inst, sub)
        assert revenue == rat(13, 3)

    def test_two_samples_pick_single_high_buyer(self):
        inst = TariffInstance(units=1, valuations=[(1,), (3,)])
        sub = single_tariff_regions(inst)
        _, revenue, _ = maximize_revenue(inst, sub)
        assert revenue == 3

    def test_revenue_dominates_grid_search(self):
        rng = random.Random(11)
        for trial in range(5):
            inst = random_instance(rng, max_n=3, max_k=3)
            sub = compute_price_regions(inst, seed=trial)
            _, revenue, _ = maximize_revenue(inst, sub)
            best_grid = rat(0)
            for p in grid_points(inst.price_cap, 12):
                total = rat(0)
                for i in range(inst.n_samples):
                    q, j = buyer_choice(inst, i, p)
                    if q > 0:
                        total += p[0] + q * p[1]
                best_grid = max(best_grid, total)
            assert revenue >= best_grid


class TestPieceBound:
    def test_trivial_instance(self):
        inst = TariffInstance(units=1, valuations=[(2,)])
        sub = single_tariff_regions(inst)
        report = check_piece_bound(inst, sub)
        assert report["pieces"] == 2
        assert report["pieces_ok"] and report["lines_ok"]

    def test_fixture_three_pieces(self):
        sub = single_tariff_regions(FIXTURE)
        report = check_piece_bound(FIXTURE, sub)
        assert report["pieces"] == 3
        assert report["pieces_ok"] and report["lines_ok"]

    def test_random_instances_respect_bounds(self):
        rng = random.Random(13)
        for trial in range(10):
            inst = random_instance(rng)
            sub = single_tariff_regions(inst, seed=trial)
            report = check_piece_bound(inst, sub)
            assert report["pieces_ok"], report
            assert report["lines_ok"], report

    def test_increasing_valuations_many_slabs(self):
        inst = TariffInstance(units=3, valuations=[(2, 5, 7)])
        sub = single_tariff_regions(inst)
        lines = region_boundary_lines(inst, sub)
        assert lines[0] <= 2 * inst.units + 2


class TestEdgeCases:
    def test_worthless_item_single_region_zero_revenue(self):
        inst = TariffInstance(units=1, valuations=[(0,)])
        sub = single_tariff_regions(inst)
        assert set(sub.cells) == {(0,)}
        _, revenue, label = maximize_revenue(inst, sub)
        assert revenue == 0 and label == (0,)


class TestValidation:
    def test_negative_valuation_rejected(self):
        with pytest.raises(ValueError):
            TariffInstance(units=1, valuations=[(-1,)])

    def test_json_round_trip(self):
        data = FIXTURE.to_json()
        back = TariffInstance.from_json(data)
        assert back == FIXTURE
