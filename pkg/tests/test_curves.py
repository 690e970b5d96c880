"""Term-structure primitives: exactness, splitting, monotonicity, quadrature."""
import math

import numpy as np
import pytest

from creditbasis import (
    CurveSource,
    DiscountCurve,
    SurvivalCurve,
    TimeGrid,
    integrate_weighted,
)


def random_curve_inputs(rng, max_rate):
    n = rng.integers(1, 6)
    pillars = tuple(np.cumsum(rng.uniform(0.3, 3.0, size=n)))
    rates = tuple(rng.uniform(0.0, max_rate, size=n))
    return pillars, rates


# ---------------------------------------------------------------------------
# TimeGrid
# ---------------------------------------------------------------------------

def test_grid_requires_strictly_increasing_nodes():
    with pytest.raises(ValueError):
        TimeGrid((0.0, 1.0, 1.0))
    with pytest.raises(ValueError):
        TimeGrid((0.0, 1.0, 1.0 + 1e-13))
    with pytest.raises(ValueError):
        TimeGrid((-0.5, 1.0))
    with pytest.raises(ValueError):
        TimeGrid(())


def test_regular_grid_includes_endpoint():
    grid = TimeGrid.regular(0.0, 5.0, 0.5)
    assert len(grid) == 11
    assert grid.nodes[-1] == 5.0
    assert grid.step_hint == 0.5


def test_merged_and_refined_grids():
    grid = TimeGrid.merged([0.0, 1.0], [0.5, 1.0, 2.0])
    assert grid.nodes == (0.0, 0.5, 1.0, 2.0)
    fine = grid.refined(2)
    assert fine.nodes == (0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0)


# ---------------------------------------------------------------------------
# DiscountCurve
# ---------------------------------------------------------------------------

def test_zero_rate_discounts_to_one():
    curve = DiscountCurve.flat(0.0)
    assert curve.discount_factor(0.0, 7.3) == 1.0


def test_flat_rate_closed_form():
    curve = DiscountCurve.flat(0.05)
    assert curve.discount_factor(0.0, 1.0) == pytest.approx(math.exp(-0.05), rel=1e-15)


def test_discount_at_same_time_is_one():
    curve = DiscountCurve((1.0, 4.0), (0.02, 0.05))
    assert curve.discount_factor(3.0, 3.0) == 1.0


def test_reversed_bounds_rejected():
    curve = DiscountCurve.flat(0.03)
    with pytest.raises(ValueError):
        curve.discount_factor(2.0, 1.0)


def test_segment_exactness_against_manual_summation():
    rng = np.random.default_rng(7)
    for _ in range(50):
        pillars, rates = random_curve_inputs(rng, 0.10)
        curve = DiscountCurve(pillars, rates)
        t = float(rng.uniform(0.0, pillars[-1] * 1.2))
        T = t + float(rng.uniform(0.0, pillars[-1]))
        total = 0.0
        prev = 0.0
        for p, r in zip(pillars, rates):
            lo, hi = max(prev, t), min(p, T)
            if hi > lo:
                total += r * (hi - lo)
            prev = p
        if T > pillars[-1]:
            total += rates[-1] * (T - max(t, pillars[-1]))
        assert curve.discount_factor(t, T) == pytest.approx(math.exp(-total), rel=1e-14)


def test_multiplicative_splitting_random_triples():
    rng = np.random.default_rng(11)
    for seed in range(5):
        pillars, rates = random_curve_inputs(rng, 0.12)
        curve = DiscountCurve(pillars, rates)
        horizon = pillars[-1] * 1.5
        times = np.sort(rng.uniform(0.0, horizon, size=(1000, 3)), axis=1)
        for t, u, T in times:
            whole = curve.discount_factor(t, T)
            split = curve.discount_factor(t, u) * curve.discount_factor(u, T)
            assert abs(whole - split) < 1e-12


def test_forward_rate_is_right_continuous_with_flat_extrapolation():
    curve = DiscountCurve((1.0, 2.0), (0.02, 0.04))
    assert curve.forward_rate(0.0) == 0.02
    assert curve.forward_rate(1.0) == 0.04  # value at a pillar starts the next segment
    assert curve.forward_rate(10.0) == 0.04


def test_bumped_curve_shifts_rates():
    curve = DiscountCurve((1.0, 2.0), (0.02, 0.04))
    up = curve.bumped(0.0001)
    assert up.forward_rates == (0.0201, 0.0401)


def test_curve_validation():
    with pytest.raises(ValueError):
        DiscountCurve((0.0, 1.0), (0.01, 0.02))  # pillar at zero
    with pytest.raises(ValueError):
        DiscountCurve((2.0, 1.0), (0.01, 0.02))  # not increasing
    with pytest.raises(ValueError):
        DiscountCurve((1.0,), (0.01, 0.02))  # length mismatch


# ---------------------------------------------------------------------------
# SurvivalCurve
# ---------------------------------------------------------------------------

def test_zero_hazard_means_certain_survival():
    curve = SurvivalCurve.flat(0.0)
    assert curve.survival_prob(0.0, 8.0) == 1.0


def test_flat_hazard_closed_form():
    curve = SurvivalCurve.flat(0.02)
    assert curve.survival_prob(0.0, 5.0) == pytest.approx(math.exp(-0.10), rel=1e-15)


def test_half_year_hazard_from_forward_spread():
    # 60bp forward spread at 50% recovery implies h = 1.2% on the segment
    curve = SurvivalCurve((0.5,), (0.012,))
    assert curve.survival_prob(0.0, 0.5) == pytest.approx(math.exp(-0.006), rel=1e-15)


def test_negative_hazard_rejected():
    with pytest.raises(ValueError):
        SurvivalCurve((1.0,), (-0.01,))


def test_survival_monotone_in_horizon():
    rng = np.random.default_rng(3)
    for _ in range(20):
        pillars, rates = random_curve_inputs(rng, 0.3)
        curve = SurvivalCurve(pillars, rates)
        horizons = np.linspace(0.0, pillars[-1] * 1.4, 80)
        values = [curve.survival_prob(0.0, T) for T in horizons]
        assert all(a >= b - 1e-15 for a, b in zip(values, values[1:]))
        assert all(0.0 < v <= 1.0 for v in values)


def test_survival_multiplicative_splitting():
    rng = np.random.default_rng(13)
    pillars, rates = random_curve_inputs(rng, 0.2)
    curve = SurvivalCurve(pillars, rates)
    times = np.sort(rng.uniform(0.0, pillars[-1] * 1.3, size=(1000, 3)), axis=1)
    for t, u, T in times:
        whole = curve.survival_prob(t, T)
        split = curve.survival_prob(t, u) * curve.survival_prob(u, T)
        assert abs(whole - split) < 1e-12


def test_source_tagging():
    curve = SurvivalCurve.flat(0.01)
    assert curve.source is CurveSource.USER_SUPPLIED
    tagged = curve.with_source(CurveSource.BOND_IMPLIED)
    assert tagged.source is CurveSource.BOND_IMPLIED
    assert tagged.hazard_rates == curve.hazard_rates


def test_average_hazard():
    curve = SurvivalCurve((1.0, 2.0), (0.01, 0.03))
    assert curve.average_hazard(0.0, 2.0) == pytest.approx(0.02, rel=1e-14)


# ---------------------------------------------------------------------------
# integrate_weighted
# ---------------------------------------------------------------------------

def test_quadrature_constant_and_linear_are_exact():
    grid = TimeGrid.regular(0.0, 1.0, 0.25)
    assert integrate_weighted(lambda u: 1.0, grid) == pytest.approx(1.0, abs=1e-15)
    grid2 = TimeGrid.regular(0.0, 2.0, 0.5)
    assert integrate_weighted(lambda u: u, grid2) == pytest.approx(2.0, abs=1e-14)


def test_quadrature_exponential_converges_with_refinement():
    grid = TimeGrid.regular(0.0, 5.0, 1.0)
    exact = 1.0 - math.exp(-5.0)
    errors = [abs(integrate_weighted(lambda u: math.exp(-u), grid, refinement=k) - exact)
              for k in (1, 2, 3)]
    assert errors[0] < 1e-4
    assert errors[1] < errors[0]
    assert errors[2] < errors[1]
    assert errors[2] < 1e-8


def test_quadrature_rejects_bad_inputs():
    with pytest.raises(ValueError):
        integrate_weighted(lambda u: 1.0, TimeGrid((0.0,)))
    with pytest.raises(ValueError):
        integrate_weighted(lambda u: float("nan"), TimeGrid((0.0, 1.0)))
    with pytest.raises(ValueError):
        integrate_weighted(lambda u: 1.0, TimeGrid((0.0, 1.0)), refinement=0)
