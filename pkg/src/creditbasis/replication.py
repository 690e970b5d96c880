"""Bundled premium-bond reference example and its hedge tables.

A hypothetical 8% semiannual five-year bond trading at a 116.70% full
price, with 50% principal and coupon recovery.  The issuer survival curve
is implied by a half-year grid of forward CDS spreads (forward spread =
(1 - R) * hazard on each half-year segment); the riskless curve is
bootstrapped segment by segment, back to front, so the bond's model
forward prices reproduce the reference forward-price column.  Both hedge
construction styles are then run on exactly this setup, which is what the
`replicate-fig2a` and `replicate-fig2b` CLI drivers emit.
"""
from __future__ import annotations

from dataclasses import dataclass

from scipy.optimize import brentq

from .bonds import CreditBond, bond_pv
from .curves import CurveSource, DiscountCurve, SurvivalCurve, TimeGrid
from .hedging import HedgeSchedule, build_forward_hedge, build_pair_hedge

GRID_TERMS = (0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0)

# Forward CDS spread over each preceding half-year period; the value at
# term 0 is the instantaneous spread (1 - R) h(0).
FORWARD_SPREADS = (0.0060, 0.0060, 0.0063, 0.0066, 0.0069, 0.0072,
                   0.0074, 0.0077, 0.0080, 0.0083, 0.0086)

# Reference forward full prices of the bond at the grid terms.
FORWARD_PRICES = (1.1670, 1.1384, 1.1131, 1.0909, 1.0716, 1.0550,
                  1.0408, 1.0284, 1.0177, 1.0084, 1.0000)

RECOVERY = 0.5
COUPON = 0.08
COUPON_RECOVERY = 0.5
MATURITY = 5.0
FREQUENCY = 2


@dataclass(frozen=True)
class ReferenceSetup:
    bond: CreditBond
    survival: SurvivalCurve
    discount: DiscountCurve
    grid: TimeGrid


def implied_hazard_curve() -> SurvivalCurve:
    """Hazard per half-year segment from the forward spreads: h = s / (1 - R)."""
    pillars = GRID_TERMS[1:]
    hazards = tuple(s / (1.0 - RECOVERY) for s in FORWARD_SPREADS[1:])
    return SurvivalCurve(pillars, hazards, CurveSource.BOND_IMPLIED)


def bootstrap_discount_curve(surv: SurvivalCurve, bond: CreditBond,
                             steps_per_year: int = 12) -> DiscountCurve:
    """Piecewise-constant forward curve hitting every reference forward price.

    Solved back to front: the model forward price at node k depends only on
    the forward rates beyond k, so each segment is a one-dimensional root.
    A flat rate calibrated to the spot price alone cannot reproduce the
    reference profile (the implied curve is steeply upward sloping), which
    is why the full column is matched.
    """
    pillars = list(GRID_TERMS[1:])
    rates = [0.03] * len(pillars)
    for k in range(len(pillars) - 1, -1, -1):
        t_k = GRID_TERMS[k]
        target = FORWARD_PRICES[k]

        def price_gap(r: float) -> float:
            trial_rates = rates.copy()
            trial_rates[k] = r
            trial = DiscountCurve(tuple(pillars), tuple(trial_rates))
            return bond_pv(bond, surv, trial, t_k, steps_per_year) - target

        rates[k] = brentq(price_gap, -0.10, 0.50, xtol=1e-15)
    return DiscountCurve(tuple(pillars), tuple(rates))


def reference_setup(steps_per_year: int = 12) -> ReferenceSetup:
    bond = CreditBond(
        bond_id="premium-8pct-5y",
        coupon=COUPON,
        maturity=MATURITY,
        price=FORWARD_PRICES[0],
        frequency=FREQUENCY,
        recovery=RECOVERY,
        coupon_recovery=COUPON_RECOVERY,
    )
    surv = implied_hazard_curve()
    disc = bootstrap_discount_curve(surv, bond, steps_per_year)
    grid = TimeGrid(GRID_TERMS, step_hint=0.5)
    return ReferenceSetup(bond, surv, disc, grid)


def forward_hedge_table(steps_per_year: int = 12) -> HedgeSchedule:
    """The forward-CDS hedge table for the reference premium bond."""
    setup = reference_setup(steps_per_year)
    return build_forward_hedge(setup.bond, setup.survival, setup.discount,
                               setup.grid, steps_per_year)


def pair_hedge_table(steps_per_year: int = 12) -> HedgeSchedule:
    """The spot-CDS pair hedge table for the reference premium bond."""
    setup = reference_setup(steps_per_year)
    return build_pair_hedge(setup.bond, setup.survival, setup.discount,
                            setup.grid, steps_per_year)
