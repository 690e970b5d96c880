"""Survival-based credit bond valuation.

Two pricing modes live here.  The discrete mode values the actual payment
schedule: coupons anchored at maturity, default probabilities resolved on
a fine bucket grid, and all default claims (R on principal plus the
coupon-recovery fraction of the period coupon) settling at the coupon
date that follows the default.  The continuous mode treats the coupon as
a continuous flow and pays recovery at the default instant, which makes
the forward-price ODE identities exact; it backs the high-precision
consistency checks while the discrete mode prices real instruments.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from scipy.optimize import brentq

from . import kernels
from .cds import DEFAULT_PROTECTION_STEPS, par_spread, protection_grid
from .curves import CurveSource, DiscountCurve, SurvivalCurve, TimeGrid
from .errors import CalibrationError, NumericError, UsageError

_MAX_HAZARD = 10.0


@dataclass(frozen=True)
class CreditBond:
    """Fixed-coupon credit bond keyed by abstract year fractions.

    `price` is the full (invoice) market price as a fraction of face.
    `coupon_recovery` is the fraction of the current period's coupon paid
    alongside principal recovery when the issuer defaults.
    """

    bond_id: str
    coupon: float
    maturity: float
    price: float = 1.0
    frequency: int = 2
    recovery: float = 0.4
    coupon_recovery: float = 0.0

    def __post_init__(self) -> None:
        if self.maturity <= 0:
            raise ValueError("maturity must be positive")
        if self.coupon < 0:
            raise ValueError("coupon must be non-negative")
        if self.price <= 0:
            raise ValueError("price must be positive")
        if not 0.0 <= self.recovery < 1.0:
            raise ValueError("recovery must lie in [0, 1)")
        if not 0.0 <= self.coupon_recovery <= 1.0:
            raise ValueError("coupon recovery fraction must lie in [0, 1]")
        if self.frequency < 1:
            raise ValueError("coupon frequency must be at least 1 per year")

    def payment_dates(self) -> list[float]:
        """Coupon dates anchored at maturity, stepping back 1/frequency."""
        step = 1.0 / self.frequency
        dates: list[float] = []
        t = self.maturity
        while t > 1e-9:
            dates.append(t)
            t -= step
        return dates[::-1]

    def coupon_amounts(self) -> list[tuple[float, float]]:
        """(date, amount) pairs; a short first period pays prorated coupon."""
        dates = self.payment_dates()
        prev = 0.0
        out = []
        for d in dates:
            out.append((d, self.coupon * (d - prev)))
            prev = d
        return out


@dataclass(frozen=True)
class ForwardPriceCurve:
    """Projected forward full prices P(t, T) on a grid, pinned to 1 at T."""

    grid: TimeGrid
    prices: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.prices) != len(self.grid):
            raise ValueError("one price per grid node required")
        if any(p <= 0.0 for p in self.prices):
            raise ValueError("forward prices must be positive")
        if abs(self.prices[-1] - 1.0) > 1e-9:
            raise ValueError(f"price at maturity must pull to par, got {self.prices[-1]}")
        object.__setattr__(self, "prices", tuple(float(p) for p in self.prices))

    def price_at(self, t: float) -> float:
        for node, p in zip(self.grid, self.prices):
            if abs(node - t) <= 1e-9:
                return p
        raise KeyError(f"{t} is not a grid node")

    def slope(self, t: float) -> float:
        """dP/dt by finite difference on the grid (central where possible)."""
        nodes = self.grid.nodes
        for i, node in enumerate(nodes):
            if abs(node - t) <= 1e-9:
                lo = max(i - 1, 0)
                hi = min(i + 1, len(nodes) - 1)
                if hi == lo:
                    raise ValueError("grid too small for a slope")
                return (self.prices[hi] - self.prices[lo]) / (nodes[hi] - nodes[lo])
        raise KeyError(f"{t} is not a grid node")


@dataclass(frozen=True)
class RfcStream:
    """Per-annum coupon rates that replicate the forward prices risklessly.

    Node rates follow the pointwise relation rate(t) = C - h(t) (P(t) - R).
    """

    grid: TimeGrid
    rates: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.rates) != len(self.grid):
            raise ValueError("one rate per grid node required")

    def discounted_replication(self, disc: DiscountCurve) -> list[float]:
        """Riskless PV at each node of the remaining stream plus principal.

        Per-period amounts use the trapezoid of the node rates; the result
        should track the forward prices that generated the stream.
        """
        nodes = self.grid.nodes
        amounts = [0.5 * (self.rates[i - 1] + self.rates[i]) * (nodes[i] - nodes[i - 1])
                   for i in range(1, len(nodes))]
        T = nodes[-1]
        out = []
        for k, t in enumerate(nodes):
            pv = disc.discount_factor(t, T)
            for i in range(k + 1, len(nodes)):
                pv += amounts[i - 1] * disc.discount_factor(t, nodes[i])
            out.append(pv)
        return out


def _default_buckets(bond: CreditBond, start: float,
                     steps_per_year: int) -> list[tuple[float, float, float]]:
    """(bucket start, bucket end, settlement date) triples covering (start, T]."""
    if start >= bond.maturity - 1e-9:
        return []
    dates = [d for d in bond.payment_dates() if d > start + 1e-9]
    grid = protection_grid(bond.maturity - start, steps_per_year,
                           extra=[d - start for d in dates])
    out = []
    prev = start
    for g in grid:
        end = start + g
        settle = next(d for d in dates if d >= end - 1e-9)
        out.append((prev, end, settle))
        prev = end
    return out


def _coupon_amount_for(bond: CreditBond, settle: float) -> float:
    for d, amount in bond.coupon_amounts():
        if abs(d - settle) <= 1e-9:
            return amount
    raise KeyError(f"{settle} is not a coupon date")


def bond_pv_components(bond: CreditBond, surv: SurvivalCurve, disc: DiscountCurve,
                       t: float = 0.0, steps_per_year: int = DEFAULT_PROTECTION_STEPS,
                       discount_spread: float = 0.0) -> tuple[float, float, float]:
    """(coupon leg, principal leg, recovery leg) of the full price at t.

    Values are conditional on survival to t.  `discount_spread` is an
    additive spread on the riskless discounting only, used by the
    OAS-to-fit solver; the survival curve is untouched.
    """
    if bond.maturity - t < -1e-9:
        raise ValueError(f"valuation time {t} is past maturity {bond.maturity}")

    def df(T: float) -> float:
        return disc.discount_factor(t, T) * math.exp(-discount_spread * (T - t))

    coupon_leg = sum(amount * surv.survival_prob(t, d) * df(d)
                     for d, amount in bond.coupon_amounts() if d > t + 1e-9)
    principal_leg = surv.survival_prob(t, bond.maturity) * df(bond.maturity)
    recovery_leg = 0.0
    for lo, hi, settle in _default_buckets(bond, t, steps_per_year):
        dq = surv.survival_prob(t, lo) - surv.survival_prob(t, hi)
        claim = bond.recovery + bond.coupon_recovery * _coupon_amount_for(bond, settle)
        recovery_leg += dq * claim * df(settle)
    return coupon_leg, principal_leg, recovery_leg


def bond_pv(bond: CreditBond, surv: SurvivalCurve, disc: DiscountCurve,
            t: float = 0.0, steps_per_year: int = DEFAULT_PROTECTION_STEPS,
            discount_spread: float = 0.0) -> float:
    """Full model price (fraction of face) at t, conditional on survival to t."""
    legs = bond_pv_components(bond, surv, disc, t, steps_per_year, discount_spread)
    return sum(legs)


def forward_price_curve(bond: CreditBond, surv: SurvivalCurve, disc: DiscountCurve,
                        grid: TimeGrid,
                        steps_per_year: int = DEFAULT_PROTECTION_STEPS) -> ForwardPriceCurve:
    """Projected forward prices on `grid`, which must end at the bond maturity."""
    if abs(grid.nodes[-1] - bond.maturity) > 1e-9:
        raise ValueError("forward price grid must end at the bond maturity")
    prices = tuple(bond_pv(bond, surv, disc, t, steps_per_year) for t in grid)
    return ForwardPriceCurve(grid, prices)


def bcds_curve(surv: SurvivalCurve, disc: DiscountCurve, recovery: float, f: int,
               terms: Sequence[float], steps_per_year: int = DEFAULT_PROTECTION_STEPS,
               allow_any_source: bool = False) -> list[tuple[float, float]]:
    """Bond-implied par CDS spread at each term, off a bond-implied curve.

    Passing a curve that was not fitted to bonds is a caller error unless
    `allow_any_source` is set (useful for self-consistency checks).
    """
    if surv.source is not CurveSource.BOND_IMPLIED and not allow_any_source:
        raise UsageError(
            f"bcds_curve expects a bond-implied survival curve, got {surv.source.value}"
        )
    return [(t, par_spread(surv, disc, recovery, f, t, steps_per_year)) for t in terms]


def rfc_stream(bond: CreditBond, surv: SurvivalCurve, disc: DiscountCurve, grid: TimeGrid,
               steps_per_year: int = DEFAULT_PROTECTION_STEPS) -> RfcStream:
    """Node rates C - h(t) (P(t) - R) on `grid` (hazard right-continuous)."""
    fwd = forward_price_curve(bond, surv, disc, grid, steps_per_year)
    rates = tuple(bond.coupon - surv.hazard_rate(t) * (p - bond.recovery)
                  for t, p in zip(grid, fwd.prices))
    return RfcStream(grid, rates)


def rfc_period_amounts(bond: CreditBond, surv: SurvivalCurve, disc: DiscountCurve,
                       grid: TimeGrid, fwd: ForwardPriceCurve | None = None,
                       steps_per_year: int = DEFAULT_PROTECTION_STEPS) -> list[float]:
    """Per-period replicating coupon amounts on a coupon-date grid.

    Period i gets [C - h_i (Pbar_i - R)] * dt with h_i the period-average
    hazard and Pbar_i the period price bracket 0.5 (P_prev + P_next + w c),
    the same bracket the discrete hedge notional uses.
    """
    from .hedging import eq_weight  # local import to avoid a module cycle

    if fwd is None:
        fwd = forward_price_curve(bond, surv, disc, grid, steps_per_year)
    w = eq_weight(bond.coupon_recovery)
    amounts = []
    nodes = grid.nodes
    for i in range(1, len(nodes)):
        dt = nodes[i] - nodes[i - 1]
        h_bar = surv.average_hazard(nodes[i - 1], nodes[i])
        bracket = 0.5 * (fwd.prices[i - 1] + fwd.prices[i] + w * bond.coupon * dt)
        amounts.append((bond.coupon - h_bar * (bracket - bond.recovery)) * dt)
    return amounts


def zspread(bond: CreditBond, disc: DiscountCurve) -> float:
    """Constant spread over the riskless curve repricing promised cashflows."""

    def promised_pv(z: float) -> float:
        pv = sum(amount * disc.discount_factor(0.0, d) * math.exp(-z * d)
                 for d, amount in bond.coupon_amounts())
        pv += disc.discount_factor(0.0, bond.maturity) * math.exp(-z * bond.maturity)
        return pv

    lo, hi = -0.5, 2.0
    if (promised_pv(lo) - bond.price) * (promised_pv(hi) - bond.price) > 0:
        raise NumericError(
            f"no z-spread bracket for bond {bond.bond_id!r} at price {bond.price}"
        )
    return brentq(lambda z: promised_pv(z) - bond.price, lo, hi, xtol=1e-14)


def oasf_solve(bond: CreditBond, surv: SurvivalCurve, disc: DiscountCurve,
               steps_per_year: int = DEFAULT_PROTECTION_STEPS) -> float:
    """OAS-to-fit: additive riskless-discounting spread matching market price.

    Positive when the bond is cheap to the fitted curve (market price below
    the fitted model value).  The survival curve is left untouched.
    """

    def gap(x: float) -> float:
        return bond_pv(bond, surv, disc, 0.0, steps_per_year, discount_spread=x) - bond.price

    lo, hi = -0.5, 2.0
    if gap(lo) * gap(hi) > 0:
        raise NumericError(f"no OASF bracket for bond {bond.bond_id!r}")
    return brentq(gap, lo, hi, xtol=1e-14)


def bootstrap_hazard_from_bonds(bonds: Sequence[CreditBond], disc: DiscountCurve,
                                steps_per_year: int = DEFAULT_PROTECTION_STEPS) -> SurvivalCurve:
    """Sequential hazard bootstrap matching each bond price exactly.

    Bonds must be sorted by strictly increasing maturity and share one
    recovery assumption.  Pillars sit at the bond maturities.
    """
    if not bonds:
        raise ValueError("need at least one bond to bootstrap")
    if len({b.recovery for b in bonds}) > 1:
        raise ValueError("bonds must share a single recovery assumption")
    for a, b in zip(bonds, bonds[1:]):
        if b.maturity - a.maturity <= 1e-9:
            raise ValueError("bond maturities must be strictly increasing")

    pillars: list[float] = []
    hazards: list[float] = []
    for b in bonds:
        pillars.append(b.maturity)

        def price_gap(h: float) -> float:
            trial = SurvivalCurve(tuple(pillars), tuple(hazards + [h]), CurveSource.BOND_IMPLIED)
            return bond_pv(b, trial, disc, 0.0, steps_per_year) - b.price

        gap_at_zero = price_gap(0.0)
        if gap_at_zero < 0.0:
            raise CalibrationError(
                f"bond {b.bond_id!r} trades above its zero-hazard value "
                f"(gap {gap_at_zero:.3e}); a negative segment hazard would be required"
            )
        if price_gap(_MAX_HAZARD) > 0.0:
            raise CalibrationError(f"bond {b.bond_id!r} price unreachable (hazard > {_MAX_HAZARD})")
        hazards.append(brentq(price_gap, 0.0, _MAX_HAZARD, xtol=1e-16, rtol=8.9e-16))

    return SurvivalCurve(tuple(pillars), tuple(hazards), CurveSource.BOND_IMPLIED)


# ---------------------------------------------------------------------------
# Continuous-approximation mode: continuous coupon flow, recovery at default.
# ---------------------------------------------------------------------------

def forward_price_continuous(bond: CreditBond, surv: SurvivalCurve, disc: DiscountCurve,
                             t: float) -> float:
    """Forward full price with continuous coupon accrual, exact over segments.

    P(t) = C * annuity + survival-discount + R * default-density, all
    kernels taken over (t, T).  Ignores the payment schedule and the
    coupon-recovery fraction by construction.
    """
    T = bond.maturity
    if t > T + 1e-12:
        raise ValueError(f"valuation time {t} is past maturity {T}")
    t = min(t, T)
    return (bond.coupon * kernels.risky_annuity(surv, disc, t, T)
            + kernels.risky_discount(surv, disc, t, T)
            + bond.recovery * kernels.default_density(surv, disc, t, T))


def forward_price_slope_continuous(bond: CreditBond, surv: SurvivalCurve,
                                   disc: DiscountCurve, t: float) -> float:
    """Closed-form dP/dt in continuous mode: (r + h) P - C - R h."""
    p = forward_price_continuous(bond, surv, disc, t)
    r = disc.forward_rate(t)
    h = surv.hazard_rate(t)
    return (r + h) * p - bond.coupon - bond.recovery * h


def rfc_continuous(bond: CreditBond, surv: SurvivalCurve, disc: DiscountCurve,
                   t: float) -> float:
    """Replicating coupon rate in continuous mode: C - h(t) (P(t) - R)."""
    p = forward_price_continuous(bond, surv, disc, t)
    return bond.coupon - surv.hazard_rate(t) * (p - bond.recovery)
