"""Static CDS hedge construction for credit bonds.

Three strategies: a staggered sequence of forward CDS whose notionals
track the bond's forward-price profile, the equivalent long/short spot-CDS
pairs, and coarse-grained one- and two-CDS hedges sized so the PV of the
outstanding period exposures nets to zero.
"""
from __future__ import annotations

import enum
import io
from dataclasses import dataclass
from typing import Callable, Sequence

from . import cds as cds_engine
from .bonds import (
    CreditBond,
    ForwardPriceCurve,
    forward_price_curve,
    rfc_period_amounts,
)
from .cds import DEFAULT_PROTECTION_STEPS
from .curves import DiscountCurve, SurvivalCurve, TimeGrid
from .errors import NumericError, UsageError


class HedgeKind(enum.Enum):
    FORWARD_CDS = "forward-cds"
    SPOT_CDS = "spot-cds"


def eq_weight(coupon_recovery: float) -> float:
    """Coupon weight in the discrete hedge notional.

    Calibrated pairs: weight 0.5 at 50% coupon recovery, 0.25 at 0%;
    linear in between.
    """
    if not 0.0 <= coupon_recovery <= 1.0:
        raise ValueError("coupon recovery fraction must lie in [0, 1]")
    return 0.25 + 0.5 * coupon_recovery


def forward_notional_continuous(p_fwd: float, recovery: float) -> float:
    """Notional insuring a forward price: (P - R) / (1 - R)."""
    if recovery >= 1.0:
        raise ValueError("recovery must be below 1")
    return (p_fwd - recovery) / (1.0 - recovery)


def forward_notional_discrete(p_prev: float, p_next: float, coupon_amount: float,
                              weight: float, recovery: float) -> float:
    """Period hedge notional off the average forward price plus coupon weight.

    (0.5 (P_prev + P_next + w c) - R) / (1 - R), with c the per-period
    coupon amount.
    """
    if recovery >= 1.0:
        raise ValueError("recovery must be below 1")
    bracket = 0.5 * (p_prev + p_next + weight * coupon_amount)
    return (bracket - recovery) / (1.0 - recovery)


def pair_notional(p_this: float, p_next: float, recovery: float) -> float:
    """Incremental digital-price-risk notional: (P_i - P_{i+1}) / (1 - R)."""
    if recovery >= 1.0:
        raise ValueError("recovery must be below 1")
    return (p_this - p_next) / (1.0 - recovery)


@dataclass(frozen=True)
class HedgeLeg:
    """One CDS position in a hedge: forward period or spot maturity."""

    kind: HedgeKind
    period_start: float | None
    period_end: float
    notional: float
    premium_rate: float

    def __post_init__(self) -> None:
        if self.kind is HedgeKind.FORWARD_CDS:
            if self.period_start is None or self.period_start >= self.period_end:
                raise ValueError("forward leg needs period_start < period_end")

    @property
    def maturity(self) -> float:
        return self.period_end


@dataclass(frozen=True)
class ScheduleRow:
    """One term column of the hedge table; cashflow fields are per period."""

    term: float
    fwd_bcds: float
    spot_bcds: float
    fwd_price: float
    hedge_notional: float | None
    protection_cf: float | None
    coupon_less_protection: float | None
    rfc: float | None
    cf_diff: float | None
    projected_fwd_price: float
    price_diff: float


_CSV_HEADER = ("term,fwd_bcds,spot_bcds,fwd_price,hedge_notional,protection_cf,"
               "coupon_less_protection,rfc,cf_diff,projected_fwd_price,price_diff")


@dataclass(frozen=True)
class HedgeSchedule:
    """A full static hedge: the legs plus the per-period replication table."""

    legs: tuple[HedgeLeg, ...]
    rows: tuple[ScheduleRow, ...]

    def max_abs_cf_diff(self) -> float:
        return max(abs(r.cf_diff) for r in self.rows if r.cf_diff is not None)

    def max_abs_price_diff(self) -> float:
        return max(abs(r.price_diff) for r in self.rows)

    def to_csv(self) -> str:
        """Render the table; prices as percent (2dp), spreads as bp (2dp).

        Hedge notionals are face fractions at 4dp; blank cells mark fields
        that do not exist at the valuation node.
        """
        from .fileio import fmt_bp, fmt_notional, fmt_pct

        buf = io.StringIO()
        buf.write(_CSV_HEADER + "\n")
        for r in self.rows:
            cells = [
                f"{r.term:.2f}",
                fmt_bp(r.fwd_bcds),
                fmt_bp(r.spot_bcds),
                fmt_pct(r.fwd_price),
                fmt_notional(r.hedge_notional) if r.hedge_notional is not None else "",
                fmt_pct(r.protection_cf) if r.protection_cf is not None else "",
                fmt_pct(r.coupon_less_protection) if r.coupon_less_protection is not None else "",
                fmt_pct(r.rfc) if r.rfc is not None else "",
                fmt_pct(r.cf_diff) if r.cf_diff is not None else "",
                fmt_pct(r.projected_fwd_price),
                fmt_pct(r.price_diff),
            ]
            buf.write(",".join(cells) + "\n")
        return buf.getvalue()


def _validate_hedge_grid(bond: CreditBond, grid: TimeGrid) -> None:
    if abs(grid.nodes[0]) > 1e-9:
        raise ValueError("hedge grid must start at 0")
    if abs(grid.nodes[-1] - bond.maturity) > 1e-9:
        raise ValueError("hedge grid must end at the bond maturity")
    dates = [0.0] + bond.payment_dates()
    if len(grid) != len(dates) or any(abs(a - b) > 1e-9 for a, b in zip(grid, dates)):
        raise ValueError("hedge grid nodes must be the bond coupon dates")


def _spot_spreads(surv: SurvivalCurve, disc: DiscountCurve, recovery: float,
                  nodes: Sequence[float]) -> list[float]:
    """Spot spread column; the t=0 entry is the short-maturity limit (1-R) h(0)."""
    out = []
    for t in nodes:
        if t <= 1e-9:
            out.append((1.0 - recovery) * surv.hazard_rate(0.0))
        else:
            out.append(cds_engine.par_spread_continuous(surv, disc, recovery, t))
    return out


def _projection(resid: Sequence[float], nodes: Sequence[float],
                disc: DiscountCurve) -> list[float]:
    """Riskless PV at each node of the residual cashflows plus principal."""
    T = nodes[-1]
    out = []
    for k, t in enumerate(nodes):
        pv = disc.discount_factor(t, T)
        for i in range(k + 1, len(nodes)):
            pv += resid[i - 1] * disc.discount_factor(t, nodes[i])
        out.append(pv)
    return out


def _build_rows(bond: CreditBond, surv: SurvivalCurve, disc: DiscountCurve,
                grid: TimeGrid, fwd: ForwardPriceCurve, notionals: Sequence[float],
                protection: Sequence[float], fwd_spreads: Sequence[float],
                steps_per_year: int) -> tuple[ScheduleRow, ...]:
    nodes = grid.nodes
    n = len(nodes) - 1
    coupons = [amt for _, amt in bond.coupon_amounts()]
    rfc_amounts = rfc_period_amounts(bond, surv, disc, grid, fwd, steps_per_year)
    spot = _spot_spreads(surv, disc, bond.recovery, nodes)
    resid = [coupons[i] - protection[i] for i in range(n)]
    projected = _projection(resid, nodes, disc)

    rows = [ScheduleRow(
        term=nodes[0],
        fwd_bcds=(1.0 - bond.recovery) * surv.hazard_rate(0.0),
        spot_bcds=spot[0],
        fwd_price=fwd.prices[0],
        hedge_notional=None,
        protection_cf=None,
        coupon_less_protection=None,
        rfc=None,
        cf_diff=None,
        projected_fwd_price=projected[0],
        price_diff=projected[0] - fwd.prices[0],
    )]
    for i in range(1, n + 1):
        rows.append(ScheduleRow(
            term=nodes[i],
            fwd_bcds=fwd_spreads[i - 1],
            spot_bcds=spot[i],
            fwd_price=fwd.prices[i],
            hedge_notional=notionals[i - 1],
            protection_cf=protection[i - 1],
            coupon_less_protection=resid[i - 1],
            rfc=rfc_amounts[i - 1],
            cf_diff=resid[i - 1] - rfc_amounts[i - 1],
            projected_fwd_price=projected[i],
            price_diff=projected[i] - fwd.prices[i],
        ))
    return tuple(rows)


def _period_notionals(bond: CreditBond, fwd: ForwardPriceCurve) -> list[float]:
    w = eq_weight(bond.coupon_recovery)
    coupons = [amt for _, amt in bond.coupon_amounts()]
    return [forward_notional_discrete(fwd.prices[i], fwd.prices[i + 1], coupons[i],
                                      w, bond.recovery)
            for i in range(len(fwd.prices) - 1)]


def build_forward_hedge(bond: CreditBond, surv: SurvivalCurve, disc: DiscountCurve,
                        grid: TimeGrid,
                        steps_per_year: int = DEFAULT_PROTECTION_STEPS) -> HedgeSchedule:
    """Staggered forward-CDS hedge: one leg per coupon period.

    Each leg insures the period's average forward price; its premium is the
    breakeven forward spread for that period.  The table verifies that the
    coupon net of hedging cost matches the replicating coupon stream and
    that riskless discounting of the residual cashflows recovers the
    forward price profile.
    """
    _validate_hedge_grid(bond, grid)
    fwd = forward_price_curve(bond, surv, disc, grid, steps_per_year)
    nodes = grid.nodes
    notionals = _period_notionals(bond, fwd)
    fwd_spreads = [cds_engine.forward_cds_spread(surv, disc, bond.recovery,
                                                 nodes[i - 1], nodes[i])
                   for i in range(1, len(nodes))]
    protection = [notionals[i] * fwd_spreads[i] * (nodes[i + 1] - nodes[i])
                  for i in range(len(notionals))]
    legs = tuple(HedgeLeg(HedgeKind.FORWARD_CDS, nodes[i], nodes[i + 1],
                          notionals[i], fwd_spreads[i])
                 for i in range(len(notionals)))
    rows = _build_rows(bond, surv, disc, grid, fwd, notionals, protection,
                       fwd_spreads, steps_per_year)
    return HedgeSchedule(legs, rows)


def build_pair_hedge(bond: CreditBond, surv: SurvivalCurve, disc: DiscountCurve,
                     grid: TimeGrid,
                     steps_per_year: int = DEFAULT_PROTECTION_STEPS) -> HedgeSchedule:
    """Spot-CDS staggered hedge: the long/short pair rendering of the forward legs.

    Each forward leg decomposes into long protection at the period end and
    an equal short position at the period start, so the net position per
    maturity is the difference of consecutive forward notionals with the
    full final notional at maturity.  Every net leg pays its own spot
    spread, which is what makes this hedge drift from the forward version.
    """
    _validate_hedge_grid(bond, grid)
    fwd = forward_price_curve(bond, surv, disc, grid, steps_per_year)
    nodes = grid.nodes
    n = len(nodes) - 1
    staggered = _period_notionals(bond, fwd)
    net = [staggered[i] - staggered[i + 1] for i in range(n - 1)] + [staggered[-1]]
    spot = _spot_spreads(surv, disc, bond.recovery, nodes)
    legs = tuple(HedgeLeg(HedgeKind.SPOT_CDS, None, nodes[i + 1], net[i], spot[i + 1])
                 for i in range(n))
    protection = [sum(net[j] * spot[j + 1] for j in range(i, n)) * (nodes[i + 1] - nodes[i])
                  for i in range(n)]
    fwd_spreads = [cds_engine.forward_cds_spread(surv, disc, bond.recovery,
                                                 nodes[i - 1], nodes[i])
                   for i in range(1, len(nodes))]
    rows = _build_rows(bond, surv, disc, grid, fwd, net, protection,
                       fwd_spreads, steps_per_year)
    return HedgeSchedule(legs, rows)


# ---------------------------------------------------------------------------
# Coarse-grained hedges
# ---------------------------------------------------------------------------

def _exposure_weights(bond: CreditBond, surv: SurvivalCurve, disc: DiscountCurve,
                      grid: TimeGrid) -> list[float]:
    """Period default probability * loss severity * riskless discount."""
    nodes = grid.nodes
    return [(surv.survival_prob(0.0, nodes[i - 1]) - surv.survival_prob(0.0, nodes[i]))
            * (1.0 - bond.recovery) * disc.discount_factor(0.0, nodes[i])
            for i in range(1, len(nodes))]


def _theory_profile(bond: CreditBond, surv: SurvivalCurve, disc: DiscountCurve,
                    steps_per_year: int) -> tuple[TimeGrid, list[float], list[float]]:
    grid = TimeGrid(tuple([0.0] + bond.payment_dates()))
    fwd = forward_price_curve(bond, surv, disc, grid, steps_per_year)
    return grid, _period_notionals(bond, fwd), _exposure_weights(bond, surv, disc, grid)


def optimize_single_cds(bond: CreditBond, surv: SurvivalCurve, disc: DiscountCurve,
                        steps_per_year: int = DEFAULT_PROTECTION_STEPS) -> float:
    """Constant notional zeroing the PV of outstanding period exposures.

    The exposure of period i is (N - N_theory_i) weighted by the period
    default probability, the loss severity and the riskless discount, so
    the optimum is the weighted mean of the theoretical profile.
    """
    _, theory, weights = _theory_profile(bond, surv, disc, steps_per_year)
    total = sum(weights)
    if total <= 0.0:
        raise NumericError("no default risk on the curve; the hedge notional is undefined")
    return sum(n * w for n, w in zip(theory, weights)) / total


@dataclass(frozen=True)
class TwoCdsHedge:
    """Face-value final hedge plus one staggered add-on CDS."""

    final_notional: float
    addon_maturity: float
    addon_notional: float
    total_cost: float
    candidate_costs: tuple[tuple[float, float, float], ...]  # (maturity, notional, cost)


def optimize_two_cds(bond: CreditBond, surv: SurvivalCurve, disc: DiscountCurve,
                     candidates: Sequence[float],
                     spread_fn: Callable[[float], float] | None = None,
                     steps_per_year: int = DEFAULT_PROTECTION_STEPS) -> TwoCdsHedge:
    """Cheapest two-CDS hedge: face value to maturity plus one add-on.

    For each candidate maturity the add-on notional is solved from the same
    zero-PV exposure condition; the winner minimizes the PV of premium
    payments, priced with `spread_fn` (market quotes, or the curve's own
    par spreads when omitted).
    """
    cand = sorted(set(float(c) for c in candidates))
    if not cand:
        raise UsageError("candidate maturity set is empty")
    if cand[0] <= 0.0:
        raise UsageError("candidate maturities must be positive")
    if cand[-1] > bond.maturity + 1e-9:
        raise UsageError(f"candidate maturity {cand[-1]}y exceeds the bond maturity")

    grid, theory, weights = _theory_profile(bond, surv, disc, steps_per_year)
    nodes = grid.nodes
    total_gap = sum((n - 1.0) * w for n, w in zip(theory, weights))
    if spread_fn is None:
        spread_fn = cds_engine.make_bcds_spread_fn(surv, disc, bond.recovery,
                                                   steps_per_year=steps_per_year)

    def rpv01(tenor: float) -> float:
        return cds_engine.risky_pv01(surv, disc, cds_engine.DEFAULT_FREQUENCY, tenor)

    final_cost = spread_fn(bond.maturity) * rpv01(bond.maturity)

    results = []
    for tau in cand:
        covered = 0.0
        for i in range(1, len(nodes)):
            lo, hi = nodes[i - 1], nodes[i]
            dq = surv.survival_prob(0.0, lo) - surv.survival_prob(0.0, hi)
            if dq <= 0.0 or tau <= lo + 1e-9:
                continue
            frac = (surv.survival_prob(0.0, lo) - surv.survival_prob(0.0, min(hi, tau))) / dq
            covered += frac * weights[i - 1]
        if covered <= 0.0:
            continue
        notional = total_gap / covered
        cost = final_cost + notional * spread_fn(tau) * rpv01(tau)
        results.append((tau, notional, cost))

    if not results:
        raise NumericError("no candidate maturity carries default risk to hedge")
    best = min(results, key=lambda item: item[2])
    return TwoCdsHedge(
        final_notional=1.0,
        addon_maturity=best[0],
        addon_notional=best[1],
        total_cost=best[2],
        candidate_costs=tuple(results),
    )
