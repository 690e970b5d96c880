"""Consistent CDS-bond relative value measures.

The curve basis compares market CDS quotes with the bond-implied spread
term structure; the hedging cost differential folds in the shape of the
bond's forward-price profile; the systematic and full bond bases convert
that into matching-maturity spread units, per bond.
"""
from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Callable, Sequence

from . import cds as cds_engine
from .bonds import CreditBond, ForwardPriceCurve, oasf_solve
from .cds import DEFAULT_PROTECTION_STEPS
from .curves import DiscountCurve, SurvivalCurve
from .errors import NumericError, UsageError
from .hedging import optimize_two_cds


@dataclass(frozen=True)
class TenorBasisRow:
    """Curve basis at one tenor; market fields are None for missing quotes."""

    term: float
    market_spread: float | None
    bcds: float
    curve_basis: float | None

    def __post_init__(self) -> None:
        if self.market_spread is None:
            if self.curve_basis is not None:
                raise ValueError("basis must be absent when the market quote is absent")
        elif abs(self.curve_basis - (self.market_spread - self.bcds)) > 1e-12:
            raise ValueError("curve basis must equal market minus bond-implied spread")


@dataclass(frozen=True)
class BondBasisRow:
    bond_id: str
    oasf: float
    hcd: float
    systematic: float
    full: float
    approx_coarse: float | None


@dataclass(frozen=True)
class BasisReport:
    """Per-tenor curve basis plus per-bond relative value measures."""

    tenor_rows: tuple[TenorBasisRow, ...]
    bond_rows: tuple[BondBasisRow, ...]

    def tenor_csv(self) -> str:
        from .fileio import fmt_bp

        buf = io.StringIO()
        buf.write("tenor_years,market_bp,bcds_bp,curve_basis_bp\n")
        for r in self.tenor_rows:
            market = fmt_bp(r.market_spread) if r.market_spread is not None else ""
            basis = fmt_bp(r.curve_basis) if r.curve_basis is not None else ""
            buf.write(f"{r.term:.2f},{market},{fmt_bp(r.bcds)},{basis}\n")
        return buf.getvalue()

    def bond_csv(self) -> str:
        from .fileio import fmt_bp, fmt_value

        buf = io.StringIO()
        buf.write("bond_id,oasf_bp,hcd,systematic_bp,full_bp,approx_coarse_bp\n")
        for r in self.bond_rows:
            approx = fmt_bp(r.approx_coarse) if r.approx_coarse is not None else ""
            buf.write(f"{r.bond_id},{fmt_bp(r.oasf)},{fmt_value(r.hcd)},"
                      f"{fmt_bp(r.systematic)},{fmt_bp(r.full)},{approx}\n")
        return buf.getvalue()


def _quote_pairs(market_quotes: Sequence) -> list[tuple[float, float]]:
    pairs = []
    for q in market_quotes:
        if hasattr(q, "tenor"):
            pairs.append((float(q.tenor), float(q.spread)))
        else:
            tenor, spread = q
            pairs.append((float(tenor), float(spread)))
    return sorted(pairs)


def market_spread_fn(market_quotes: Sequence, interpolate: bool = False) -> Callable[[float], float]:
    """Quote lookup by tenor; linear interpolation only when asked for.

    Raises UsageError naming the tenor when no quote matches and
    interpolation is off (or the tenor falls outside the quoted range).
    """
    pairs = _quote_pairs(market_quotes)

    def spread_at(tenor: float) -> float:
        for t, s in pairs:
            if abs(t - tenor) <= 1e-9:
                return s
        if interpolate and pairs[0][0] <= tenor <= pairs[-1][0]:
            for (t0, s0), (t1, s1) in zip(pairs, pairs[1:]):
                if t0 <= tenor <= t1:
                    return s0 + (s1 - s0) * (tenor - t0) / (t1 - t0)
        raise UsageError(f"no market quote at tenor {tenor}y"
                         + ("" if interpolate else " (interpolation disabled)"))

    return spread_at


def curve_basis(market_quotes: Sequence, bcds_values: Sequence[tuple[float, float]],
                interpolate: bool = False) -> list[TenorBasisRow]:
    """Market spread minus bond-implied spread at each bond-implied term.

    Terms with no matching market quote come back with the market and basis
    fields absent rather than silently interpolated; pass `interpolate` to
    fill gaps linearly in spread.
    """
    lookup = market_spread_fn(market_quotes, interpolate)
    rows = []
    for term, bcds in bcds_values:
        try:
            market = lookup(term)
        except UsageError:
            rows.append(TenorBasisRow(term, None, bcds, None))
            continue
        rows.append(TenorBasisRow(term, market, bcds, market - bcds))
    return rows


def hedging_cost_differential(bond: CreditBond, curve_basis_fn: Callable[[float], float],
                              fwd_prices: ForwardPriceCurve,
                              risky_pv01_fn: Callable[[float], float],
                              T: float | None = None) -> float:
    """PV of hedging the forward-price rolldown at the market-vs-implied gap.

    Midpoint rule over the forward-price grid:
    -sum basis(mid) * dP / (1 - R) * rpv01(mid).  Positive for a premium
    bond rolling down through a positive curve basis.
    """
    if T is None:
        T = fwd_prices.grid.nodes[-1]
    total = 0.0
    nodes = fwd_prices.grid.nodes
    for i in range(1, len(nodes)):
        if nodes[i] > T + 1e-9:
            break
        mid = 0.5 * (nodes[i - 1] + nodes[i])
        dp = fwd_prices.prices[i] - fwd_prices.prices[i - 1]
        total -= curve_basis_fn(mid) * dp * risky_pv01_fn(mid) / (1.0 - bond.recovery)
    return total


def systematic_bond_basis(curve_basis_at_T: float, hcd: float,
                          risky_pv01_at_T: float) -> float:
    """Matching-maturity basis plus the spread-equivalent hedging differential."""
    if risky_pv01_at_T <= 0.0:
        raise NumericError("risky PV01 must be positive to convert HCD to spread units")
    return curve_basis_at_T + hcd / risky_pv01_at_T


def full_bond_basis(systematic: float, oasf: float) -> float:
    """Bond-specific basis: systematic basis net of the bond's OAS-to-fit."""
    return systematic - oasf


def approximate_coarse_basis(bond: CreditBond, surv: SurvivalCurve, disc: DiscountCurve,
                             market_quotes: Sequence, candidates: Sequence[float],
                             interpolate: bool = False,
                             steps_per_year: int = DEFAULT_PROTECTION_STEPS) -> float:
    """Coarse-grained basis off the cheapest two-CDS hedge.

    Aggregate premium rate of the hedge at market quotes, minus the bond's
    own fair hedge rate (matching-maturity bond-implied spread adjusted by
    its OAS-to-fit).
    """
    spread_fn = market_spread_fn(market_quotes, interpolate)
    hedge = optimize_two_cds(bond, surv, disc, candidates, spread_fn, steps_per_year)
    T = bond.maturity
    rpv_T = cds_engine.risky_pv01(surv, disc, cds_engine.DEFAULT_FREQUENCY, T)
    premium_pv = (hedge.final_notional * spread_fn(T) * rpv_T
                  + hedge.addon_notional * spread_fn(hedge.addon_maturity)
                  * cds_engine.risky_pv01(surv, disc, cds_engine.DEFAULT_FREQUENCY,
                                          hedge.addon_maturity))
    aggregate_rate = premium_pv / rpv_T
    bcds_T = par_spread_at(surv, disc, bond.recovery, T, steps_per_year)
    oasf = oasf_solve(bond, surv, disc, steps_per_year)
    return aggregate_rate - (bcds_T + oasf)


def par_spread_at(surv: SurvivalCurve, disc: DiscountCurve, recovery: float, T: float,
                  steps_per_year: int = DEFAULT_PROTECTION_STEPS) -> float:
    return cds_engine.par_spread(surv, disc, recovery, cds_engine.DEFAULT_FREQUENCY,
                                 T, steps_per_year)


def steepener_sizing(short_tenor: float, long_tenor: float, surv: SurvivalCurve,
                     disc: DiscountCurve, recovery: float, mode: str = "equal-notional",
                     f: int = cds_engine.DEFAULT_FREQUENCY,
                     steps_per_year: int = DEFAULT_PROTECTION_STEPS) -> tuple[float, float]:
    """Notionals (short-protection leg, long-protection leg) for a curve steepener.

    Equal-notional mode sells and buys protection one-for-one; the
    credit01-neutral mode scales the short leg by the Credit01 ratio so a
    parallel quote move nets to zero.
    """
    if short_tenor > long_tenor:
        raise ValueError("short tenor must not exceed long tenor")
    if mode not in ("equal-notional", "credit01-neutral"):
        raise ValueError(f"unknown steepener mode {mode!r}")
    if mode == "equal-notional" or abs(long_tenor - short_tenor) <= 1e-12:
        return 1.0, 1.0
    c01_short = cds_engine.credit01(surv, disc, recovery, f, short_tenor,
                                    steps_per_year=steps_per_year)
    c01_long = cds_engine.credit01(surv, disc, recovery, f, long_tenor,
                                   steps_per_year=steps_per_year)
    if abs(c01_short) < 1e-15:
        raise NumericError("short-leg Credit01 is zero; cannot neutralize")
    return c01_long / c01_short, 1.0
