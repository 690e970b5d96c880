"""CDS pricing engine: legs, par and forward spreads, Credit01, bootstrap.

Premium legs follow the standard running-spread contract: accrual payments
of S/f at the payment dates, plus half a period of accrued premium paid at
the period end if default falls inside the period.  Protection legs pay
(1 - R) at the end of the fine-grid bucket containing the default; the
bucket width is a refinement knob (monthly by default).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from scipy.optimize import brentq

from . import kernels
from .curves import CurveSource, DiscountCurve, SurvivalCurve
from .errors import CalibrationError, NumericError

DEFAULT_FREQUENCY = 4
DEFAULT_PROTECTION_STEPS = 12  # buckets per year for the default-time grid

_MAX_HAZARD = 10.0


@dataclass(frozen=True)
class CdsQuote:
    """A par CDS quote: tenor in years, running spread as a decimal."""

    tenor: float
    spread: float
    frequency: int = DEFAULT_FREQUENCY
    recovery: float = 0.4

    def __post_init__(self) -> None:
        if self.tenor <= 0:
            raise ValueError("quote tenor must be positive")
        if self.spread < 0:
            raise ValueError("quote spread must be non-negative")
        if not 0.0 <= self.recovery < 1.0:
            raise ValueError("recovery must lie in [0, 1)")
        if self.frequency < 1:
            raise ValueError("payment frequency must be at least 1 per year")


@dataclass(frozen=True)
class CdsLegs:
    """Both legs of a CDS per unit notional.

    `risky_annuity` is the premium leg PV per unit of running spread;
    `protection_pv` is the contingent-payment PV.
    """

    risky_annuity: float
    protection_pv: float
    recovery: float

    def __post_init__(self) -> None:
        if self.risky_annuity < 0 or self.protection_pv < 0:
            raise ValueError("leg PVs cannot be negative")
        if self.protection_pv > (1.0 - self.recovery) + 1e-12:
            raise ValueError("protection leg cannot exceed loss severity 1 - R")

    def par_spread(self) -> float:
        return self.protection_pv / self.risky_annuity


def payment_grid(T: float, frequency: int) -> list[float]:
    """Payment dates i/f up to T, with a final stub at T if needed."""
    if T <= 0:
        raise ValueError("maturity must be positive")
    step = 1.0 / frequency
    n = int(T * frequency + 1e-9)
    dates = [(i + 1) * step for i in range(n)]
    if not dates or T - dates[-1] > 1e-9:
        dates.append(T)
    dates[-1] = T
    return dates


def protection_grid(T: float, steps_per_year: int = DEFAULT_PROTECTION_STEPS,
                    extra: Sequence[float] = ()) -> list[float]:
    """Fine default-time bucket boundaries on (0, T]; includes any `extra` dates."""
    if steps_per_year < 1:
        raise ValueError("steps_per_year must be >= 1")
    step = 1.0 / steps_per_year
    n = int(T * steps_per_year + 1e-9)
    nodes = [(i + 1) * step for i in range(n)] + [T] + [e for e in extra if 0 < e < T]
    nodes = sorted(set(round(x, 12) for x in nodes))
    out: list[float] = []
    for x in nodes:
        if not out or x - out[-1] > 1e-9:
            out.append(x)
    if out and abs(out[-1] - T) <= 1e-9:
        out[-1] = T
    return out


def risky_pv01(surv: SurvivalCurve, disc: DiscountCurve, f: int, T: float) -> float:
    """Premium leg PV per unit spread, accrued-on-default included.

    Sum of accrual * Q * Z over the payment grid plus half-period accrual
    weighted by each period's default probability, paid at the period end.
    """
    ann = 0.0
    prev = 0.0
    for t in payment_grid(T, f):
        accrual = t - prev
        z = disc.discount_factor(0.0, t)
        ann += accrual * surv.survival_prob(0.0, t) * z
        ann += 0.5 * accrual * (surv.survival_prob(0.0, prev) - surv.survival_prob(0.0, t)) * z
        prev = t
    return ann


def premium_leg_pv(spread: float, f: int, surv: SurvivalCurve, disc: DiscountCurve,
                   T: float) -> float:
    """PV of the premium leg for a running spread (per unit notional)."""
    return spread * risky_pv01(surv, disc, f, T)


def protection_leg_pv(surv: SurvivalCurve, disc: DiscountCurve, recovery: float, T: float,
                      steps_per_year: int = DEFAULT_PROTECTION_STEPS) -> float:
    """PV of (1 - R) paid at the end of the default bucket, fine grid.

    Full recovery (R = 1) is allowed and prices to zero.
    """
    if not 0.0 <= recovery <= 1.0:
        raise ValueError("recovery must lie in [0, 1]")
    pv = 0.0
    prev = 0.0
    for t in protection_grid(T, steps_per_year):
        dq = surv.survival_prob(0.0, prev) - surv.survival_prob(0.0, t)
        pv += dq * disc.discount_factor(0.0, t)
        prev = t
    return (1.0 - recovery) * pv


def cds_legs(surv: SurvivalCurve, disc: DiscountCurve, recovery: float, f: int, T: float,
             steps_per_year: int = DEFAULT_PROTECTION_STEPS) -> CdsLegs:
    return CdsLegs(
        risky_annuity=risky_pv01(surv, disc, f, T),
        protection_pv=protection_leg_pv(surv, disc, recovery, T, steps_per_year),
        recovery=recovery,
    )


def par_spread(surv: SurvivalCurve, disc: DiscountCurve, recovery: float, f: int, T: float,
               steps_per_year: int = DEFAULT_PROTECTION_STEPS) -> float:
    """Breakeven running spread: protection PV / risky annuity."""
    legs = cds_legs(surv, disc, recovery, f, T, steps_per_year)
    if legs.risky_annuity < 1e-12:
        raise NumericError(
            f"degenerate premium annuity {legs.risky_annuity:.3e} for T={T}, f={f}; "
            "the survival-discounted accruals have collapsed to zero"
        )
    return legs.par_spread()


def par_spread_continuous(surv: SurvivalCurve, disc: DiscountCurve, recovery: float,
                          T: float) -> float:
    """Continuous-time par spread (1-R) * default-density / annuity kernels."""
    return forward_cds_spread(surv, disc, recovery, 0.0, T)


def forward_cds_spread(surv: SurvivalCurve, disc: DiscountCurve, recovery: float,
                       t: float, T: float) -> float:
    """Breakeven spread of protection over (t, T), preset today.

    Both legs knock out on default before t; the survival weight to t
    cancels in the ratio, leaving kernel integrals over (t, T) only.
    """
    if t >= T:
        raise ValueError(f"forward period is empty: t={t} >= T={T}")
    if not 0.0 <= recovery < 1.0:
        raise ValueError("recovery must lie in [0, 1)")
    annuity = kernels.risky_annuity(surv, disc, t, T)
    if annuity < 1e-14:
        raise NumericError(f"degenerate forward annuity over ({t}, {T})")
    return (1.0 - recovery) * kernels.default_density(surv, disc, t, T) / annuity


def bootstrap_hazard_from_cds(quotes: Sequence[CdsQuote], disc: DiscountCurve,
                              steps_per_year: int = DEFAULT_PROTECTION_STEPS) -> SurvivalCurve:
    """Sequential piecewise-constant hazard bootstrap from par CDS quotes.

    Pillars sit at the quote tenors; each segment hazard is solved so the
    quote reprices exactly.  Raises CalibrationError naming the tenor when
    a quote implies a negative forward hazard or cannot be reached.
    """
    if not quotes:
        raise ValueError("need at least one quote to bootstrap")
    recoveries = {q.recovery for q in quotes}
    if len(recoveries) > 1:
        raise ValueError("quotes must share a single recovery assumption")
    for a, b in zip(quotes, quotes[1:]):
        if b.tenor - a.tenor <= 1e-9:
            raise ValueError("quote tenors must be strictly increasing")

    pillars: list[float] = []
    hazards: list[float] = []
    for q in quotes:
        pillars.append(q.tenor)

        def repricing_gap(h: float) -> float:
            trial = SurvivalCurve(tuple(pillars), tuple(hazards + [h]), CurveSource.CDS_IMPLIED)
            model = par_spread(trial, disc, q.recovery, q.frequency, q.tenor, steps_per_year)
            return model - q.spread

        gap_at_zero = repricing_gap(0.0)
        if gap_at_zero > 0.0:
            raise CalibrationError(
                f"quote at tenor {q.tenor}y implies a negative forward hazard "
                f"(model spread exceeds quote by {gap_at_zero * 1e4:.2f}bp at h=0)"
            )
        if repricing_gap(_MAX_HAZARD) < 0.0:
            raise CalibrationError(f"quote at tenor {q.tenor}y is unreachable (hazard > {_MAX_HAZARD})")
        hazards.append(brentq(repricing_gap, 0.0, _MAX_HAZARD, xtol=1e-16, rtol=8.9e-16))

    return SurvivalCurve(tuple(pillars), tuple(hazards), CurveSource.CDS_IMPLIED)


def credit01(surv: SurvivalCurve, disc: DiscountCurve, recovery: float, f: int, T: float,
             side: str = "buy", quote_bump: float = 0.5e-4,
             steps_per_year: int = DEFAULT_PROTECTION_STEPS) -> float:
    """Mark-to-market change of a par CDS per 1bp parallel quote widening.

    The quoted curve is rebuilt from the survival curve at its pillar
    tenors (plus T), shifted by +/- quote_bump, re-bootstrapped, and the
    position at the original par spread is revalued; symmetric finite
    difference scaled to a 1bp move.  `side` is "buy" (long protection,
    positive Credit01) or "sell".
    """
    if side not in ("buy", "sell"):
        raise ValueError(f"side must be 'buy' or 'sell', got {side!r}")
    tenors = sorted({p for p in surv.pillar_times if p < T - 1e-9} | {T})
    base = [par_spread(surv, disc, recovery, f, tenor, steps_per_year) for tenor in tenors]
    contract_spread = base[-1]

    def mtm(shift: float) -> float:
        shifted = [CdsQuote(tenor, s + shift, f, recovery) for tenor, s in zip(tenors, base)]
        curve = bootstrap_hazard_from_cds(shifted, disc, steps_per_year)
        legs = cds_legs(curve, disc, recovery, f, T, steps_per_year)
        return legs.protection_pv - contract_spread * legs.risky_annuity

    value = (mtm(quote_bump) - mtm(-quote_bump)) * (1e-4 / (2.0 * quote_bump))
    return value if side == "buy" else -value


def make_bcds_spread_fn(surv: SurvivalCurve, disc: DiscountCurve, recovery: float,
                        f: int = DEFAULT_FREQUENCY,
                        steps_per_year: int = DEFAULT_PROTECTION_STEPS) -> Callable[[float], float]:
    """Par-spread-by-tenor callable off a survival curve (used as a quote source)."""

    def spread_at(tenor: float) -> float:
        return par_spread(surv, disc, recovery, f, tenor, steps_per_year)

    return spread_at
