"""Closed-form kernel integrals over piecewise-constant rate curves.

Everything in the continuous-time pricing layer reduces to three integrals
of the combined short rate g(s) = r(s) + h(s):

    risky_discount(t, T)  = exp(-int_t^T g)
    risky_annuity(t, T)   = int_t^T exp(-int_t^u g) du
    default_density(t, T) = int_t^T h(u) exp(-int_t^u g) du

With both curves piecewise constant these have exact per-segment
primitives, so no quadrature error enters the continuous-mode prices or
the identity checks built on them.
"""
from __future__ import annotations

import math

from .curves import DiscountCurve, SurvivalCurve


def _merged_breaks(surv: SurvivalCurve, disc: DiscountCurve, t: float, T: float) -> list[float]:
    breaks = sorted(set(surv.segment_breaks(t, T)) | set(disc.segment_breaks(t, T)))
    return [b for b in breaks if t <= b <= T]


def _unit_flow(g: float, width: float) -> float:
    """int_0^width exp(-g u) du, stable for g near zero."""
    if abs(g) < 1e-14:
        return width
    return -math.expm1(-g * width) / g


def risky_discount(surv: SurvivalCurve, disc: DiscountCurve, t: float, T: float) -> float:
    """Survival-weighted discount factor Q(t,T) * Z(t,T)."""
    return surv.survival_prob(t, T) * disc.discount_factor(t, T)


def risky_annuity(surv: SurvivalCurve, disc: DiscountCurve, t: float, T: float) -> float:
    """PV at t of a continuous unit flow paid while alive over (t, T)."""
    if T < t:
        raise ValueError(f"integration bounds reversed: t={t} > T={T}")
    total = 0.0
    acc = 0.0
    breaks = _merged_breaks(surv, disc, t, T)
    for a, b in zip(breaks, breaks[1:]):
        mid = 0.5 * (a + b)
        g = disc.forward_rate(mid) + surv.hazard_rate(mid)
        total += math.exp(-acc) * _unit_flow(g, b - a)
        acc += g * (b - a)
    return total


def default_density(surv: SurvivalCurve, disc: DiscountCurve, t: float, T: float) -> float:
    """PV at t of a unit payment at the default time, if it falls in (t, T)."""
    if T < t:
        raise ValueError(f"integration bounds reversed: t={t} > T={T}")
    total = 0.0
    acc = 0.0
    breaks = _merged_breaks(surv, disc, t, T)
    for a, b in zip(breaks, breaks[1:]):
        mid = 0.5 * (a + b)
        h = surv.hazard_rate(mid)
        g = disc.forward_rate(mid) + h
        total += math.exp(-acc) * h * _unit_flow(g, b - a)
        acc += g * (b - a)
    return total


def riskless_annuity(disc: DiscountCurve, t: float, T: float) -> float:
    """PV at t of a continuous unit flow over (t, T) with no default risk."""
    if T < t:
        raise ValueError(f"integration bounds reversed: t={t} > T={T}")
    total = 0.0
    acc = 0.0
    breaks = disc.segment_breaks(t, T)
    for a, b in zip(breaks, breaks[1:]):
        r = disc.forward_rate(0.5 * (a + b))
        total += math.exp(-acc) * _unit_flow(r, b - a)
        acc += r * (b - a)
    return total
