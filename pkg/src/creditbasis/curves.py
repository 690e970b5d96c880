"""Term-structure primitives: time grids, discount and survival curves.

All times are abstract year fractions (no calendars, no day counts).
Both curve types are piecewise-constant in the instantaneous rate:
the discount curve in the forward rate r(s), the survival curve in the
hazard rate h(s).  Rates are right-continuous in time, so the value at a
pillar belongs to the segment that starts there, and the last rate extends
flat beyond the final pillar.  With this representation the kernel
integrals are sums over segments and carry no quadrature error.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

_DUP_TOL = 1e-12


class CurveSource(enum.Enum):
    """Where a survival curve was calibrated from."""

    CDS_IMPLIED = "cds-implied"
    BOND_IMPLIED = "bond-implied"
    USER_SUPPLIED = "user-supplied"


@dataclass(frozen=True)
class TimeGrid:
    """Ordered grid of year-fraction nodes with an optional step hint."""

    nodes: tuple[float, ...]
    step_hint: float | None = None

    def __post_init__(self) -> None:
        if not self.nodes:
            raise ValueError("TimeGrid needs at least one node")
        if self.nodes[0] < 0.0:
            raise ValueError("grid nodes must be non-negative")
        for a, b in zip(self.nodes, self.nodes[1:]):
            if b - a <= _DUP_TOL:
                raise ValueError(f"grid nodes must be strictly increasing: {a} -> {b}")
        object.__setattr__(self, "nodes", tuple(float(t) for t in self.nodes))

    @classmethod
    def regular(cls, start: float, end: float, step: float) -> "TimeGrid":
        """Uniform grid from start to end inclusive (end is always a node)."""
        if step <= 0:
            raise ValueError("step must be positive")
        n = int(round((end - start) / step))
        nodes = [start + i * step for i in range(n + 1)]
        if abs(nodes[-1] - end) > 1e-9:
            nodes = [t for t in nodes if t < end - _DUP_TOL] + [end]
        return cls(tuple(nodes), step_hint=step)

    @classmethod
    def merged(cls, *time_sets: Sequence[float]) -> "TimeGrid":
        """Sorted union of several node collections (tolerance 1e-9)."""
        raw = sorted(t for ts in time_sets for t in ts)
        if not raw:
            raise ValueError("cannot merge empty time sets")
        nodes: list[float] = [raw[0]]
        for t in raw[1:]:
            if t - nodes[-1] > 1e-9:
                nodes.append(t)
        return cls(tuple(nodes))

    def __iter__(self):
        return iter(self.nodes)

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def span(self) -> tuple[float, float]:
        return self.nodes[0], self.nodes[-1]

    def intervals(self) -> list[tuple[float, float]]:
        return list(zip(self.nodes, self.nodes[1:]))

    def refined(self, factor: int) -> "TimeGrid":
        """Split every interval into `factor` equal pieces."""
        if factor < 1:
            raise ValueError("refinement factor must be >= 1")
        if factor == 1 or len(self.nodes) == 1:
            return self
        nodes: list[float] = [self.nodes[0]]
        for a, b in self.intervals():
            nodes.extend(a + (b - a) * k / factor for k in range(1, factor + 1))
        return TimeGrid(tuple(nodes))


class _PiecewiseConstantRateCurve:
    """Shared machinery: cumulative integrals of a piecewise-constant rate.

    Segment i runs over [pillar[i-1], pillar[i]) with rate[i]; rate[-1]
    extends flat past the last pillar.
    """

    def __init__(self, pillars: Sequence[float], rates: Sequence[float]):
        pillars = np.asarray(pillars, dtype=float)
        rates = np.asarray(rates, dtype=float)
        if pillars.ndim != 1 or rates.ndim != 1:
            raise ValueError("pillars and rates must be one-dimensional")
        if pillars.size == 0:
            raise ValueError("curve needs at least one pillar")
        if pillars.size != rates.size:
            raise ValueError("pillars and rates must have the same length")
        if pillars[0] <= 0.0:
            raise ValueError("pillars must be positive")
        if np.any(np.diff(pillars) <= _DUP_TOL):
            raise ValueError("pillars must be strictly increasing")
        self._pillars = pillars
        self._rates = rates
        starts = np.concatenate([[0.0], pillars[:-1]])
        self._cum = np.concatenate([[0.0], np.cumsum(rates * (pillars - starts))])

    @property
    def pillars(self) -> np.ndarray:
        return self._pillars.copy()

    @property
    def rates(self) -> np.ndarray:
        return self._rates.copy()

    def rate_at(self, t: float) -> float:
        """Instantaneous rate at time t (right-continuous)."""
        if t < 0:
            raise ValueError("t must be non-negative")
        i = int(np.searchsorted(self._pillars, t, side="right"))
        return float(self._rates[min(i, self._rates.size - 1)])

    def integral(self, t: float, T: float) -> float:
        """Exact integral of the rate over [t, T] (domain error if T < t)."""
        if t < 0:
            raise ValueError("t must be non-negative")
        if T < t:
            raise ValueError(f"integration bounds reversed: t={t} > T={T}")
        return self._integral_from_zero(T) - self._integral_from_zero(t)

    def _integral_from_zero(self, t: float) -> float:
        i = int(np.searchsorted(self._pillars, t, side="left"))
        if i >= self._pillars.size:
            last = self._pillars[-1]
            return float(self._cum[-1] + self._rates[-1] * (t - last))
        left = 0.0 if i == 0 else self._pillars[i - 1]
        return float(self._cum[i] + self._rates[i] * (t - left))

    def segment_breaks(self, t: float, T: float) -> list[float]:
        """Breakpoints of [t, T] at pillar boundaries, endpoints included."""
        inner = [p for p in self._pillars if t < p < T]
        return [t] + inner + [T] if T > t else [t]


@dataclass(frozen=True)
class DiscountCurve:
    """Riskless term structure of piecewise-constant instantaneous forwards.

    Z(t, T) = exp(-int_t^T r(s) ds).
    """

    pillar_times: tuple[float, ...]
    forward_rates: tuple[float, ...]
    _impl: _PiecewiseConstantRateCurve = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        impl = _PiecewiseConstantRateCurve(self.pillar_times, self.forward_rates)
        object.__setattr__(self, "pillar_times", tuple(float(p) for p in self.pillar_times))
        object.__setattr__(self, "forward_rates", tuple(float(r) for r in self.forward_rates))
        object.__setattr__(self, "_impl", impl)

    @classmethod
    def flat(cls, rate: float) -> "DiscountCurve":
        return cls((1.0,), (float(rate),))

    def discount_factor(self, t: float, T: float) -> float:
        """Z(t, T); exact over segments, flat extrapolation past the last pillar."""
        return math.exp(-self._impl.integral(t, T))

    def forward_rate(self, t: float) -> float:
        """Instantaneous forward rate r(t), right-continuous."""
        return self._impl.rate_at(t)

    def integrated_rate(self, t: float, T: float) -> float:
        return self._impl.integral(t, T)

    def segment_breaks(self, t: float, T: float) -> list[float]:
        return self._impl.segment_breaks(t, T)

    def bumped(self, shift: float) -> "DiscountCurve":
        """Parallel additive shift of every forward rate."""
        return DiscountCurve(self.pillar_times, tuple(r + shift for r in self.forward_rates))


@dataclass(frozen=True)
class SurvivalCurve:
    """Issuer survival term structure of piecewise-constant hazard rates.

    Q(t, T) = exp(-int_t^T h(s) ds), the probability of surviving (t, T]
    conditional on being alive at t.  Tagged with its calibration source so
    downstream consumers can insist on a bond-implied or cds-implied curve.
    """

    pillar_times: tuple[float, ...]
    hazard_rates: tuple[float, ...]
    source: CurveSource = CurveSource.USER_SUPPLIED
    _impl: _PiecewiseConstantRateCurve = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        impl = _PiecewiseConstantRateCurve(self.pillar_times, self.hazard_rates)
        if np.any(impl.rates < 0.0):
            raise ValueError("hazard rates must be non-negative")
        object.__setattr__(self, "pillar_times", tuple(float(p) for p in self.pillar_times))
        object.__setattr__(self, "hazard_rates", tuple(float(h) for h in self.hazard_rates))
        object.__setattr__(self, "_impl", impl)

    @classmethod
    def flat(cls, hazard: float, source: CurveSource = CurveSource.USER_SUPPLIED) -> "SurvivalCurve":
        return cls((1.0,), (float(hazard),), source)

    def survival_prob(self, t: float, T: float) -> float:
        """Q(t, T); exact over segments."""
        return math.exp(-self._impl.integral(t, T))

    def default_prob(self, t: float, T: float) -> float:
        """Probability of default in (t, T] conditional on survival to t."""
        return 1.0 - self.survival_prob(t, T)

    def hazard_rate(self, t: float) -> float:
        """Instantaneous hazard h(t), right-continuous."""
        return self._impl.rate_at(t)

    def average_hazard(self, t: float, T: float) -> float:
        """Time-average hazard over (t, T): -ln Q(t,T) / (T - t)."""
        if T <= t:
            raise ValueError("need T > t for an average hazard")
        return self._impl.integral(t, T) / (T - t)

    def integrated_hazard(self, t: float, T: float) -> float:
        return self._impl.integral(t, T)

    def segment_breaks(self, t: float, T: float) -> list[float]:
        return self._impl.segment_breaks(t, T)

    def with_source(self, source: CurveSource) -> "SurvivalCurve":
        return SurvivalCurve(self.pillar_times, self.hazard_rates, source)


def integrate_weighted(f: Callable[[float], float], grid: TimeGrid, refinement: int = 1) -> float:
    """Composite Simpson quadrature of f over the span of `grid`.

    Every grid interval is split into 2**(refinement-1) panels, so pricing
    code can pass a grid whose nodes sit on curve pillars and refine from
    there.  Exact for cubics on each panel.
    """
    if refinement < 1:
        raise ValueError("refinement must be >= 1")
    if len(grid) < 2:
        raise ValueError("integration grid needs at least two nodes")
    total = 0.0
    panels = 2 ** (refinement - 1)
    for a, b in grid.intervals():
        width = (b - a) / panels
        for k in range(panels):
            lo = a + k * width
            hi = lo + width
            mid = 0.5 * (lo + hi)
            fl, fm, fh = f(lo), f(mid), f(hi)
            if not (math.isfinite(fl) and math.isfinite(fm) and math.isfinite(fh)):
                raise ValueError(f"integrand not finite on [{lo}, {hi}]")
            total += (hi - lo) / 6.0 * (fl + 4.0 * fm + fh)
    return total
