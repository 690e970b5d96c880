"""CSV and config file ingestion plus the fixed output formats.

Report columns use fixed decimal formatting (prices at 2dp of percent,
spreads at 2dp of bp, notionals at 4dp of face) so regenerated outputs
diff cleanly.  Curve files keep full precision because they round-trip
back into the engine.
"""
from __future__ import annotations

import csv
import io
from pathlib import Path
from typing import Sequence

from .bonds import CreditBond
from .cds import CdsQuote
from .curves import CurveSource, DiscountCurve, SurvivalCurve
from .errors import UsageError


def _clean(x: float) -> float:
    return 0.0 if x == 0.0 else x  # normalizes -0.0


def fmt_pct(x: float) -> str:
    """Price-like value as percent of face, 2dp."""
    return f"{_clean(round(x * 100, 2)):.2f}"


def fmt_bp(x: float) -> str:
    """Spread-like value in basis points, 2dp."""
    return f"{_clean(round(x * 1e4, 2)):.2f}"


def fmt_notional(x: float) -> str:
    return f"{_clean(round(x, 4)):.4f}"


def fmt_value(x: float) -> str:
    """Generic PV-of-face quantity, 6dp."""
    return f"{_clean(round(x, 6)):.6f}"


def fmt_rate(x: float) -> str:
    """Full-precision decimal rate for curve files."""
    return repr(float(x))


def _read_rows(path: Path, expected_header: Sequence[str]) -> list[tuple[int, list[str]]]:
    try:
        text = path.read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise UsageError(f"{path}: file is empty")
    header = [h.strip() for h in rows[0]]
    if header != list(expected_header):
        raise UsageError(
            f"{path}:1: expected header {','.join(expected_header)!r}, got {','.join(header)!r}"
        )
    out = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(expected_header):
            raise UsageError(f"{path}:{lineno}: expected {len(expected_header)} fields")
        out.append((lineno, [c.strip() for c in row]))
    return out


def _parse_float(path: Path, lineno: int, field: str, raw: str) -> float:
    try:
        return float(raw)
    except ValueError as exc:
        raise UsageError(f"{path}:{lineno}: bad {field} value {raw!r}") from exc


def read_discount_curve(path: str | Path) -> DiscountCurve:
    """Discount curve file: `pillar_years,rate` with decimal forward rates."""
    path = Path(path)
    rows = _read_rows(path, ("pillar_years", "rate"))
    if not rows:
        raise UsageError(f"{path}: no curve pillars")
    pillars, rates = [], []
    for lineno, (p, r) in rows:
        pillars.append(_parse_float(path, lineno, "pillar_years", p))
        rates.append(_parse_float(path, lineno, "rate", r))
    try:
        return DiscountCurve(tuple(pillars), tuple(rates))
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def read_hazard_curve(path: str | Path,
                      source: CurveSource = CurveSource.USER_SUPPLIED) -> SurvivalCurve:
    """Hazard curve file: `pillar_years,hazard` with decimal intensities."""
    path = Path(path)
    rows = _read_rows(path, ("pillar_years", "hazard"))
    if not rows:
        raise UsageError(f"{path}: no curve pillars")
    pillars, hazards = [], []
    for lineno, (p, h) in rows:
        pillars.append(_parse_float(path, lineno, "pillar_years", p))
        hazards.append(_parse_float(path, lineno, "hazard", h))
    try:
        return SurvivalCurve(tuple(pillars), tuple(hazards), source)
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def write_hazard_curve(path: str | Path, curve: SurvivalCurve) -> None:
    lines = ["pillar_years,hazard"]
    lines += [f"{fmt_rate(p)},{fmt_rate(h)}"
              for p, h in zip(curve.pillar_times, curve.hazard_rates)]
    Path(path).write_text("\n".join(lines) + "\n")


def read_cds_quotes(path: str | Path, recovery: float, frequency: int = 4) -> list[CdsQuote]:
    """Quote file: `tenor_years,spread_bp`; recovery and frequency from config."""
    path = Path(path)
    rows = _read_rows(path, ("tenor_years", "spread_bp"))
    if not rows:
        raise UsageError(f"{path}: no CDS quotes")
    quotes = []
    for lineno, (tenor, spread_bp) in rows:
        try:
            quotes.append(CdsQuote(
                tenor=_parse_float(path, lineno, "tenor_years", tenor),
                spread=_parse_float(path, lineno, "spread_bp", spread_bp) / 1e4,
                frequency=frequency,
                recovery=recovery,
            ))
        except ValueError as exc:
            raise UsageError(f"{path}:{lineno}: {exc}") from exc
    return quotes


_BOND_HEADER = ("id", "coupon_pct", "frequency", "maturity_years", "price_pct",
                "recovery", "coupon_recovery")


def read_bonds(path: str | Path) -> list[CreditBond]:
    path = Path(path)
    rows = _read_rows(path, _BOND_HEADER)
    if not rows:
        raise UsageError(f"{path}: no bonds")
    bonds = []
    for lineno, row in rows:
        bond_id, coupon_pct, freq, maturity, price_pct, recovery, coupon_rec = row
        try:
            bonds.append(CreditBond(
                bond_id=bond_id,
                coupon=_parse_float(path, lineno, "coupon_pct", coupon_pct) / 100.0,
                frequency=int(_parse_float(path, lineno, "frequency", freq)),
                maturity=_parse_float(path, lineno, "maturity_years", maturity),
                price=_parse_float(path, lineno, "price_pct", price_pct) / 100.0,
                recovery=_parse_float(path, lineno, "recovery", recovery),
                coupon_recovery=_parse_float(path, lineno, "coupon_recovery", coupon_rec),
            ))
        except ValueError as exc:
            raise UsageError(f"{path}:{lineno}: {exc}") from exc
    return bonds


def read_config(path: str | Path) -> dict[str, str]:
    """Flat key=value config; blank lines and # comments are skipped."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    out: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise UsageError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, value = stripped.split("=", 1)
        out[key.strip()] = value.strip()
    return out
