"""Batch command-line interface.

Subcommands: curve, bcds, hedge, basis, replicate-fig2a, replicate-fig2b.
Exit codes: 0 success, 2 usage, 3 calibration, 4 numeric.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, replace
from pathlib import Path

from . import basis as basis_mod
from . import bonds as bond_engine
from . import cds as cds_engine
from . import fileio, replication
from .curves import CurveSource, TimeGrid
from .errors import CalibrationError, NumericError, UsageError

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CALIBRATION = 3
EXIT_NUMERIC = 4


@dataclass(frozen=True)
class RunConfig:
    """Resolved run settings; CLI flags override config-file values."""

    discount_curve: str | None = None
    bonds: str | None = None
    cds_quotes: str | None = None
    recovery: float = 0.4
    coupon_recovery: float = 0.0
    grid_step: float = 0.5
    refinement: int = 1
    interpolate: bool = False
    output_dir: str = "."

    def __post_init__(self) -> None:
        if self.grid_step <= 0:
            raise UsageError("grid step must be positive")
        if self.refinement < 1:
            raise UsageError("refinement level must be >= 1")

    @property
    def steps_per_year(self) -> int:
        """Fine default-bucket density: monthly at refinement 1, doubling after."""
        return 12 * 2 ** (self.refinement - 1)


_CONFIG_KEYS = {
    "discount_curve": str, "bonds": str, "cds_quotes": str,
    "recovery": float, "coupon_recovery": float, "grid_step": float,
    "refinement": int, "interpolate": None, "output_dir": str,
}


def _parse_bool(raw: str) -> bool:
    lowered = raw.lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"expected a boolean, got {raw!r}")


def resolve_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if getattr(args, "config", None):
        raw = fileio.read_config(args.config)
        unknown = set(raw) - set(_CONFIG_KEYS)
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
        updates = {}
        for key, value in raw.items():
            conv = _CONFIG_KEYS[key]
            if conv is None:
                updates[key] = _parse_bool(value)
            else:
                try:
                    updates[key] = conv(value)
                except ValueError as exc:
                    raise UsageError(f"bad config value for {key}: {value!r}") from exc
        cfg = replace(cfg, **updates)
    overrides = {}
    for key in _CONFIG_KEYS:
        flag = getattr(args, key, None)
        if flag is not None and flag is not False:
            overrides[key] = flag
    if overrides:
        cfg = replace(cfg, **overrides)
    return cfg


def _require(cfg: RunConfig, *fields: str) -> None:
    missing = [f for f in fields if getattr(cfg, f) is None]
    if missing:
        raise UsageError("missing required inputs: " + ", ".join(missing))


def _outpath(cfg: RunConfig, name: str) -> Path:
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out / name


def _write(path: Path, text: str) -> None:
    path.write_text(text)
    print(f"wrote {path}")


def _load_market(cfg: RunConfig):
    disc = fileio.read_discount_curve(cfg.discount_curve)
    bonds = fileio.read_bonds(cfg.bonds) if cfg.bonds else None
    quotes = (fileio.read_cds_quotes(cfg.cds_quotes, cfg.recovery)
              if cfg.cds_quotes else None)
    return disc, bonds, quotes


def cmd_curve(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    disc, bonds, quotes = _load_market(cfg)
    if args.source == "cds":
        _require(cfg, "cds_quotes")
        curve = cds_engine.bootstrap_hazard_from_cds(quotes, disc, cfg.steps_per_year)
    else:
        _require(cfg, "bonds")
        bonds = sorted(bonds, key=lambda b: b.maturity)
        curve = bond_engine.bootstrap_hazard_from_bonds(bonds, disc, cfg.steps_per_year)
    fileio.write_hazard_curve(_outpath(cfg, f"hazard_{args.source}.csv"), curve)
    print(f"wrote {_outpath(cfg, f'hazard_{args.source}.csv')}")
    return EXIT_OK


def cmd_bcds(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    _require(cfg, "discount_curve", "bonds")
    disc, bonds, _ = _load_market(cfg)
    if not bonds:
        raise UsageError("bond file holds no bonds")
    bonds = sorted(bonds, key=lambda b: b.maturity)
    curve = bond_engine.bootstrap_hazard_from_bonds(bonds, disc, cfg.steps_per_year)
    recovery = bonds[0].recovery
    terms = [b.maturity for b in bonds]
    bcds = bond_engine.bcds_curve(curve, disc, recovery, cds_engine.DEFAULT_FREQUENCY,
                                  terms, cfg.steps_per_year)
    lines = ["tenor_years,bcds_bp"]
    lines += [f"{t:.2f},{fileio.fmt_bp(s)}" for t, s in bcds]
    _write(_outpath(cfg, "bcds_term_structure.csv"), "\n".join(lines) + "\n")

    lines = ["bond_id,maturity_years,zspread_bp,bcds_bp"]
    for b, (_, s) in zip(bonds, bcds):
        z = bond_engine.zspread(b, disc)
        lines.append(f"{b.bond_id},{b.maturity:.2f},{fileio.fmt_bp(z)},{fileio.fmt_bp(s)}")
    _write(_outpath(cfg, "zspread_comparison.csv"), "\n".join(lines) + "\n")
    return EXIT_OK


def _hedge_grid(bond: bond_engine.CreditBond) -> TimeGrid:
    return TimeGrid(tuple([0.0] + bond.payment_dates()))


def cmd_hedge(args: argparse.Namespace) -> int:
    from .hedging import build_forward_hedge, build_pair_hedge, optimize_two_cds

    cfg = resolve_config(args)
    _require(cfg, "discount_curve", "bonds")
    disc, bonds, quotes = _load_market(cfg)
    bonds = sorted(bonds, key=lambda b: b.maturity)
    by_id = {b.bond_id: b for b in bonds}
    if args.bond_id not in by_id:
        raise UsageError(f"unknown bond id {args.bond_id!r}; "
                         f"known: {', '.join(sorted(by_id))}")
    bond = by_id[args.bond_id]
    curve = bond_engine.bootstrap_hazard_from_bonds(bonds, disc, cfg.steps_per_year)
    grid = _hedge_grid(bond)

    if args.mode in ("forward", "pairs"):
        build = build_forward_hedge if args.mode == "forward" else build_pair_hedge
        schedule = build(bond, curve, disc, grid, cfg.steps_per_year)
        _write(_outpath(cfg, f"hedge_{bond.bond_id}_{args.mode}.csv"), schedule.to_csv())
        return EXIT_OK

    if args.candidates:
        candidates = [float(c) for c in args.candidates.split(",")]
    else:
        candidates = sorted({float(k) for k in range(1, int(bond.maturity) + 1)}
                            | {bond.maturity})
    spread_fn = (basis_mod.market_spread_fn(quotes, cfg.interpolate) if quotes else None)
    hedge = optimize_two_cds(bond, curve, disc, candidates, spread_fn, cfg.steps_per_year)
    lines = ["addon_maturity_years,addon_notional,total_cost"]
    for tau, notional, cost in hedge.candidate_costs:
        lines.append(f"{tau:.2f},{fileio.fmt_notional(notional)},{fileio.fmt_value(cost)}")
    _write(_outpath(cfg, f"hedge_{bond.bond_id}_coarse.csv"), "\n".join(lines) + "\n")
    best = (f"best,{hedge.addon_maturity:.2f},{fileio.fmt_notional(hedge.addon_notional)},"
            f"{fileio.fmt_value(hedge.total_cost)}\n")
    _write(_outpath(cfg, f"hedge_{bond.bond_id}_coarse_best.csv"),
           "choice,addon_maturity_years,addon_notional,total_cost\n" + best)
    return EXIT_OK


def cmd_basis(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    _require(cfg, "discount_curve", "bonds", "cds_quotes")
    disc, bonds, quotes = _load_market(cfg)
    bonds = sorted(bonds, key=lambda b: b.maturity)
    curve = bond_engine.bootstrap_hazard_from_bonds(bonds, disc, cfg.steps_per_year)
    recovery = bonds[0].recovery
    tenors = sorted({q.tenor for q in quotes})
    bcds = bond_engine.bcds_curve(curve, disc, recovery, cds_engine.DEFAULT_FREQUENCY,
                                  tenors, cfg.steps_per_year)
    tenor_rows = basis_mod.curve_basis(quotes, bcds, cfg.interpolate)
    missing = [f"{r.term:g}y" for r in tenor_rows if r.market_spread is None]
    if missing:
        raise UsageError("no market quote at tenors: " + ", ".join(missing)
                         + " (pass --interpolate to fill gaps)")

    basis_by_tenor = {r.term: r.curve_basis for r in tenor_rows}
    quote_fn = basis_mod.market_spread_fn(quotes, interpolate=True)

    def basis_fn(t: float) -> float:
        lo = max((k for k in basis_by_tenor if k <= t), default=None)
        hi = min((k for k in basis_by_tenor if k >= t), default=None)
        if lo is None:
            return basis_by_tenor[hi]
        if hi is None:
            return basis_by_tenor[lo]
        if hi == lo:
            return basis_by_tenor[lo]
        w = (t - lo) / (hi - lo)
        return (1 - w) * basis_by_tenor[lo] + w * basis_by_tenor[hi]

    def rpv01_fn(t: float) -> float:
        return cds_engine.risky_pv01(curve, disc, cds_engine.DEFAULT_FREQUENCY, t)

    candidates = sorted(set(tenors))
    bond_rows = []
    for b in bonds:
        grid = _hedge_grid(b)
        fwd = bond_engine.forward_price_curve(b, curve, disc, grid, cfg.steps_per_year)
        oasf = bond_engine.oasf_solve(b, curve, disc, cfg.steps_per_year)
        hcd = basis_mod.hedging_cost_differential(b, basis_fn, fwd, rpv01_fn)
        bcds_T = basis_mod.par_spread_at(curve, disc, recovery, b.maturity,
                                         cfg.steps_per_year)
        systematic = basis_mod.systematic_bond_basis(
            quote_fn(b.maturity) - bcds_T, hcd, rpv01_fn(b.maturity))
        full = basis_mod.full_bond_basis(systematic, oasf)
        usable = [c for c in candidates if c <= b.maturity + 1e-9]
        approx = None
        if usable:
            approx = basis_mod.approximate_coarse_basis(
                b, curve, disc, quotes, sorted(set(usable) | {b.maturity}),
                interpolate=True, steps_per_year=cfg.steps_per_year)
        bond_rows.append(basis_mod.BondBasisRow(b.bond_id, oasf, hcd, systematic,
                                                full, approx))

    report = basis_mod.BasisReport(tuple(tenor_rows), tuple(bond_rows))
    _write(_outpath(cfg, "curve_basis.csv"), report.tenor_csv())
    _write(_outpath(cfg, "bond_basis.csv"), report.bond_csv())
    return EXIT_OK


def cmd_replicate(args: argparse.Namespace, which: str) -> int:
    cfg = resolve_config(args)
    if which == "fig2a":
        schedule = replication.forward_hedge_table(cfg.steps_per_year)
    else:
        schedule = replication.pair_hedge_table(cfg.steps_per_year)
    _write(_outpath(cfg, f"{which}_schedule.csv"), schedule.to_csv())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="creditbasis",
        description="Survival-curve CDS and credit-bond analytics",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="flat key=value settings file")
        p.add_argument("--discount-curve", dest="discount_curve")
        p.add_argument("--bonds")
        p.add_argument("--cds-quotes", dest="cds_quotes")
        p.add_argument("--recovery", type=float)
        p.add_argument("--coupon-recovery", dest="coupon_recovery", type=float)
        p.add_argument("--grid-step", dest="grid_step", type=float)
        p.add_argument("--refinement", type=int)
        p.add_argument("--interpolate", action="store_true", default=None)
        p.add_argument("--output-dir", dest="output_dir")

    p_curve = sub.add_parser("curve", help="bootstrap a hazard curve")
    p_curve.add_argument("--source", choices=("cds", "bonds"), required=True)
    add_common(p_curve)
    p_curve.set_defaults(fn=cmd_curve)

    p_bcds = sub.add_parser("bcds", help="bond-implied spread term structure")
    add_common(p_bcds)
    p_bcds.set_defaults(fn=cmd_bcds)

    p_hedge = sub.add_parser("hedge", help="static hedge schedule for one bond")
    p_hedge.add_argument("--bond-id", dest="bond_id", required=True)
    p_hedge.add_argument("--mode", choices=("forward", "pairs", "coarse"),
                         default="forward")
    p_hedge.add_argument("--candidates", help="comma list of add-on maturities")
    add_common(p_hedge)
    p_hedge.set_defaults(fn=cmd_hedge)

    p_basis = sub.add_parser("basis", help="curve and per-bond basis report")
    add_common(p_basis)
    p_basis.set_defaults(fn=cmd_basis)

    p_2a = sub.add_parser("replicate-fig2a",
                          help="emit the bundled premium-bond forward-hedge table")
    add_common(p_2a)
    p_2a.set_defaults(fn=lambda a: cmd_replicate(a, "fig2a"))

    p_2b = sub.add_parser("replicate-fig2b",
                          help="emit the bundled premium-bond spot-pair hedge table")
    add_common(p_2b)
    p_2b.set_defaults(fn=lambda a: cmd_replicate(a, "fig2b"))

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CalibrationError as exc:
        print(f"calibration error: {exc}", file=sys.stderr)
        return EXIT_CALIBRATION
    except (NumericError, ValueError, ArithmeticError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
