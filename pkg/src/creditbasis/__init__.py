"""creditbasis: survival-curve analytics for CDS and credit bonds.

Prices CDS and fixed-coupon credit bonds off one survival-curve framework,
derives bond-implied CDS term structures, builds static CDS hedges whose
notionals track the bond's forward-price profile, and computes consistent
CDS-bond basis measures.
"""
from .basis import (
    BasisReport,
    BondBasisRow,
    TenorBasisRow,
    approximate_coarse_basis,
    curve_basis,
    full_bond_basis,
    hedging_cost_differential,
    steepener_sizing,
    systematic_bond_basis,
)
from .bonds import (
    CreditBond,
    ForwardPriceCurve,
    RfcStream,
    bcds_curve,
    bond_pv,
    bond_pv_components,
    bootstrap_hazard_from_bonds,
    forward_price_continuous,
    forward_price_curve,
    forward_price_slope_continuous,
    oasf_solve,
    rfc_continuous,
    rfc_period_amounts,
    rfc_stream,
    zspread,
)
from .cds import (
    CdsLegs,
    CdsQuote,
    bootstrap_hazard_from_cds,
    cds_legs,
    credit01,
    forward_cds_spread,
    par_spread,
    par_spread_continuous,
    premium_leg_pv,
    protection_leg_pv,
    risky_pv01,
)
from .curves import (
    CurveSource,
    DiscountCurve,
    SurvivalCurve,
    TimeGrid,
    integrate_weighted,
)
from .errors import CalibrationError, CreditBasisError, NumericError, UsageError
from .hedging import (
    HedgeKind,
    HedgeLeg,
    HedgeSchedule,
    TwoCdsHedge,
    build_forward_hedge,
    build_pair_hedge,
    forward_notional_continuous,
    forward_notional_discrete,
    optimize_single_cds,
    optimize_two_cds,
    pair_notional,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
