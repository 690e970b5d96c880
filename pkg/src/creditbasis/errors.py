"""Exception types shared across the pricing and calibration modules."""
from __future__ import annotations


class CreditBasisError(Exception):
    """Base class for all library-specific errors."""


class UsageError(CreditBasisError):
    """Bad inputs at the tool level: missing files, unknown ids, empty data."""


class CalibrationError(CreditBasisError):
    """A bootstrap could not fit an instrument (no root, negative hazard).

    The message names the offending tenor or bond id so the failing quote
    can be located in the input file.
    """


class NumericError(CreditBasisError):
    """A numerical routine failed: degenerate annuity, no bracket, zero risk."""
