"""Spectral solver for the C3 hindered rotor H = -d^2/dphi^2 + lambda cos(3 phi).

Thin layer over the compiled ``_core`` extension. Extended-precision results
(``digits > 15``) come back as :class:`decimal.Decimal`, series coefficients as
:class:`fractions.Fraction`.
"""

from decimal import Decimal
from fractions import Fraction

from . import _core
from ._core import (
    InvalidArgument,
    NumericalFailure,
    asymptotic_energy,
    build_block,
    characteristic,
    complex_pair_continuation,
    count_below,
    dense_complex_spectrum,
    dense_oracle,
    real_spectrum_st,
)

__all__ = [
    "InvalidArgument",
    "NumericalFailure",
    "asymptotic_energy",
    "build_block",
    "characteristic",
    "complex_pair_continuation",
    "count_below",
    "dense_complex_spectrum",
    "dense_oracle",
    "exceptional_points",
    "real_spectrum_st",
    "rs_series",
    "solve_spectrum",
    "tunneling_splitting",
]


def _number(value):
    return Decimal(value) if isinstance(value, str) else value


def solve_spectrum(species, lambda_, levels, tol=None, digits=15, truncation=None):
    values = _core.solve_spectrum(species, str(lambda_), levels, None if tol is None else str(tol), digits, truncation)
    return [_number(v) for v in values]


def tunneling_splitting(n, lambda_, digits=15):
    return _number(_core.tunneling_splitting(n, str(lambda_), digits))


def rs_series(species, level, order):
    return [Fraction(c) for c in _core.rs_series(species, level, order)]


def exceptional_points(species, g_min=0.0, g_max=10.0, g_step=0.05, levels=2, digits=20):
    """Exceptional points found in [g_min, g_max]; g and energy as Decimal."""
    points = _core.exceptional_points(species, g_min, g_max, g_step, levels, digits)
    for p in points:
        p["g_text"], p["energy_text"] = p["g"], p["energy"]
        p["g"], p["energy"] = Decimal(p["g"]), Decimal(p["energy"])
    return points


def continuation(species, point, g):
    """Complex eigenvalue (Im > 0) of the pair born at `point`, followed to g."""
    raw = dict(point, g=point["g_text"], energy=point["energy_text"])
    return complex_pair_continuation(species, raw, g)
