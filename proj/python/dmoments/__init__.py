"""Exact leading-order moment constants for derivatives of characteristic
polynomials of orthogonal and symplectic matrices, with Monte Carlo checks."""

from fractions import Fraction

from . import _core
from ._core import (
    NonUnitDivisor,
    PrecisionError,
    a_k_euler,
    estimate_moment,
    euler_factor,
    sample_angles,
    to_decimal,
)

__all__ = [
    "NonUnitDivisor",
    "PrecisionError",
    "a_k_euler",
    "bk",
    "bk_table",
    "estimate_moment",
    "euler_factor",
    "factor_rational",
    "g_series",
    "moment_asymptotic",
    "sample_angles",
    "tau",
    "to_decimal",
]


def _frac(s):
    return Fraction(s)


def g_series(m, degree):
    """Coefficients of g_m(u) up to u^degree."""
    return [_frac(c) for c in _core.g_series(m, degree)]


def tau(k, ell, degree, method="recurrence"):
    """Coefficients of T_{k,ell}(u) up to u^degree."""
    return [_frac(c) for c in _core.tau(k, ell, degree, method)]


def bk_table(group, k_max, method="recurrence", factor=True):
    """Rows for k = 1..k_max; 'value' is a Fraction."""
    rows = _core.bk_table(group, k_max, method, factor)
    for row in rows:
        row["value"] = _frac(row["exact"])
    return rows


def bk(group, k):
    return bk_table(group, k, factor=False)[-1]["value"]


def moment_asymptotic(group, k, N):
    return _frac(_core.moment_asymptotic(group, k, N))


def factor_rational(q):
    return _core.factor_rational(str(Fraction(q)))
