"""Riemann zeta at integer arguments and the predicted visibility densities."""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass

from .numtheory import check_exponent, primes_up_to

DEFAULT_TOL = 1e-12
DEFAULT_TERMS = 10_000

_EPS = sys.float_info.epsilon


@dataclass(frozen=True)
class ZetaValue:
    s: int
    value: float
    abs_error_bound: float


def _remainder_bound(s: int, m: int) -> float:
    # conservative bound on what the three-term Euler-Maclaurin tail leaves out
    return s * (s + 1) * float(m) ** (-s - 2)


def zeta_int(s: int, tol: float = DEFAULT_TOL) -> ZetaValue:
    """zeta(s) for integer s >= 2 with a reported absolute error bound.

    Direct sum of the first M terms plus the Euler-Maclaurin tail
    M^(1-s)/(s-1) - M^(-s)/2 + s*M^(-s-1)/12.  M starts at 10**4 and grows
    only if the remainder bound would still exceed ``tol``.
    """
    if isinstance(s, bool) or not isinstance(s, int):
        raise TypeError(f"s must be an integer, got {type(s).__name__}")
    if s <= 1:
        raise ValueError(f"zeta(s) diverges for s <= 1, got s={s}")
    if not tol > 0:
        raise ValueError(f"tol must be > 0, got {tol}")

    m = DEFAULT_TERMS
    while _remainder_bound(s, m) > tol / 2:
        m *= 2
    head = math.fsum(float(n) ** -s for n in range(1, m + 1))
    mf = float(m)
    tail = mf ** (1 - s) / (s - 1) - mf**-s / 2 + s * mf ** (-s - 1) / 12
    value = head + tail
    # each term is within one ulp, and fsum rounds once more
    rounding = 4 * _EPS * value
    if rounding > tol:
        raise ValueError(f"tol={tol} is below double-precision resolution ({rounding:.1e})")
    return ZetaValue(s, value, _remainder_bound(s, m) + rounding)


def predicted_proportions(b: int, tol: float = DEFAULT_TOL) -> tuple[float, float]:
    """(visible, invisible) limiting proportions 1/zeta(b+1) and 1 - 1/zeta(b+1)."""
    check_exponent(b)
    visible = 1.0 / zeta_int(b + 1, tol).value
    return visible, 1.0 - visible


def euler_product(s: int, prime_limit: int) -> float:
    """Truncated Euler product over primes <= prime_limit."""
    acc = 0.0
    for p in primes_up_to(prime_limit):
        acc -= math.log1p(-(float(p) ** -s))
    return math.exp(acc)


def table_rows(b_list, n: int, method: str = "brute"):
    """One DensityReport per exponent in ``b_list`` over the n x n grid."""
    from .visibility import density_report

    return [density_report(b, n, method) for b in b_list]
