"""b-visibility of lattice points and counts over rectangular grids.

A point (r, s) in N x N is b-invisible when some k > 1 has k | r and
k**b | s, i.e. when ggcd(b, r, s) > 1.  Grids are the closed box
[1, N] x [1, M]; points on the axes are not part of the domain.

Invisible cells are counted three independent ways:

* ``brute``   -- ggcd evaluated at every point,
* ``sieve``   -- for each prime p <= N, mark rows p | r against columns p**b | s,
* ``moebius`` -- sum of mu(k) * floor(N/k) * floor(N/k**b) visible points.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor, ThreadPoolExecutor
from dataclasses import asdict, dataclass, fields
from fractions import Fraction

import numpy as np

from .numtheory import (
    _check_positive,
    _factor_cached,
    _ggcd_from_factors,
    check_exponent,
    ggcd,
    moebius_up_to,
    primes_up_to,
)
from .zeta import predicted_proportions

METHODS = ("brute", "sieve", "moebius")
DEFAULT_CELL_CAP = 2**31
# rows per sieve band; bounds the unpacked scratch array
_BAND_CELLS = 1 << 22


class BudgetExceededError(ValueError):
    """The requested bitmap is larger than the configured cell cap."""


@dataclass(frozen=True)
class Point:
    r: int
    s: int

    def __post_init__(self) -> None:
        _check_positive("r", self.r)
        _check_positive("s", self.s)


def _as_point(p) -> Point:
    return p if isinstance(p, Point) else Point(*p)


def is_b_visible(b: int, p) -> bool:
    p = _as_point(p)
    return ggcd(b, p.r, p.s) == 1


def sight_coefficient(b: int, p) -> Fraction:
    """The unique rational a with s = a * r**b, in lowest terms."""
    check_exponent(b)
    p = _as_point(p)
    return Fraction(p.s, p.r**b)


def _count_rows_brute(b: int, r_lo: int, r_hi: int, n: int) -> int:
    count = 0
    for r in range(r_lo, r_hi):
        fac = _factor_cached(r)
        if not fac:
            continue
        for s in range(1, n + 1):
            if _ggcd_from_factors(b, fac, s) > 1:
                count += 1
    return count


def _row_bands(lo: int, hi: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, hi - lo))
    edges = [lo + (hi - lo) * k // parts for k in range(parts + 1)]
    return [(a, c) for a, c in zip(edges, edges[1:]) if c > a]


def count_invisible_brute(b: int, n: int, threads: int = 1) -> int:
    """Number of b-invisible points in [1, n]^2 by per-point ggcd."""
    check_exponent(b)
    _check_positive("N", n)
    bands = _row_bands(1, n + 1, threads)
    if threads <= 1 or len(bands) == 1:
        return sum(_count_rows_brute(b, lo, hi, n) for lo, hi in bands)
    with ProcessPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(_count_rows_brute, b, lo, hi, n) for lo, hi in bands]
        return sum(f.result() for f in futures)


def count_visible_moebius(b: int, n: int) -> int:
    """Visible points in [1, n]^2 via inclusion-exclusion over k."""
    check_exponent(b)
    _check_positive("N", n)
    mu = moebius_up_to(n)
    total = 0
    for k in range(1, n + 1):
        if mu[k] == 0:
            continue
        kb = k**b
        if kb > n:
            # floor(n / k**b) is 0 from here on since k**b only grows
            break
        total += int(mu[k]) * (n // k) * (n // kb)
    return total


def invisible_block(b: int, r0: int, r1: int, s0: int, s1: int) -> np.ndarray:
    """Boolean array of b-invisibility over rows r0 <= r < r1, cols s0 <= s < s1.

    ``out[r - r0, s - s0]`` is True iff some prime p has p | r and p**b | s.
    """
    out = np.zeros((r1 - r0, s1 - s0), dtype=bool)
    if r1 <= r0 or s1 <= s0:
        return out
    for p in primes_up_to(r1 - 1):
        row = (-r0) % p
        if row >= r1 - r0:
            continue
        q = p**b
        if q >= s1:
            # p**b only grows with p, so no later prime reaches a column
            break
        col = (-s0) % q
        if col < s1 - s0:
            out[row::p, col::q] = True
    return out


@dataclass(frozen=True, eq=False)
class VisibilityGrid:
    """Bitmap of b-invisible cells in [1, width] x [1, height].

    Stored one bit per cell, row-major by r: ``bits[r - 1]`` is the packed
    row of s = 1..height, bit set = invisible.
    """

    b: int
    width: int
    height: int
    bits: np.ndarray

    def invisible(self, r: int, s: int) -> bool:
        if not (1 <= r <= self.width and 1 <= s <= self.height):
            raise IndexError(f"({r}, {s}) outside [1,{self.width}]x[1,{self.height}]")
        byte = self.bits[r - 1, (s - 1) >> 3]
        return bool((byte >> (7 - ((s - 1) & 7))) & 1)

    def to_array(self) -> np.ndarray:
        """Unpacked bool array with ``a[r - 1, s - 1]`` = invisible."""
        return np.unpackbits(self.bits, axis=1, count=self.height).astype(bool)

    def count_invisible(self) -> int:
        return int(np.unpackbits(self.bits, axis=1, count=self.height).sum())

    @classmethod
    def from_array(cls, b: int, arr: np.ndarray) -> "VisibilityGrid":
        arr = np.asarray(arr, dtype=bool)
        width, height = arr.shape
        return cls(b, width, height, np.packbits(arr, axis=1))

    def __eq__(self, other) -> bool:
        if not isinstance(other, VisibilityGrid):
            return NotImplemented
        return (
            (self.b, self.width, self.height) == (other.b, other.width, other.height)
            and np.array_equal(self.bits, other.bits)
        )


def sieve_grid(
    b: int,
    n: int,
    m: int | None = None,
    *,
    cell_cap: int = DEFAULT_CELL_CAP,
    threads: int = 1,
) -> VisibilityGrid:
    """Sieve the b-invisible cells of [1, n] x [1, m] (m defaults to n)."""
    check_exponent(b)
    m = n if m is None else m
    _check_positive("N", n)
    _check_positive("M", m)
    if n * m > cell_cap:
        raise BudgetExceededError(
            f"grid of {n}x{m} = {n * m} cells exceeds the cap of {cell_cap} cells"
        )
    bits = np.zeros((n, (m + 7) // 8), dtype=np.uint8)
    rows_per_band = max(1, _BAND_CELLS // m)
    bands = [(lo, min(lo + rows_per_band, n + 1)) for lo in range(1, n + 1, rows_per_band)]

    def fill(band: tuple[int, int]) -> None:
        lo, hi = band
        bits[lo - 1 : hi - 1] = np.packbits(invisible_block(b, lo, hi, 1, m + 1), axis=1)

    if threads > 1 and len(bands) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(fill, bands))
    else:
        for band in bands:
            fill(band)
    return VisibilityGrid(b, n, m, bits)


def count_invisible(b: int, n: int, method: str = "brute", threads: int = 1) -> int:
    if method == "brute":
        return count_invisible_brute(b, n, threads=threads)
    if method == "sieve":
        return sieve_grid(b, n, threads=threads).count_invisible()
    if method == "moebius":
        return n * n - count_visible_moebius(b, n)
    raise ValueError(f"unknown method {method!r}; expected one of {', '.join(METHODS)}")


@dataclass(frozen=True)
class DensityReport:
    b: int
    N: int
    invisible_count: int
    visible_count: int
    total: int
    observed_invisible_proportion: float
    predicted_visible_proportion: float
    predicted_invisible_proportion: float
    method: str

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


DENSITY_FIELDS = tuple(f.name for f in fields(DensityReport))


def density_report(b: int, n: int, method: str = "brute", threads: int = 1) -> DensityReport:
    check_exponent(b)
    _check_positive("N", n)
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {', '.join(METHODS)}")
    invisible = count_invisible(b, n, method, threads=threads)
    total = n * n
    visible_pred, invisible_pred = predicted_proportions(b)
    return DensityReport(
        b=b,
        N=n,
        invisible_count=invisible,
        visible_count=total - invisible,
        total=total,
        observed_invisible_proportion=invisible / total,
        predicted_visible_proportion=visible_pred,
        predicted_invisible_proportion=invisible_pred,
        method=method,
    )


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=DENSITY_FIELDS, lineterminator="\n")
    writer.writeheader()
    for rep in reports:
        writer.writerow(rep.to_dict())
    return buf.getvalue()


def reports_from_csv(text: str) -> list[DensityReport]:
    out = []
    for row in csv.DictReader(io.StringIO(text)):
        out.append(
            DensityReport(
                b=int(row["b"]),
                N=int(row["N"]),
                invisible_count=int(row["invisible_count"]),
                visible_count=int(row["visible_count"]),
                total=int(row["total"]),
                observed_invisible_proportion=float(row["observed_invisible_proportion"]),
                predicted_visible_proportion=float(row["predicted_visible_proportion"]),
                predicted_invisible_proportion=float(row["predicted_invisible_proportion"]),
                method=row["method"],
            )
        )
    return out


def visible_fraction_error(b: int, n: int, method: str = "sieve") -> float:
    """|observed visible proportion - 1/zeta(b+1)| on the n x n grid."""
    rep = density_report(b, n, method)
    return math.fabs(rep.visible_count / rep.total - rep.predicted_visible_proportion)
