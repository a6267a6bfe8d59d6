"""Rectangular b-invisible forests: CRT construction, verification and search.

Orientation: a forest of width ``n`` and height ``m`` anchored at (r, s)
covers the points (r + i, s + j) for 0 <= i < n, 0 <= j < m.  In a prime
matrix, ``p(i, j)`` sits in column i and row j, with row 0 at the BOTTOM.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import reduce
from operator import mul

import numpy as np

from .numtheory import (
    Factorization,
    _check_positive,
    check_exponent,
    factorize,
    ggcd,
    is_prime,
    primes_up_to,
)
from .visibility import Point, invisible_block


class NotCoprimeError(ValueError):
    """CRT moduli share a common factor."""


class NotAForestError(ValueError):
    """A claimed forest contains a b-visible point."""

    def __init__(self, message: str, cell: tuple[int, int], point: tuple[int, int]):
        super().__init__(message)
        self.cell = cell
        self.point = point


class NoForestFoundError(LookupError):
    """No forest of the requested shape inside the scanned bounds."""


@dataclass(frozen=True)
class PrimeMatrix:
    """n x m grid of distinct primes; ``columns[i][j]`` is p(i, j)."""

    n: int
    m: int
    columns: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        _check_positive("n", self.n)
        _check_positive("m", self.m)
        if len(self.columns) != self.n or any(len(c) != self.m for c in self.columns):
            raise ValueError(f"expected {self.n} columns of {self.m} primes")
        entries = [p for col in self.columns for p in col]
        bad = [p for p in entries if not is_prime(p)]
        if bad:
            raise ValueError(f"not prime: {bad[0]}")
        if len(set(entries)) != len(entries):
            raise ValueError("prime matrix entries must be distinct")

    def p(self, i: int, j: int) -> int:
        return self.columns[i][j]

    @property
    def rows(self) -> list[list[int]]:
        """Rows bottom-up: ``rows[j][i]`` is p(i, j)."""
        return [[self.columns[i][j] for i in range(self.n)] for j in range(self.m)]

    @classmethod
    def from_rows(cls, rows_bottom_up) -> "PrimeMatrix":
        rows = [list(map(int, r)) for r in rows_bottom_up]
        if not rows or not rows[0]:
            raise ValueError("prime matrix must be non-empty")
        n = len(rows[0])
        if any(len(r) != n for r in rows):
            raise ValueError("ragged prime matrix")
        return cls(n, len(rows), tuple(tuple(r[i] for r in rows) for i in range(n)))

    def to_text(self) -> str:
        """m lines of n primes, top row first, as the matrix is displayed."""
        return "".join(" ".join(map(str, row)) + "\n" for row in reversed(self.rows))


def parse_prime_matrix(text: str) -> PrimeMatrix:
    """Parse m lines of n whitespace-separated primes given top row first."""
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    try:
        rows_top_down = [[int(tok) for tok in ln] for ln in lines]
    except ValueError as exc:
        raise ValueError(f"bad prime matrix entry: {exc}") from None
    return PrimeMatrix.from_rows(list(reversed(rows_top_down)))


def build_prime_matrix(n: int, m: int, primes=None) -> PrimeMatrix:
    """Prime matrix filled bottom row first, left to right.

    With no explicit list the first n*m primes are used, so (3, 2) gives
    bottom row 2 3 5 and top row 7 11 13.
    """
    _check_positive("n", n)
    _check_positive("m", m)
    if primes is None:
        count = n * m
        limit = 16
        while True:
            ps = primes_up_to(limit)
            if len(ps) >= count:
                break
            limit *= 2
        primes = ps[:count]
    primes = [int(p) for p in primes]
    if len(primes) != n * m:
        raise ValueError(f"need exactly {n * m} primes, got {len(primes)}")
    rows = [primes[j * n : (j + 1) * n] for j in range(m)]
    return PrimeMatrix.from_rows(rows)


def moduli(pm: PrimeMatrix, b: int) -> tuple[list[int], list[int]]:
    """Column products C[i] and b-th powers of row products R[j]**b."""
    check_exponent(b)
    cols = [reduce(mul, col, 1) for col in pm.columns]
    rows = [reduce(mul, row, 1) ** b for row in pm.rows]
    return cols, rows


@dataclass(frozen=True)
class CongruenceSystem:
    """x = residue (mod modulus) for each pair; moduli pairwise coprime."""

    congruences: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        mods = [q for _, q in self.congruences]
        for a, q in self.congruences:
            if q < 1:
                raise ValueError(f"modulus must be >= 1, got {q}")
            if not 0 <= a < q:
                raise ValueError(f"residue {a} not reduced modulo {q}")
        for k, q1 in enumerate(mods):
            for q2 in mods[k + 1 :]:
                if math.gcd(q1, q2) != 1:
                    raise NotCoprimeError(f"moduli {q1} and {q2} are not coprime")

    @classmethod
    def of(cls, pairs) -> "CongruenceSystem":
        return cls(tuple((int(a), int(q)) for a, q in pairs))


def crt_solve(system) -> tuple[int, int]:
    """Unique x in [0, prod moduli) meeting every congruence, and the product."""
    if not isinstance(system, CongruenceSystem):
        system = CongruenceSystem.of(system)
    x, big = 0, 1
    for a, q in system.congruences:
        # lift x (mod big) to the solution mod big*q
        t = ((a - x) * pow(big, -1, q)) % q if q > 1 else 0
        x += big * t
        big *= q
    return x, big


@dataclass(frozen=True)
class Forest:
    b: int
    anchor: Point
    n: int
    m: int
    r_modulus: int | None = None
    s_modulus: int | None = None

    @property
    def r(self) -> int:
        return self.anchor.r

    @property
    def s(self) -> int:
        return self.anchor.s

    def points(self):
        for j in range(self.m):
            for i in range(self.n):
                yield self.r + i, self.s + j

    def shifted(self, dr: int = 0, ds: int = 0) -> "Forest":
        return Forest(
            self.b, Point(self.r + dr, self.s + ds), self.n, self.m, self.r_modulus, self.s_modulus
        )

    def to_dict(self) -> dict:
        return {
            "b": self.b,
            "anchor": {"r": str(self.r), "s": str(self.s)},
            "n": self.n,
            "m": self.m,
            "r_modulus": None if self.r_modulus is None else str(self.r_modulus),
            "s_modulus": None if self.s_modulus is None else str(self.s_modulus),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Forest":
        def opt(v):
            return None if v is None else int(v)

        return cls(
            int(d["b"]),
            Point(int(d["anchor"]["r"]), int(d["anchor"]["s"])),
            int(d["n"]),
            int(d["m"]),
            opt(d.get("r_modulus")),
            opt(d.get("s_modulus")),
        )


def _least_positive(x: int, q: int) -> int:
    return x if x > 0 else q


def construct_forest(pm: PrimeMatrix, b: int) -> Forest:
    """Anchor solving r + i = 0 (mod C[i]) and s + j = 0 (mod R[j]**b)."""
    cols, rows = moduli(pm, b)
    r, r_mod = crt_solve([((-i) % c, c) for i, c in enumerate(cols)])
    s, s_mod = crt_solve([((-j) % q, q) for j, q in enumerate(rows)])
    return Forest(
        b, Point(_least_positive(r, r_mod), _least_positive(s, s_mod)), pm.n, pm.m, r_mod, s_mod
    )


@dataclass(frozen=True)
class WitnessGrid:
    """ggcd values of a forest; ``values[j][i]`` belongs to (r + i, s + j)."""

    b: int
    anchor: Point
    n: int
    m: int
    values: tuple[tuple[int, ...], ...]
    factorizations: tuple[tuple[Factorization, ...], ...] = field(repr=False)

    def witness(self, i: int, j: int) -> int:
        return self.values[j][i]

    def to_dict(self) -> dict:
        return {
            "b": self.b,
            "anchor": {"r": str(self.anchor.r), "s": str(self.anchor.s)},
            "n": self.n,
            "m": self.m,
            "cells": [
                [
                    {
                        "i": i,
                        "j": j,
                        "value": str(v),
                        "factorization": [[str(p), e] for p, e in fac],
                    }
                    for i, (v, fac) in enumerate(zip(vrow, frow))
                ]
                for j, (vrow, frow) in enumerate(zip(self.values, self.factorizations))
            ],
        }


def verify_forest(forest: Forest) -> WitnessGrid:
    """Compute every cell's ggcd; raise NotAForestError at the first visible one."""
    check_exponent(forest.b)
    values = []
    for j in range(forest.m):
        row = []
        for i in range(forest.n):
            g = ggcd(forest.b, forest.r + i, forest.s + j)
            if g == 1:
                pt = (forest.r + i, forest.s + j)
                raise NotAForestError(
                    f"not a {forest.b}-invisible forest: cell (i={i}, j={j}) at point "
                    f"{pt} is {forest.b}-visible",
                    (i, j),
                    pt,
                )
            row.append(g)
        values.append(tuple(row))
    facs = tuple(tuple(factorize(v) for v in row) for row in values)
    return WitnessGrid(forest.b, forest.anchor, forest.n, forest.m, tuple(values), facs)


@dataclass(frozen=True)
class SearchResult:
    """Minimal-distance anchors found by an exhaustive scan, sorted by (s, r)."""

    b: int
    n: int
    m: int
    r_max: int
    s_max: int
    distance_sq: int
    anchors: tuple[tuple[int, int], ...]

    @property
    def forest(self) -> Forest:
        r, s = self.anchors[0]
        return Forest(self.b, Point(r, s), self.n, self.m)

    @property
    def forests(self) -> list[Forest]:
        return [Forest(self.b, Point(r, s), self.n, self.m) for r, s in self.anchors]

    @property
    def distance(self) -> float:
        return math.sqrt(self.distance_sq)

    def to_dict(self) -> dict:
        return {
            "b": self.b,
            "n": self.n,
            "m": self.m,
            "r_max": self.r_max,
            "s_max": self.s_max,
            "distance_sq": str(self.distance_sq),
            "anchors": [{"r": str(r), "s": str(s)} for r, s in self.anchors],
        }


_SEARCH_BAND_CELLS = 1 << 23


def _scan_band(b: int, n: int, m: int, r_max: int, s_lo: int, s_hi: int):
    """Best anchors with s in [s_lo, s_hi) as (distance_sq, [(r, s), ...])."""
    block = invisible_block(b, 1, r_max + n, s_lo, s_hi + m - 1)
    width = s_hi - s_lo
    across = block[:r_max].copy()
    for i in range(1, n):
        across &= block[i : i + r_max]
    ok = across[:, :width].copy()
    for j in range(1, m):
        ok &= across[:, j : j + width]
    rr, ss = np.nonzero(ok)
    if rr.size == 0:
        return None
    if r_max + s_hi < 3_000_000_000:
        r = rr.astype(np.int64) + 1
        s = ss.astype(np.int64) + s_lo
        d = r * r + s * s
        best = int(d.min())
        hit = d == best
        return best, list(zip(r[hit].tolist(), s[hit].tolist()))
    pts = [(int(a) + 1, int(c) + s_lo) for a, c in zip(rr, ss)]
    best = min(r * r + s * s for r, s in pts)
    return best, [p for p in pts if p[0] ** 2 + p[1] ** 2 == best]


def find_nearest_forest(
    b: int, n: int, m: int, r_max: int, s_max: int, *, threads: int = 1
) -> SearchResult:
    """Exhaustively find the n-wide, m-tall b-invisible forests nearest the origin.

    Anchors range over [1, r_max] x [1, s_max]; the forest itself may poke
    past those bounds.  Distance is Euclidean from the origin to the anchor.
    Every anchor at the minimal distance is returned.  The scan walks bands
    of s in increasing order and stops once a band cannot beat the best
    distance so far; with ``threads > 1`` the bands run concurrently and the
    merge yields the same tie set.
    """
    check_exponent(b)
    for name, v in (("n", n), ("m", m), ("r_max", r_max), ("s_max", s_max)):
        _check_positive(name, v)
    if r_max < n or s_max < m:
        raise ValueError(f"bounds ({r_max}, {s_max}) must be at least the forest size ({n}, {m})")

    band = max(1, _SEARCH_BAND_CELLS // (r_max + n))
    bands = [(lo, min(lo + band, s_max + 1)) for lo in range(1, s_max + 1, band)]

    best: int | None = None
    found: list[tuple[int, int]] = []

    def merge(res) -> None:
        nonlocal best, found
        if res is None:
            return
        d, pts = res
        if best is None or d < best:
            best, found = d, list(pts)
        elif d == best:
            found.extend(pts)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for res in pool.map(lambda bd: _scan_band(b, n, m, r_max, *bd), bands):
                merge(res)
    else:
        for lo, hi in bands:
            if best is not None and lo * lo + 1 > best:
                break
            merge(_scan_band(b, n, m, r_max, lo, hi))

    if best is None:
        raise NoForestFoundError(
            f"no {n}x{m} {b}-invisible forest with anchor in [1,{r_max}]x[1,{s_max}] "
            "(bounds too small; this does not prove none exists)"
        )
    anchors = tuple(sorted(set(found), key=lambda p: (p[1], p[0])))
    return SearchResult(b, n, m, r_max, s_max, best, anchors)
