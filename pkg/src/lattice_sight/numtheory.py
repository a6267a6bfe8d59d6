"""Exact integer primitives: primes, factorization, valuations, Moebius, ggcd."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import numpy as np


def _check_positive(name: str, value: int) -> None:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise TypeError(f"{name} must be an integer, got {type(value).__name__}")
    if value < 1:
        raise ValueError(f"{name} must be >= 1, got {value}")


def check_exponent(b: int) -> None:
    """Reject b < 1; the exponent lives in {1, 2, 3, ...}."""
    _check_positive("b", b)


@dataclass(frozen=True)
class Factorization:
    """Prime factorization as ascending ``(prime, exponent)`` pairs."""

    factors: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        last = 1
        for p, e in self.factors:
            if p <= last:
                raise ValueError("primes must be strictly increasing")
            if e < 1:
                raise ValueError("exponents must be >= 1")
            last = p

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.factors)

    def __len__(self) -> int:
        return len(self.factors)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def value(self) -> int:
        n = 1
        for p, e in self.factors:
            n *= p**e
        return n

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return " * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors)


def primes_up_to(limit: int) -> list[int]:
    """All primes <= limit, ascending (sieve of Eratosthenes)."""
    if limit < 0:
        raise ValueError(f"limit must be >= 0, got {limit}")
    if limit < 2:
        return []
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    return np.flatnonzero(is_prime).tolist()


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def factorize(n: int) -> Factorization:
    """Factor n by trial division up to sqrt(n).

    Fine for n up to ~10**12 or for numbers with small prime factors;
    not meant for cryptographic sizes.
    """
    _check_positive("n", n)
    n = int(n)
    factors = []
    e = 0
    while n % 2 == 0:
        n //= 2
        e += 1
    if e:
        factors.append((2, e))
    d = 3
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            factors.append((d, e))
        d += 2
    if n > 1:
        factors.append((n, 1))
    return Factorization(tuple(factors))


@lru_cache(maxsize=1 << 16)
def _factor_cached(n: int) -> Factorization:
    return factorize(n)


def valuation(n: int, p: int) -> int:
    """Largest e with p**e dividing n."""
    _check_positive("n", n)
    if p < 2:
        raise ValueError(f"p must be a prime >= 2, got {p}")
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def moebius(k: int) -> int:
    _check_positive("k", k)
    fac = _factor_cached(int(k))
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def moebius_up_to(limit: int) -> np.ndarray:
    """mu(k) for 0 <= k <= limit (index 0 is unused and set to 0)."""
    if limit < 0:
        raise ValueError(f"limit must be >= 0, got {limit}")
    mu = np.ones(limit + 1, dtype=np.int8)
    mu[0] = 0
    for p in primes_up_to(limit):
        mu[p::p] *= -1
        mu[p * p :: p * p] = 0
    return mu


def _ggcd_from_factors(b: int, factors, s: int) -> int:
    g = 1
    for p, e in factors:
        # only need to know whether p**(e*b) | s, so stop dividing there
        k = 0
        while k < e * b and s % p == 0:
            s //= p
            k += 1
        g *= p ** min(e, k // b)
    return g


def ggcd(b: int, r: int, s: int) -> int:
    """Generalized gcd: the largest k with k | r and k**b | s.

    Only r is factored; the valuation of s at each prime of r is read off by
    repeated division, so s may be arbitrarily large.
    """
    check_exponent(b)
    _check_positive("r", r)
    _check_positive("s", s)
    return _ggcd_from_factors(int(b), _factor_cached(int(r)), int(s))


def ggcd_brute(b: int, r: int, s: int) -> int:
    """Reference ggcd straight from the definition (scan k = 1..r)."""
    check_exponent(b)
    _check_positive("r", r)
    _check_positive("s", s)
    return max(k for k in range(1, r + 1) if r % k == 0 and s % k**b == 0)
