import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lattice_sight.numtheory import (
    Factorization,
    factorize,
    ggcd,
    ggcd_brute,
    is_prime,
    moebius,
    moebius_up_to,
    primes_up_to,
    valuation,
)


def trial_division_primes(limit):
    return [n for n in range(2, limit + 1) if all(n % d for d in range(2, n))]


def test_primes_up_to_examples():
    assert primes_up_to(0) == []
    assert primes_up_to(1) == []
    assert primes_up_to(13) == [2, 3, 5, 7, 11, 13]
    ps = primes_up_to(50)
    assert len(ps) == 15 and ps[-1] == 47


def test_primes_match_trial_division():
    assert primes_up_to(600) == trial_division_primes(600)


def test_primes_rejects_negative():
    with pytest.raises(ValueError):
        primes_up_to(-1)


@pytest.mark.parametrize(
    "n, expected",
    [
        (1, []),
        (27818, [(2, 1), (7, 1), (1987, 1)]),
        (602202601, [(7, 2), (11, 2), (13, 2), (601, 1)]),
        (27819, [(3, 2), (11, 1), (281, 1)]),
        (27820, [(2, 2), (5, 1), (13, 1), (107, 1)]),
        (602202600, [(2, 3), (3, 5), (5, 2), (12391, 1)]),
    ],
)
def test_factorize_examples(n, expected):
    assert list(factorize(n)) == expected


def test_factorize_round_trip_exhaustive():
    for n in range(1, 100_001):
        fac = factorize(n)
        assert fac.value() == n
        ps = fac.primes
        assert list(ps) == sorted(set(ps))


def test_factorization_invariants_enforced():
    with pytest.raises(ValueError):
        Factorization(((3, 1), (2, 1)))
    with pytest.raises(ValueError):
        Factorization(((2, 0),))
    assert str(factorize(602202600)) == "2^3 * 3^5 * 5^2 * 12391"


def test_factorize_rejects_nonpositive():
    with pytest.raises(ValueError):
        factorize(0)


def test_valuation():
    assert valuation(27820, 2) == 2
    assert valuation(7, 11) == 0
    assert valuation(602202600, 3) == 5
    assert valuation(2**200 * 3, 2) == 200


def test_moebius_examples():
    assert moebius(1) == 1
    assert moebius(4) == 0
    assert moebius(30) == -1


def test_moebius_summatory_identity():
    mu = moebius_up_to(10_000)
    for n in range(1, 10_001):
        divisors = set()
        for d in range(1, math.isqrt(n) + 1):
            if n % d == 0:
                divisors.update((d, n // d))
        assert sum(int(mu[d]) for d in divisors) == (n == 1)


def test_moebius_sieve_matches_pointwise():
    mu = moebius_up_to(3000)
    assert [int(x) for x in mu[1:]] == [moebius(k) for k in range(1, 3001)]


@pytest.mark.parametrize(
    "b, r, s, expected",
    [
        (2, 7, 49, 7),
        (3, 7, 49, 1),
        (1, 1, 123456789, 1),
        (5, 1, 1, 1),
        (2, 27819, 602202600, 9),
        (2, 440, 38024, 2),
    ],
)
def test_ggcd_examples(b, r, s, expected):
    assert ggcd(b, r, s) == expected


def test_ggcd_440_38024_brute():
    # max over k = 1..440 with k | 440 and k^2 | 38024
    assert max(k for k in range(1, 441) if 440 % k == 0 and 38024 % (k * k) == 0) == 2


def test_ggcd_b1_is_gcd():
    for r in range(1, 201):
        for s in range(1, 201):
            assert ggcd(1, r, s) == math.gcd(r, s)


@pytest.mark.parametrize("bad", [(0, 7, 49), (2, 0, 4), (2, 4, 0), (-1, 2, 2)])
def test_ggcd_rejects_out_of_domain(bad):
    with pytest.raises(ValueError):
        ggcd(*bad)


def test_ggcd_huge_s():
    s = 3**40 * 7**5 * (10**30 + 57)
    assert ggcd(2, 21, s) == 21
    assert ggcd(5, 21, s) == 21
    assert ggcd(6, 21, s) == 3
    assert ggcd(41, 21, s) == 1


def test_scaling_identity_exhaustive():
    for b in range(1, 5):
        for r in range(1, 51):
            for s in range(1, 51):
                g = ggcd(b, r, s)
                for k in range(1, 11):
                    assert ggcd(b, k * r, k**b * s) == k * g


def test_no_larger_divisor_qualifies():
    for b in (1, 2, 3):
        for r in range(1, 80):
            for s in range(1, 80):
                g = ggcd(b, r, s)
                assert not any(r % k == 0 and s % k**b == 0 for k in range(g + 1, r + 1))


@settings(max_examples=300, deadline=None)
@given(
    b=st.integers(1, 6),
    r=st.integers(1, 10**6),
    s=st.integers(1, 10**18),
)
def test_ggcd_divides(b, r, s):
    g = ggcd(b, r, s)
    assert r % g == 0
    assert s % g**b == 0


@settings(max_examples=200, deadline=None)
@given(b=st.integers(1, 4), r=st.integers(1, 2000), s=st.integers(1, 10**6))
def test_ggcd_agrees_with_definition(b, r, s):
    assert ggcd(b, r, s) == ggcd_brute(b, r, s)


@given(st.integers(1, 10**9))
def test_factorize_property(n):
    fac = factorize(n)
    assert fac.value() == n
    assert all(is_prime(p) for p in fac.primes)
