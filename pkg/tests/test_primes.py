import pytest
import sympy
from hypothesis import given, settings, strategies as st

from lcmlab.primes import (
    FactoringError,
    factor_large,
    iroot,
    is_prime,
    perfect_power,
    pollard_brent,
    primes_upto,
    valuation,
)


def test_sieve_small():
    assert primes_upto(30) == (2, 3, 5, 7, 11, 13, 17, 19, 23, 29)
    assert primes_upto(1) == ()
    assert len(primes_upto(10**5)) == 9592


def test_is_prime_matches_sympy_on_range():
    assert [n for n in range(3000) if is_prime(n)] == list(sympy.primerange(0, 3000))


@pytest.mark.parametrize(
    "n, expected",
    [
        (2**61 - 1, True),
        (2**89 - 1, True),
        (3215031751, False),  # strong pseudoprime to bases 2, 3, 5, 7
        (3825123056546413051, False),
        (318665857834031151167461, False),  # spsp to the first twelve prime bases
        (3317044064679887385961981, False),  # spsp to the first thirteen
        (10**24 + 7, sympy.isprime(10**24 + 7)),
    ],
)
def test_is_prime_hard_cases(n, expected):
    assert is_prime(n) is expected


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**40), st.integers(1, 7))
def test_iroot(n, k):
    r = iroot(n, k)
    assert r ** k <= n < (r + 1) ** k


def test_perfect_power():
    assert perfect_power(3**10) == (3, 10)
    assert perfect_power(10**12) == (10, 12)
    assert perfect_power(2 * 3**5) is None
    assert perfect_power(3) is None


def test_valuation():
    assert valuation(2**5 * 3, 2) == 5
    assert valuation(7, 2) == 0
    with pytest.raises(ValueError):
        valuation(0, 3)


def test_brent_finds_factor():
    n = 1000003 * 998244353
    g = pollard_brent(n)
    assert g in (1000003, 998244353)


def test_brent_budget_exhausted():
    with pytest.raises(FactoringError):
        pollard_brent(1000003 * 998244353, budget=4)


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 10**18))
def test_factor_large_matches_sympy(n):
    assert factor_large(n) == dict(sorted(sympy.factorint(n).items()))


def test_factor_large_prime_powers():
    n = 1000003**3 * 1000033**2
    assert factor_large(n) == {1000003: 3, 1000033: 2}
