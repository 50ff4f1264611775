"""Prime sieve, primality, integer roots and Pollard-Brent factoring."""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

import numpy as np

DEFAULT_RHO_BUDGET = 1 << 24

# Deterministic Miller-Rabin bases: exact for n < 3.18e23.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_LIMIT = 318665857834031151167461
# Above the limit the same test runs with extra bases (probable prime).
_MR_EXTRA = (41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97)


class FactoringError(RuntimeError):
    """A composite resisted Pollard-rho within the iteration budget."""

    def __init__(self, value: int, n: Optional[int] = None, budget: int = 0):
        self.value = value
        self.n = n
        self.budget = budget
        where = f" at n={n}" if n is not None else ""
        super().__init__(f"could not factor residual {value}{where} within {budget} rho iterations")


@lru_cache(maxsize=16)
def _sieve(limit: int) -> Tuple[int, ...]:
    if limit < 2:
        return ()
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return tuple(int(p) for p in np.flatnonzero(flags))


def primes_upto(limit: int) -> Tuple[int, ...]:
    """All primes p <= limit."""
    return _sieve(int(limit))


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    bases = _MR_BASES if n < _MR_LIMIT else _MR_BASES + _MR_EXTRA
    for a in bases:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def iroot(n: int, k: int) -> int:
    """Largest r with r**k <= n, for n >= 0."""
    if n < 2 or k == 1:
        return n
    r = 1 << -(-n.bit_length() // k)
    while True:
        s = ((k - 1) * r + n // r ** (k - 1)) // k
        if s >= r:
            break
        r = s
    while r ** k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r


def perfect_power(n: int) -> Optional[Tuple[int, int]]:
    """(root, k) with root**k == n and k maximal, or None if n is not a perfect power."""
    if n < 4:
        return None
    for k in range(n.bit_length(), 1, -1):
        r = iroot(n, k)
        if r > 1 and r ** k == n:
            return r, k
    return None


def valuation(n: int, p: int) -> int:
    """Exponent of p in n (n != 0)."""
    if n == 0:
        raise ValueError("valuation of zero is undefined")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def pollard_brent(n: int, budget: int = DEFAULT_RHO_BUDGET, seed: int = 2) -> int:
    """A nontrivial factor of the odd composite n.

    Increments run through 1, 3, 5, ... ; each restart draws on the same
    total iteration budget. Raises FactoringError when it is exhausted.
    """
    if n % 2 == 0:
        return 2
    spent = 0
    m = 128
    increment = 1
    while spent < budget:
        c = increment % n
        increment += 2
        y = seed % n
        g = r = q = 1
        x = ys = y
        while g == 1 and spent < budget:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            spent += r
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            spent += min(r, k)
            r *= 2
        if g == n:
            # batch overshot; backtrack one step at a time
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if 1 < g < n:
            return g
    raise FactoringError(n, budget=budget)


def factor_large(n: int, budget: int = DEFAULT_RHO_BUDGET, seed: int = 2) -> Dict[int, int]:
    """Complete factorization of n >= 1 by primality test, perfect-power check and rho.

    Intended for residuals already stripped of small primes, but correct for any n.
    """
    out: Dict[int, int] = {}
    stack: List[Tuple[int, int]] = [(n, 1)]
    while stack:
        m, mult = stack.pop()
        if m == 1:
            continue
        for p in (2, 3, 5, 7):
            if m % p == 0:
                v = valuation(m, p)
                out[p] = out.get(p, 0) + v * mult
                m //= p ** v
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + mult
            continue
        pp = perfect_power(m)
        if pp is not None:
            stack.append((pp[0], mult * pp[1]))
            continue
        g = pollard_brent(m, budget, seed)
        stack.append((g, mult))
        stack.append((m // g, mult))
    return dict(sorted(out.items()))

