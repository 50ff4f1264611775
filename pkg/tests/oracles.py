"""Independent reference computations used only by the tests."""

import functools
import itertools
import math

import numpy as np


def simple_sieve(limit):
    flags = bytearray([1]) * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = bytearray(len(flags[p * p :: p]))
    return np.array([i for i in range(limit + 1) if flags[i]], dtype=np.int64)


def trial_division_factor(n, primes):
    """Factor |n| < 2**62 by dividing out every prime up to sqrt(|n|)."""
    n = abs(n)
    out = {}
    if n < 2:
        return out
    cand = primes[primes <= math.isqrt(n)]
    hits = cand[np.int64(n) % cand == 0]
    for p in hits.tolist():
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def poly_value(coeffs, n):
    return sum(a * n ** i for i, a in enumerate(coeffs))


def all_decreasing_profiles(max_entry, max_len):
    """Every weakly decreasing tuple with entries in [1, max_entry] and length in [1, max_len]."""
    for s in range(1, max_len + 1):
        for combo in itertools.combinations_with_replacement(range(max_entry, 0, -1), s):
            yield combo


@functools.lru_cache(maxsize=None)
def oracle_profile_box():
    """Every decreasing profile with entries and length <= 10, plus entries <= 16 at length <= 6."""
    box = list(all_decreasing_profiles(10, 10))
    box += [p for p in all_decreasing_profiles(16, 6) if p[0] > 10]
    return tuple(box)


@functools.lru_cache(maxsize=None)
def filtered_box(filt):
    from lcmlab.tuples import is_admissible

    return sorted(p for p in oracle_profile_box() if is_admissible(p, filt))


def sah_by_definition(profile, d):
    return all(sum(1 for v in profile if v >= k) <= d - k for k in range(1, max(profile) + 1))


def baier_dey_by_definition(profile, eta):
    """No 1-based r with r >= floor(2^(eta - 1 - floor(log2 v_r))) + 1, using floats for the logs."""
    for r, v in enumerate(profile, 1):
        k = eta - 1 - math.floor(math.log2(v) + 1e-12)
        if r >= math.floor(2.0 ** k) + 1:
            return False
    return True
