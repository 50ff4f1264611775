"""Exact prime-valuation anatomy of f(1), ..., f(N).

The table is built by a residue scan modulo every prime up to the cutoff
followed by Pollard-Brent on the residuals, whose prime factors all exceed
the cutoff. Aggregates (alpha, beta, mu, log masses) are derived from it.
"""

from __future__ import annotations

import math
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .poly import Polynomial, evaluate
from .primes import DEFAULT_RHO_BUDGET, FactoringError, factor_large, is_prime, primes_upto

Factors = Tuple[Tuple[int, int], ...]

DEFAULT_C_GRID: Tuple[Fraction, ...] = tuple(
    Fraction(x) for x in (1, 2, 3, 4, 6, 8, 12, 16, 24, 32)
)


def as_fraction(c) -> Fraction:
    c = Fraction(c)
    if c < 1:
        raise ValueError(f"cutoff c must be >= 1, got {c}")
    return c


def cutoff_bound(c: Fraction, N: int) -> int:
    """floor(c*N); a prime equal to it counts as small."""
    return math.floor(c * N)


@dataclass(frozen=True)
class FactorizationTable:
    f: Polynomial
    N: int
    cutoff_c: Fraction
    entries: Dict[int, Factors]
    skipped: FrozenSet[int]
    zeros: FrozenSet[int] = frozenset()

    @property
    def cutoff(self) -> int:
        return cutoff_bound(self.cutoff_c, self.N)

    def is_small(self, p: int) -> bool:
        return p <= self.cutoff

    def flagged(self, n: int) -> List[Tuple[int, int, str]]:
        """Entries of n tagged "small" or "large" relative to the cutoff."""
        return [(p, e, "small" if self.is_small(p) else "large") for p, e in self.entries[n]]

    def with_cutoff(self, c) -> "FactorizationTable":
        return FactorizationTable(self.f, self.N, as_fraction(c), self.entries, self.skipped, self.zeros)

    def truncate(self, N: int, c=None) -> "FactorizationTable":
        """The table for a smaller N; factorizations do not depend on N."""
        if not 1 <= N <= self.N:
            raise ValueError(f"cannot truncate N={self.N} table to {N}")
        c = self.cutoff_c if c is None else as_fraction(c)
        return FactorizationTable(
            self.f,
            N,
            c,
            {n: fs for n, fs in self.entries.items() if n <= N},
            frozenset(n for n in self.skipped if n <= N),
            frozenset(n for n in self.zeros if n <= N),
        )

    def check(self) -> None:
        """Re-verify conservation and primality of every recorded prime."""
        seen = set()
        for n in range(1, self.N + 1):
            value = abs(evaluate(self.f, n))
            if n in self.zeros:
                if value != 0 or n in self.entries:
                    raise AssertionError(f"bad zero record at n={n}")
                continue
            prod = 1
            for p, e in self.entries[n]:
                prod *= p ** e
                seen.add(p)
            if prod != value:
                raise AssertionError(f"factorization of f({n}) does not multiply back")
        for p in seen:
            if not is_prime(p):
                raise AssertionError(f"recorded factor {p} is not prime")


def rho_seed(f: Polynomial, N: int) -> int:
    return 2 + zlib.crc32(repr((f.coeffs, N)).encode()) % 1000


def roots_mod_p(f: Polynomial, p: int, upto: int) -> np.ndarray:
    """Residues r in [0, min(p, upto + 1)) with f(r) = 0 mod p, by a full scan."""
    span = min(p, upto + 1)
    r = np.arange(span, dtype=np.int64)
    acc = np.zeros(span, dtype=np.int64)
    for a in reversed(f.coeffs):
        acc = (acc * r + (a % p)) % p
    return np.flatnonzero(acc == 0)


def _factor_block(args) -> List[Tuple[int, Dict[int, int]]]:
    items, budget, seed = args
    out = []
    for n, m in items:
        try:
            out.append((n, factor_large(m, budget, seed)))
        except FactoringError as exc:
            raise FactoringError(exc.value, n=n, budget=budget) from None
    return out


def build_table(
    f: Polynomial,
    N: int,
    cutoff_c=1,
    rho_budget: int = DEFAULT_RHO_BUDGET,
    jobs: int = 1,
    block_size: int = 256,
) -> FactorizationTable:
    """Complete factorization of |f(n)| for 1 <= n <= N.

    Raises FactoringError (carrying n and the residual) if a residual
    resists Pollard-rho within ``rho_budget`` iterations.
    """
    if N < 2:
        raise ValueError("N must be >= 2")
    c = as_fraction(cutoff_c)
    bound = cutoff_bound(c, N)
    if bound >= 1 << 31:
        raise ValueError("cutoff too large for the residue scan")

    values = [evaluate(f, n) for n in range(N + 1)]
    residual = [abs(v) for v in values]
    zeros = frozenset(n for n in range(1, N + 1) if values[n] == 0)
    skipped = frozenset(n for n in range(1, N + 1) if abs(values[n]) <= 1)
    small: Dict[int, List[Tuple[int, int]]] = {n: [] for n in range(1, N + 1)}

    for p in primes_upto(bound):
        for r in roots_mod_p(f, p, N):
            start = int(r) if r else p
            for n in range(start, N + 1, p):
                if n in zeros:
                    continue
                m, e = residual[n], 0
                while m % p == 0:
                    m //= p
                    e += 1
                residual[n] = m
                small[n].append((p, e))

    pending = [(n, residual[n]) for n in range(1, N + 1) if n not in zeros and residual[n] > 1]
    seed = rho_seed(f, N)
    blocks = [pending[i : i + block_size] for i in range(0, len(pending), block_size)]
    tasks = [(b, rho_budget, seed) for b in blocks]
    if jobs > 1 and len(blocks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_factor_block, tasks))
    else:
        results = [_factor_block(t) for t in tasks]
    large: Dict[int, Dict[int, int]] = {}
    for block in results:
        for n, fac in block:
            large[n] = fac

    entries: Dict[int, Factors] = {}
    for n in range(1, N + 1):
        if n in zeros:
            continue
        fs = dict(small[n])
        for p, e in large.get(n, {}).items():
            if p <= bound:
                raise AssertionError(f"residual of f({n}) kept small prime {p}")
            fs[p] = fs.get(p, 0) + e
        entries[n] = tuple(sorted(fs.items()))
    return FactorizationTable(f, N, c, entries, skipped, zeros)


@dataclass(frozen=True)
class PrimeStats:
    p: int
    alpha: int
    beta: int
    mu: Tuple[int, ...]  # mu[k-1] = #{n <= N : p^k | f(n)}

    def mu_at(self, nu: int) -> int:
        return self.mu[nu - 1] if 1 <= nu <= len(self.mu) else 0

    def check(self) -> None:
        assert self.alpha == sum(self.mu), (self.p, "telescoping")
        assert self.beta == len(self.mu)
        assert self.beta <= self.alpha <= self.mu_at(1) * self.beta


def prime_stats(table: FactorizationTable) -> Dict[int, PrimeStats]:
    exps: Dict[int, List[int]] = {}
    for n in sorted(table.entries):
        for p, e in table.entries[n]:
            exps.setdefault(p, []).append(e)
    out: Dict[int, PrimeStats] = {}
    for p in sorted(exps):
        es = exps[p]
        beta = max(es)
        mu = tuple(sum(1 for e in es if e >= k) for k in range(1, beta + 1))
        st = PrimeStats(p, sum(es), beta, mu)
        st.check()
        out[p] = st
    return out


@dataclass(frozen=True)
class MassSplit:
    log_Q: float
    log_L: float
    log_ell: float
    small_mass: float
    large_mass: float


def mass_split(table: FactorizationTable, stats: Optional[Dict[int, PrimeStats]] = None) -> MassSplit:
    """Natural-log masses; sums are exactly rounded (math.fsum)."""
    stats = prime_stats(table) if stats is None else stats
    log_Q = math.fsum(
        math.log(abs(evaluate(table.f, n))) for n in sorted(table.entries) if n not in table.skipped
    )
    log_L = math.fsum(s.beta * math.log(p) for p, s in stats.items())
    log_ell = math.fsum(math.log(p) for p in stats)
    small = math.fsum(s.alpha * math.log(p) for p, s in stats.items() if table.is_small(p))
    large = math.fsum(s.alpha * math.log(p) for p, s in stats.items() if not table.is_small(p))
    return MassSplit(log_Q, log_L, log_ell, small, large)


def large_product(table: FactorizationTable, stats: Optional[Dict[int, PrimeStats]] = None) -> int:
    """prod over primes above the cutoff of p^alpha_p, exactly."""
    stats = prime_stats(table) if stats is None else stats
    return math.prod(p ** s.alpha for p, s in stats.items() if not table.is_small(p))


def exact_values(table: FactorizationTable, stats: Optional[Dict[int, PrimeStats]] = None) -> Tuple[int, int, int]:
    """(Q, L, ell) as exact integers."""
    stats = prime_stats(table) if stats is None else stats
    Q = math.prod(p ** s.alpha for p, s in stats.items())
    L = math.prod(p ** s.beta for p, s in stats.items())
    ell = math.prod(stats)
    return Q, L, ell


@dataclass
class MuReport:
    N: int
    u: int
    degree: int
    algnt_violations: List[Tuple[int, int]]
    sah_violations: Dict[Fraction, List[Tuple[int, int, int]]]
    minimal_clean_c: Optional[Fraction]
    max_mu_large: int = 0  # max mu_p(N) over primes p > 2N dividing Q

    @property
    def ok(self) -> bool:
        return not self.algnt_violations

    def is_empty(self) -> bool:
        return not self.algnt_violations and not any(self.sah_violations.values())


def verify_mu_bounds(
    table: FactorizationTable,
    u: int,
    grid: Iterable = DEFAULT_C_GRID,
    stats: Optional[Dict[int, PrimeStats]] = None,
) -> MuReport:
    """Collect primes breaking mu_p <= u-1 (p > 2N) or mu_{p^nu} <= d-nu (p > c'N)."""
    if u < 2:
        raise ValueError("u must be >= 2")
    stats = prime_stats(table) if stats is None else stats
    N, d = table.N, table.f.degree
    large = [s for p, s in stats.items() if p > 2 * N]
    algnt = [(s.p, s.mu_at(1)) for s in large if s.mu_at(1) >= u]
    max_mu = max((s.mu_at(1) for s in large), default=0)
    sah: Dict[Fraction, List[Tuple[int, int, int]]] = {}
    clean: Optional[Fraction] = None
    for c in sorted(Fraction(x) for x in grid):
        bad = []
        for p, s in stats.items():
            if p <= c * N:
                continue
            for nu in range(1, s.beta + 1):
                if s.mu_at(nu) > d - nu:
                    bad.append((p, nu, s.mu_at(nu)))
        sah[c] = bad
        if not bad and clean is None:
            clean = c
    return MuReport(N, u, d, algnt, sah, clean, max_mu)
