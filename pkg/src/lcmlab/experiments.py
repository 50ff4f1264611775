"""Theorem-level checks on exact factor tables.

Each check compares h * log(L or rad L) with the mass of the primes above
the cutoff. These inequalities are proved, so a negative margin beyond the
float tolerance means a bug somewhere upstream.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from .poly import IrreducibilityVerdict, Polynomial, irreducibility_witness, is_even
from .primes import DEFAULT_RHO_BUDGET
from .tablecache import cached_table, cache_dir
from .tuples import BaierDey, generic_u_exponent, max_weight
from .valuation import (
    FactorizationTable,
    as_fraction,
    exact_values,
    large_product,
    mass_split,
    prime_stats,
    verify_mu_bounds,
)
from .zerosum import find_roots, minimal_u

MARGIN_RTOL = 1e-6
EXACT_MAX_N = 500
DEFAULT_PRIME_BUDGET = 10_000
MIN_THEOREM_N = 100

CSV_COLUMNS = (
    "poly", "N", "c", "logQ", "logL", "logell",
    "small_mass", "large_mass", "h", "margin", "normalized_gap",
)


class HypothesisError(ValueError):
    """The polynomial does not meet the hypotheses of the requested check."""

    def __init__(self, message: str, verdict: Optional[IrreducibilityVerdict] = None):
        super().__init__(message)
        self.verdict = verdict


class TableProvider:
    """Builds factor tables once per polynomial and serves smaller N by truncation."""

    def __init__(self, cache=None, rho_budget: int = DEFAULT_RHO_BUDGET, jobs: int = 1):
        self.cache = cache_dir(cache) if not isinstance(cache, Path) else cache
        self.rho_budget = rho_budget
        self.jobs = jobs
        self._mem: Dict[tuple, FactorizationTable] = {}

    def table(self, f: Polynomial, N: int, c=1) -> FactorizationTable:
        have = self._mem.get(f.coeffs)
        if have is not None and have.N >= N:
            return have.truncate(N, c)
        t = cached_table(f, N, c, self.cache, rho_budget=self.rho_budget, jobs=self.jobs)
        self._mem[f.coeffs] = t
        return t.with_cutoff(c)


_default_provider = TableProvider()


@dataclass
class BoundReport:
    poly: str
    N: int
    c: Fraction
    log_Q: float
    log_L: float
    log_ell: float
    small_mass: float
    large_mass: float
    h: Optional[Fraction] = None
    margin: Optional[float] = None
    normalized_gap: Optional[float] = None
    target: str = ""  # "L" or "ell"
    label: str = "analyze"
    exact_ok: Optional[bool] = None
    notes: List[str] = field(default_factory=list)

    @property
    def tolerance(self) -> float:
        return MARGIN_RTOL * max(1.0, self.large_mass)

    @property
    def passed(self) -> bool:
        ok = self.margin is None or self.margin >= -self.tolerance
        return ok and self.exact_ok is not False

    def row(self) -> Dict[str, object]:
        return {
            "poly": self.poly,
            "N": self.N,
            "c": str(self.c),
            "logQ": self.log_Q,
            "logL": self.log_L,
            "logell": self.log_ell,
            "small_mass": self.small_mass,
            "large_mass": self.large_mass,
            "h": None if self.h is None else str(self.h),
            "margin": self.margin,
            "normalized_gap": self.normalized_gap,
        }


def check_hypotheses(
    f: Polynomial,
    need_even: bool = True,
    allow_unknown: bool = False,
    require_irreducible: bool = True,
    prime_budget: int = DEFAULT_PRIME_BUDGET,
) -> Optional[IrreducibilityVerdict]:
    if need_even and not is_even(f):
        raise HypothesisError(f"{f} is not even")
    if not require_irreducible:
        return None
    verdict = irreducibility_witness(f, prime_budget)
    if verdict.status == "Reducible":
        raise HypothesisError(f"{f} is {verdict.describe()}", verdict)
    if verdict.status == "Unknown" and not allow_unknown:
        raise HypothesisError(
            f"irreducibility of {f} could not be certified (pass the override to proceed)", verdict
        )
    return verdict


def base_report(table: FactorizationTable, label: str = "analyze") -> BoundReport:
    stats = prime_stats(table)
    m = mass_split(table, stats)
    return BoundReport(
        str(table.f), table.N, table.cutoff_c,
        m.log_Q, m.log_L, m.log_ell, m.small_mass, m.large_mass, label=label,
    )


def leading_coefficient(d: int, h: Fraction) -> Fraction:
    """The N log N coefficient (d - 1)/h delivered by an exponent h."""
    return Fraction(d - 1) / h


def _bound_report(
    table: FactorizationTable, h: Fraction, target: str, label: str, exact: bool
) -> BoundReport:
    if table.N < MIN_THEOREM_N:
        raise ValueError(f"theorem checks need N >= {MIN_THEOREM_N}, got {table.N}")
    rep = base_report(table, label)
    rep.h = Fraction(h)
    rep.target = target
    log_target = rep.log_L if target == "L" else rep.log_ell
    rep.margin = float(h) * log_target - rep.large_mass
    N = table.N
    coef = leading_coefficient(table.f.degree, rep.h)
    rep.normalized_gap = (log_target - float(coef) * N * math.log(N)) / N
    if exact:
        rep.exact_ok = exact_inequality(table, rep.h, target)
    return rep


def exact_inequality(table: FactorizationTable, h: Fraction, target: str) -> bool:
    """Integer comparison target^(2h) >= (prod_{p > cN} p^alpha_p)^2."""
    if table.N > EXACT_MAX_N:
        raise ValueError(f"exact comparison is limited to N <= {EXACT_MAX_N}")
    h2 = 2 * Fraction(h)
    if h2.denominator != 1:
        raise ValueError(f"2h must be an integer, got {h2}")
    stats = prime_stats(table)
    _, L, ell = exact_values(table, stats)
    base = L if target == "L" else ell
    return base ** int(h2) >= large_product(table, stats) ** 2


def check_theorem2(
    f: Polynomial,
    N: int,
    provider: Optional[TableProvider] = None,
    allow_unknown: bool = False,
    require_irreducible: bool = True,
    exact: bool = False,
) -> BoundReport:
    """L^(d/2) >= prod_{p > 2N} p^alpha_p, in log space."""
    check_hypotheses(f, True, allow_unknown, require_irreducible)
    provider = provider or _default_provider
    table = provider.table(f, N, 2)
    return _bound_report(table, Fraction(f.degree, 2), "L", "theorem2", exact)


def check_theorem3(
    f: Polynomial,
    N: int,
    c=None,
    provider: Optional[TableProvider] = None,
    allow_unknown: bool = False,
    require_irreducible: bool = True,
    exact: bool = False,
) -> BoundReport:
    """rad(L)^((d - u/2)(u - 1)) >= prod_{p > cN} p^alpha_p with u from the root pairing.

    Without an explicit c the smallest grid cutoff free of mu_{p^nu} <= d - nu
    violations is used.
    """
    check_hypotheses(f, True, allow_unknown, require_irreducible)
    provider = provider or _default_provider
    d = f.degree
    u = minimal_u(find_roots(f))
    if u != d // 2 + 1:
        raise AssertionError(f"even {f} gave u={u}, expected {d // 2 + 1}")
    h = generic_u_exponent(d, u)
    assert Fraction(h) == (Fraction(d) - Fraction(u, 2)) * (u - 1)
    notes = []
    if c is None:
        table = provider.table(f, N, 1)
        c = verify_mu_bounds(table, u).minimal_clean_c
        if c is None:
            raise RuntimeError(f"no violation-free cutoff on the grid for {f} at N={N}")
        notes.append(f"c chosen as minimal violation-free cutoff {c}")
    table = provider.table(f, N, as_fraction(c))
    rep = _bound_report(table, Fraction(h), "ell", "theorem3", exact)
    rep.notes.extend(notes + [f"u={u}"])
    return rep


def cyclotomic_power_of_two(eta: int) -> Polynomial:
    """X^(2^eta) + 1."""
    d = 1 << eta
    return Polynomial((1,) + (0,) * (d - 1) + (1,))


def check_theorem4(
    eta: int,
    N: int,
    c=None,
    provider: Optional[TableProvider] = None,
    exact: bool = False,
) -> BoundReport:
    """rad(L)^(eta 2^(eta-1)) >= prod_{p > cN} p^alpha_p for f = X^(2^eta) + 1."""
    if not 1 <= eta <= 4:
        raise ValueError("eta must lie in 1..4")
    provider = provider or _default_provider
    f = cyclotomic_power_of_two(eta)
    h = eta * (1 << (eta - 1))
    w = max_weight(BaierDey(eta))
    assert w == h, f"max_weight(BaierDey({eta})) = {w} != {h}"
    notes = []
    if c is None:
        table = provider.table(f, N, 1)
        c = verify_mu_bounds(table, f.degree // 2 + 1).minimal_clean_c
        if c is None:
            raise RuntimeError(f"no violation-free cutoff on the grid for {f} at N={N}")
        notes.append(f"c chosen as minimal violation-free cutoff {c}")
    table = provider.table(f, N, as_fraction(c))
    rep = _bound_report(table, Fraction(h), "ell", "theorem4", exact)
    rep.notes.extend(notes)
    return rep


@dataclass
class GrowthScan:
    Ns: List[int]
    reports: List[BoundReport]
    q_gap: List[float]  # (log Q - d N log N) / N
    small_gap: List[float]  # (small_mass - N log N) / N
    L_ratio: List[float]  # log L / (N log N)
    ell_ratio: List[float]  # log ell / (N log N)
    b_estimates: List[float]  # (log L - N log N) / N
    b_differences: List[float]
    b_extrapolated: List[float]  # assumes an O(1/N) correction between grid neighbours


def growth_scan(
    f: Polynomial, grid: Sequence[int], c=2, provider: Optional[TableProvider] = None
) -> GrowthScan:
    Ns = list(grid)
    if any(b <= a for a, b in zip(Ns, Ns[1:])):
        raise ValueError("grid must be strictly increasing")
    if Ns and Ns[0] < 100:
        raise ValueError("grid values must be >= 100")
    provider = provider or _default_provider
    d = f.degree
    if Ns:
        provider.table(f, Ns[-1], c)
    reports = []
    q_gap, small_gap, L_ratio, ell_ratio, b_est = [], [], [], [], []
    for N in Ns:
        rep = base_report(provider.table(f, N, c), "growth")
        reports.append(rep)
        nl = N * math.log(N)
        q_gap.append((rep.log_Q - d * nl) / N)
        small_gap.append((rep.small_mass - nl) / N)
        L_ratio.append(rep.log_L / nl)
        ell_ratio.append(rep.log_ell / nl)
        b_est.append((rep.log_L - nl) / N)
    diffs = [b - a for a, b in zip(b_est, b_est[1:])]
    extrap = [
        (N2 * b2 - N1 * b1) / (N2 - N1)
        for (N1, b1), (N2, b2) in zip(zip(Ns, b_est), zip(Ns[1:], b_est[1:]))
    ]
    return GrowthScan(Ns, reports, q_gap, small_gap, L_ratio, ell_ratio, b_est, diffs, extrap)


# --- export ---

def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def reports_to_csv(reports: Sequence[BoundReport], header_line: Optional[str] = None) -> str:
    buf = io.StringIO()
    if header_line:
        buf.write(f"# {header_line}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in reports:
        row = r.row()
        w.writerow([_cell(row[k]) for k in CSV_COLUMNS])
    return buf.getvalue()


def reports_to_json(reports: Sequence[BoundReport], header_line: Optional[str] = None) -> str:
    doc: Dict[str, object] = {"reports": [r.row() for r in reports]}
    if header_line:
        doc = {"generated": header_line, **doc}
    return json.dumps(doc, indent=2) + "\n"


def reports_from_csv(text: str) -> List[Dict[str, str]]:
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(lines))
