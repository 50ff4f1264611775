"""Zero sums among the complex roots of a monic integer polynomial.

Roots are computed with mpmath at a fixed binary precision and certified by
rebuilding the coefficients from them. For even f the negation pairing is
read off from the construction (r and -r come from one root of f(sqrt Y)),
so no tolerance decision is involved.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import mpmath

from .poly import Polynomial, is_even, poly_divmod, poly_gcd, derivative, squarefree_decomposition

DEFAULT_PREC = 128


class RootCertificationError(ArithmeticError):
    pass


@dataclass(frozen=True)
class RootSet:
    f: Polynomial
    roots: Tuple[mpmath.mpc, ...]
    pairs: Tuple[Tuple[int, int], ...]
    unpaired: Tuple[int, ...]
    prec: int
    exact_pairing: bool

    @property
    def degree(self) -> int:
        return len(self.roots)

    @property
    def max_abs(self) -> float:
        return float(max(abs(r) for r in self.roots))

    @property
    def tol(self) -> float:
        """Pairing / zero-sum tolerance 2^-30 * max|root|."""
        m = self.max_abs
        return 2.0 ** -30 * (m if m > 0 else 1.0)


@dataclass(frozen=True)
class ZeroSum:
    coefficients: Tuple[int, ...]  # one entry in {-1, 0, 1} per root index
    residual: float
    residual_hi: float  # re-verified at doubled precision

    @property
    def support(self) -> int:
        return sum(1 for b in self.coefficients if b)


def _roots_of(coeffs: Sequence[int], prec: int) -> List[mpmath.mpc]:
    """Roots of a squarefree monic integer polynomial at ``prec`` bits."""
    if len(coeffs) == 2:
        return [mpmath.mpc(-coeffs[0])]
    with mpmath.workprec(prec):
        rs = mpmath.polyroots(list(reversed(coeffs)), maxsteps=400, extraprec=prec)
        return [mpmath.mpc(r) for r in rs]


def _roots_with_multiplicity(coeffs: Sequence[int], prec: int) -> List[mpmath.mpc]:
    out: List[mpmath.mpc] = []
    for g, mult in squarefree_decomposition(coeffs):
        for r in _roots_of(g, prec):
            out.extend([r] * mult)
    return out


def _reconstruct(roots: Sequence[mpmath.mpc], prec: int) -> List[mpmath.mpc]:
    with mpmath.workprec(prec):
        c = [mpmath.mpc(1)]
        for r in roots:
            nxt = [mpmath.mpc(0)] * (len(c) + 1)
            for i, a in enumerate(c):
                nxt[i + 1] += a
                nxt[i] -= a * r
            c = nxt
        return c


def _certify(f: Polynomial, roots: Sequence[mpmath.mpc], prec: int) -> None:
    tol_rec = 2.0 ** -40 * (1 + max(abs(a) for a in f.coeffs))
    rebuilt = _reconstruct(roots, prec)
    err = max(float(abs(rebuilt[i] - f.coeffs[i])) for i in range(len(f.coeffs)))
    if err >= tol_rec:
        with mpmath.workprec(prec):
            seps = [float(abs(a - b)) for a, b in itertools.combinations(roots, 2) if a != b]
        sep = min(seps) if seps else float("inf")
        raise RootCertificationError(
            f"coefficient reconstruction error {err:.3g} >= {tol_rec:.3g} "
            f"for {f} (minimal root separation {sep:.3g})"
        )


def find_roots(f: Polynomial, prec: int = DEFAULT_PREC) -> RootSet:
    d = f.degree
    if is_even(f):
        # f(X) = g(X^2): each root s of g gives the pair +sqrt(s), -sqrt(s)
        g = tuple(f.coeffs[0::2])
        roots: List[mpmath.mpc] = []
        halves = _roots_with_multiplicity(g, prec)
        pairs = []
        with mpmath.workprec(prec):
            for s in halves:
                r = mpmath.sqrt(s)
                pairs.append((len(roots), len(roots) + 1))
                roots.extend([r, -r])
        _certify(f, roots, prec)
        return RootSet(f, tuple(roots), tuple(pairs), (), prec, True)

    roots = _roots_with_multiplicity(f.coeffs, prec)
    _certify(f, roots, prec)
    rs = RootSet(f, tuple(roots), (), tuple(range(d)), prec, False)
    tol = rs.tol
    with mpmath.workprec(prec):
        matched = [False] * d
        pairs = []
        for i in range(d):
            if matched[i]:
                continue
            for j in range(i + 1, d):
                if not matched[j] and float(abs(roots[i] + roots[j])) < tol:
                    matched[i] = matched[j] = True
                    pairs.append((i, j))
                    break
        unpaired = tuple(i for i in range(d) if not matched[i])
        for i in unpaired:
            for j in range(d):
                gap = float(abs(roots[i] + roots[j]))
                if j != i and gap < 10 * tol:
                    raise RootCertificationError(
                        f"ambiguous pairing for root {i} of {f}: |r_i + r_j| = {gap:.3g}"
                    )
    return RootSet(f, tuple(roots), tuple(pairs), unpaired, prec, False)


def refine(rs: RootSet, prec: int) -> RootSet:
    """The same roots, index for index, Newton-polished on the squarefree part at ``prec`` bits."""
    c = rs.f.coeffs
    red, _ = poly_divmod(c, poly_gcd(c, derivative(c)))
    red = [int(x) for x in red]
    dred = derivative(red)
    out = []
    with mpmath.workprec(prec):
        eps = mpmath.mpf(2) ** (-prec + 8)
        for r in rs.roots:
            z = mpmath.mpc(r)
            for _ in range(60):
                fz = mpmath.polyval(list(reversed(red)), z)
                dz = mpmath.polyval(list(reversed(dred)), z)
                if dz == 0:
                    break
                step = fz / dz
                z -= step
                if abs(step) <= eps * (1 + abs(z)):
                    break
            out.append(z)
    _certify(rs.f, out, prec)
    return RootSet(rs.f, tuple(out), rs.pairs, rs.unpaired, prec, rs.exact_pairing)


def minimal_u(rs: RootSet) -> int:
    """Smallest u such that every u roots (counted by index) contain a negation pair.

    Equals 1 + #pairs + #unpaired. When no pair exists the value d + 1 is
    returned, which signals that no admissible u <= d exists.
    """
    return 1 + len(rs.pairs) + len(rs.unpaired)


def has_admissible_u(rs: RootSet) -> bool:
    return minimal_u(rs) <= rs.degree


def _scan(rs: RootSet, max_support: int, upper: float) -> List[Tuple[Tuple[int, ...], float]]:
    d = rs.degree
    zs = [complex(r) for r in rs.roots]
    mags = [abs(z) for z in zs]
    # tail_best[i][k]: largest total modulus of k roots among indices >= i
    tail_best = []
    for i in range(d + 1):
        srt = sorted(mags[i:], reverse=True)
        acc = [0.0]
        for m in srt:
            acc.append(acc[-1] + m)
        tail_best.append(acc)
    slack = upper * 4 + 1e-12 * (1 + max(mags))
    found: List[Tuple[int, ...]] = []
    coeffs = [0] * d

    def dfs(i: int, total: complex, left: int, started: bool) -> None:
        if i == d or left == 0:
            return
        if abs(total) - tail_best[i][min(left, d - i)] > slack:
            return
        for b in (1, -1) if started else (1,):
            coeffs[i] = b
            t = total + b * zs[i]
            if abs(t) < slack:
                found.append(tuple(coeffs))
            dfs(i + 1, t, left - 1, True)
        coeffs[i] = 0
        dfs(i + 1, total, left, started)

    dfs(0, 0j, max_support, False)
    out = []
    with mpmath.workprec(rs.prec):
        for vec in found:
            res = float(abs(mpmath.fsum(b * r for b, r in zip(vec, rs.roots) if b)))
            if res < upper:
                out.append((vec, res))
    return out


def search_zero_sums(rs: RootSet, max_support: int) -> List[ZeroSum]:
    """All {-1,0,1} combinations of at most ``max_support`` roots that vanish.

    Each vector is normalized so that its first nonzero entry is +1, and
    every hit is re-checked with roots refined to twice the precision.
    """
    if not 1 <= max_support <= rs.degree:
        raise ValueError("max_support must lie in [1, d]")
    tol = rs.tol
    hits = _scan(rs, max_support, tol)
    if not hits:
        return []
    hi = refine(rs, 2 * rs.prec)
    out = []
    with mpmath.workprec(hi.prec):
        for vec, res in hits:
            res_hi = float(abs(mpmath.fsum(b * r for b, r in zip(vec, hi.roots) if b)))
            if res_hi < tol * tol:
                out.append(ZeroSum(vec, res, res_hi))
    return sorted(out, key=lambda z: z.coefficients)


def near_misses(rs: RootSet, max_support: int) -> List[Tuple[Tuple[int, ...], float]]:
    """Combinations with residual in [tol, 1000*tol): reported, never treated as zero sums."""
    tol = rs.tol
    return sorted(
        (vec, res) for vec, res in _scan(rs, max_support, 1000 * tol) if res >= tol
    )


def describe_roots(rs: RootSet, digits: int = 12) -> List[str]:
    with mpmath.workprec(rs.prec):
        return [mpmath.nstr(r, digits) for r in rs.roots]


def pairing_root_sums(rs: RootSet) -> List[float]:
    with mpmath.workprec(rs.prec):
        return [float(abs(rs.roots[i] + rs.roots[j])) for i, j in rs.pairs]

