"""Monic integer polynomials: parsing, evaluation and elementary checks."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from .primes import primes_upto


class PolynomialError(ValueError):
    """Raised for malformed or non-monic polynomial input."""


def _strip(coeffs: Sequence[int]) -> Tuple[int, ...]:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class Polynomial:
    """Monic polynomial with integer coefficients, ``coeffs[i]`` multiplies X^i."""

    coeffs: Tuple[int, ...]

    def __post_init__(self) -> None:
        c = _strip(int(a) for a in self.coeffs)
        if len(c) < 3:
            raise PolynomialError(f"degree must be at least 2, got {tuple(self.coeffs)}")
        if c[-1] != 1:
            raise PolynomialError(f"polynomial is not monic (leading coefficient {c[-1]})")
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, n: int) -> int:
        return evaluate(self, n)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        return Polynomial(poly_add(self.coeffs, other.coeffs))

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        return Polynomial(poly_mul(self.coeffs, other.coeffs))

    def __str__(self) -> str:
        return format_poly(self.coeffs)

    @classmethod
    def parse(cls, text: str) -> "Polynomial":
        return parse_poly(text)


# --- raw coefficient arithmetic (low degree first) ---

def poly_add(a: Sequence, b: Sequence) -> tuple:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]
    return _strip(out)


def poly_mul(a: Sequence, b: Sequence) -> tuple:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _strip(out)


def poly_divmod(a: Sequence, b: Sequence) -> Tuple[tuple, tuple]:
    """Division with remainder over Q; coefficients come back as Fractions."""
    b = _strip(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = [Fraction(x) for x in _strip(a)]
    lead = Fraction(b[-1])
    db = len(b) - 1
    if len(r) - 1 < db:
        return (), tuple(r)
    q = [Fraction(0)] * (len(r) - db)
    for k in range(len(r) - 1 - db, -1, -1):
        t = r[k + db] / lead
        q[k] = t
        if t:
            for j, y in enumerate(b):
                r[k + j] -= t * y
    return _strip(q), _strip(r[:db])


def poly_gcd(a: Sequence, b: Sequence) -> tuple:
    """Monic gcd over Q."""
    a, b = _strip(a), _strip(b)
    while b:
        _, r = poly_divmod(a, b)
        a, b = b, r
    if not a:
        return ()
    lead = Fraction(a[-1])
    return tuple(Fraction(x) / lead for x in a)


def derivative(a: Sequence) -> tuple:
    return _strip(i * a[i] for i in range(1, len(a)))


def squarefree_decomposition(a: Sequence[int]) -> list:
    """Yun's algorithm over Q: returns [(g_i, i)] with a = prod g_i^i, g_i monic squarefree."""
    a = _strip(a)
    out = []
    g = poly_gcd(a, derivative(a))
    b, _ = poly_divmod(a, g)
    c, _ = poly_divmod(derivative(a), g)
    d = poly_add(c, tuple(-x for x in derivative(b)))
    i = 1
    while len(b) > 1:
        h = poly_gcd(b, d)
        b, _ = poly_divmod(b, h)
        c, _ = poly_divmod(d, h)
        d = poly_add(c, tuple(-x for x in derivative(b)))
        if len(h) > 1:
            out.append((_as_int_poly(h), i))
        i += 1
    return out


def _as_int_poly(a: Sequence) -> tuple:
    # monic rational factors of monic integer polynomials are integral (Gauss)
    out = []
    for x in a:
        x = Fraction(x)
        if x.denominator != 1:
            raise ArithmeticError(f"non-integral factor coefficient {x}")
        out.append(int(x))
    return tuple(out)


def evaluate(f, n: int) -> int:
    """Exact value f(n) by Horner's rule."""
    coeffs = f.coeffs if isinstance(f, Polynomial) else f
    acc = 0
    for a in reversed(coeffs):
        acc = acc * n + a
    return acc


def is_even(f: Polynomial) -> bool:
    return all(a == 0 for a in f.coeffs[1::2])


def is_squarefree(f: Polynomial) -> bool:
    return len(poly_gcd(f.coeffs, derivative(f.coeffs))) == 1


def resultant(a: Sequence, b: Sequence) -> int:
    """Resultant of two integer polynomials by the Euclidean recurrence over Q."""
    a = tuple(Fraction(x) for x in _strip(a))
    b = tuple(Fraction(x) for x in _strip(b))
    if not a or not b:
        return 0
    res = Fraction(1)
    while True:
        da, db = len(a) - 1, len(b) - 1
        if db == 0:
            return int(res * b[0] ** da)
        _, r = poly_divmod(a, b)
        if not r:
            return 0
        dr = len(r) - 1
        if da % 2 == 1 and db % 2 == 1:
            res = -res
        res *= b[-1] ** (da - dr)
        a, b = b, r


def discriminant(f: Polynomial) -> int:
    d = f.degree
    sign = -1 if (d * (d - 1) // 2) % 2 else 1
    return sign * resultant(f.coeffs, derivative(f.coeffs))


# --- polynomial arithmetic over GF(p) ---

def _trim_p(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def _mulmod_p(a: list, b: list, f: Sequence[int], p: int) -> list:
    if not a or not b:
        return []
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    d = len(f) - 1
    for k in range(len(prod) - 1, d - 1, -1):
        t = prod[k] % p
        if t:
            for j in range(d):
                prod[k - d + j] -= t * f[j]
    return _trim_p([x % p for x in prod[:d]])


def _powmod_p(base: list, e: int, f: Sequence[int], p: int) -> list:
    result = [1]
    while e:
        if e & 1:
            result = _mulmod_p(result, base, f, p)
        e >>= 1
        if e:
            base = _mulmod_p(base, base, f, p)
    return result


def _gcd_p(a: list, b: list, p: int) -> list:
    a, b = _trim_p([x % p for x in a]), _trim_p([x % p for x in b])
    while b:
        inv = pow(b[-1], -1, p)
        while len(a) >= len(b):
            t = a[-1] * inv % p
            shift = len(a) - len(b)
            for j, y in enumerate(b):
                a[shift + j] = (a[shift + j] - t * y) % p
            _trim_p(a)
            if not a:
                break
        a, b = b, a
    return a


def _prime_factors_small(n: int) -> list:
    out, q = [], 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1
    if n > 1:
        out.append(n)
    return out


def _compose_mod_p(g: list, h: list, f: Sequence[int], p: int) -> list:
    """g(h) mod (f, p) by Horner's rule."""
    acc: list = []
    for a in reversed(g):
        acc = _mulmod_p(acc, h, f, p)
        if a:
            if acc:
                acc[0] = (acc[0] + a) % p
                _trim_p(acc)
            else:
                acc = [a % p]
    return acc


def irreducible_mod_p(f: Polynomial, p: int) -> bool:
    """Rabin's test for the reduction of monic f modulo p."""
    d = f.degree
    fm = [a % p for a in f.coeffs]
    x = [0, 1]
    xp = _powmod_p(x, p, fm, p)
    # Frobenius is a ring map, so x^(p^k) = (x^(p^(k-1)))(x^p)
    frob = [x, xp]
    for _ in range(2, d + 1):
        frob.append(_compose_mod_p(frob[-1], xp, fm, p))
    if frob[d] != x:
        return False
    for q in _prime_factors_small(d):
        diff = frob[d // q] + [0] * max(0, 2 - len(frob[d // q]))
        diff[1] -= 1
        if len(_gcd_p(fm, diff, p)) > 1:
            return False
    return True


@dataclass(frozen=True)
class IrreducibilityVerdict:
    status: str  # "Irreducible" | "Reducible" | "Unknown"
    witness_prime: Optional[int] = None
    factor: Optional[Tuple[int, ...]] = None

    def __post_init__(self) -> None:
        if self.status not in ("Irreducible", "Reducible", "Unknown"):
            raise ValueError(self.status)
        if self.status == "Irreducible" and self.witness_prime is None:
            raise ValueError("irreducible verdict needs a witness prime")
        if self.status == "Reducible" and self.factor is None:
            raise ValueError("reducible verdict needs a factor")

    def describe(self) -> str:
        if self.status == "Irreducible":
            return f"irreducible (mod {self.witness_prime})"
        if self.status == "Reducible":
            return f"reducible: factor {format_poly(self.factor)}"
        return "unknown"


def _divides_exactly(g: Sequence[int], f: Sequence[int]) -> bool:
    _, r = poly_divmod(f, g)
    return not r


def _integer_divisors(n: int) -> list:
    n = abs(n)
    small = [k for k in range(1, int(n ** 0.5) + 1) if n % k == 0]
    return sorted(set(small + [n // k for k in small]))


def _bounded_factor_search(f: Polynomial) -> Optional[Tuple[int, ...]]:
    """Monic factor of degree 2..d/2 with coefficients bounded by 2^d * max|coeff|."""
    d = f.degree
    bound = (1 << d) * max(abs(a) for a in f.coeffs)
    c0 = f.coeffs[0]
    if c0 == 0:
        return (0, 1)
    divisors = _integer_divisors(c0)
    consts = [s * k for k in divisors if k <= bound for s in (1, -1)]
    rng = range(-bound, bound + 1)
    for k in range(2, d // 2 + 1):
        # TODO(perf): a meet-in-the-middle split would make k >= 3 affordable for large bounds
        if (2 * bound + 1) ** (k - 1) * len(consts) > 2_000_000:
            continue
        for b0 in consts:
            stack = [[b0]]
            while stack:
                partial = stack.pop()
                if len(partial) == k:
                    g = tuple(partial) + (1,)
                    if _divides_exactly(g, f.coeffs):
                        return g
                    continue
                for a in rng:
                    stack.append(partial + [a])
    return None


def irreducibility_witness(f: Polynomial, prime_budget: int) -> IrreducibilityVerdict:
    """Certify irreducibility by a mod-p witness, or reducibility by an explicit factor.

    Unknown is returned when neither search succeeds, e.g. for X^4+1 which
    splits modulo every prime.
    """
    if prime_budget < 2:
        raise ValueError("prime_budget must be >= 2")
    disc = discriminant(f)
    if disc == 0:
        g = poly_gcd(f.coeffs, derivative(f.coeffs))
        return IrreducibilityVerdict("Reducible", factor=_as_int_poly(g))
    for p in primes_upto(prime_budget):
        if disc % p and irreducible_mod_p(f, p):
            return IrreducibilityVerdict("Irreducible", witness_prime=p)
    c0 = f.coeffs[0]
    candidates = [0] if c0 == 0 else [s * k for k in _integer_divisors(c0) for s in (1, -1)]
    for r in candidates:
        if evaluate(f, r) == 0:
            return IrreducibilityVerdict("Reducible", factor=(-r, 1))
    g = _bounded_factor_search(f)
    if g is not None:
        return IrreducibilityVerdict("Reducible", factor=g)
    return IrreducibilityVerdict("Unknown")


# --- text format ---

_TERM = re.compile(r"([+-]?)(\d*)\*?(?:([xX])(?:\^(\d+))?)?")


def parse_poly(text: str) -> Polynomial:
    """Parse "c0,c1,...,cd" or a symbolic form such as "X^4-2"."""
    if re.search(r"[\w^*]\s+[\w^*]", text):
        raise PolynomialError(f"unexpected whitespace inside a term in {text!r}")
    s = "".join(text.split())
    if not s:
        raise PolynomialError("empty polynomial")
    if "," in s or re.fullmatch(r"[+-]?\d+", s):
        try:
            return Polynomial(tuple(int(tok) for tok in s.split(",")))
        except ValueError as exc:
            if isinstance(exc, PolynomialError):
                raise
            raise PolynomialError(f"bad coefficient list {text!r}") from None
    coeffs: dict = {}
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos or (not m.group(2) and not m.group(3)):
            raise PolynomialError(f"cannot parse {text!r} at position {pos}")
        if pos > 0 and not m.group(1):
            raise PolynomialError(f"missing sign in {text!r} at position {pos}")
        sign = -1 if m.group(1) == "-" else 1
        c = int(m.group(2)) if m.group(2) else 1
        if m.group(3):
            e = int(m.group(4)) if m.group(4) else 1
        else:
            e = 0
        coeffs[e] = coeffs.get(e, 0) + sign * c
        pos = m.end()
    deg = max(coeffs)
    return Polynomial(tuple(coeffs.get(i, 0) for i in range(deg + 1)))


def format_poly(coeffs: Sequence[int]) -> str:
    parts = []
    for i in range(len(coeffs) - 1, -1, -1):
        a = coeffs[i]
        if a == 0:
            continue
        sign = "-" if a < 0 else "+"
        mag = abs(a)
        if i == 0:
            body = str(mag)
        else:
            mono = "X" if i == 1 else f"X^{i}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        parts.append((sign, body))
    if not parts:
        return "0"
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += sign + body
    return out
