import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from lcmlab.poly import parse_poly
from lcmlab.primes import FactoringError
from lcmlab.valuation import (
    build_table,
    exact_values,
    mass_split,
    prime_stats,
    roots_mod_p,
    verify_mu_bounds,
)

from oracles import poly_value, simple_sieve, trial_division_factor

PRIMES = simple_sieve(10**7)

ORACLE_FAMILY = [
    "X^2+1", "X^4-2", "X^4+1", "X^6-3", "X^2+X+1", "X^3-2",
    "X^2-3X+2",  # zeros at n = 1, 2
    "X^4-X^2",  # zero at n = 1, squareful
]


def P(text):
    return parse_poly(text)


class TestSmallExamples:
    def test_x2_plus_1(self):
        t = build_table(P("X^2+1"), 3, 1)
        assert t.entries == {1: ((2, 1),), 2: ((5, 1),), 3: ((2, 1), (5, 1))}
        assert not t.skipped

    def test_x4_minus_2(self):
        t = build_table(P("X^4-2"), 3, 1)
        assert t.entries == {1: (), 2: ((2, 1), (7, 1)), 3: ((79, 1),)}
        assert t.skipped == {1}

    def test_flags_at_c2(self):
        t = build_table(P("X^2+1"), 3, 2)
        assert t.cutoff == 6
        flags = {(p, tag) for n in t.entries for p, _, tag in t.flagged(n)}
        assert flags == {(2, "small"), (5, "small")}

    def test_tie_counts_as_small(self):
        t = build_table(P("X^4-2"), 3, Fraction(79, 3))
        assert t.cutoff == 79 and t.is_small(79)
        assert mass_split(t).large_mass == 0

    def test_prime_stats(self):
        s = prime_stats(build_table(P("X^2+1"), 3, 1))
        assert (s[2].alpha, s[2].beta, s[2].mu_at(1)) == (2, 1, 2)
        assert (s[5].alpha, s[5].beta, s[5].mu_at(1)) == (2, 1, 2)
        s = prime_stats(build_table(P("X^4-2"), 3, 1))
        assert (s[79].alpha, s[79].beta, s[79].mu_at(1)) == (1, 1, 1)

    def test_mass_split(self):
        m = mass_split(build_table(P("X^2+1"), 3, 1))
        assert m.log_Q == pytest.approx(math.log(100), rel=1e-12)
        assert m.log_L == pytest.approx(math.log(10), rel=1e-12)
        assert m.log_ell == pytest.approx(math.log(10), rel=1e-12)
        m = mass_split(build_table(P("X^4-2"), 3, 1))
        assert m.log_L == pytest.approx(math.log(1106), rel=1e-12)

    def test_all_unit_values(self):
        # f(1) = -1, f(2) = 1
        t = build_table(P("X^2-3X+1"), 2, 1)
        assert t.skipped == {1, 2}
        m = mass_split(t)
        assert (m.log_Q, m.log_L, m.log_ell, m.small_mass, m.large_mass) == (0, 0, 0, 0, 0)

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            build_table(P("X^2+1"), 1, 1)
        with pytest.raises(ValueError):
            build_table(P("X^2+1"), 10, Fraction(1, 2))


def test_roots_mod_p():
    assert sorted(roots_mod_p(P("X^2+1"), 5, 10).tolist()) == [2, 3]
    assert roots_mod_p(P("X^2+1"), 3, 10).tolist() == []


@pytest.mark.parametrize("text", ORACLE_FAMILY)
def test_matches_trial_division(text):
    f = P(text)
    N = 200
    t = build_table(f, N, 1)
    for n in range(1, N + 1):
        v = poly_value(f.coeffs, n)
        if v == 0:
            assert n in t.zeros and n not in t.entries
            continue
        assert dict(t.entries[n]) == trial_division_factor(v, PRIMES), n
    Q = math.prod(abs(poly_value(f.coeffs, n)) for n in range(1, N + 1) if n not in t.zeros)
    assert exact_values(t)[0] == Q


@pytest.mark.parametrize("text", ORACLE_FAMILY)
def test_stats_identities(text):
    t = build_table(P(text), 200, 2)
    stats = prime_stats(t)
    for p, s in stats.items():
        assert s.alpha == sum(s.mu)
        assert s.beta <= s.alpha <= s.mu_at(1) * s.beta
        es = [dict(fs).get(p, 0) for fs in t.entries.values()]
        assert s.alpha == sum(es) and s.beta == max(es)
    m = mass_split(t, stats)
    direct = math.fsum(math.log(abs(poly_value(t.f.coeffs, n))) for n in t.entries)
    assert m.small_mass + m.large_mass == pytest.approx(direct, rel=1e-6)
    assert m.log_Q == pytest.approx(direct, rel=1e-12)
    assert m.log_ell <= m.log_L <= m.log_Q + 1e-9


@settings(max_examples=25, deadline=None)
@given(
    st.lists(st.integers(-30, 30), min_size=2, max_size=4),
    st.integers(2, 120),
    st.sampled_from([1, 2, Fraction(3, 2), 4]),
)
def test_conservation_random_polys(low, N, c):
    f = P(",".join(map(str, low + [1])))
    t = build_table(f, N, c)
    t.check()
    Q, L, ell = exact_values(t)
    assert ell <= L <= Q
    assert Q == math.prod(abs(poly_value(f.coeffs, n)) for n in range(1, N + 1) if n not in t.zeros)


def test_truncate_equals_fresh_build():
    f = P("X^4-2")
    big = build_table(f, 300, 1)
    for N in (2, 57, 200):
        assert big.truncate(N, 2) == build_table(f, N, 2)


def test_parallel_build_matches_serial():
    f = P("X^6-3")
    assert build_table(f, 300, 2, jobs=2, block_size=40) == build_table(f, 300, 2)


def test_factoring_budget_reports_value():
    # with c = 1 at N = 300 many residuals are semiprimes; a budget of 1 cannot split them
    with pytest.raises(FactoringError) as info:
        build_table(P("X^6-3"), 300, 1, rho_budget=1)
    assert info.value.n is not None


class TestMuBounds:
    @pytest.mark.parametrize("text, u", [("X^4-2", 3), ("X^2+1", 2)])
    def test_no_algnt_violations(self, text, u):
        rep = verify_mu_bounds(build_table(P(text), 500, 1), u)
        assert rep.algnt_violations == []
        assert rep.max_mu_large <= u - 1

    @pytest.mark.parametrize("u", [2, 3, 5])
    def test_degenerate_n2(self, u):
        assert verify_mu_bounds(build_table(P("X^4-2"), 2, 1), u).is_empty()

    def test_reports_violations_when_u_too_small(self):
        # X^4-2 has two root pairs, so primes above 2N can divide two values
        rep = verify_mu_bounds(build_table(P("X^4-2"), 500, 1), 2)
        assert rep.algnt_violations and all(mu >= 2 for _, mu in rep.algnt_violations)

    def test_minimal_clean_c_is_on_grid(self):
        rep = verify_mu_bounds(build_table(P("X^4-2"), 500, 1), 3)
        assert rep.minimal_clean_c is not None
        assert rep.sah_violations[rep.minimal_clean_c] == []
        for c, bad in rep.sah_violations.items():
            if c < rep.minimal_clean_c:
                assert bad

    def test_rejects_u_below_2(self):
        with pytest.raises(ValueError):
            verify_mu_bounds(build_table(P("X^2+1"), 10, 1), 1)
