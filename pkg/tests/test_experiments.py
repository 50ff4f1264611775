import json
import math
from fractions import Fraction

import pytest

from lcmlab.experiments import (
    CSV_COLUMNS,
    HypothesisError,
    check_theorem2,
    check_theorem3,
    check_theorem4,
    cyclotomic_power_of_two,
    exact_inequality,
    growth_scan,
    leading_coefficient,
    reports_from_csv,
    reports_to_csv,
    reports_to_json,
)
from lcmlab.poly import parse_poly
from lcmlab.tuples import BaierDey, generic_u_exponent, max_weight
from lcmlab.valuation import exact_values, prime_stats


def P(text):
    return parse_poly(text)


class TestTheorem2:
    def test_x4_minus_2(self, provider):
        rep = check_theorem2(P("X^4-2"), 500, provider)
        assert rep.h == 2 and rep.c == 2 and rep.target == "L"
        assert rep.margin >= 0 and rep.passed

    def test_quadratic(self, provider):
        rep = check_theorem2(P("X^2+1"), 500, provider)
        assert rep.h == 1 and rep.margin >= 0
        # for d = 2 every prime above 2N divides at most one value, so alpha_p = beta_p there
        stats = prime_stats(provider.table(P("X^2+1"), 500, 2))
        assert all(s.alpha == s.beta for p, s in stats.items() if p > 1000)

    def test_small_n_bookkeeping(self, provider):
        rep = check_theorem2(P("X^4-2"), 100, provider)
        assert math.isfinite(rep.normalized_gap) and math.isfinite(rep.margin)

    def test_rejects_odd_polynomial(self, provider):
        with pytest.raises(HypothesisError):
            check_theorem2(P("X^2+X+1"), 200, provider)

    def test_rejects_reducible_unless_skipped(self, provider):
        with pytest.raises(HypothesisError):
            check_theorem2(P("X^6+1"), 200, provider)
        assert check_theorem2(P("X^6+1"), 200, provider, require_irreducible=False).passed

    def test_unknown_needs_override(self, provider):
        with pytest.raises(HypothesisError) as info:
            check_theorem2(P("X^4+1"), 200, provider)
        assert info.value.verdict.status == "Unknown"
        assert check_theorem2(P("X^4+1"), 200, provider, allow_unknown=True).passed


class TestTheorem3:
    def test_x4_minus_2(self, provider):
        rep = check_theorem3(P("X^4-2"), 500, 2, provider)
        assert rep.h == 5 and rep.target == "ell" and rep.margin >= 0

    def test_x4_plus_1(self, provider):
        rep = check_theorem3(P("X^4+1"), 500, 2, provider, allow_unknown=True)
        assert rep.h == 5 and rep.passed

    def test_quadratic_degenerates(self, provider):
        rep = check_theorem3(P("X^2+1"), 300, 2, provider)
        assert rep.h == 1 and rep.passed

    def test_default_cutoff_is_engine_choice(self, provider):
        rep = check_theorem3(P("X^6-3"), 500, None, provider)
        assert rep.h == generic_u_exponent(6, 4) == 12
        assert any("minimal violation-free" in n for n in rep.notes)
        assert rep.passed


class TestTheorem4:
    @pytest.mark.parametrize("eta, N, h", [(2, 500, 4), (1, 500, 1), (3, 300, 12)])
    def test_exponents(self, eta, N, h, provider):
        rep = check_theorem4(eta, N, 2, provider)
        assert rep.h == h == max_weight(BaierDey(eta))
        assert rep.passed

    def test_polynomial(self):
        assert cyclotomic_power_of_two(3).coeffs == (1, 0, 0, 0, 0, 0, 0, 0, 1)

    def test_eta_range(self, provider):
        with pytest.raises(ValueError):
            check_theorem4(5, 200, 2, provider)


@pytest.mark.parametrize("d", [2, 4, 6, 8])
def test_leading_coefficients_closed_forms(d):
    u = d // 2 + 1
    assert leading_coefficient(d, Fraction(d, 2)) == Fraction(2 * (d - 1), d)
    h3 = (Fraction(d) - Fraction(u, 2)) * (u - 1)
    assert leading_coefficient(d, h3) == Fraction(8 * (d - 1), d * (3 * d - 2))


@pytest.mark.parametrize("eta", [1, 2, 3, 4])
def test_leading_coefficient_theorem4(eta):
    h = eta * 2 ** (eta - 1)
    assert leading_coefficient(2 ** eta, h) == Fraction(2 ** eta - 1, h)


class TestExactFallback:
    @pytest.mark.parametrize("text", ["X^4-2", "X^6-3", "X^2+1"])
    def test_theorem2_exact(self, text, provider):
        rep = check_theorem2(P(text), 300, provider, exact=True)
        assert rep.exact_ok is True

    def test_theorem3_and_4_exact(self, provider):
        assert check_theorem3(P("X^4-2"), 300, 2, provider, exact=True).exact_ok
        assert check_theorem4(2, 300, 2, provider, exact=True).exact_ok

    def test_detects_false_inequality(self, provider):
        # h = 1/2 is far too small for X^4-2; the exact path must say so
        t = provider.table(P("X^4-2"), 300, 2)
        assert exact_inequality(t, Fraction(1, 2), "ell") is False

    def test_size_limit(self, provider):
        with pytest.raises(ValueError):
            exact_inequality(provider.table(P("X^4-2"), 600, 2), 2, "L")

    def test_log_margin_agrees_with_exact(self, provider):
        t = provider.table(P("X^4-2"), 300, 2)
        Q, L, ell = exact_values(t)
        rep = check_theorem2(P("X^4-2"), 300, provider)
        assert rep.log_L == pytest.approx(math.log(L), rel=1e-12)
        assert rep.log_ell == pytest.approx(math.log(ell), rel=1e-12)
        assert rep.log_Q == pytest.approx(math.log(Q), rel=1e-12)


class TestGrowth:
    def test_x4_minus_2_ratio_bracket(self, provider):
        g = growth_scan(P("X^4-2"), [500, 1000, 2000], provider=provider)
        lo, hi = Fraction(2 * 3, 4), 3
        for r in g.L_ratio:
            assert float(lo) * 0.9 < r < hi + 0.1

    def test_quadratic_ratio_tends_to_one(self, provider):
        g = growth_scan(P("X^2+1"), [500, 1000, 2000, 4000], provider=provider)
        gaps = [abs(r - 1) for r in g.L_ratio]
        assert gaps[-1] < gaps[0] and gaps[-1] < 0.05

    def test_quadratic_b_estimates_settle(self, provider):
        g = growth_scan(P("X^2+1"), [200, 500, 1000, 2000, 4000], provider=provider)
        first = abs(g.b_differences[0])
        assert all(abs(x) < first for x in g.b_differences[1:])
        assert all(abs(x) < 0.1 for x in g.b_differences[1:])
        assert len(g.b_extrapolated) == 4

    @pytest.mark.parametrize("text", ["X^4-2", "X^6-3", "X^2+1", "X^4+1"])
    def test_q_gap_and_small_mass(self, text, provider):
        f = P(text)
        g = growth_scan(f, [200, 500, 1000, 2000], provider=provider)
        assert all(abs(q) <= 2 * f.degree for q in g.q_gap)
        assert all(abs(s) <= 5 for s in g.small_gap)

    def test_grid_validation(self, provider):
        with pytest.raises(ValueError):
            growth_scan(P("X^2+1"), [500, 400], provider=provider)
        with pytest.raises(ValueError):
            growth_scan(P("X^2+1"), [50, 400], provider=provider)


@pytest.mark.parametrize("text", ["X^4-2", "X^2+1", "X^6-3"])
def test_ordering_and_monotonicity_exact(text, provider):
    f = P(text)
    big = provider.table(f, 400, 2)
    prev_L = prev_ell = 1
    for N in range(2, 401, 7):
        Q, L, ell = exact_values(big.truncate(N))
        assert ell <= L <= Q
        assert L % prev_L == 0 and ell % prev_ell == 0
        prev_L, prev_ell = L, ell


class TestExport:
    def test_csv_roundtrip(self, provider):
        reps = [check_theorem2(P("X^4-2"), N, provider) for N in (100, 200)]
        text = reports_to_csv(reps, "generated now")
        assert text.startswith("# generated now\n")
        rows = reports_from_csv(text)
        assert list(rows[0]) == list(CSV_COLUMNS)
        assert rows[1]["N"] == "200" and rows[1]["h"] == "2" and rows[1]["c"] == "2"
        assert float(rows[0]["margin"]) == reps[0].margin

    def test_json_mirrors_csv(self, provider):
        reps = [check_theorem4(2, 200, 2, provider)]
        doc = json.loads(reports_to_json(reps))
        assert list(doc) == ["reports"]
        assert list(doc["reports"][0]) == list(CSV_COLUMNS)
        assert doc["reports"][0]["h"] == "4"


def test_theorem_checks_need_n_100(provider):
    with pytest.raises(ValueError):
        check_theorem2(P("X^4-2"), 99, provider)
