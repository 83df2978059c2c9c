import math

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vcslab.logspace import LogValue
from vcslab.special import (
    hyp1f1_one,
    hyp1f1_one_closed,
    hyp1f1_one_series,
    log_gamma,
    pochhammer,
    regularized_lower,
    stirling_gamma_ratio,
    upper_incomplete_gamma,
)

mpmath.mp.dps = 40


def mp_log_gamma(x):
    return float(mpmath.log(mpmath.gamma(mpmath.mpf(x))))


class TestLogGamma:
    def test_trivial_values(self):
        assert log_gamma(1.0) == pytest.approx(0.0, abs=1e-14)
        assert log_gamma(2.0) == pytest.approx(0.0, abs=1e-14)
        # Gamma(1/2) = sqrt(pi)
        assert log_gamma(0.5) == pytest.approx(0.5723649429247001, rel=1e-13)
        assert math.exp(log_gamma(6.0)) == pytest.approx(120.0, rel=1e-13)

    @pytest.mark.parametrize(
        "x", [0.5, 0.7, 1.0, 1.5, 2.0, 3.7, 10.0, 55.3, 171.6, 1e3, 1e4, 1e6]
    )
    def test_against_high_precision(self, x):
        exact = mp_log_gamma(x)
        got = log_gamma(x)
        assert abs(got - exact) <= 1e-13 * max(1.0, abs(exact))

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            log_gamma(0.0)
        with pytest.raises(ValueError):
            log_gamma(-1.3)

    @given(st.floats(min_value=0.5, max_value=1e5))
    @settings(max_examples=200, deadline=None)
    def test_recurrence(self, x):
        # Gamma(x+1) = x Gamma(x), exact up to rounding in log space
        lhs = log_gamma(x + 1.0)
        rhs = log_gamma(x) + math.log(x)
        assert lhs == pytest.approx(rhs, abs=1e-11 * max(1.0, abs(rhs)))


class TestPochhammer:
    def test_empty_product(self):
        assert pochhammer(3.7, 0).value == 1.0

    def test_plain_factorial(self):
        assert pochhammer(1.0, 5).value == pytest.approx(120.0, rel=1e-13)

    def test_direct_product_oracle(self):
        # 2.5 * 3.5 * 4.5 = 39.375
        assert pochhammer(2.5, 3).value == pytest.approx(39.375, rel=1e-13)

    @pytest.mark.parametrize("gamma", [1.0, 1.5, 2.0, 7.25])
    @pytest.mark.parametrize("n", [1, 7, 50, 200])
    def test_matches_running_product(self, gamma, n):
        log_direct = sum(math.log(gamma + k) for k in range(n))
        assert pochhammer(gamma, n).log_abs == pytest.approx(log_direct, abs=1e-12 * max(1.0, log_direct))

    def test_recurrence_additivity(self):
        for gamma in (1.0, 2.5, 11.0):
            for n in (0, 1, 6, 40):
                step = pochhammer(gamma, n + 1).log_abs
                base = pochhammer(gamma, n).log_abs + math.log(gamma + n)
                assert step == pytest.approx(base, abs=1e-13 * max(1.0, abs(base)))

    def test_gamma_dominates_factorial(self):
        # Gamma(gamma+n) >= n! for gamma >= 1, n >= 1
        for gamma in (1.0, 1.2, 2.9, 8.0):
            for n in (1, 3, 17, 90):
                assert log_gamma(gamma + n) >= log_gamma(n + 1.0) - 1e-12


class TestUpperIncompleteGamma:
    def test_full_integral(self):
        for a in (0.3, 1.0, 4.5, 50.0):
            assert upper_incomplete_gamma(a, 0.0).log_abs == pytest.approx(log_gamma(a), abs=1e-13)

    def test_exponential_tail(self):
        for x in (0.1, 1.0, 30.0, 200.0):
            assert upper_incomplete_gamma(1.0, x).log_abs == pytest.approx(-x, abs=1e-12 * max(1.0, x))

    def test_adaptive_quadrature_oracle(self):
        # Gamma(2,1) = 2/e, frozen from the quad oracle below
        assert upper_incomplete_gamma(2.0, 1.0).value == pytest.approx(0.7357588823428847, rel=1e-12)
        from scipy.integrate import quad

        val, _ = quad(lambda t: t * math.exp(-t), 1.0, math.inf)
        assert upper_incomplete_gamma(2.0, 1.0).value == pytest.approx(val, rel=1e-10)

    @pytest.mark.parametrize("a", [0.25, 1.0, 2.0, 7.5, 23.0, 50.0])
    @pytest.mark.parametrize("x", [0.0, 0.4, 1.0, 6.0, 24.0, 80.0, 200.0])
    def test_against_high_precision(self, a, x):
        exact = mpmath.gammainc(mpmath.mpf(a), mpmath.mpf(x))
        got = upper_incomplete_gamma(a, x)
        rel = abs(got.value - float(exact)) / float(exact) if exact > 0 else abs(got.value)
        if not math.isfinite(got.value):
            rel = abs(math.expm1(got.log_abs - float(mpmath.log(exact))))
        assert rel <= 1e-10

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            upper_incomplete_gamma(0.0, 1.0)
        with pytest.raises(ValueError):
            upper_incomplete_gamma(1.0, -0.5)


class TestHyp1F1One:
    def test_collapses_to_exponential(self):
        for x in (0.0, 0.5, 3.0, 25.0):
            assert hyp1f1_one(1.0, x).log_abs == pytest.approx(x, abs=1e-12 * max(1.0, x))

    def test_empty_sum(self):
        for b in (1.0, 1.5, 2.0, 40.0):
            assert hyp1f1_one(b, 0.0).value == 1.0

    def test_direct_series_oracle(self):
        # 1F1(1;2;x) = (e^x - 1)/x, at x = 1: e - 1
        assert hyp1f1_one(2.0, 1.0).value == pytest.approx(math.e - 1.0, rel=1e-12)

    @pytest.mark.parametrize("b", [1.0, 1.5, 2.0, 5.0])
    @pytest.mark.parametrize("x", [0.0, 0.01, 0.7, 3.0, 10.0, 25.0])
    def test_series_vs_closed_form_grid(self, b, x):
        series, tail = hyp1f1_one_series(b, x)
        closed = hyp1f1_one_closed(b, x)
        assert series.rel_diff(closed) <= 1e-9
        assert tail <= 1e-12

    @pytest.mark.parametrize("b", [1.0, 1.7, 4.0, 21.5])
    @pytest.mark.parametrize("x", [0.3, 2.0, 18.0])
    def test_against_high_precision(self, b, x):
        exact = float(mpmath.hyp1f1(1, b, x))
        assert hyp1f1_one(b, x).value == pytest.approx(exact, rel=1e-11)


class TestStirlingRatio:
    def test_equal_arguments(self):
        assert stirling_gamma_ratio(40.0, 40.0) == 1.0

    def test_exact_log_gamma_oracle(self):
        # Gamma(101)/Gamma(100) = 100 exactly
        got = stirling_gamma_ratio(101.0, 100.0)
        assert abs(got - 100.0) / 100.0 < 0.01
        exact = math.exp(log_gamma(101.0) - log_gamma(100.0))
        assert exact == pytest.approx(100.0, rel=1e-12)

    def test_power_law_asymptote_improves(self):
        # Gamma(1+k n + m)/Gamma(1+k(n+1)+m) vs (1+k(n+1)+m)^(-k), k = 0.5, m = 2
        k, m = 0.5, 2.0

        def err(n):
            num = 1.0 + k * n + m
            den = 1.0 + k * (n + 1) + m
            exact_ratio = math.exp(log_gamma(num) - log_gamma(den))
            return abs(exact_ratio - den ** (-k))

        assert err(400) < err(100) < err(25)

    def test_below_validity_threshold(self):
        with pytest.raises(ValueError):
            stirling_gamma_ratio(5.0, 40.0)


class TestLogValue:
    def test_zero_semantics(self):
        z = LogValue.zero()
        assert z.sign == 0 and z.value == 0.0
        assert (z * LogValue.one()).sign == 0

    def test_composition(self):
        a = LogValue.from_value(-3.0)
        b = LogValue.from_value(2.0)
        assert (a * b).value == pytest.approx(-6.0)
        assert (a / b).value == pytest.approx(-1.5)
        assert a.powi(2).value == pytest.approx(9.0)

    @given(st.floats(min_value=1e-3, max_value=1e3), st.floats(min_value=1e-3, max_value=1e3))
    @settings(max_examples=100, deadline=None)
    def test_mul_matches_float(self, x, y):
        prod = LogValue.from_value(x) * LogValue.from_value(y)
        assert prod.value == pytest.approx(x * y, rel=1e-12)

    def test_lower_regularized_bounds(self):
        for a in (0.5, 3.0, 20.0):
            for x in (0.0, 0.1, a, 10 * a + 5):
                p = regularized_lower(a, x)
                assert -1e-15 <= p <= 1.0 + 1e-15
