import math

import numpy as np
import pytest

from ramanujan import (
    CoefficientRule,
    DivergentRequest,
    coefficient,
    csum_int,
    divergence_slope,
    expected_slope,
    geometric_checkpoints,
    main_term_factor,
    partial_sum_trace,
    sigma,
    sigma_tilde,
    tail_bound,
    totient_range,
    zeta,
    zeta_weighted_sum,
)
from ramanujan.series import TruncationCapExceeded


class TestZeta:
    def test_pi_squared_over_six(self):
        assert abs(zeta(2) - math.pi**2 / 6) <= 1e-12

    def test_pi_fourth_over_ninety(self):
        assert abs(zeta(4) - math.pi**4 / 90) <= 1e-12

    def test_large_s_dominated_by_first_terms(self):
        # zeta(40) = 1 + 2^-40 (1 + o(1))
        assert zeta(40) - 1 == pytest.approx(2.0**-40, rel=1e-3)

    def test_rejects_s_at_most_one(self):
        for s in (1.0, 0.5, -2.0, 1.0 + 1e-9):
            with pytest.raises(ValueError):
                zeta(s)

    def test_monotone_decreasing(self):
        vals = [zeta(s) for s in (1.5, 2.0, 3.0, 5.0, 10.0)]
        assert all(a > b for a, b in zip(vals, vals[1:]))


class TestCoefficientRule:
    def test_sigma_coefficient_example(self):
        c = coefficient(CoefficientRule.sigma(1), 2, x=1.0)
        assert abs(c - zeta(2) / 4) < 1e-12
        assert abs(c - 0.4112335) < 1e-6

    def test_zero_ramanujan(self):
        assert coefficient(CoefficientRule.zero_ramanujan(), 7) == pytest.approx(1 / 7)

    def test_sigma0_log_at_one(self):
        assert coefficient(CoefficientRule.sigma0_log(), 1) == 0.0

    def test_zero_hardy(self):
        assert coefficient(CoefficientRule.zero_hardy(), 10) == pytest.approx(1 / 4)

    def test_parse_label_round_trip(self):
        for label in ("sigma:1", "sigma:3", "zero-ram", "zero-hardy", "sigma0-log"):
            assert CoefficientRule.parse(label).label == label

    def test_parse_rejects_unknown(self):
        with pytest.raises(ValueError):
            CoefficientRule.parse("hardy")

    def test_sigma_zero_rule_has_no_prefactor(self):
        with pytest.raises(DivergentRequest):
            coefficient(CoefficientRule.sigma(0), 2, x=1.0)


class TestPartialSumTrace:
    def test_sigma1_converges_to_divisor_sum(self, table_1e6):
        q_cap = 10**5
        trace = partial_sum_trace(
            CoefficientRule.sigma(1), 6.0, [q_cap], table_1e6
        )
        s_q = trace.checkpoints[0][1]
        bound = 6 * zeta(2) * sigma(1, 6) / q_cap * 1.001
        assert abs(s_q - 12) <= bound

    def test_mobius_over_q_drifts_to_zero(self, table_1e6):
        # c_q(1) = mu(q), so the zero-function rule at x = 1 sums mu(q)/q
        trace = partial_sum_trace(
            CoefficientRule.zero_ramanujan(), 1.0, [10**2, 10**4], table_1e6
        )
        s_100, s_10000 = (v for _, v in trace.checkpoints)
        assert abs(s_10000) < abs(s_100)
        assert abs(s_10000) < 0.01

    def test_log_growth_at_half(self, table_1e6):
        trace = partial_sum_trace(
            CoefficientRule.sigma(1), 0.5, [10**3, 10**4, 10**5], table_1e6
        )
        vals = trace.values()
        steps = [abs(b - a) for a, b in zip(vals, vals[1:])]
        # S_Q ~ slope * log Q: equal decade steps have equal size ~|i/pi| ln 10
        expected_step = math.log(10) / math.pi
        for s in steps:
            assert s == pytest.approx(expected_step, rel=0.05)

    def test_prefix_stability_bit_for_bit(self, table_1e6):
        for x in (6.0, 0.5):
            coarse = partial_sum_trace(
                CoefficientRule.sigma(1), x, [10**3, 10**4], table_1e6
            )
            fine = partial_sum_trace(
                CoefficientRule.sigma(1), x,
                [10, 10**2, 10**3, 5000, 10**4], table_1e6,
            )
            fine_map = dict(fine.checkpoints)
            for q, v in coarse.checkpoints:
                assert fine_map[q] == v  # exact equality, not approx

    def test_checkpoint_validation(self):
        with pytest.raises(ValueError):
            partial_sum_trace(CoefficientRule.sigma(1), 6.0, [])
        with pytest.raises(ValueError):
            partial_sum_trace(CoefficientRule.sigma(1), 6.0, [10, 10])
        with pytest.raises(ValueError):
            partial_sum_trace(CoefficientRule.sigma(1), 6.0, [0, 10])

    def test_sieve_limit_enforced(self, table_1e4):
        with pytest.raises(ValueError):
            partial_sum_trace(
                CoefficientRule.sigma(1), 6.0, [10**5], table_1e4
            )


class TestTailBound:
    def test_examples(self):
        assert tail_bound(2, 1000).bound == pytest.approx(1.001e-3, rel=1e-9)
        assert tail_bound(3, 100).bound == pytest.approx(5.1e-5, rel=1e-9)
        assert tail_bound(2, 1).bound == 2.0
        assert zeta(2) - 1 < 2.0  # true tail at Q = 1 sits inside

    def test_validation(self):
        with pytest.raises(ValueError):
            tail_bound(1, 10)
        with pytest.raises(ValueError):
            tail_bound(2, 0)

    def test_dominates_true_tails(self, table_1e6, phi_1e6):
        # direct tail sums of q^-k and phi(q)/q^(k+1), truncated at 1e6
        qs = np.arange(1, 10**6 + 1, dtype=np.float64)
        phi = phi_1e6[1:].astype(np.float64)
        for k in (2, 3):
            power_all = math.fsum((qs**-k).tolist())
            weighted_all = math.fsum((phi / qs ** (k + 1)).tolist())
            for q_cut in (1, 10, 100, 1000):
                head_p = math.fsum((qs[:q_cut] ** -k).tolist())
                head_w = math.fsum((phi[:q_cut] / qs[:q_cut] ** (k + 1)).tolist())
                b = tail_bound(k, q_cut).bound
                assert b >= power_all - head_p
                assert b >= weighted_all - head_w


class TestSigmaTilde:
    def test_sigma2_at_six(self, table_1e6):
        value, bound = sigma_tilde(2, 6.0, 1e-8, table_1e6)
        assert abs(value - 50) <= bound  # 1 + 4 + 9 + 36
        assert bound <= 1e-8

    def test_finite_at_non_integer(self, table_1e6):
        value, bound = sigma_tilde(3, 2.5, 1e-6, table_1e6)
        assert math.isfinite(value.real) and math.isfinite(value.imag)
        assert bound <= 1e-6

    def test_divergent_requests_refused(self):
        with pytest.raises(DivergentRequest):
            sigma_tilde(1, 0.5, 1e-6)
        with pytest.raises(DivergentRequest):
            sigma_tilde(0, 0.5, 1e-6)
        with pytest.raises(ValueError):
            sigma_tilde(0, 6.0, 1e-6)

    def test_integer_arguments_reproduce_sigma(self, table_1e6):
        for k in (2, 3, 4):
            for n in range(1, 25):
                value, bound = sigma_tilde(k, float(n), 1e-7, table_1e6)
                assert abs(value - sigma(k, n)) <= bound

    def test_k1_allowed_at_integers(self, table_1e6):
        # k = 1 tails only decay like sigma_1(n)/Q, so certified targets
        # are necessarily modest
        value, bound = sigma_tilde(1, 6.0, 1e-3, table_1e6)
        assert abs(value - 12) <= bound
        assert bound <= 1e-3

    def test_truncation_cap(self):
        with pytest.raises(TruncationCapExceeded):
            sigma_tilde(2, 0.5, 1e-12, q_limit=10**4)


class TestZetaWeightedSum:
    def test_single_order_matches_sigma_tilde(self, table_1e6):
        a, ba = sigma_tilde(2, 3.5, 1e-4, table_1e6)
        b, bb = zeta_weighted_sum({3: 1}, 3.5, 1e-4, table_1e6)
        assert a == b and ba == bb

    def test_divergent_at_non_integer_order_two(self):
        with pytest.raises(DivergentRequest):
            zeta_weighted_sum({2: 1}, 0.5, 1e-6)

    def test_order_two_allowed_at_integers(self, table_1e6):
        # sum_q zeta(2) x / q^2 c_q(x) at x = 6 is sigma_1(6)
        value, bound = zeta_weighted_sum({2: 1}, 6.0, 1e-3, table_1e6)
        assert abs(value - 12) <= bound


class TestPartialSumIdentities:
    def test_phi_over_q3_partial(self, table_1e6, phi_1e6):
        # medium-Q version of the zeta(2)/zeta(3) identity
        q_cap = 10**5
        qs = np.arange(1, q_cap + 1, dtype=np.float64)
        s = math.fsum((phi_1e6[1 : q_cap + 1] / qs**3).tolist())
        assert abs(s - zeta(2) / zeta(3)) < 1e-4


class TestDivergenceSlope:
    def test_sigma1_slope_at_half(self, table_1e6):
        grid = geometric_checkpoints(10**3, 10**5, 10)
        fit = divergence_slope(CoefficientRule.sigma(1), 0.5, grid, table_1e6)
        assert fit.abscissa_kind == "log_Q"
        expected = 1j / math.pi
        assert abs(fit.slope - expected) <= 0.02 * abs(expected)
        assert fit.rms_residual < 0.01

    def test_zero_hardy_slope_at_half(self, table_1e6):
        grid = geometric_checkpoints(10**3, 10**5, 10)
        fit = divergence_slope(CoefficientRule.zero_hardy(), 0.5, grid, table_1e6)
        assert fit.abscissa_kind == "Q"
        expected = 2j / math.pi
        assert abs(fit.slope - expected) <= 0.01 * abs(expected)

    def test_zero_ramanujan_slope_at_half(self, table_1e6):
        grid = geometric_checkpoints(10**3, 10**5, 10)
        fit = divergence_slope(
            CoefficientRule.zero_ramanujan(), 0.5, grid, table_1e6
        )
        expected = (2j / math.pi) / zeta(2)
        assert abs(fit.slope - expected) <= 0.01 * abs(expected)
        assert abs(expected - 0.3870j) < 1e-4

    def test_expected_slope_values(self):
        assert expected_slope(CoefficientRule.sigma(1), 0.5) == pytest.approx(
            1j / math.pi
        )
        assert expected_slope(CoefficientRule.zero_hardy(), 0.5) == pytest.approx(
            main_term_factor(0.5)
        )
        assert expected_slope(CoefficientRule.sigma0_log(), 0.5) is None

    def test_validation(self, table_1e4):
        grid = geometric_checkpoints(10, 10**4, 10)
        with pytest.raises(ValueError):
            divergence_slope(CoefficientRule.sigma(1), 3.0, grid, table_1e4)
        with pytest.raises(ValueError):
            divergence_slope(CoefficientRule.sigma(1), 0.5, grid[:5], table_1e4)
        with pytest.raises(ValueError):
            divergence_slope(
                CoefficientRule.sigma(1), 0.5, list(range(100, 108)), table_1e4
            )
        with pytest.raises(ValueError):
            divergence_slope(CoefficientRule.sigma(2), 0.5, grid, table_1e4)

    def test_geometric_checkpoints(self):
        grid = geometric_checkpoints(1000, 10**6, 12)
        assert grid[0] == 1000 and grid[-1] == 10**6
        assert all(b > a for a, b in zip(grid, grid[1:]))
        with pytest.raises(ValueError):
            geometric_checkpoints(0, 100, 5)


class TestInterpolationConsistency:
    def test_trace_at_integer_equals_csum_int_terms(self, table_1e4):
        # spot check: the integer fast path feeds the same values the
        # definition gives
        rule = CoefficientRule.sigma(2)
        trace = partial_sum_trace(rule, 4.0, [50], table_1e4)
        brute = sum(
            csum_int(q, 4) / q**3 for q in range(1, 51)
        ) * 4**2 * zeta(3)
        assert abs(trace.checkpoints[0][1] - brute) < 1e-9
