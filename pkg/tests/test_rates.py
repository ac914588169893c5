"""Rate evaluation: instantaneous ZF/hybrid rates, closed forms, order statistics."""

import math

import mpmath as mp
import numpy as np
import pytest
from scipy.integrate import quad

from hybeam.beamform import ps_full_switch, ps_sub_switch, subconnected_ps
from hybeam.channel import ChannelMatrix, ChannelModel, iid_rayleigh
from hybeam.numerics import SeededRng, SingularMatrixError, svd
from hybeam.rates import (
    MAX_GROUP_SIZE,
    LinkBudget,
    RateResult,
    expected_max_rayleigh,
    full_switch_rate_analytic,
    hybrid_gamma,
    hybrid_zf_rate,
    sub_switch_rate_analytic,
    subconnected_rate_analytic,
    sum_capacity,
    zf_rate,
    zf_rate_analytic,
)

LB10 = LinkBudget.from_snr_db(10.0)


def channel_from(h):
    h = np.asarray(h, dtype=complex)
    return ChannelMatrix(h=h, model=ChannelModel.iid(), users=h.shape[0], antennas=h.shape[1])


def max_rayleigh_mean_quad(s: int) -> float:
    """Oracle: integrate v * 2 s v (1 - e^{-v^2})^{s-1} e^{-v^2} numerically."""
    val, err = quad(
        lambda v: 2.0 * s * v * v * (1.0 - math.exp(-v * v)) ** (s - 1) * math.exp(-v * v),
        0,
        np.inf,
        epsabs=1e-13,
        epsrel=1e-13,
    )
    assert err < 1e-10
    return val


class TestLinkBudget:
    def test_snr_round_trip(self):
        lb = LinkBudget.from_snr_db(10.0)
        assert abs(lb.snr_db - 10.0) < 1e-9
        assert abs(lb.snr - 10.0) < 1e-9

    def test_positivity(self):
        with pytest.raises(ValueError):
            LinkBudget(p=0.0)


class TestSumCapacity:
    def test_zero_channel(self):
        assert sum_capacity(channel_from(np.zeros((2, 4))), LB10) == 0.0

    def test_single_user(self):
        h = np.zeros((1, 4), dtype=complex)
        h[0, :2] = [3.0, 4.0j]  # gain 25
        assert abs(sum_capacity(channel_from(h), LB10) - math.log2(1 + 10 * 25)) < 1e-12

    def test_orthogonal_rows_split(self):
        # diagonal Gram oracle: det factorizes into per-user terms
        h = np.zeros((2, 4), dtype=complex)
        h[0, 0] = 2.0  # norm^2 = 4
        h[1, 1] = 3.0  # norm^2 = 9
        expected = math.log2(1 + 10 * 4) + math.log2(1 + 10 * 9)
        assert abs(sum_capacity(channel_from(h), LB10) - expected) < 1e-12


class TestZfRate:
    def test_single_user_exact(self):
        h = np.zeros((1, 8), dtype=complex)
        h[0, 0] = 2.0
        result = zf_rate(channel_from(h), LB10)
        assert abs(result.rate_bits - math.log2(1 + 10 * 4)) < 1e-12
        assert abs(result.gamma - 0.25) < 1e-12

    def test_equal_norm_orthogonal_rows_reach_capacity(self):
        h = np.zeros((2, 4), dtype=complex)
        h[0, 0] = 2.0
        h[1, 1] = 2.0j
        ch = channel_from(h)
        assert abs(zf_rate(ch, LB10).rate_bits - sum_capacity(ch, LB10)) < 1e-9

    def test_capacity_upper_bounds_zf(self):
        for t in range(50):
            ch = iid_rayleigh(4, 16, SeededRng(40, t))
            assert sum_capacity(ch, LB10) >= zf_rate(ch, LB10).rate_bits - 1e-9

    def test_wishart_mean_matches_analytic(self):
        n, k, trials = 512, 4, 1000
        rates = [zf_rate(iid_rayleigh(k, n, SeededRng(41, t)), LB10).rate_bits for t in range(trials)]
        target = zf_rate_analytic(n, k, LB10)
        assert abs(np.mean(rates) - target) / target < 0.02

    def test_singular_channel_reported(self):
        h = np.ones((2, 4), dtype=complex)  # duplicate rows
        with pytest.raises(SingularMatrixError) as err:
            zf_rate(channel_from(h), LB10, trial=17)
        assert err.value.trial == 17


class TestHybridZfRate:
    def test_degenerate_single_shifter_equals_digital(self):
        # N = M: one phase shifter per chain, F_rf is a unit-modulus diagonal
        ch = iid_rayleigh(4, 4, SeededRng(42, 0))
        v = svd(ch.h).v
        f = subconnected_ps(v, 4)
        hybrid = hybrid_zf_rate(ch, f, LB10)
        digital = zf_rate(ch, LB10)
        assert abs(hybrid.rate_bits - digital.rate_bits) < 1e-9
        assert abs(hybrid.gamma - digital.gamma) < 1e-12

    def test_determinant_route_agrees(self):
        # absorbing ZF into the precoder, the log-det rate collapses to
        # M log2(1 + P/(gamma sigma^2))
        ch = iid_rayleigh(4, 32, SeededRng(43, 1))
        f = subconnected_ps(svd(ch.h).v, 4)
        gamma = hybrid_gamma(ch, f)
        h_eff = ch.h @ f.f_rf / math.sqrt(f.gamma_rf)
        f_full = (f.f_rf / math.sqrt(f.gamma_rf)) @ np.linalg.inv(h_eff)
        gram = ch.h @ f_full @ f_full.conj().T @ ch.h.conj().T
        det_rate = np.linalg.slogdet(np.eye(4) + (LB10.snr / gamma) * gram)[1] / math.log(2)
        direct = hybrid_zf_rate(ch, f, LB10).rate_bits
        assert abs(det_rate - direct) < 1e-9

    def test_streams_equalized(self):
        ch = iid_rayleigh(4, 32, SeededRng(43, 2))
        f = ps_full_switch(svd(ch.h).v, 4, 4)
        h_eff = ch.h @ f.f_rf / math.sqrt(f.gamma_rf)
        assert np.allclose(h_eff @ np.linalg.inv(h_eff), np.eye(4), atol=1e-9)

    def test_chain_count_must_match_users(self):
        ch = iid_rayleigh(2, 32, SeededRng(43, 3))
        f = subconnected_ps(svd(ch.h).v[:, :1], 1)
        with pytest.raises(ValueError):
            hybrid_zf_rate(ch, f, LB10)


class TestAnalyticFormulas:
    def test_zf_value(self):
        assert abs(zf_rate_analytic(512, 4, LB10) - 49.24358699519085) < 1e-10

    def test_zf_near_degenerate(self):
        lb = LinkBudget(p=1.0, sigma2=1.0)
        assert abs(zf_rate_analytic(5, 4, lb) - 4.0) < 1e-12

    def test_zf_monotone_in_antennas(self):
        vals = [zf_rate_analytic(n, 4, LB10) for n in (8, 16, 64, 256)]
        assert all(a < b for a, b in zip(vals, vals[1:]))

    def test_zf_requires_excess_antennas(self):
        with pytest.raises(ValueError):
            zf_rate_analytic(4, 4, LB10)

    def test_subconnected_value(self):
        assert abs(subconnected_rate_analytic(512, 4, LB10) - 39.85421824673536) < 1e-10

    def test_full_switch_degeneracy_exact(self):
        for n, m in ((512, 4), (128, 4), (64, 8)):
            r_sub = subconnected_rate_analytic(n, m, LB10)
            r_full = full_switch_rate_analytic(n, m, n // m, LB10)
            assert abs(r_full - r_sub) <= 1e-12 * r_sub

    def test_sub_switch_degeneracy_exact(self):
        for n, m in ((512, 4), (128, 4), (64, 8)):
            r_sub = subconnected_rate_analytic(n, m, LB10)
            r_ss = sub_switch_rate_analytic(n, m, 1, LB10)
            assert abs(r_ss - r_sub) <= 1e-12 * r_sub

    def test_half_reduction_close_to_subconnected(self):
        r_sub = subconnected_rate_analytic(512, 4, LB10)
        r_half = full_switch_rate_analytic(512, 4, 64, LB10)
        assert abs(r_half - r_sub) / r_sub < 0.02

    def test_full_switch_decreases_for_small_shifter_counts(self):
        vals = [full_switch_rate_analytic(512, 4, l, LB10) for l in (64, 32, 16, 8, 4)]
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_high_snr_gap_approaches_limit(self):
        lb = LinkBudget.from_snr_db(60.0)
        gap = zf_rate_analytic(512, 4, lb) - subconnected_rate_analytic(512, 4, lb)
        assert abs(gap - 4 * math.log2(16 / math.pi)) < 1e-3

    def test_sub_switch_factorization_checked(self):
        with pytest.raises(ValueError):
            sub_switch_rate_analytic(30, 4, 2, LB10)

    def test_extended_precision_reevaluation(self):
        # independent route: recompute every closed form in 50-digit arithmetic
        mp.mp.dps = 50

        def mp_rate(gain, streams, p, s2):
            return float(streams * mp.log(1 + gain * p / s2, 2))

        p, s2 = mp.mpf(10), mp.mpf(1)
        cases = []
        for n, m in ((512, 4), (128, 4), (64, 8), (32, 4)):
            nk = mp.mpf(n - m)
            cases.append((zf_rate_analytic(n, m, LB10), mp_rate(nk, m, p, s2)))
            cases.append(
                (subconnected_rate_analytic(n, m, LB10), mp_rate(mp.pi * nk / (4 * m), m, p, s2))
            )
            for l in {1, n // (2 * m), n // m}:
                ratio = mp.mpf(m) * l / n
                alpha = mp.sqrt(-mp.log(ratio))
                trunc = (
                    mp.sqrt(mp.pi) / 2
                    + alpha * mp.exp(-(alpha**2))
                    - mp.sqrt(mp.pi) / 2 * mp.erf(alpha)
                )
                cases.append(
                    (
                        full_switch_rate_analytic(n, m, l, LB10),
                        mp_rate(trunc**2 * nk / (m * ratio), m, p, s2),
                    )
                )
            for s in (1, 2, 4):
                if n % (m * s):
                    continue
                coeff = mp.fsum(
                    mp.binomial(s - 1, j) * (-1) ** j / mp.power(j + 1, mp.mpf(3) / 2)
                    for j in range(s)
                )
                cases.append(
                    (
                        sub_switch_rate_analytic(n, m, s, LB10),
                        mp_rate(coeff**2 * s * mp.pi * nk / (4 * m), m, p, s2),
                    )
                )
        for ours, reference in cases:
            assert abs(ours - reference) <= 1e-10 * abs(reference)


class TestExpectedMaxRayleigh:
    def test_single_is_rayleigh_mean(self):
        assert abs(expected_max_rayleigh(1) - math.sqrt(math.pi) / 2) < 1e-15

    def test_pair_value(self):
        # frozen from the quadrature oracle below
        assert abs(expected_max_rayleigh(2) - 1.145796782247766) < 1e-12

    @pytest.mark.parametrize("s", [1, 2, 3, 4, 8, 16, 32, 64])
    def test_matches_quadrature(self, s):
        assert abs(expected_max_rayleigh(s) - max_rayleigh_mean_quad(s)) < 1e-9

    def test_increasing(self):
        vals = [expected_max_rayleigh(s) for s in range(1, 20)]
        assert all(a < b for a, b in zip(vals, vals[1:]))

    def test_domain(self):
        with pytest.raises(ValueError):
            expected_max_rayleigh(0)
        with pytest.raises(ValueError):
            expected_max_rayleigh(MAX_GROUP_SIZE + 1)


class TestRateResult:
    def test_stderr(self):
        per_trial = np.array([1.0, 2.0, 3.0, 4.0])
        result = RateResult(rate_bits=2.5, gamma=1.0, trials=4, per_trial=per_trial)
        expected = np.std(per_trial, ddof=1) / 2.0
        assert abs(result.stderr - expected) < 1e-12

    def test_validation(self):
        with pytest.raises(ValueError):
            RateResult(rate_bits=-1.0, gamma=1.0)
        with pytest.raises(ValueError):
            RateResult(rate_bits=1.0, gamma=0.0)


class TestArchitectureOrdering:
    def test_digital_dominates_sub_ps_per_trial(self):
        # F_rf/sqrt(gamma_rf) has orthonormal columns, so projecting the
        # channel can only inflate the normalization factor
        for t in range(50):
            ch = iid_rayleigh(4, 32, SeededRng(45, t))
            f = subconnected_ps(svd(ch.h).v, 4)
            assert hybrid_zf_rate(ch, f, LB10).rate_bits <= zf_rate(ch, LB10).rate_bits + 1e-9

    @pytest.mark.parametrize("snr_db", [-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0])
    def test_mean_ordering_across_snr(self, snr_db):
        n, m, l, s = 64, 4, 8, 2
        lb = LinkBudget.from_snr_db(snr_db)
        trials = 200
        rates = {"digital": [], "sub": [], "full": [], "ss": []}
        for t in range(trials):
            ch = iid_rayleigh(m, n, SeededRng(46, t))
            v = svd(ch.h).v
            rates["digital"].append(zf_rate(ch, lb).rate_bits)
            rates["sub"].append(hybrid_zf_rate(ch, subconnected_ps(v, m), lb).rate_bits)
            rates["full"].append(hybrid_zf_rate(ch, ps_full_switch(v, m, l), lb).rate_bits)
            rates["ss"].append(hybrid_zf_rate(ch, ps_sub_switch(v, m, l, s), lb).rate_bits)
        means = {key: np.mean(val) for key, val in rates.items()}
        noise = 3 * max(np.std(v, ddof=1) for v in rates.values()) / math.sqrt(trials)
        assert means["digital"] >= means["sub"] - noise
        assert means["sub"] >= means["full"] - noise
        assert means["full"] >= means["ss"] - noise
