import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mimo_lab.analytic import (
    LinkBudget,
    antennas_for_3db,
    error_factor,
    rate_from_sinr,
    required_antennas,
    sinr_mf,
    sinr_mf_impaired,
    sinr_zf,
    sum_rate_analytic,
    tx_power,
)
from mimo_lab.errors import ArgumentError, InfeasibleError
from mimo_lab.impairments import ImpairmentConfig

FIG4 = ImpairmentConfig(1.0, 20.0)


class TestPower:
    def test_values(self):
        assert tx_power(LinkBudget(10, 1, 10)) == 1.0
        assert tx_power(LinkBudget(1, 1, 1)) == 1.0

    def test_inverse_in_m(self):
        assert tx_power(LinkBudget(10, 3, 64)) == pytest.approx(tx_power(LinkBudget(10, 3, 32)) / 2)

    def test_from_db(self):
        b = LinkBudget.from_db(10, 10, 100)
        assert b.snr_t == pytest.approx(10.0)
        assert b.snr_t_db == pytest.approx(10.0)

    @pytest.mark.parametrize("args", [(0, 1, 1), (1, 0, 1), (1, 1, 0.5), (1, 1, 1, 0)])
    def test_invalid(self, args):
        with pytest.raises(ArgumentError):
            LinkBudget(*args)


class TestSinr:
    def test_mf_single_user(self):
        assert sinr_mf(LinkBudget(7.0, 1, 32)) == 7.0

    def test_mf_values(self):
        assert sinr_mf(LinkBudget(10, 10, 90)) == pytest.approx(5.0)
        assert sinr_mf(LinkBudget(10, 10, 100)) == pytest.approx(5.2632, abs=1e-4)

    def test_zf_values(self):
        assert sinr_zf(LinkBudget(10, 10, 20)) == 5.0
        assert sinr_zf(LinkBudget(10, 10, 100)) == pytest.approx(9.0)
        assert sinr_zf(LinkBudget(10, 10, 1e12)) == pytest.approx(10.0)

    def test_zf_infeasible(self):
        with pytest.raises(InfeasibleError):
            sinr_zf(LinkBudget(10, 10, 10))

    @given(st.floats(0.01, 1000), st.integers(2, 64), st.integers(1, 500))
    def test_monotone_and_bounded(self, snr, K, extra):
        M = K + extra
        b, bigger_m, more_k = LinkBudget(snr, K, M), LinkBudget(snr, K, M + 1), LinkBudget(snr, K + 1, M + 1)
        assert sinr_mf(bigger_m) > sinr_mf(b)
        assert sinr_zf(bigger_m) > sinr_zf(b)
        assert sinr_mf(more_k) < sinr_mf(bigger_m)
        assert sinr_zf(more_k) < sinr_zf(bigger_m)
        assert sinr_mf(b) < snr and sinr_zf(b) < snr


class TestErrorFactor:
    def test_zero(self):
        assert error_factor(ImpairmentConfig(), "exact") == 1.0
        assert error_factor(ImpairmentConfig(), "small_error") == 1.0

    def test_fig4_values(self):
        sa2 = (10 ** (1 / 20) - 1) ** 2
        sp2 = math.radians(20) ** 2
        assert error_factor(FIG4, "exact") == pytest.approx(math.exp(-sp2) / (1 + sa2), rel=1e-12)
        assert error_factor(FIG4, "exact") == pytest.approx(0.87229, abs=2e-5)
        assert error_factor(FIG4, "small_error") == pytest.approx(0.87971, abs=1e-5)

    def test_unknown_mode(self):
        with pytest.raises(ArgumentError):
            error_factor(FIG4, "taylor")

    @given(st.floats(0, 0.25), st.floats(0, 0.25))
    def test_taylor_gap(self, sa2, sp2):
        cfg = ImpairmentConfig(0.0, math.degrees(math.sqrt(sp2)), amplitude_lin=math.sqrt(sa2))
        ex = error_factor(cfg, "exact")
        assert ex <= 1.0
        if cfg.total_variance > 1e-12:
            assert ex < 1.0
        s2 = cfg.total_variance
        if s2 <= 0.25:
            assert abs(ex - error_factor(cfg, "small_error")) <= s2**2 + 1e-15


class TestImpairedSinr:
    def test_reduces_to_error_free(self):
        b = LinkBudget(10, 10, 100)
        assert sinr_mf_impaired(b, ImpairmentConfig()) == sinr_mf(b)

    def test_fig4_point(self):
        assert sinr_mf_impaired(LinkBudget(10, 10, 100), FIG4) == pytest.approx(4.5911, abs=2e-4)

    def test_large_array_limit(self):
        v = sinr_mf_impaired(LinkBudget(10, 10, 1e12), FIG4)
        assert v == pytest.approx(10 * error_factor(FIG4), rel=1e-9)


class TestRates:
    def test_zero(self):
        assert rate_from_sinr(0.0) == 0.0

    def test_values(self):
        assert rate_from_sinr(9.0) == pytest.approx(3.3219, abs=1e-4)
        assert sum_rate_analytic(10, 9.0) == pytest.approx(33.219, abs=1e-3)
        assert sum_rate_analytic(10, 5.2632) == pytest.approx(26.47, abs=5e-3)

    def test_vector(self):
        assert np.allclose(rate_from_sinr([0.0, 1.0, 3.0]), [0.0, 1.0, 2.0])

    def test_negative(self):
        with pytest.raises(ArgumentError):
            rate_from_sinr(-0.1)


class TestRulesOfThumb:
    def test_values(self):
        assert antennas_for_3db("mf", 10, 10.0) == 90
        assert antennas_for_3db("zf", 10, float("nan")) == 20
        assert antennas_for_3db("mf", 10, 10.0, FIG4) == 119

    def test_zf_ignores_errors(self):
        assert antennas_for_3db("zf", 10, 10.0, FIG4) == 20

    def test_self_consistent(self):
        snr, K = 10.0, 10
        assert sinr_mf(LinkBudget(snr, K, required_antennas("mf", K, snr))) == snr / 2
        assert sinr_zf(LinkBudget(snr, K, required_antennas("zf", K, snr))) == snr / 2
        M = required_antennas("mf", K, snr, FIG4)
        val = sinr_mf(LinkBudget(snr, K, M)) * error_factor(FIG4, "small_error")
        assert val == pytest.approx(snr / 2, rel=1e-12)

    @given(st.integers(2, 64), st.floats(0.1, 1000))
    def test_rounds_up(self, K, snr):
        exact = required_antennas("mf", K, snr)
        n = antennas_for_3db("mf", K, snr)
        assert n >= round(exact, 9) and n - exact < 1

    def test_unreachable(self):
        with pytest.raises(InfeasibleError):
            antennas_for_3db("mf", 10, 10.0, ImpairmentConfig(0.0, 60.0))
