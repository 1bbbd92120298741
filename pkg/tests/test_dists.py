import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from aencap.dists import (
    input_cdf,
    input_laplace,
    input_pdf,
    mixed_input_dist,
    sample_channel,
    sample_input,
    u_cdf,
    u_pdf,
    write_samples_csv,
    y_cdf,
    y_pdf,
)
from aencap.errors import NegativeArgument
from aencap.params import validate_params

P111 = validate_params(1, 1, 1)
P_CASE1 = validate_params(100, 10, 10)
P_CASE2 = validate_params(1, 10, 1)
P_DEGEN = validate_params(5, 6, 1)

positive_mean = st.floats(min_value=1e-3, max_value=1e5, allow_nan=False, allow_infinity=False)


class TestInputLaw:
    def test_atom_and_continuous_at_zero(self):
        atom, cont = input_pdf(0.0, P111)
        assert atom == 0.5
        assert cont == pytest.approx(0.25, rel=1e-15)

    def test_negative_argument_rejected(self):
        with pytest.raises(NegativeArgument):
            input_pdf(-0.1, P111)

    def test_continuous_mass_is_mx_over_m(self):
        total = oracles.quad_integral(lambda x: input_pdf(x, P_CASE1)[1], 110.0)
        assert total == pytest.approx(100.0 / 110.0, abs=1e-10)

    def test_overall_mean_is_mx(self):
        for p in (P111, P_CASE1, P_CASE2):
            mean = oracles.quad_integral(lambda x: input_pdf(x, p)[1], p.m_x + p.m_z, moment=1)
            assert mean == pytest.approx(p.m_x, rel=1e-9)

    def test_mixed_dist_weights(self):
        d = mixed_input_dist(P_CASE1)
        assert d.atom_weight + d.cont_weight == pytest.approx(1.0, abs=1e-15)
        assert d.cont_weight * d.cont_mean == pytest.approx(P_CASE1.m_x, rel=1e-15)

    def test_cdf_matches_density(self):
        for x in (0.5, 3.0, 20.0):
            mass = oracles.quad_integral(
                lambda t: input_pdf(t, P_CASE1)[1] * (t <= x), 110.0
            )
            assert input_cdf(x, P_CASE1) == pytest.approx(10.0 / 110.0 + mass, abs=1e-8)


class TestLaplace:
    def test_normalization_at_zero(self):
        assert input_laplace(0.0, P_CASE1) == 1.0

    def test_substitution(self):
        assert input_laplace(1.0, P111) == pytest.approx(2.0 / 3.0, rel=1e-15)

    def test_limit_is_atom_weight(self):
        assert input_laplace(1e12, P111) == pytest.approx(0.5, rel=1e-9)

    @pytest.mark.parametrize("s", [0.1, 1.0, 10.0])
    @pytest.mark.parametrize("p", [P111, P_CASE1, P_CASE2])
    def test_numeric_transform_matches(self, s, p):
        # quadrature of exp(-s x) against the continuous part plus the atom
        num = oracles.laplace_numeric(s, p.m_x, p.m_s, p.m_z)
        assert num == pytest.approx(input_laplace(s, p), abs=1e-8)


class TestYDensity:
    def test_substitution_at_ln4(self):
        assert y_pdf(math.log(4.0), P111) == pytest.approx(0.25, rel=1e-14)

    def test_zero_at_origin(self):
        assert y_pdf(0.0, P111) == 0.0
        assert y_pdf(1e-12, P111) == pytest.approx(0.0, abs=1e-11)

    def test_normalization(self):
        total = oracles.quad_integral(lambda y: y_pdf(y, P_CASE1), 110.0)
        assert total == pytest.approx(1.0, abs=1e-8)

    def test_mean(self):
        for p in (P_CASE1, P_CASE2, P_DEGEN):
            scale = max(p.m_x + p.m_z, p.m_s)
            mean = oracles.quad_integral(lambda y: y_pdf(y, p), scale, moment=1)
            assert mean == pytest.approx(p.m_x + p.m_s + p.m_z, rel=1e-6)

    def test_swapped_scale_pair_equality(self):
        # {M, m_s} = {2, 10} both ways round: (1,10,1) and (9,2,1)
        other = validate_params(9, 2, 1)
        ys = np.linspace(0.05, 40.0, 100)
        np.testing.assert_allclose(y_pdf(ys, P_CASE2), y_pdf(ys, other), rtol=0, atol=1e-12)

    def test_matches_nested_convolution(self):
        for y in (0.7, 3.0):
            conv = oracles.conv_y_density(y, 1.0, 10.0, 1.0)
            assert y_pdf(y, P_CASE2) == pytest.approx(conv, rel=1e-7)

    def test_degenerate_limit_form(self):
        # inside the band the Erlang-2 limit applies; just off the band the
        # raw two-exponential form must agree with it
        near = validate_params(5, 6 * (1 + 1e-7), 1)
        ys = np.linspace(0.1, 30.0, 50)
        np.testing.assert_allclose(y_pdf(ys, P_DEGEN), y_pdf(ys, near), rtol=1e-6)

    def test_cdf_consistency(self):
        for p in (P_CASE1, P_CASE2, P_DEGEN):
            scale = max(p.m_x + p.m_z, p.m_s)
            for y in (0.3 * scale, 2.0 * scale):
                mass = oracles.quad_integral(lambda t: y_pdf(t, p) * (t <= y), scale)
                assert y_cdf(y, p) == pytest.approx(mass, abs=1e-9)


class TestUDensity:
    def test_cancellation_when_ms_equals_mz(self):
        # with m_s = m_z the law collapses to a single exponential of mean M
        us = np.linspace(0.0, 20.0, 50)
        np.testing.assert_allclose(u_pdf(us, P111), 0.5 * np.exp(-us / 2.0), rtol=1e-14)

    def test_value_at_origin(self):
        p = P_CASE2
        m = p.m_x + p.m_z
        expected = (p.m_x / m - (p.m_s - p.m_z) / p.m_s) / (m - p.m_s)
        assert u_pdf(0.0, p) == pytest.approx(expected, rel=1e-14)

    def test_normalization(self):
        total = oracles.quad_integral(lambda u: u_pdf(u, P_CASE2), 10.0)
        assert total == pytest.approx(1.0, abs=1e-8)

    def test_mean(self):
        for p in (P_CASE1, P_CASE2, P_DEGEN):
            scale = max(p.m_x + p.m_z, p.m_s)
            mean = oracles.quad_integral(lambda u: u_pdf(u, p), scale, moment=1)
            assert mean == pytest.approx(p.m_x + p.m_s, rel=1e-6)

    def test_matches_direct_convolution(self):
        for p in (P_CASE2, validate_params(2, 1, 4), P_DEGEN):
            for u in (0.4, 2.5, 8.0):
                conv = oracles.conv_u_density(u, p.m_x, p.m_s, p.m_z)
                assert u_pdf(u, p) == pytest.approx(conv, rel=1e-8)

    @settings(max_examples=150)
    @given(positive_mean, positive_mean, positive_mean)
    def test_nonnegative_everywhere(self, m_x, m_s, m_z):
        p = validate_params(m_x, m_s, m_z)
        scale = max(m_x + m_z, m_s)
        us = np.geomspace(1e-6 * scale, 50.0 * scale, 80)
        assert np.all(u_pdf(us, p) >= 0.0)
        assert u_pdf(0.0, p) >= 0.0

    def test_cdf_consistency(self):
        for p in (P_CASE1, P_CASE2):
            scale = max(p.m_x + p.m_z, p.m_s)
            for u in (0.5 * scale, 3.0 * scale):
                mass = oracles.quad_integral(lambda t: u_pdf(t, p) * (t <= u), scale)
                assert u_cdf(u, p) == pytest.approx(mass, abs=1e-9)


class TestSamplers:
    N = 1_000_000

    def test_atom_fraction(self):
        x = sample_input(self.N, P111, seed=11)
        frac = np.mean(x == 0.0)
        se = math.sqrt(0.25 / self.N)
        assert abs(frac - 0.5) <= 3.0 * se

    def test_empirical_mean(self):
        x = sample_input(self.N, P111, seed=11)
        se = np.std(x) / math.sqrt(self.N)
        assert abs(np.mean(x) - 1.0) <= 3.0 * se

    def test_determinism(self):
        a = sample_input(5000, P_CASE1, seed=3)
        b = sample_input(5000, P_CASE1, seed=3)
        np.testing.assert_array_equal(a, b)
        c = sample_channel(5000, P_CASE1, seed=3)
        d = sample_channel(5000, P_CASE1, seed=3)
        np.testing.assert_array_equal(c.y, d.y)

    def test_channel_mean_and_independence(self):
        s = sample_channel(self.N, P_CASE1, seed=21)
        mean_y = np.mean(s.y)
        se = np.std(s.y) / math.sqrt(self.N)
        assert abs(mean_y - 120.0) <= 3.0 * se
        corr = np.corrcoef(s.x, s.s)[0, 1]
        assert abs(corr) <= 3.0 / math.sqrt(self.N)

    def test_x_plus_z_is_exponential_ks(self):
        s = sample_channel(self.N, P111, seed=5)
        t = s.x + s.z
        stat = oracles.ks_statistic(t, lambda v: -np.expm1(-v / 2.0))
        assert stat < 1.95 / math.sqrt(self.N)

    def test_y_sample_matches_analytic_cdf_ks(self):
        s = sample_channel(self.N, P_CASE1, seed=17)
        stat = oracles.ks_statistic(s.y, lambda v: y_cdf(v, P_CASE1))
        assert stat < 1.95 / math.sqrt(self.N)

    def test_u_sample_matches_analytic_cdf_ks(self):
        s = sample_channel(self.N, P_CASE2, seed=19)
        stat = oracles.ks_statistic(s.u, lambda v: u_cdf(v, P_CASE2))
        assert stat < 1.95 / math.sqrt(self.N)

    def test_records_are_consistent(self):
        s = sample_channel(1000, P_CASE2, seed=2)
        np.testing.assert_array_equal(s.u, s.x + s.s)
        np.testing.assert_array_equal(s.y, s.x + s.s + s.z)

    def test_rejects_zero_draws(self):
        with pytest.raises(ValueError):
            sample_input(0, P111, seed=1)


def test_csv_export_format():
    s = sample_channel(4, P111, seed=9)
    buf = io.StringIO()
    write_samples_csv(s, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "x,s,z,u,y"
    assert len(lines) == 5
    first = [float(v) for v in lines[1].split(",")]
    assert first[0] == s.x[0] and first[4] == s.y[0]  # 17 digits round-trip
