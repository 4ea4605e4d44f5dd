import math

import numpy as np
import pytest
from scipy import integrate as sp_integrate

from unmac import distributions as dist
from unmac.geometry import sample_speeds

# scipy.integrate.quad serves as the independent quadrature oracle
# throughout; the package's own adaptive Simpson never checks itself.


SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)


class TestAccuracyStandards:
    def test_table_values(self):
        assert dist.GPS_ACCURACY_STANDARDS["zero-aod"].three_sigma == 5.7
        assert dist.GPS_ACCURACY_STANDARDS["all-aods"].three_sigma == 10.5
        assert dist.GPS_ACCURACY_STANDARDS["any-aod"].three_sigma == 13.85
        assert dist.GPS_ACCURACY_STANDARDS["worst-case"].three_sigma == 30.0

    def test_sigma_is_exactly_one_third(self):
        for std in dist.GPS_ACCURACY_STANDARDS.values():
            assert std.three_sigma == 3.0 * std.sigma

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            dist.GpsAccuracyStandard("bad", 0.0)


class TestCategories:
    def test_table_values(self):
        cats = dist.UAV_CATEGORIES
        assert (cats[1].v_cruise, cats[1].v_max) == (12.9, 20.6)
        assert (cats[2].v_cruise, cats[2].v_max) == (10.3, 15.4)
        assert (cats[3].v_cruise, cats[3].v_max) == (15.4, 30.7)
        assert (cats[4].v_cruise, cats[4].v_max) == (30.7, 51.5)

    def test_rejects_inverted_speeds(self):
        with pytest.raises(ValueError):
            dist.UavCategory(5, 20.0, 10.0, (0.0, 1.0))


class TestSpeedSigma:
    def test_category_1(self):
        assert dist.speed_sigma(12.9, 20.6) == pytest.approx(7.7 / 3.0)

    def test_category_4(self):
        assert dist.speed_sigma(30.7, 51.5) == pytest.approx(20.8 / 3.0)

    def test_degenerate_interval_rejected(self):
        with pytest.raises(ValueError):
            dist.speed_sigma(10.0, 10.0)

    def test_negative_cruise_rejected(self):
        with pytest.raises(ValueError):
            dist.speed_sigma(-1.0, 5.0)

    def test_from_category(self):
        model = dist.SpeedModel.from_category(dist.UAV_CATEGORIES[1])
        assert model.mu_v == 12.9
        assert model.sigma_v == pytest.approx(7.7 / 3.0)


class TestHalfNormal:
    def test_at_zero(self):
        assert dist.half_normal_pdf(0.0, 1.0) == pytest.approx(SQRT_2_OVER_PI, abs=1e-12)

    def test_negative_support(self):
        assert dist.half_normal_pdf(-1.0, 1.0) == 0.0

    def test_at_one_sigma(self):
        # sqrt(2/pi)/1.9 * exp(-1/2), evaluated with mpmath to 30 digits
        assert dist.half_normal_pdf(1.9, 1.9) == pytest.approx(
            0.25470602580962465, abs=1e-14
        )

    def test_rejects_bad_sigma(self):
        with pytest.raises(ValueError):
            dist.half_normal_pdf(1.0, 0.0)

    def test_normalizes(self):
        mass, _ = sp_integrate.quad(lambda x: dist.half_normal_pdf(x, 2.7), 0, np.inf)
        assert mass == pytest.approx(1.0, abs=1e-6)

    def test_array_input(self):
        out = dist.half_normal_pdf(np.array([-1.0, 0.0, 1.0]), 1.0)
        assert out.shape == (3,)
        assert out[0] == 0.0


class TestSumHalfNormal:
    def test_zero_at_origin(self):
        assert dist.sum_half_normal_pdf(0.0, 1.9, 1.9) == 0.0

    def test_normalizes(self):
        mass, _ = sp_integrate.quad(
            lambda x: dist.sum_half_normal_pdf(x, 1.9, 1.9), 0, np.inf
        )
        assert mass == pytest.approx(1.0, abs=1e-6)

    def test_normalizes_asymmetric(self):
        mass, _ = sp_integrate.quad(
            lambda x: dist.sum_half_normal_pdf(x, 1.9, 4.6), 0, np.inf
        )
        assert mass == pytest.approx(1.0, abs=1e-6)

    def test_mean_matches_closed_form(self):
        mean, _ = sp_integrate.quad(
            lambda x: x * dist.sum_half_normal_pdf(x, 1.9, 1.9), 0, np.inf
        )
        assert mean == pytest.approx(dist.sum_half_normal_mean(1.9, 1.9), abs=1e-9)
        assert dist.sum_half_normal_mean(1.9, 1.9) == pytest.approx(
            3.8 * SQRT_2_OVER_PI, abs=1e-12
        )

    def test_monte_carlo_mean(self):
        rng = np.random.default_rng(2024)
        s = np.abs(rng.normal(0, 1.9, 10**6)) + np.abs(rng.normal(0, 1.9, 10**6))
        assert s.mean() == pytest.approx(dist.sum_half_normal_mean(1.9, 1.9), abs=0.01)

    def test_matches_sample_histogram(self):
        # Oracle: 1e7 draws of |N| + |N|, bin-averaged against the density.
        rng = np.random.default_rng(7)
        n = 10**7
        s = np.abs(rng.normal(0, 1.9, n)) + np.abs(rng.normal(0, 1.9, n))
        edges = np.arange(0.0, 12.5, 0.5)
        in_window = np.mean(s <= edges[-1])
        hist, _ = np.histogram(s, bins=edges, density=True)
        hist = hist * in_window
        fine = np.linspace(edges[0], edges[-1], (len(edges) - 1) * 64 + 1)
        pdf_fine = dist.sum_half_normal_pdf(fine, 1.9, 1.9)
        bin_avg = np.array(
            [
                np.trapezoid(pdf_fine[k * 64 : (k + 1) * 64 + 1], fine[k * 64 : (k + 1) * 64 + 1])
                / 0.5
                for k in range(len(edges) - 1)
            ]
        )
        assert np.max(np.abs(hist - bin_avg)) < 1e-3

    def test_rejects_bad_sigmas(self):
        with pytest.raises(ValueError):
            dist.sum_half_normal_pdf(1.0, -1.0, 1.0)


class TestSumHalfNormalQuantile:
    def test_cdf_bounds(self):
        assert dist.sum_half_normal_cdf(0.0, 1.9, 1.9) == 0.0
        assert dist.sum_half_normal_cdf(1e6, 1.9, 1.9) == 1.0

    def test_round_trip(self):
        for x in (1.0, 3.0, 6.0, 9.0):
            p = dist.sum_half_normal_cdf(x, 1.9, 1.9)
            assert dist.sum_half_normal_quantile(p, 1.9, 1.9) == pytest.approx(
                x, abs=1e-4
            )

    def test_strictly_increasing_in_p(self):
        qs = [
            dist.sum_half_normal_quantile(p, 1.9, 1.9)
            for p in (0.1, 0.25, 0.5, 0.75, 0.9, 0.99, 0.999)
        ]
        assert all(a < b for a, b in zip(qs, qs[1:]))

    def test_median_below_mean(self):
        # Right-skewed positive distribution; cross-checked by sampling.
        median = dist.sum_half_normal_quantile(0.5, 1.9, 1.9)
        mean = dist.sum_half_normal_mean(1.9, 1.9)
        assert median < mean
        rng = np.random.default_rng(11)
        s = np.abs(rng.normal(0, 1.9, 10**6)) + np.abs(rng.normal(0, 1.9, 10**6))
        assert median == pytest.approx(np.median(s), abs=0.02)

    def test_rejects_bad_p(self):
        for p in (0.0, 1.0, -0.5, 1.5):
            with pytest.raises(ValueError):
                dist.sum_half_normal_quantile(p, 1.9, 1.9)


class TestTriangleAf:
    def test_peak_value(self):
        assert dist.triangle_af_pdf(3.75, 7.5) == pytest.approx(
            3.75 / (7.5**2 / 4.0), abs=1e-12
        )

    def test_outside_support(self):
        assert dist.triangle_af_pdf(8.0, 7.5) == 0.0
        assert dist.triangle_af_pdf(-0.1, 7.5) == 0.0
        assert dist.triangle_af_pdf(0.0, 7.5) == 0.0

    def test_mean(self):
        mean, _ = sp_integrate.quad(lambda x: x * dist.triangle_af_pdf(x, 7.5), 0, 7.5)
        assert mean == pytest.approx(3.75, abs=1e-9)

    def test_normalizes(self):
        mass, _ = sp_integrate.quad(lambda x: dist.triangle_af_pdf(x, 7.5), 0, 7.5)
        assert mass == pytest.approx(1.0, abs=1e-9)

    def test_matches_sample_histogram(self):
        rng = np.random.default_rng(5)
        n = 10**7
        s = (
            (7.5 - rng.uniform(0, 7.5, n)) + (7.5 - rng.uniform(0, 7.5, n))
        ) / 2.0
        edges = np.linspace(0.0, 7.5, 16)
        width = edges[1] - edges[0]
        hist, _ = np.histogram(s, bins=edges, density=True)
        fine = np.linspace(0.0, 7.5, 15 * 64 + 1)
        pdf_fine = dist.triangle_af_pdf(fine, 7.5)
        bin_avg = np.array(
            [
                np.trapezoid(pdf_fine[k * 64 : (k + 1) * 64 + 1], fine[k * 64 : (k + 1) * 64 + 1])
                / width
                for k in range(15)
            ]
        )
        assert np.max(np.abs(hist - bin_avg)) < 1e-3

    def test_rejects_bad_af_max(self):
        with pytest.raises(ValueError):
            dist.triangle_af_pdf(1.0, 0.0)


class TestDirectionFactor:
    def test_at_zero(self):
        assert dist.direction_factor_pdf(0.0) == pytest.approx(1.0 / math.pi, abs=1e-12)

    def test_at_half(self):
        # 1/(pi*sqrt(3/4)), independent evaluation
        assert dist.direction_factor_pdf(0.5) == pytest.approx(
            0.3675525969478614, abs=1e-14
        )

    def test_symmetry(self):
        assert dist.direction_factor_pdf(0.7) == dist.direction_factor_pdf(-0.7)

    def test_normalizes_via_angle_substitution(self):
        # x = cos(theta) turns the integral into (1/pi) * int_0^pi dtheta.
        mass, _ = sp_integrate.quad(
            lambda th: dist.direction_factor_pdf(math.cos(th)) * abs(math.sin(th)),
            1e-9,
            math.pi - 1e-9,
        )
        assert mass == pytest.approx(1.0, abs=1e-6)

    def test_rejects_endpoints(self):
        for x in (1.0, -1.0, 1.5):
            with pytest.raises(ValueError):
                dist.direction_factor_pdf(x)

    def test_matches_sample_histogram(self):
        rng = np.random.default_rng(3)
        s = dist.sample_direction_factor(rng, size=10**7)
        edges = np.linspace(-0.99, 0.99, 23)
        width = edges[1] - edges[0]
        # density=True normalizes to the in-window mass; scale back to the
        # full-sample density before comparing.
        in_window = np.mean(np.abs(s) <= 0.99)
        hist, _ = np.histogram(s, bins=edges, density=True)
        hist = hist * in_window
        fine = np.linspace(-0.99, 0.99, 22 * 64 + 1)
        pdf_fine = dist.direction_factor_pdf(fine)
        bin_avg = np.array(
            [
                np.trapezoid(pdf_fine[k * 64 : (k + 1) * 64 + 1], fine[k * 64 : (k + 1) * 64 + 1])
                / width
                for k in range(22)
            ]
        )
        assert np.max(np.abs(hist - bin_avg)) < 1e-2


class TestMobilityExpansion:
    def setup_method(self):
        self.cat1 = dist.SpeedModel.from_category(dist.UAV_CATEGORIES[1])

    def test_unknown_direction_mean(self):
        mean, std = dist.mobility_expansion_params(1.0, self.cat1, self.cat1)
        assert mean == pytest.approx(25.8, abs=1e-12)
        assert std == pytest.approx(math.sqrt(2.0) * 7.7 / 3.0, abs=1e-12)

    def test_unknown_direction_scales_with_dt(self):
        mean, _ = dist.mobility_expansion_params(0.02, self.cat1, self.cat1)
        assert mean == pytest.approx(0.516, abs=1e-12)

    def test_unknown_direction_moments_by_quadrature(self):
        mean, std = dist.mobility_expansion_params(1.0, self.cat1, self.cat1)
        f = lambda z: dist.mobility_expansion_pdf(z, 1.0, self.cat1, self.cat1)
        m0, _ = sp_integrate.quad(f, mean - 12 * std, mean + 12 * std)
        m1, _ = sp_integrate.quad(lambda z: z * f(z), mean - 12 * std, mean + 12 * std)
        m2, _ = sp_integrate.quad(
            lambda z: (z - mean) ** 2 * f(z), mean - 12 * std, mean + 12 * std
        )
        assert m0 == pytest.approx(1.0, rel=1e-6)
        assert m1 == pytest.approx(mean, rel=1e-6)
        assert m2 == pytest.approx(std * std, rel=1e-6)

    def test_known_direction_normalizes(self):
        mean, std = dist.mobility_expansion_params(1.0, self.cat1, self.cat1)
        mass, _ = sp_integrate.quad(
            lambda z: dist.mobility_expansion_pdf(
                z, 1.0, self.cat1, self.cat1, direction_known=True
            ),
            1e-9,
            mean + 13 * std,
            limit=200,
        )
        assert mass == pytest.approx(1.0, abs=1e-6)

    def test_known_direction_mean_below_unknown(self):
        # Monte Carlo oracle: V ~ N, Y ~ U(-pi, pi), keep V*cos(Y) >= 0.
        mean, std = dist.mobility_expansion_params(1.0, self.cat1, self.cat1)
        m1, _ = sp_integrate.quad(
            lambda z: z
            * dist.mobility_expansion_pdf(z, 1.0, self.cat1, self.cat1, direction_known=True),
            1e-9,
            mean + 13 * std,
            limit=200,
        )
        assert m1 < mean
        rng = np.random.default_rng(17)
        v = rng.normal(mean, std, 4 * 10**6)
        z = v * np.cos(rng.uniform(-math.pi, math.pi, v.size))
        assert m1 == pytest.approx(z[z >= 0].mean(), abs=0.02)

    def test_known_direction_support(self):
        assert (
            dist.mobility_expansion_pdf(-1.0, 1.0, self.cat1, self.cat1, direction_known=True)
            == 0.0
        )
        assert math.isinf(
            dist.mobility_expansion_pdf(0.0, 1.0, self.cat1, self.cat1, direction_known=True)
        )

    def test_rejects_bad_dt(self):
        with pytest.raises(ValueError):
            dist.mobility_expansion_pdf(1.0, 0.0, self.cat1, self.cat1)


class TestSampleSpeed:
    def test_truncation_window(self):
        model = dist.SpeedModel(12.9, 7.7 / 3.0)
        rng = np.random.default_rng(0)
        cap = 1.1 * (12.9 + 7.7)
        draws = [dist.sample_speed(model, rng) for _ in range(10**4)]
        assert all(0.0 < v <= cap for v in draws)

    def test_large_sample_mean(self):
        # Law of large numbers on the vectorized path (same distribution).
        model = dist.SpeedModel(12.9, 7.7 / 3.0)
        rng = np.random.default_rng(1)
        n = 10**6
        v = sample_speeds(rng, np.full(n, model.mu_v), np.full(n, model.sigma_v))
        assert v.mean() == pytest.approx(12.9, abs=0.05)

    def test_degenerate_sigma_concentrates(self):
        model = dist.SpeedModel(12.9, 1e-4)
        rng = np.random.default_rng(2)
        for _ in range(100):
            assert dist.sample_speed(model, rng) == pytest.approx(12.9, abs=1e-3)

    def test_retry_cap_reported(self):
        # Window (0, cap] is empty when mu is deeply negative.
        model = dist.SpeedModel(-1000.0, 0.001)
        rng = np.random.default_rng(3)
        with pytest.raises(RuntimeError):
            dist.sample_speed(model, rng)


class TestOtherSamplers:
    def test_airframe_window(self):
        rng = np.random.default_rng(4)
        af = dist.sample_airframe(rng, 7.5, size=10**5)
        assert af.min() > 0.0
        assert af.max() <= 7.5

    def test_half_normal_sampler_mean(self):
        rng = np.random.default_rng(8)
        s = dist.sample_half_normal(1.9, rng, size=10**6)
        assert s.mean() == pytest.approx(1.9 * SQRT_2_OVER_PI, abs=0.01)
