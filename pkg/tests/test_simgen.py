"""Model generators, contamination, and their deterministic seeding."""

import numpy as np
import pytest

from ahspec import (
    GarchConfig,
    ModelSpec,
    OutlierSpec,
    ar2_peak_frequency,
    gen_ar2,
    gen_garch11,
    gen_hidden,
    gen_mixture,
    gen_white_noise,
    generate,
    inject_outliers,
)
from ahspec.simgen import (
    ModelKind,
    OutlierKind,
    _mix_w1,
    _mix_w2,
    eyeblink_waveform,
)


class TestAr2:
    def test_stationarity_guard(self):
        for phi1, phi2 in ((1.2, 0.0), (0.5, 0.6), (-2.1, -0.9), (0.0, 1.0)):
            with pytest.raises(ValueError):
                gen_ar2(phi1, phi2, 64)

    def test_deterministic_given_seed(self):
        a = gen_ar2(0.9, -0.9, 128, seed=42)
        b = gen_ar2(0.9, -0.9, 128, seed=42)
        assert np.array_equal(a, b)
        c = gen_ar2(0.9, -0.9, 128, seed=43)
        assert not np.array_equal(a, c)

    def test_recursion_satisfied(self):
        # consecutive samples obey x_t = phi1 x_{t-1} + phi2 x_{t-2} + e_t with
        # the same innovations the generator consumed
        phi1, phi2, n, burn = 0.5, -0.3, 50, 10
        eps = np.random.default_rng(7).standard_normal(n + burn)
        x = gen_ar2(phi1, phi2, n, burn_in=burn, seed=7)
        full = np.concatenate([np.zeros(2), eps])
        rec = np.empty(n + burn)
        for t in range(n + burn):
            prev1 = rec[t - 1] if t >= 1 else 0.0
            prev2 = rec[t - 2] if t >= 2 else 0.0
            rec[t] = phi1 * prev1 + phi2 * prev2 + eps[t]
        assert np.allclose(x, rec[burn:])

    def test_white_noise_special_case(self):
        x = gen_ar2(0.0, 0.0, 64, burn_in=5, seed=1)
        eps = np.random.default_rng(1).standard_normal(69)
        assert np.allclose(x, eps[5:])

    def test_variance_matches_theory(self):
        # AR(1) embedded case phi2=0: var = 1/(1-phi1^2)
        x = gen_ar2(0.6, 0.0, 200000, seed=3)
        assert np.var(x) == pytest.approx(1.0 / (1 - 0.36), rel=0.02)


class TestPeakFrequency:
    def test_phi1_zero_gives_half_pi(self):
        assert ar2_peak_frequency(0.0, -0.36) == pytest.approx(np.pi / 2)

    def test_reference_value(self):
        # arccos(0.9 / (2*sqrt(0.9))) = arccos(0.4743...) = 1.0766
        assert ar2_peak_frequency(0.9, -0.9) == pytest.approx(1.0766, abs=1e-4)

    def test_near_spectrum_argmax(self):
        # the root-angle formula sits close to (not exactly at) the true
        # spectral-density maximum; for phi=(0.9, -0.9) the gap is ~8e-4
        phi1, phi2 = 0.9, -0.9
        w = np.linspace(1e-4, np.pi - 1e-4, 200001)
        denom = np.abs(1 - phi1 * np.exp(-1j * w) - phi2 * np.exp(-2j * w)) ** 2
        assert w[np.argmin(denom)] == pytest.approx(ar2_peak_frequency(phi1, phi2), abs=2e-3)

    def test_real_roots_rejected(self):
        with pytest.raises(ValueError):
            ar2_peak_frequency(0.5, 0.2)
        with pytest.raises(ValueError):
            ar2_peak_frequency(1.9, -0.5)


class TestHidden:
    def test_zero_modulation_reduces_to_scaled_ar2(self):
        x = gen_ar2(0.0, -0.36, 64, seed=5)
        h = gen_hidden(0.0, -0.36, 64, seed=5, b0=2.0, b1=0.0, b2=0.0)
        assert np.allclose(h, 2.0 * x)

    def test_envelope_applied_pointwise(self):
        n = 32
        x = gen_ar2(0.1, -0.2, n, seed=6)
        h = gen_hidden(0.1, -0.2, n, seed=6, b0=1.0, b1=0.9, b2=1.0, f0=0.09, f1=0.12)
        t = np.arange(1, n + 1)
        env = 1.0 + 0.9 * np.cos(2 * np.pi * 0.09 * t) + 1.0 * np.sin(2 * np.pi * 0.12 * t)
        assert np.allclose(h, env * x)


class TestMixture:
    def test_w1_breakpoints(self):
        assert _mix_w1(np.array([-2.0]))[0] == 0.75
        assert _mix_w1(np.array([2.0]))[0] == pytest.approx(0.1)
        assert _mix_w1(np.array([-0.8]))[0] == pytest.approx(0.75)
        assert _mix_w1(np.array([0.8]))[0] == pytest.approx(0.1)
        assert _mix_w1(np.array([0.0]))[0] == pytest.approx(0.425)

    def test_w2_breakpoints(self):
        assert _mix_w2(np.array([-1.0]))[0] == 0.5
        assert _mix_w2(np.array([-0.4]))[0] == pytest.approx(0.5)
        assert _mix_w2(np.array([0.0]))[0] == 0.0
        assert _mix_w2(np.array([-0.2]))[0] == pytest.approx(0.25)
        assert _mix_w2(np.array([1.0]))[0] == 0.0

    def test_weights_stay_in_unit_interval(self):
        x = np.linspace(-10, 10, 4001)
        for w in (_mix_w1(x), _mix_w2(x)):
            assert np.all((w >= 0) & (w <= 1))

    def test_deterministic_and_n(self):
        a = gen_mixture(200, seed=9)
        b = gen_mixture(200, seed=9)
        assert a.shape == (200,) and np.array_equal(a, b)


class TestGarch:
    def test_config_validation(self):
        with pytest.raises(ValueError):
            GarchConfig(omega0=0.0)
        with pytest.raises(ValueError):
            GarchConfig(arch=0.6, garch=0.5)
        with pytest.raises(ValueError):
            GarchConfig(arch=-0.1)

    def test_hand_recursion_no_burn_in(self):
        omega0, arch, garch = 1e-6, 0.49, 0.49
        z = np.random.default_rng(11).standard_normal(5)
        y = gen_garch11(omega0, arch, garch, 5, burn_in=0, seed=11)
        sigma2 = omega0 / (1 - arch - garch)
        y_prev = 0.0
        for t in range(5):
            sigma2 = omega0 + arch * y_prev ** 2 + garch * sigma2
            y_prev = np.sqrt(sigma2) * z[t]
            assert y[t] == pytest.approx(y_prev, rel=1e-12)

    def test_heavy_tails(self):
        from scipy.stats import kurtosis

        y = gen_garch11(1e-6, 0.49, 0.49, 20000, seed=12)
        assert kurtosis(y, fisher=False) > 3.5

    def test_unconditional_variance(self):
        y = gen_garch11(1e-4, 0.2, 0.2, 400000, seed=13)
        assert np.var(y) == pytest.approx(1e-4 / 0.6, rel=0.05)


class TestEyeblink:
    def test_support_and_extremes(self):
        c, sigma = 10.0, 2.0
        w = eyeblink_waveform(c, sigma)
        assert w.shape == (51,)
        assert np.max(w) == pytest.approx(c * sigma)
        assert np.min(w) == pytest.approx(-0.6 * c * sigma)
        assert w[0] == 0.0

    def test_lobe_locations(self):
        w = eyeblink_waveform(5.0)
        assert np.argmax(w) == 8
        # the negative lobe alone peaks at s = 27; the decaying tail of the
        # positive lobe pushes the combined minimum slightly later
        assert 27 <= np.argmin(w) <= 30

    def test_linear_in_c_times_sigma(self):
        assert np.allclose(eyeblink_waveform(3.0, 2.0), 6.0 * eyeblink_waveform(1.0, 1.0))


class TestInjectOutliers:
    def _y(self, n=200, seed=21):
        return np.random.default_rng(seed).standard_normal(n)

    def test_single_point_exact(self):
        y = self._y()
        spec = OutlierSpec(OutlierKind.SINGLE_POINT, 8.0, t_star=40)
        out = inject_outliers(y, spec)
        sigma = np.std(y, ddof=1)
        assert out[40] == pytest.approx(y[40] + 8.0 * sigma)
        mask = np.ones(len(y), bool)
        mask[40] = False
        assert np.array_equal(out[mask], y[mask])

    def test_burst_span_six(self):
        y = self._y()
        out = inject_outliers(y, OutlierSpec(OutlierKind.BURST, 5.0, t_star=100))
        sigma = np.std(y, ddof=1)
        assert np.allclose(out[100:106], y[100:106] + 5.0 * sigma)
        assert np.array_equal(out[:100], y[:100])
        assert np.array_equal(out[106:], y[106:])

    def test_eyeblink_span_and_extremes(self):
        y = self._y()
        out = inject_outliers(y, OutlierSpec(OutlierKind.EYEBLINK, 10.0, t_star=60))
        sigma = np.std(y, ddof=1)
        delta = out - y
        assert np.all(delta[:60] == 0) and np.all(delta[111:] == 0)
        assert np.max(delta) == pytest.approx(10.0 * sigma)
        assert np.min(delta) == pytest.approx(-6.0 * sigma)

    def test_random_placement_deterministic_and_legal(self):
        y = self._y(80)
        spec = OutlierSpec(OutlierKind.EYEBLINK, 4.0, seed=33)
        a = inject_outliers(y, spec)
        b = inject_outliers(y, spec)
        assert np.array_equal(a, b)
        start = int(np.flatnonzero(a != y)[0])
        assert 0 <= start <= 80 - 51

    def test_out_of_range_placement_rejected(self):
        y = self._y(60)
        with pytest.raises(ValueError):
            inject_outliers(y, OutlierSpec(OutlierKind.BURST, 3.0, t_star=57))
        with pytest.raises(ValueError):
            inject_outliers(self._y(40), OutlierSpec(OutlierKind.EYEBLINK, 3.0))

    def test_magnitude_validation(self):
        with pytest.raises(ValueError):
            OutlierSpec(OutlierKind.BURST, 0.0)


class TestGenerateDispatch:
    def test_each_kind(self):
        specs = [
            ModelSpec(ModelKind.AR2, 64, 1, {"phi1": 0.9, "phi2": -0.9}),
            ModelSpec(ModelKind.HIDDEN_PERIODICITY, 64, 2, {"phi1": 0.0, "phi2": -0.36}),
            ModelSpec(ModelKind.MIXTURE, 64, 3),
            ModelSpec(ModelKind.GARCH11, 64, 4),
            ModelSpec(ModelKind.WHITE_NOISE, 64, 5),
        ]
        for spec in specs:
            y = generate(spec)
            assert y.shape == (64,)
            assert np.all(np.isfinite(y))

    def test_dispatch_matches_direct_call(self):
        spec = ModelSpec(ModelKind.AR2, 100, 17, {"phi1": 0.5, "phi2": -0.3}, burn_in=50)
        assert np.array_equal(generate(spec), gen_ar2(0.5, -0.3, 100, burn_in=50, seed=17))
        assert np.array_equal(
            generate(ModelSpec(ModelKind.WHITE_NOISE, 64, 8, {"sigma": 2.0})),
            gen_white_noise(64, seed=8, sigma=2.0),
        )

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            ModelSpec(ModelKind.AR2, 4, 0)
        with pytest.raises(ValueError):
            ModelSpec(ModelKind.AR2, 64, 0, burn_in=-1)
