"""Sliding-window spectrogram: geometry, content, and serialization."""

import numpy as np
import pytest

from ahspec import AHParams, PsiMode, ahp_spectrogram, fourier_frequencies, ordinary_pg


class TestGeometry:
    def test_window_count_and_centers(self):
        y = np.random.default_rng(70).standard_normal(1000)
        res = ahp_spectrogram(y, 400, 200, None)
        assert res.hop == 200
        assert len(res.centers) == (1000 - 400) // 200 + 1 == 4
        assert np.array_equal(res.centers, [200, 400, 600, 800])
        assert np.allclose(res.freqs, fourier_frequencies(400))
        assert res.values.shape == (4, len(res.freqs))

    def test_single_window_degenerate(self):
        y = np.random.default_rng(71).standard_normal(64)
        res = ahp_spectrogram(y, 64, 0, None)
        assert len(res.centers) == 1
        assert res.centers[0] == 32

    def test_tail_dropped(self):
        y = np.random.default_rng(72).standard_normal(130)
        res = ahp_spectrogram(y, 64, 0, None)
        # 130 = 2 full windows of 64 plus 2 leftover samples
        assert len(res.centers) == 2

    def test_validation(self):
        y = np.zeros(100)
        with pytest.raises(ValueError):
            ahp_spectrogram(y, 8, 0, None)
        with pytest.raises(ValueError):
            ahp_spectrogram(y, 64, 64, None)
        with pytest.raises(ValueError):
            ahp_spectrogram(y, 64, -1, None)
        with pytest.raises(ValueError):
            ahp_spectrogram(np.zeros(32), 64, 0, None)


class TestContent:
    def test_ordinary_windows_match_pg(self):
        rng = np.random.default_rng(73)
        y = rng.standard_normal(200)
        res = ahp_spectrogram(y, 100, 50, None)
        for i, start in enumerate((0, 50, 100)):
            seg = y[start : start + 100]
            ords = ordinary_pg(seg).values[:, 0]
            assert np.allclose(np.exp(res.values[i]), ords, rtol=1e-9)

    def test_robust_windows_match_compute_ahp(self):
        from ahspec import compute_ahp

        rng = np.random.default_rng(74)
        y = rng.standard_normal(128)
        p = AHParams(0.7, 1.345, PsiMode.STD_MULTIPLE)
        res = ahp_spectrogram(y, 64, 0, p)
        for i, start in enumerate((0, 64)):
            seg = y[start : start + 64]
            ords = compute_ahp(seg, [0.7], p).values[:, 0]
            assert np.allclose(np.exp(res.values[i]), ords, rtol=1e-6, atol=1e-12)
        assert res.alpha == 0.7

    def test_stationary_argmax_stable(self):
        # a persistent sinusoid should win the argmax in every window
        n, wl = 600, 100
        k = 17  # Fourier bin of the window length
        t = np.arange(1, n + 1)
        rng = np.random.default_rng(75)
        y = 4.0 * np.cos(2 * np.pi * k * t / wl) + rng.standard_normal(n)
        res = ahp_spectrogram(y, wl, 50, AHParams(0.5, 1.345, PsiMode.STD_MULTIPLE))
        assert np.all(np.argmax(res.values, axis=1) == k - 1)

    def test_log_floor_keeps_values_finite(self):
        t = np.arange(1, 129)
        y = np.cos(2 * np.pi * 16 * t / 128)  # exact bin: all other ordinates ~ 0
        res = ahp_spectrogram(y, 128, 0, None)
        assert np.all(np.isfinite(res.values))


class TestSerialization:
    def test_csv_long_format(self, tmp_path):
        y = np.random.default_rng(76).standard_normal(96)
        res = ahp_spectrogram(y, 32, 0, None)
        path = tmp_path / "spec.csv"
        res.to_csv(path)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "center,freq,log_value"
        assert len(lines) == 1 + len(res.centers) * len(res.freqs)
        first = lines[1].split(",")
        assert int(first[0]) == res.centers[0]

    def test_json_fields(self, tmp_path):
        import json

        y = np.random.default_rng(77).standard_normal(96)
        res = ahp_spectrogram(y, 32, 16, AHParams(0.8, 0.674, PsiMode.STD_MULTIPLE))
        path = tmp_path / "spec.json"
        res.to_json(path)
        d = json.loads(path.read_text())
        assert d["window_len"] == 32 and d["hop"] == 16
        assert d["alpha"] == 0.8 and d["log_applied"] is True
        assert len(d["values"]) == len(d["centers"])
