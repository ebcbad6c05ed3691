"""Trigonometric asymmetric Huber regression: IRLS solver and frequency grid."""

import numpy as np
import pytest

from ahspec import AHParams, SolverConfig, fit_ahr, fourier_frequencies, rho
from ahspec.loss import PsiMode


def grid_search_oracle(y, omega, p, mu, beta_start, step=1e-3, final=1e-6):
    """Nested 2-D grid search on the convex objective around a start point."""
    n = len(y)
    t = np.arange(1, n + 1)
    c, s = np.cos(omega * t), np.sin(omega * t)
    yc = y - mu

    def obj(b1, b2):
        return float(np.sum(rho(yc - b1 * c - b2 * s, p)))

    b1, b2 = beta_start
    h = step
    while h >= final:
        grid = np.arange(-5, 6) * h
        vals = np.array([[obj(b1 + d1, b2 + d2) for d2 in grid] for d1 in grid])
        i, j = np.unravel_index(np.argmin(vals), vals.shape)
        b1, b2 = b1 + grid[i], b2 + grid[j]
        if 0 < i < 10 and 0 < j < 10:
            h /= 5.0
    return b1, b2


class TestFourierFrequencies:
    def test_n8(self):
        assert np.allclose(fourier_frequencies(8), [np.pi / 4, np.pi / 2, 3 * np.pi / 4])

    def test_n9(self):
        expected = 2 * np.pi * np.arange(1, 5) / 9
        assert np.allclose(fourier_frequencies(9), expected)

    def test_open_interval(self):
        for n in (8, 9, 57, 200):
            w = fourier_frequencies(n)
            assert np.all((w > 0) & (w < np.pi))
            assert np.all(np.diff(w) > 0)

    def test_small_n_rejected(self):
        with pytest.raises(ValueError):
            fourier_frequencies(3)


class TestSolverConfig:
    def test_positive_fields_enforced(self):
        with pytest.raises(ValueError):
            SolverConfig(tolerance=0)
        with pytest.raises(ValueError):
            SolverConfig(max_iter=0)


class TestFitAHR:
    def test_pure_cosine_ols_limit(self):
        n = 64
        omega = fourier_frequencies(n)[7]
        t = np.arange(1, n + 1)
        y = 2.0 * np.cos(omega * t)
        fit = fit_ahr(y, omega, AHParams(0.5, 1e6))
        assert fit.beta1 == pytest.approx(2.0, abs=1e-6)
        assert fit.beta2 == pytest.approx(0.0, abs=1e-6)
        assert fit.converged

    def test_ols_closed_form_oracle(self):
        # large-psi alpha=0.5 fit equals (2/n) sum y cos / sin on the centered series
        rng = np.random.default_rng(10)
        n = 128
        y = rng.standard_normal(n)
        omega = fourier_frequencies(n)[20]
        fit = fit_ahr(y, omega, AHParams(0.5, 1e6))
        t = np.arange(1, n + 1)
        yc = y - fit.mu
        b1 = 2.0 / n * np.sum(yc * np.cos(omega * t))
        b2 = 2.0 / n * np.sum(yc * np.sin(omega * t))
        assert fit.beta1 == pytest.approx(b1, abs=1e-6)
        assert fit.beta2 == pytest.approx(b2, abs=1e-6)

    def test_minimizer_beats_zero(self):
        rng = np.random.default_rng(11)
        y = rng.standard_normal(64)
        omega = fourier_frequencies(64)[5]
        p = AHParams(0.7, 1.0)
        fit = fit_ahr(y, omega, p)
        t = np.arange(1, 65)
        resid = y - fit.mu - fit.beta1 * np.cos(omega * t) - fit.beta2 * np.sin(omega * t)
        assert np.sum(rho(resid, p)) <= np.sum(rho(y - fit.mu, p)) + 1e-10

    def test_against_grid_search_oracle(self):
        rng = np.random.default_rng(12)
        n = 32
        omegas = fourier_frequencies(n)
        for k in range(10):
            y = rng.standard_normal(n)
            omega = omegas[rng.integers(len(omegas))]
            p = AHParams(rng.uniform(0.2, 0.8), rng.uniform(0.5, 2.0))
            fit = fit_ahr(y, omega, p)
            b1, b2 = grid_search_oracle(
                y, omega, p, fit.mu, (fit.beta1, fit.beta2)
            )
            assert fit.beta1 == pytest.approx(b1, abs=1e-4)
            assert fit.beta2 == pytest.approx(b2, abs=1e-4)

    def test_objective_monotone_across_iterations(self):
        rng = np.random.default_rng(13)
        for _ in range(20):
            y = rng.standard_normal(48)
            omega = fourier_frequencies(48)[rng.integers(23)]
            p = AHParams(rng.uniform(0.1, 0.9), rng.uniform(0.3, 2.0))
            fit = fit_ahr(y, omega, p)
            trace = fit.objective_trace
            assert np.all(np.diff(trace) <= 1e-9 * (1 + trace[0]))

    def test_scale_covariance_large_psi(self):
        rng = np.random.default_rng(14)
        y = rng.standard_normal(64)
        omega = fourier_frequencies(64)[9]
        p = AHParams(0.5, 1e6, PsiMode.STD_MULTIPLE)
        f1 = fit_ahr(y, omega, p)
        f2 = fit_ahr(3.0 * y, omega, p)
        assert f2.beta1 == pytest.approx(3.0 * f1.beta1, rel=1e-6, abs=1e-9)
        assert f2.beta2 == pytest.approx(3.0 * f1.beta2, rel=1e-6, abs=1e-9)

    def test_deterministic(self):
        rng = np.random.default_rng(15)
        y = rng.standard_normal(64)
        omega = fourier_frequencies(64)[3]
        p = AHParams(0.7, 0.9)
        a = fit_ahr(y, omega, p)
        b = fit_ahr(y, omega, p)
        assert (a.beta1, a.beta2, a.iterations) == (b.beta1, b.beta2, b.iterations)

    def test_converged_implies_small_step(self):
        rng = np.random.default_rng(16)
        y = rng.standard_normal(64)
        cfg = SolverConfig()
        fit = fit_ahr(y, fourier_frequencies(64)[8], AHParams(0.6, 1.0), cfg)
        if fit.converged and fit.iterations < cfg.max_iter:
            assert fit.final_step <= cfg.tolerance or fit.final_step == 0.0

    def test_include_intercept(self):
        rng = np.random.default_rng(17)
        y = rng.standard_normal(64) + 5.0
        omega = fourier_frequencies(64)[4]
        fit = fit_ahr(y, omega, AHParams(0.5, 1e6), include_intercept=True)
        # intercept absorbs the level; amplitudes stay near the OLS values
        plain = fit_ahr(y, omega, AHParams(0.5, 1e6))
        assert fit.beta1 == pytest.approx(plain.beta1, abs=1e-5)
        assert fit.beta2 == pytest.approx(plain.beta2, abs=1e-5)
