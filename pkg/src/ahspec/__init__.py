"""Robust spectral analysis with the asymmetric Huber periodogram."""

from .inference import (
    EstimatorSpec,
    FisherResult,
    PowerTable,
    fisher_pvalue,
    fisher_statistic,
    fisher_test,
    power_study,
)
from .loss import AHParams, PsiMode, rho, rho_ddot, rho_dot, sample_ahq
from .periodogram import (
    PeriodogramMatrix,
    ahdft,
    ahp_ordinate,
    compute_ahp,
    default_alpha_grid,
    normalize,
    ordinary_pg,
    smooth,
)
from .regress import RegressionFit, SolverConfig, fit_ahr, fourier_frequencies
from .simgen import (
    GarchConfig,
    ModelKind,
    ModelSpec,
    OutlierKind,
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
from .spectrogram import SpectrogramResult, ahp_spectrogram
from .spectrum import (
    AHSEstimate,
    AHSMethod,
    ahs_theoretical_garch,
    ahs_via_acf,
    ahs_via_rho_dot,
    eta_hat,
    rho_dot_process,
)

__version__ = "0.1.0"

__all__ = [
    "AHParams",
    "AHSEstimate",
    "AHSMethod",
    "EstimatorSpec",
    "FisherResult",
    "GarchConfig",
    "ModelKind",
    "ModelSpec",
    "OutlierKind",
    "OutlierSpec",
    "PeriodogramMatrix",
    "PowerTable",
    "PsiMode",
    "RegressionFit",
    "SolverConfig",
    "SpectrogramResult",
    "ahdft",
    "ahp_ordinate",
    "ahp_spectrogram",
    "ahs_theoretical_garch",
    "ahs_via_acf",
    "ahs_via_rho_dot",
    "ar2_peak_frequency",
    "compute_ahp",
    "default_alpha_grid",
    "eta_hat",
    "fisher_pvalue",
    "fisher_statistic",
    "fisher_test",
    "fit_ahr",
    "fourier_frequencies",
    "gen_ar2",
    "gen_garch11",
    "gen_hidden",
    "gen_mixture",
    "gen_white_noise",
    "generate",
    "inject_outliers",
    "normalize",
    "ordinary_pg",
    "power_study",
    "rho",
    "rho_ddot",
    "rho_dot",
    "rho_dot_process",
    "sample_ahq",
    "smooth",
]
