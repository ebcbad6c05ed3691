"""Command-line surface.

Subcommands:
  analyze      periodogram + Fisher test of a user-supplied CSV series
  simulate     emit a synthetic series (optionally contaminated) to CSV
  experiment   run a JSON-configured Monte Carlo experiment (power tables,
               averaged periodogram figures, GARCH spectrum, spectrogram demo)
  spectrogram  sliding-window spectrogram of a CSV series

Exit codes: 0 success, 2 usage/config error, 3 data error.  All randomness
flows from the configured seed; --threads (or AHP_THREADS) changes wall
time only, never values.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from importlib import resources

import numpy as np

from . import report
from ._util import atomic_write_text
from .inference import EstimatorSpec, fisher_test, power_study
from .loss import AHParams, PsiMode
from .periodogram import (
    DEFAULT_PSI_MULT,
    compute_ahp,
    default_alpha_grid,
    default_smooth_bandwidth,
    normalize,
    ordinary_pg,
    smooth,
)
from .regress import SolverConfig
from .simgen import (
    GarchConfig,
    ModelKind,
    ModelSpec,
    OutlierKind,
    OutlierSpec,
    generate,
    inject_outliers,
)
from .spectrogram import ahp_spectrogram
from .spectrum import ahs_theoretical_garch, averaged_ahp

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3


class ConfigError(Exception):
    """Invalid flags or experiment configuration (exit 2)."""


class DataError(Exception):
    """Malformed or unusable input data (exit 3)."""


# ---------------------------------------------------------------------------
# input parsing

def read_series_csv(path) -> np.ndarray:
    """One numeric column (optional header), or two columns (index, value)."""
    try:
        fh = open(path, newline="")
    except OSError as e:
        raise DataError(f"cannot open {path}: {e}") from e
    values = []
    with fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            row = [c.strip() for c in row if c.strip() != ""]
            if not row:
                continue
            try:
                nums = [float(c) for c in row]
            except ValueError:
                if lineno == 1:
                    continue  # header row
                raise DataError(f"{path}:{lineno}: non-numeric value in {row}")
            if len(nums) == 1:
                values.append(nums[0])
            elif len(nums) == 2:
                values.append(nums[1])
            else:
                raise DataError(f"{path}:{lineno}: expected 1 or 2 columns, got {len(nums)}")
    if len(values) < 8:
        raise DataError(f"{path}: need at least 8 numeric samples, got {len(values)}")
    return np.asarray(values, dtype=float)


def _parse_alpha_grid(text: str) -> np.ndarray:
    if text == "default":
        return default_alpha_grid()
    try:
        start, stop, step = (float(x) for x in text.split(":"))
    except ValueError:
        raise ConfigError("--alpha-grid expects start:stop:step")
    grid = np.round(np.arange(start, stop + step / 2, step), 10)
    if grid.size == 0 or np.any((grid <= 0) | (grid >= 1)):
        raise ConfigError("alpha grid must lie strictly inside (0, 1)")
    return grid


def _resolve_threads(args) -> int:
    if getattr(args, "threads", None):
        return args.threads
    env = os.environ.get("AHP_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"AHP_THREADS must be an integer, got {env!r}")
    return 1


# ---------------------------------------------------------------------------
# analyze

def cmd_analyze(args) -> int:
    y = read_series_csv(args.input)
    if args.log_input:
        if np.any(y <= 0):
            raise DataError("--log-input requires strictly positive samples")
        y = np.log(y)
    if args.alpha_grid is not None:
        alphas = _parse_alpha_grid(args.alpha_grid)
    elif args.alpha is not None:
        alphas = np.asarray([args.alpha])
    else:
        alphas = np.asarray([0.5])
    cfg = SolverConfig()
    if args.estimator == "pg":
        m = ordinary_pg(y)
    else:
        spec = EstimatorSpec(args.estimator, alpha=float(alphas[0]),
                             psi_mult=args.psi_mult if args.psi_mult is not None else DEFAULT_PSI_MULT)
        p = spec.effective_params()
        if args.psi is not None:
            psi_arg = args.psi
        else:
            psi_arg = p
        m = compute_ahp(y, alphas, psi_arg, cfg)
        frac_bad = m.nonconverged / max(1, len(m.freqs))
        if np.any(frac_bad > 0.01):
            print(
                f"warning: {int(m.nonconverged.max())} non-converged fits "
                f"({100 * frac_bad.max():.1f}% of frequencies)",
                file=sys.stderr,
            )
    if args.smooth_bw:
        m = smooth(m, args.smooth_bw)
    if args.normalize:
        m = normalize(m)
    out = args.out_dir
    os.makedirs(out, exist_ok=True)
    m.to_csv(os.path.join(out, "periodogram.csv"))
    m.to_json(os.path.join(out, "periodogram.json"))
    if len(m.alphas) <= 8:
        report.save_periodogram_lines(m, os.path.join(out, "periodogram.svg"))
    else:
        report.save_alpha_heatmap(m, os.path.join(out, "periodogram.svg"))
    levels = args.fisher_level or [0.05]
    fisher = []
    for j, a in enumerate(m.alphas):
        r = fisher_test(m.values[:, j], m.norm_freqs, levels)
        fisher.append(
            {
                "alpha": float(a),
                "g": r.g_stat,
                "p_value": r.p_value,
                "argmax_freq": r.argmax_freq,
                "reject": {str(k): bool(v) for k, v in r.reject.items()},
            }
        )
    atomic_write_text(os.path.join(out, "fisher.json"), json.dumps(fisher, indent=1) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# simulate

_MODEL_CLI_KINDS = {
    "ar2": ModelKind.AR2,
    "hidden": ModelKind.HIDDEN_PERIODICITY,
    "mixture": ModelKind.MIXTURE,
    "garch11": ModelKind.GARCH11,
    "white-noise": ModelKind.WHITE_NOISE,
}

_OUTLIER_CLI_KINDS = {1: OutlierKind.SINGLE_POINT, 2: OutlierKind.BURST, 3: OutlierKind.EYEBLINK}


def cmd_simulate(args) -> int:
    kind = _MODEL_CLI_KINDS[args.model]
    params = {}
    if kind in (ModelKind.AR2, ModelKind.HIDDEN_PERIODICITY):
        params = {"phi1": args.phi1, "phi2": args.phi2}
    spec = ModelSpec(kind, args.n, args.seed, params)
    y = generate(spec)
    if args.outlier_type:
        spec_o = OutlierSpec(
            _OUTLIER_CLI_KINDS[args.outlier_type], args.outlier_c, seed=args.seed + 1
        )
        y = inject_outliers(y, spec_o)
    os.makedirs(args.out_dir, exist_ok=True)
    text = "value\n" + "\n".join(f"{v:.12g}" for v in y) + "\n"
    atomic_write_text(os.path.join(args.out_dir, "series.csv"), text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# experiment

def _require_keys(d: dict, required, optional=(), where="config"):
    unknown = set(d) - set(required) - set(optional)
    if unknown:
        raise ConfigError(f"unknown keys in {where}: {sorted(unknown)}")
    missing = set(required) - set(d)
    if missing:
        raise ConfigError(f"missing keys in {where}: {sorted(missing)}")


def _model_from_json(d: dict, n: int, seed) -> ModelSpec:
    _require_keys(d, ["kind"], ["phi1", "phi2", "b0", "b1", "b2", "f0", "f1",
                                "omega0", "arch", "garch", "sigma"], "model")
    kind_map = {
        "ar2": ModelKind.AR2,
        "hidden": ModelKind.HIDDEN_PERIODICITY,
        "mixture": ModelKind.MIXTURE,
        "garch11": ModelKind.GARCH11,
        "white_noise": ModelKind.WHITE_NOISE,
    }
    if d["kind"] not in kind_map:
        raise ConfigError(f"unknown model kind {d['kind']!r}")
    params = {k: v for k, v in d.items() if k != "kind"}
    return ModelSpec(kind_map[d["kind"]], n, seed, params)


def _outlier_from_json(d: dict) -> OutlierSpec:
    _require_keys(d, ["kind", "c"], ["t_star"], "outlier")
    kind_map = {
        "single_point": OutlierKind.SINGLE_POINT,
        "burst": OutlierKind.BURST,
        "eyeblink": OutlierKind.EYEBLINK,
    }
    if d["kind"] not in kind_map:
        raise ConfigError(f"unknown outlier kind {d['kind']!r}")
    return OutlierSpec(kind_map[d["kind"]], float(d["c"]), d.get("t_star"))


def _estimator_from_json(d: dict) -> EstimatorSpec:
    _require_keys(d, ["kind"], ["alpha", "psi_mult"], "estimator")
    return EstimatorSpec(d["kind"], alpha=d.get("alpha", 0.5), psi_mult=d.get("psi_mult", 1.345))


def load_experiment_config(path_or_preset: str) -> dict:
    """Load a config file, falling back to a bundled preset name."""
    if os.path.exists(path_or_preset):
        with open(path_or_preset) as fh:
            return json.load(fh)
    name = path_or_preset if path_or_preset.endswith(".json") else path_or_preset + ".json"
    ref = resources.files("ahspec").joinpath("presets", name)
    if ref.is_file():
        return json.loads(ref.read_text())
    raise ConfigError(f"no such config file or preset: {path_or_preset}")


def run_power_experiment(cfg: dict, threads: int, out_dir: str):
    _require_keys(
        cfg,
        ["kind", "seed", "reps", "n", "model", "scenarios", "estimators", "levels"],
        where="power config",
    )
    estimators = [_estimator_from_json(e) for e in cfg["estimators"]]
    levels = [float(lv) for lv in cfg["levels"]]
    base_seed = int(cfg["seed"])
    tables = []
    for i, sc in enumerate(cfg["scenarios"]):
        _require_keys(sc, ["name"], ["outlier"], f"scenario {i}")
        outlier = _outlier_from_json(sc["outlier"]) if "outlier" in sc else None
        model = _model_from_json(cfg["model"], int(cfg["n"]), base_seed)
        # Same series seeds across scenarios: differences are paired.
        tables.append(
            power_study(
                model,
                estimators,
                reps=int(cfg["reps"]),
                levels=levels,
                seed=base_seed,
                outlier=outlier,
                threads=threads,
                scenario=sc["name"],
            )
        )
    labels = tables[0].estimators
    rows = ["scenario,level," + ",".join(labels)]
    payload = {"kind": "power", "reps": int(cfg["reps"]), "levels": levels,
               "estimators": labels, "scenarios": []}
    clean = tables[0]
    for tb in tables:
        entry = {"name": tb.scenario, "pd": {}, "se": {}}
        for j, lv in enumerate(levels):
            rows.append(
                f"{tb.scenario},{lv:g},"
                + ",".join(f"{tb.pd[i, j]:.4f}" for i in range(len(labels)))
            )
        for i, lab in enumerate(labels):
            entry["pd"][lab] = [float(v) for v in tb.pd[i]]
            entry["se"][lab] = [float(v) for v in tb.se[i]]
        payload["scenarios"].append(entry)
    # Difference rows: clean-scenario PD minus contaminated PD.
    for tb in tables[1:]:
        for j, lv in enumerate(levels):
            rows.append(
                f"diff_{tb.scenario},{lv:g},"
                + ",".join(f"{clean.pd[i, j] - tb.pd[i, j]:.4f}" for i in range(len(labels)))
            )
    atomic_write_text(os.path.join(out_dir, "power_table.csv"), "\n".join(rows) + "\n")
    atomic_write_text(
        os.path.join(out_dir, "power_table.json"), json.dumps(payload, indent=1) + "\n"
    )


def run_averaged_experiment(cfg: dict, threads: int, out_dir: str):
    _require_keys(
        cfg,
        ["kind", "seed", "reps", "n", "model", "alphas"],
        ["psi_mult", "smooth_bw", "normalize"],
        "averaged_periodogram config",
    )
    n = int(cfg["n"])
    alphas = default_alpha_grid() if cfg["alphas"] == "grid" else [float(a) for a in cfg["alphas"]]
    psi_mult = float(cfg.get("psi_mult", DEFAULT_PSI_MULT))
    bw = cfg.get("smooth_bw") or default_smooth_bandwidth(n)
    children = np.random.SeedSequence(int(cfg["seed"])).spawn(int(cfg["reps"]))

    def series():
        for child in children:
            yield generate(_model_from_json(cfg["model"], n, child))

    m = averaged_ahp(
        series(), alphas, psi_mult, smooth_bw=int(bw),
        normalize_each=bool(cfg.get("normalize", True)),
    )
    m.to_csv(os.path.join(out_dir, "averaged_periodogram.csv"))
    m.to_json(os.path.join(out_dir, "averaged_periodogram.json"))
    if len(m.alphas) <= 8:
        report.save_periodogram_lines(m, os.path.join(out_dir, "averaged_periodogram.svg"))
    else:
        report.save_alpha_heatmap(m, os.path.join(out_dir, "averaged_periodogram.svg"))


def run_garch_experiment(cfg: dict, threads: int, out_dir: str):
    _require_keys(
        cfg,
        ["kind", "seed", "reps", "n", "alphas"],
        ["garch", "psi_mult", "smooth_bw"],
        "garch_ahs config",
    )
    g = cfg.get("garch", {})
    _require_keys(g, [], ["omega0", "arch", "garch"], "garch params")
    gc = GarchConfig(g.get("omega0", 1e-6), g.get("arch", 0.49), g.get("garch", 0.49))
    n = int(cfg["n"])
    psi_mult = float(cfg.get("psi_mult", DEFAULT_PSI_MULT))
    bw = int(cfg.get("smooth_bw") or default_smooth_bandwidth(n))
    cols = []
    est = None
    for a in cfg["alphas"]:
        est = ahs_theoretical_garch(
            gc,
            AHParams(float(a), psi_mult, PsiMode.STD_MULTIPLE),
            reps=int(cfg["reps"]),
            n=n,
            seed=int(cfg["seed"]),
            smooth_bw=bw,
        )
        cols.append(est.values[:, 0])
    from .periodogram import PeriodogramMatrix

    m = PeriodogramMatrix(
        freqs=est.freqs,
        alphas=np.asarray([float(a) for a in cfg["alphas"]]),
        psi_resolved=est.psi_resolved,
        values=np.column_stack(cols),
        normalized=False,
        n=n,
    )
    m.to_csv(os.path.join(out_dir, "garch_ahs.csv"))
    m.to_json(os.path.join(out_dir, "garch_ahs.json"))
    report.save_periodogram_lines(m, os.path.join(out_dir, "garch_ahs.svg"))


def run_spectrogram_experiment(cfg: dict, threads: int, out_dir: str):
    _require_keys(
        cfg,
        ["kind", "seed", "n", "model", "window", "overlap", "alpha"],
        ["psi_mult", "outlier"],
        "spectrogram config",
    )
    model = _model_from_json(cfg["model"], int(cfg["n"]), int(cfg["seed"]))
    y = generate(model)
    if "outlier" in cfg:
        y = inject_outliers(y, _outlier_from_json(cfg["outlier"]))
    p = AHParams(
        float(cfg["alpha"]),
        float(cfg.get("psi_mult", DEFAULT_PSI_MULT)),
        PsiMode.STD_MULTIPLE,
    )
    robust = ahp_spectrogram(y, int(cfg["window"]), int(cfg["overlap"]), p)
    plain = ahp_spectrogram(y, int(cfg["window"]), int(cfg["overlap"]), None)
    robust.to_csv(os.path.join(out_dir, "spectrogram_ahp.csv"))
    plain.to_csv(os.path.join(out_dir, "spectrogram_pg.csv"))
    report.save_spectrogram_heatmap(robust, os.path.join(out_dir, "spectrogram_ahp.svg"))
    report.save_spectrogram_heatmap(plain, os.path.join(out_dir, "spectrogram_pg.svg"))


_EXPERIMENT_RUNNERS = {
    "power": run_power_experiment,
    "averaged_periodogram": run_averaged_experiment,
    "garch_ahs": run_garch_experiment,
    "spectrogram_demo": run_spectrogram_experiment,
}


def cmd_experiment(args) -> int:
    cfg = load_experiment_config(args.config)
    if not isinstance(cfg, dict) or "kind" not in cfg:
        raise ConfigError("experiment config must be a JSON object with a 'kind' key")
    runner = _EXPERIMENT_RUNNERS.get(cfg["kind"])
    if runner is None:
        raise ConfigError(
            f"unknown experiment kind {cfg['kind']!r}; "
            f"expected one of {sorted(_EXPERIMENT_RUNNERS)}"
        )
    os.makedirs(args.out_dir, exist_ok=True)
    runner(cfg, _resolve_threads(args), args.out_dir)
    return EXIT_OK


# ---------------------------------------------------------------------------
# spectrogram

def cmd_spectrogram(args) -> int:
    y = read_series_csv(args.input)
    if args.log_input:
        if np.any(y <= 0):
            raise DataError("--log-input requires strictly positive samples")
        y = np.log(y)
    if args.estimator == "pg":
        p = None
    else:
        alpha = args.alpha if args.alpha is not None else 0.8
        psi_mult = args.psi_mult if args.psi_mult is not None else DEFAULT_PSI_MULT
        p = AHParams(alpha, psi_mult, PsiMode.STD_MULTIPLE)
    try:
        result = ahp_spectrogram(y, args.window, args.overlap, p)
    except ValueError as e:
        raise DataError(str(e))
    os.makedirs(args.out_dir, exist_ok=True)
    result.to_csv(os.path.join(args.out_dir, "spectrogram.csv"))
    result.to_json(os.path.join(args.out_dir, "spectrogram.json"))
    report.save_spectrogram_heatmap(result, os.path.join(args.out_dir, "spectrogram.svg"))
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ahspec", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out-dir", default=".", help="output directory")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--threads", type=int, default=None,
                        help="worker threads (AHP_THREADS env var as fallback)")

    a = sub.add_parser("analyze", help="periodogram + Fisher test of a CSV series")
    a.add_argument("input", help="CSV with one value column (or index,value)")
    a.add_argument("--estimator", choices=["ahp", "pg", "ep", "hp", "qp-approx"], default="ahp")
    a.add_argument("--alpha", type=float, default=None)
    a.add_argument("--alpha-grid", nargs="?", const="default", default=None,
                   help="start:stop:step, or no value for the default 0.05..0.95 grid")
    a.add_argument("--psi", type=float, default=None, help="absolute threshold")
    a.add_argument("--psi-mult", type=float, default=None,
                   help="threshold as a multiple of the sample std (default 1.345)")
    a.add_argument("--normalize", action="store_true")
    a.add_argument("--smooth-bw", type=int, default=None)
    a.add_argument("--fisher-level", type=float, action="append", default=None)
    a.add_argument("--log-input", action="store_true")
    common(a)
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("simulate", help="emit a synthetic series to CSV")
    s.add_argument("--model", choices=sorted(_MODEL_CLI_KINDS), required=True)
    s.add_argument("--n", type=int, default=200)
    s.add_argument("--phi1", type=float, default=0.9)
    s.add_argument("--phi2", type=float, default=-0.9)
    s.add_argument("--outlier-type", type=int, choices=[1, 2, 3], default=None)
    s.add_argument("--outlier-c", type=float, default=30.0)
    common(s)
    s.set_defaults(func=cmd_simulate)

    e = sub.add_parser("experiment", help="run a JSON-configured experiment")
    e.add_argument("config", help="config file path or bundled preset name")
    common(e)
    e.set_defaults(func=cmd_experiment)

    g = sub.add_parser("spectrogram", help="sliding-window spectrogram of a CSV series")
    g.add_argument("input")
    g.add_argument("--window", type=int, default=400)
    g.add_argument("--overlap", type=int, default=200)
    g.add_argument("--estimator", choices=["ahp", "pg"], default="ahp")
    g.add_argument("--alpha", type=float, default=None)
    g.add_argument("--psi-mult", type=float, default=None)
    g.add_argument("--log-input", action="store_true")
    common(g)
    g.set_defaults(func=cmd_spectrogram)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
