"""Monte-Carlo experiment harness.

Runs seeded ensembles of the filter implementations over EIV streams,
reduces them to MSD learning curves, steady-state sweeps and stability
curves, and writes diff-stable CSV. Replica r always uses seed
base_seed + r; ensemble means are reduced by a balanced tree so that an
ensemble of 2k runs is exactly the average of its two disjoint k-run
halves.
"""

from __future__ import annotations

import csv
import json
import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from . import kernels
from .dcd import DcdParams
from .errors import ConfigError
from .signals import EivModel, StreamConfig, random_covariance, reference_system, sample_arrays
from .stats import lambda_from_p
from .theory import TheoryModel, predicted_msd_curve, stability_lambda_bound, steady_state_msd

KNOWN_ALGOS = ("dcd_rtls", "exact_rtls", "rls", "bcrls")


@dataclass(frozen=True)
class ExperimentConfig:
    L: int = 8
    h_source: str = "reference"  # "reference" (fixed 8-tap system) or "random"
    eta: float = 0.01
    gamma: float = 1.0
    p_exponent: int = 10
    dcd: DcdParams = field(default_factory=lambda: DcdParams(n_max=1, m_bits=16, h_range=1.0))
    runs: int = 200
    steps: int = 3000
    algos: tuple[str, ...] = ("dcd_rtls", "exact_rtls")
    base_seed: int = 2024
    delta: float = 1e-2
    structured: bool = False

    def __post_init__(self):
        if self.runs < 1 or self.steps < 1:
            raise ConfigError("runs and steps must be >= 1")
        if self.h_source not in ("reference", "random"):
            raise ConfigError("h_source must be 'reference' or 'random'")
        for a in self.algos:
            if a not in KNOWN_ALGOS:
                raise ConfigError(f"unknown algorithm {a!r}; expected one of {KNOWN_ALGOS}")
        if self.h_source == "reference" and self.L != 8:
            raise ConfigError("the reference system has L = 8 taps")

    @property
    def lam(self) -> float:
        return lambda_from_p(self.p_exponent)

    @property
    def xi(self) -> float:
        return self.eta * self.gamma


def config_from_json(path: str | None = None, **overrides) -> ExperimentConfig:
    """Build a config from an optional JSON key-value document; keyword
    overrides (CLI flags) win over file keys. The "dcd" key maps to the
    solver triple {"n_max": ..., "m_bits": ..., "h_range": ...}."""
    raw: dict = {}
    if path is not None:
        with open(path) as fh:
            raw = json.load(fh)
    raw.update({k: v for k, v in overrides.items() if v is not None})
    dcd = raw.pop("dcd", None)
    if isinstance(dcd, dict):
        dcd = DcdParams(**dcd)
    if dcd is None:
        dcd = DcdParams(n_max=1, m_bits=16, h_range=1.0)
    if "algos" in raw and not isinstance(raw["algos"], tuple):
        raw["algos"] = tuple(raw["algos"])
    return ExperimentConfig(dcd=dcd, **raw)


def build_model(cfg: ExperimentConfig) -> EivModel:
    """Ground truth for a config: reference or seeded-random h; seeded
    random covariance (identity when shift-structured)."""
    if cfg.h_source == "reference":
        h = reference_system()
    else:
        rng = np.random.default_rng(cfg.base_seed ^ 0x5EED)
        h = rng.standard_normal(cfg.L) / math.sqrt(cfg.L)
    if cfg.structured:
        cov, q, f = np.eye(cfg.L), np.eye(cfg.L), np.ones(cfg.L)
    else:
        cov, q, f = random_covariance(cfg.L, cfg.base_seed)
    return EivModel(h=h, R=cov, eta=cfg.eta, xi=cfg.xi, Q=q, f=f)


def theory_model(cfg: ExperimentConfig, model: EivModel) -> TheoryModel:
    return TheoryModel(
        R=model.R, h=model.h, eta=model.eta, xi=model.xi, lam=cfg.lam,
        gamma=cfg.gamma if model.eta > 0 else None,
    )


@dataclass(frozen=True)
class MsdCurve:
    n: np.ndarray
    msd_db: np.ndarray
    algo: str
    theory_db: np.ndarray | None = None


def _run_algo(algo: str, X, y, cfg: ExperimentConfig, model: EivModel):
    lam = cfg.lam
    if algo == "dcd_rtls":
        return kernels.dcd_rtls_run(
            X, y, lam, cfg.gamma, cfg.delta,
            cfg.dcd.n_max, cfg.dcd.m_bits, cfg.dcd.h_range, cfg.structured,
        )
    if algo == "exact_rtls":
        return kernels.exact_rtls_run(X, y, lam, cfg.gamma, cfg.delta)
    if algo == "rls":
        return kernels.rls_run(X, y, lam, cfg.delta)
    if algo == "bcrls":
        return kernels.bcrls_run(X, y, lam, cfg.delta, model.eta)
    raise ConfigError(f"unknown algorithm {algo!r}")


def _balanced_mean(parts: list[np.ndarray]) -> np.ndarray:
    """Mean by balanced binary reduction. Equal-size halves combine as
    0.5*(a + b), so a 2k-run mean is bit-exactly the average of its two
    k-run halves."""
    n = len(parts)
    if n == 1:
        return parts[0]
    mid = n // 2
    a = _balanced_mean(parts[:mid])
    b = _balanced_mean(parts[mid:])
    if mid == n - mid:
        return 0.5 * (a + b)
    return (mid * a + (n - mid) * b) / n


def ensemble_sq_dev(cfg: ExperimentConfig, model: EivModel, algo: str) -> np.ndarray:
    """Ensemble-mean squared deviation ||w_n - h||^2 per step."""
    parts = []
    failures = 0
    for r in range(cfg.runs):
        stream = StreamConfig(
            shift_structured=cfg.structured, seed=cfg.base_seed + r, length=cfg.steps
        )
        _, x_noisy, _, y_noisy = sample_arrays(model, stream)
        W, status, _ = _run_algo(algo, x_noisy, y_noisy, cfg, model)
        if status != kernels.OK:
            failures += 1
            continue
        diff = W - model.h
        parts.append(np.einsum("ij,ij->i", diff, diff))
    if failures:
        if failures >= max(1, math.ceil(0.01 * cfg.runs)) or not parts:
            raise ArithmeticError(
                f"{failures}/{cfg.runs} replicas failed for {algo}; aborting"
            )
        warnings.warn(f"excluded {failures} failed replica(s) for {algo}")
    return _balanced_mean(parts)


def ensemble_final_weights(cfg: ExperimentConfig, model: EivModel, algo: str, window: int = 1):
    """Per-replica weight vectors (runs x L) for bias studies: the final
    estimate when window = 1, else the time average of the last `window`
    steps (a lower-variance estimate of the same stationary mean)."""
    out = np.empty((cfg.runs, model.L))
    for r in range(cfg.runs):
        stream = StreamConfig(
            shift_structured=cfg.structured, seed=cfg.base_seed + r, length=cfg.steps
        )
        _, x_noisy, _, y_noisy = sample_arrays(model, stream)
        W, status, _ = _run_algo(algo, x_noisy, y_noisy, cfg, model)
        if status != kernels.OK:
            raise ArithmeticError(f"replica {r} failed for {algo}")
        out[r] = W[-1] if window <= 1 else W[-window:].mean(axis=0)
    return out


def _to_db(values: np.ndarray) -> np.ndarray:
    return 10.0 * np.log10(np.maximum(values, 1e-300))


def run_learning_curves(cfg: ExperimentConfig) -> list[MsdCurve]:
    """Ensemble MSD learning curve per configured algorithm, with the
    transient theory prediction attached to the RTLS variants."""
    model = build_model(cfg)
    overlay = None
    if cfg.eta > 0 or cfg.xi > 0:
        overlay = _to_db(predicted_msd_curve(theory_model(cfg, model), cfg.steps))
    n = np.arange(1, cfg.steps + 1)
    curves = []
    for algo in cfg.algos:
        msd = ensemble_sq_dev(cfg, model, algo)
        theory = overlay if algo in ("dcd_rtls", "exact_rtls") else None
        curves.append(MsdCurve(n=n, msd_db=_to_db(msd), algo=algo, theory_db=theory))
    return curves


def recommended_sweep_steps(lam: float) -> int:
    """Enough steps that the final 10% window sits past the transient."""
    return math.ceil(20.0 / (1.0 - lam))


def run_steady_state_sweep(cfg: ExperimentConfig, eta_grid) -> list[dict]:
    """Empirical vs predicted steady-state MSD of DCD-RTLS over a grid of
    input-noise variances. The empirical value averages the final 10% of
    steps across the ensemble."""
    eta_grid = list(eta_grid)
    if any(e <= 0 for e in eta_grid) or sorted(eta_grid) != eta_grid:
        raise ConfigError("eta_grid must be positive and sorted")
    rows = []
    window = max(1, cfg.steps // 10)
    for eta in eta_grid:
        point_cfg = replace(cfg, eta=eta)
        model = build_model(point_cfg)
        msd = ensemble_sq_dev(point_cfg, model, "dcd_rtls")
        empirical = float(np.mean(msd[-window:]))
        theory = steady_state_msd(theory_model(point_cfg, model))
        rows.append(
            {
                "eta": eta,
                "gamma": cfg.gamma,
                "lambda": cfg.lam,
                "empirical_db": float(_to_db(np.array([empirical]))[0]),
                "theory_db": float(_to_db(np.array([theory]))[0]),
            }
        )
    return rows


def run_stability_curve(R: np.ndarray, eta_grid) -> list[dict]:
    """The mean-square-stability lower bound on the forgetting factor as a
    function of the input-noise variance."""
    L = R.shape[0]
    rows = []
    for eta in eta_grid:
        m = TheoryModel(R=R, h=np.zeros(L), eta=float(eta), xi=0.0, lam=0.5, gamma=None)
        rows.append({"eta": float(eta), "lambda_bound": stability_lambda_bound(m)})
    return rows


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def write_curves_csv(curves: list[MsdCurve], path: str) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "algo", "msd_db", "theory_db"])
        for c in curves:
            theory = c.theory_db if c.theory_db is not None else [None] * len(c.n)
            for n, m, t in zip(c.n, c.msd_db, theory):
                writer.writerow([n, c.algo, _fmt(float(m)), _fmt(float(t)) if t is not None else ""])


def write_rows_csv(rows: list[dict], path: str) -> None:
    if not rows:
        with open(path, "w", newline="") as fh:
            csv.writer(fh)
        return
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(rows[0].keys()))
        for row in rows:
            writer.writerow([_fmt(v) for v in row.values()])
