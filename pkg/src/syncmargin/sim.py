"""Forward simulation of coupled stochastic agents and empirical
mean-square synchronization statistics over Monte Carlo ensembles.

One trajectory step realizes fresh link perturbations (one i.i.d. draw per
stochastic edge) and fresh additive noise, applies the sector nonlinearity
componentwise, and advances all agents at once:

    x_next = (a I - g (L + L_R)) x - phi(x) + v.

Runs are seeded from (master seed, run index), so an ensemble is a pure
function of its config regardless of scheduling.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .graph import NetworkGraph, laplacian_split
from .margin import DynamicsParams

OVERFLOW_GUARD = 1e100
FLOOR_WINDOW_FRACTION = 0.2
MIN_FIT_POINTS = 10

XI_DISTRIBUTIONS = ("gaussian", "uniform_symmetric")
PHI_KINDS = ("scaled_tanh", "saturation", "zero")


@dataclass(frozen=True)
class NonlinearityKind:
    """Componentwise sector nonlinearity: monotone, zero at zero, with
    Lipschitz constant at most 2/delta."""

    kind: str
    delta: float

    def __post_init__(self):
        if self.kind not in PHI_KINDS:
            raise ValueError(f"unknown nonlinearity {self.kind!r}, expected one of {PHI_KINDS}")
        if not self.delta > 1:
            raise ValueError(f"sector parameter delta must be > 1, got {self.delta}")

    def __call__(self, x: np.ndarray) -> np.ndarray:
        if self.kind == "scaled_tanh":
            return (2.0 / self.delta) * np.tanh(x)
        if self.kind == "saturation":
            return (2.0 / self.delta) * np.clip(x, -1.0, 1.0)
        return np.zeros_like(x)


@dataclass(frozen=True)
class SimConfig:
    graph: NetworkGraph
    params: DynamicsParams
    phi: NonlinearityKind
    horizon: int
    n_runs: int
    rng_seed: int
    xi_distribution: str = "gaussian"
    initial_spread: float = 1.0

    def __post_init__(self):
        if self.horizon < 1:
            raise ValueError(f"horizon must be >= 1, got {self.horizon}")
        if self.n_runs < 1:
            raise ValueError(f"n_runs must be >= 1, got {self.n_runs}")
        if self.xi_distribution not in XI_DISTRIBUTIONS:
            raise ValueError(
                f"unknown xi distribution {self.xi_distribution!r}, "
                f"expected one of {XI_DISTRIBUTIONS}"
            )
        if self.initial_spread < 0:
            raise ValueError(f"initial_spread must be >= 0, got {self.initial_spread}")


@dataclass(frozen=True)
class EnsembleResult:
    """Per-timestep ensemble statistics of the pairwise mean-square error.

    fitted_beta is None when the transient window is too short to fit
    (fewer than 10 points above ten times the floor). Diverged runs are
    excluded from the statistics and counted.
    """

    mse_mean: np.ndarray
    mse_p95: np.ndarray
    fitted_beta: float | None
    fitted_floor: float
    diverged_runs: int


class _Workspace:
    """Precomputed dense operators for stepping one graph/params pair."""

    def __init__(self, graph: NetworkGraph, params: DynamicsParams):
        split = laplacian_split(graph)
        n = graph.n_nodes
        self.n = n
        self.g = params.g
        self.omega = math.sqrt(params.omega2)
        self.A_nom = params.a * np.eye(n) - params.g * split.L
        unc = graph.uncertain_edges
        self.B = np.zeros((n, len(unc)))
        self.sigma = np.zeros(len(unc))
        for col, e in enumerate(unc):
            self.B[e.i, col] = 1.0
            self.B[e.j, col] = -1.0
            self.sigma[col] = math.sqrt(e.sigma2)


def _draw_xi(rng: np.random.Generator, sigma: np.ndarray, distribution: str) -> np.ndarray:
    if distribution == "gaussian":
        return rng.standard_normal(sigma.size) * sigma
    # uniform on +-sqrt(3)*sigma keeps the variance at sigma^2
    return rng.uniform(-1.0, 1.0, sigma.size) * (math.sqrt(3.0) * sigma)


def _step(x: np.ndarray, ws: _Workspace, phi: NonlinearityKind,
          rng: np.random.Generator, distribution: str) -> np.ndarray:
    x_next = ws.A_nom @ x - phi(x)
    if ws.sigma.size:
        xi = _draw_xi(rng, ws.sigma, distribution)
        x_next -= ws.g * (ws.B @ (xi * (ws.B.T @ x)))
    if ws.omega > 0:
        x_next += rng.standard_normal(ws.n) * ws.omega
    return x_next


def step(
    state: np.ndarray,
    graph: NetworkGraph,
    params: DynamicsParams,
    phi: NonlinearityKind,
    rng: np.random.Generator,
    xi_distribution: str = "gaussian",
) -> np.ndarray:
    """Advance all agents one timestep under one fresh link-noise realization.

    Divergence is not raised here; callers watch for non-finite components
    or magnitudes beyond the overflow guard.
    """
    state = np.asarray(state, dtype=np.float64)
    if not np.all(np.isfinite(state)):
        raise ValueError("state must be finite")
    ws = _Workspace(graph, params)
    return _step(state, ws, phi, rng, xi_distribution)


def mse_pairwise(state: np.ndarray) -> float:
    """Pairwise mean-square error (1/2N) sum_{i != j} (x_i - x_j)^2.

    Computed in O(N) as sum(x^2) - sum(x)^2/N, which equals the double sum
    because the centering projector is I - ones/N. Clamped at zero against
    cancellation roundoff.
    """
    state = np.asarray(state, dtype=np.float64)
    s = state.sum()
    return max(float(state @ state - s * s / state.size), 0.0)


def _run_one(cfg: SimConfig, ws: _Workspace, run_index: int) -> tuple[np.ndarray, bool]:
    rng = np.random.default_rng(np.random.SeedSequence((cfg.rng_seed, run_index)))
    x = rng.uniform(-cfg.initial_spread, cfg.initial_spread, ws.n)
    errors = np.full(cfg.horizon + 1, np.nan)
    errors[0] = mse_pairwise(x)
    for t in range(1, cfg.horizon + 1):
        x = _step(x, ws, cfg.phi, rng, cfg.xi_distribution)
        if not np.all(np.isfinite(x)) or np.abs(x).max() > OVERFLOW_GUARD:
            return errors, True
        errors[t] = mse_pairwise(x)
    return errors, False


def _fit_decay(mse_mean: np.ndarray, floor: float) -> float | None:
    """Exponential rate from a log-linear fit over the transient window."""
    e0 = mse_mean[0]
    cutoff = max(10.0 * floor, 1e-14 * e0)
    below = np.nonzero(mse_mean < cutoff)[0]
    end = int(below[0]) if below.size else mse_mean.size
    window = mse_mean[:end]
    window = window[np.isfinite(window) & (window > 0)]
    if window.size < MIN_FIT_POINTS:
        return None
    slope = np.polyfit(np.arange(window.size), np.log(window), 1)[0]
    return float(np.exp(slope))


def run_ensemble(cfg: SimConfig, threads: int = 1) -> EnsembleResult:
    """Simulate n_runs independent trajectories and aggregate their errors.

    Each run draws its own generator from (rng_seed, run index), so the
    result does not depend on scheduling. When every run diverges the
    statistics are NaN and diverged_runs equals n_runs; nothing is raised.
    """
    ws = _Workspace(cfg.graph, cfg.params)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(lambda r: _run_one(cfg, ws, r), range(cfg.n_runs)))
    else:
        outcomes = [_run_one(cfg, ws, r) for r in range(cfg.n_runs)]

    diverged = sum(1 for _, bad in outcomes if bad)
    kept = np.array([e for e, bad in outcomes if not bad])
    if kept.size == 0:
        nan_row = np.full(cfg.horizon + 1, np.nan)
        return EnsembleResult(
            mse_mean=nan_row, mse_p95=nan_row.copy(),
            fitted_beta=None, fitted_floor=float("nan"), diverged_runs=diverged,
        )
    mse_mean = kept.mean(axis=0)
    mse_p95 = np.percentile(kept, 95, axis=0)
    tail = max(1, math.ceil(FLOOR_WINDOW_FRACTION * (cfg.horizon + 1)))
    floor = float(mse_mean[-tail:].mean())
    beta = _fit_decay(mse_mean, floor)
    return EnsembleResult(
        mse_mean=mse_mean, mse_p95=mse_p95,
        fitted_beta=beta, fitted_floor=floor, diverged_runs=diverged,
    )
