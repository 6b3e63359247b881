"""Finite-dimensional Monte Carlo: instance generation, LASSO solving, metrics.

Instances follow the generative model y = H x0 + z where only a noisy version
A = gamma H + eps Omega of the measurement matrix is available to the solver.
The LASSO (1/2)||y - A x||^2 + lam ||x||_1 is solved by accelerated proximal
gradient with adaptive restart.  Trials use deterministically derived
per-trial random substreams, so results are reproducible bit for bit
regardless of execution order or worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .predictor import ModelConfig
from .prior import Prior, sample_on_support

__all__ = [
    "Instance",
    "LassoResult",
    "TrialResult",
    "EmpiricalReport",
    "round_count",
    "generate_instance",
    "solve_lasso",
    "empirical_metrics",
    "run_trials",
]

_ASSEMBLY_TOL = 1e-12


def round_count(x: float) -> int:
    """Round a nonnegative real to the nearest integer, half away from zero."""
    return int(math.floor(x + 0.5))


@dataclass(frozen=True)
class Instance:
    """One simulated problem: ground truth, matrices, observations, support."""

    x0: np.ndarray
    H: np.ndarray
    A: np.ndarray
    y: np.ndarray
    support: np.ndarray


@dataclass(frozen=True)
class LassoResult:
    x_hat: np.ndarray
    iters: int
    kkt_residual: float
    converged: bool


@dataclass(frozen=True)
class TrialResult:
    mse: float
    phi_on: float
    phi_off: float
    solver_iters: int
    kkt_residual: float
    converged: bool


@dataclass(frozen=True)
class EmpiricalReport:
    """Per-trial results plus their means and standard errors for one cell."""

    trials: tuple[TrialResult, ...]
    mean_mse: float
    se_mse: float
    mean_phi_on: float
    se_phi_on: float
    mean_phi_off: float
    se_phi_off: float
    n: int
    seed: int

    @property
    def nonconverged_trials(self) -> int:
        return sum(1 for t in self.trials if not t.converged)


def generate_instance(
    cfg: ModelConfig, p: Prior, n: int, rng: np.random.Generator
) -> Instance:
    """Draw one problem instance of size n under the additive-uncertainty model.

    The support has exactly round(kappa * n) entries placed uniformly; its
    values are drawn from the prior conditioned on being nonzero.  H and the
    error matrix have iid centered Gaussian entries of variance 1/n.
    """
    if n < 8:
        raise ValueError(f"n must be at least 8, got {n}")
    m = round_count(cfg.delta * n)
    k = round_count(cfg.kappa * n)
    if k < 1 or k >= n:
        raise ValueError(f"support size k={k} out of range for n={n}")

    support = np.sort(rng.choice(n, size=k, replace=False))
    x0 = np.zeros(n)
    x0[support] = sample_on_support(p, rng, k)

    scale = 1.0 / math.sqrt(n)
    H = rng.normal(0.0, scale, size=(m, n))
    omega = rng.normal(0.0, scale, size=(m, n))
    z = rng.normal(0.0, math.sqrt(cfg.sigma_z2), size=m)

    eps = math.sqrt(cfg.eps2)
    A = cfg.gamma * H + eps * omega
    y = H @ x0 + z

    if np.max(np.abs(A - (cfg.gamma * H + eps * omega))) > _ASSEMBLY_TOL:
        raise RuntimeError("instance assembly violated A = gamma*H + eps*Omega")
    if np.max(np.abs(y - (H @ x0 + z))) > _ASSEMBLY_TOL:
        raise RuntimeError("instance assembly violated y = H*x0 + z")
    return Instance(x0=x0, H=H, A=A, y=y, support=support)


def _spectral_norm_sq(A: np.ndarray) -> float:
    """Largest singular value squared, by power iteration on A^T A."""
    n = A.shape[1]
    v = np.full(n, 1.0 / math.sqrt(n))
    s = 0.0
    s_prev = 0.0
    for _ in range(30):
        w = A.T @ (A @ v)
        s = float(np.linalg.norm(w))
        if s == 0.0:
            return 0.0
        v = w / s
        if abs(s - s_prev) <= 1e-10 * s:
            break
        s_prev = s
    return s


def _kkt_residual(A: np.ndarray, y: np.ndarray, x: np.ndarray, lam: float) -> float:
    g = A.T @ (A @ x - y)
    zero = x == 0.0
    r_zero = float(np.max(np.maximum(np.abs(g[zero]) - lam, 0.0))) if zero.any() else 0.0
    active = ~zero
    r_active = float(np.max(np.abs(g[active] + lam * np.sign(x[active])))) if active.any() else 0.0
    return max(r_zero, r_active)


def solve_lasso(
    A: np.ndarray,
    y: np.ndarray,
    lam: float,
    tol: float = 1e-10,
    max_iter: int = 20000,
) -> LassoResult:
    """Minimize (1/2)||y - A x||^2 + lam ||x||_1 by accelerated proximal gradient.

    Step size 1/L with L the squared spectral norm from power iteration; the
    proximal map is soft thresholding at lam/L.  Iterations stop once the
    relative objective change falls below tol and the KKT residual is within
    10*tol*lam; hitting max_iter with a larger residual flags the result as
    non-converged (it is still returned).
    """
    if lam <= 0.0:
        raise ValueError(f"lam must be positive, got {lam}")
    m, n = A.shape
    if y.shape != (m,):
        raise ValueError(f"y has shape {y.shape}, expected ({m},)")
    L = _spectral_norm_sq(A)
    if L == 0.0:
        raise ValueError("measurement matrix is identically zero")

    def objective(x: np.ndarray) -> float:
        r = y - A @ x
        return 0.5 * float(r @ r) + lam * float(np.abs(x).sum())

    kkt_gate = 10.0 * tol * lam
    x = np.zeros(n)
    w = x
    t = 1.0
    f_prev = objective(x)
    kkt = math.inf
    iters = 0
    for k in range(1, max_iter + 1):
        iters = k
        grad = A.T @ (A @ w - y)
        step = w - grad / L
        x_new = np.sign(step) * np.maximum(np.abs(step) - lam / L, 0.0)
        # adaptive restart: drop momentum when it points uphill
        if float((w - x_new) @ (x_new - x)) > 0.0:
            t = 1.0
        t_new = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * t * t))
        w = x_new + ((t - 1.0) / t_new) * (x_new - x)
        f = objective(x_new)
        small_change = abs(f_prev - f) <= tol * max(1.0, abs(f))
        x, t, f_prev = x_new, t_new, f
        if small_change:
            kkt = _kkt_residual(A, y, x, lam)
            if kkt <= kkt_gate:
                break
    if not math.isfinite(kkt) or iters == max_iter:
        kkt = _kkt_residual(A, y, x, lam)
    converged = not (iters == max_iter and kkt > kkt_gate)
    return LassoResult(x_hat=x, iters=iters, kkt_residual=kkt, converged=converged)


def empirical_metrics(
    x_hat: np.ndarray,
    inst: Instance,
    xi: float,
    solver: LassoResult | None = None,
) -> TrialResult:
    """Per-trial MSE and support-recovery rates at hard threshold xi."""
    if xi <= 0.0:
        raise ValueError(f"xi must be positive, got {xi}")
    n = inst.x0.shape[0]
    k = inst.support.shape[0]
    mse = float(np.sum((x_hat - inst.x0) ** 2)) / n
    off_mask = np.ones(n, dtype=bool)
    off_mask[inst.support] = False
    phi_on = float(np.count_nonzero(np.abs(x_hat[inst.support]) >= xi)) / k
    phi_off = float(np.count_nonzero(np.abs(x_hat[off_mask]) <= xi)) / (n - k)
    return TrialResult(
        mse=mse,
        phi_on=phi_on,
        phi_off=phi_off,
        solver_iters=solver.iters if solver is not None else 0,
        kkt_residual=solver.kkt_residual if solver is not None else 0.0,
        converged=solver.converged if solver is not None else True,
    )


def _trial_rng(seed: int, index: int) -> np.random.Generator:
    """Independent, deterministic random stream for one trial."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))


def _run_one(cfg: ModelConfig, p: Prior, n: int, xi: float, seed: int, index: int,
             tol: float, max_iter: int) -> TrialResult:
    rng = _trial_rng(seed, index)
    inst = generate_instance(cfg, p, n, rng)
    result = solve_lasso(inst.A, inst.y, cfg.lam, tol=tol, max_iter=max_iter)
    return empirical_metrics(result.x_hat, inst, xi, solver=result)


def _mean_se(values: np.ndarray) -> tuple[float, float]:
    mean = float(values.mean())
    se = float(values.std(ddof=1) / math.sqrt(values.size)) if values.size > 1 else 0.0
    return mean, se


def run_trials(
    cfg: ModelConfig,
    p: Prior,
    n: int,
    trials: int,
    xi: float,
    seed: int,
    workers: int = 1,
    tol: float = 1e-10,
    max_iter: int = 20000,
) -> EmpiricalReport:
    """Run independent trials and aggregate means and standard errors.

    Each trial owns a random substream derived from (seed, trial index), so
    the report is identical for any worker count or execution order.
    Non-converged solver runs are recorded, not dropped.
    """
    if trials < 1:
        raise ValueError(f"trials must be at least 1, got {trials}")
    if seed < 0:
        raise ValueError(f"seed must be nonnegative, got {seed}")
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(
                pool.map(
                    lambda i: _run_one(cfg, p, n, xi, seed, i, tol, max_iter),
                    range(trials),
                )
            )
    else:
        results = [_run_one(cfg, p, n, xi, seed, i, tol, max_iter) for i in range(trials)]

    mse = np.array([t.mse for t in results])
    on = np.array([t.phi_on for t in results])
    off = np.array([t.phi_off for t in results])
    mean_mse, se_mse = _mean_se(mse)
    mean_on, se_on = _mean_se(on)
    mean_off, se_off = _mean_se(off)
    return EmpiricalReport(
        trials=tuple(results),
        mean_mse=mean_mse,
        se_mse=se_mse,
        mean_phi_on=mean_on,
        se_phi_on=se_on,
        mean_phi_off=mean_off,
        se_phi_off=se_off,
        n=n,
        seed=seed,
    )
