"""
Monte Carlo estimation of downlink SINR and sum rate.

Realization ``r`` of a scenario draws everything it needs from
``derive_stream(seed, r)`` in a fixed order: the channel (or the user
AoDs), then the branch errors. Realizations are grouped into fixed-size
blocks that are evaluated with stacked linear algebra, possibly on several
threads. Block boundaries depend only on the realization index, and all
reductions run over full per-realization arrays in index order, so the
report is bitwise identical for any worker count.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import analytic
from .channel import LosConfig, iid_rayleigh, los_channel
from .errors import ArgumentError, MimoLabError, SimulationError
from .impairments import ImpairmentConfig, apply_impairments, sample_branch_errors
from .numerics import derive_stream
from .precoding import mf_precoder, zf_precoder_exact, zf_precoder_scaled

__all__ = [
    "MODELS",
    "PRECODERS",
    "ScenarioConfig",
    "RateReport",
    "instantaneous_sinr",
    "link_powers",
    "simulate_realization",
    "estimate_rates",
    "estimate_expected_sinr",
    "analytic_prediction",
    "default_workers",
]

MODELS = ("iid", "los")
PRECODERS = ("mf", "zf_exact", "zf_scaled")
ERROR_REDRAW = ("per_realization", "fixed")
ON_SINGULAR = ("raise", "skip")

BLOCK_SIZE = 256
# Stream index reserved for branch errors held fixed across realizations.
FIXED_ERROR_STREAM = (1 << 64) - 1


@dataclass(frozen=True)
class ScenarioConfig:
    """One Monte Carlo experiment.

    `mf_norm` selects how the MF precoder normalizes its columns (see
    `mf_precoder`); the simulations default to the exact per-user norm.

    `on_singular` decides what happens when the precoder cannot be built
    for a realization (e.g. two LoS users at nearly the same angle make the
    Gram matrix numerically singular). ``"raise"`` aborts with the
    realization index; ``"skip"`` drops it and counts it in the report.
    """

    M: int
    K: int
    snr_t_db: float
    model: str = "iid"
    precoder: str = "mf"
    impairments: ImpairmentConfig = field(default_factory=ImpairmentConfig)
    realizations: int = 1000
    seed: int = 0
    n0: float = 1.0
    los: LosConfig = field(default_factory=LosConfig)
    error_redraw: str = "per_realization"
    mf_norm: str = "exact"
    on_singular: str = "raise"

    def __post_init__(self):
        if self.M < 1 or self.K < 1:
            raise ArgumentError(f"invalid dimensions M={self.M}, K={self.K}")
        if self.model not in MODELS:
            raise ArgumentError(f"unknown channel model {self.model!r}")
        if self.precoder not in PRECODERS:
            raise ArgumentError(f"unknown precoder {self.precoder!r}")
        if self.error_redraw not in ERROR_REDRAW:
            raise ArgumentError(f"unknown error_redraw {self.error_redraw!r}")
        if self.mf_norm not in ("exact", "expected"):
            raise ArgumentError(f"unknown MF norm mode {self.mf_norm!r}")
        if self.on_singular not in ON_SINGULAR:
            raise ArgumentError(f"unknown on_singular policy {self.on_singular!r}")
        if self.realizations < 1:
            raise ArgumentError(f"realizations must be >= 1, got {self.realizations}")
        if self.precoder.startswith("zf") and self.M <= self.K:
            raise ArgumentError(f"{self.precoder} needs M > K, got M={self.M}, K={self.K}")
        if not self.n0 > 0:
            raise ArgumentError(f"n0 must be positive, got {self.n0}")

    @property
    def budget(self):
        return analytic.LinkBudget.from_db(self.snr_t_db, self.K, self.M, self.n0)

    @property
    def tx_power(self):
        return analytic.tx_power(self.budget)


@dataclass(frozen=True)
class RateReport:
    """Monte Carlo rate estimates with analytic predictions where available.

    Attributes
    ----------
    per_ue_rate : ndarray, shape (K,)
        Mean of ``log2(1 + gamma_k)`` over realizations.
    sum_rate : float
        Sum of `per_ue_rate`.
    sum_rate_stderr : float
        Sample std of per-realization sum rates over ``sqrt(realizations)``.
    expected_sinr : ndarray, shape (K,)
        Ratio-of-means SINR per user.
    mean_sinr : float
        Ratio-of-means SINR pooled over users.
    realizations : int
        Realizations that entered the averages.
    analytic_sinr, analytic_sum_rate : float or None
        Closed-form predictions (IID channel, MF or error-free ZF only).
    """

    per_ue_rate: np.ndarray
    sum_rate: float
    sum_rate_stderr: float
    expected_sinr: np.ndarray
    mean_sinr: float
    realizations: int
    analytic_sinr: Optional[float] = None
    analytic_sum_rate: Optional[float] = None
    skipped: int = 0


def link_powers(H, W, P):
    """Received useful and interference power per user.

    Returns
    -------
    signal, interference : ndarray, shape (..., K)
        ``P |h_k w_k|^2`` and ``P sum_{j != k} |h_k w_j|^2``.
    """
    G = np.asarray(H) @ np.asarray(W)
    G2 = G.real**2 + G.imag**2
    signal = np.diagonal(G2, axis1=-2, axis2=-1)
    interference = G2.sum(axis=-1) - signal
    return P * signal, P * np.maximum(interference, 0.0)


def instantaneous_sinr(H, W, P, N0):
    """Per-user SINR for one (or a stack of) channel realizations.

    Parameters
    ----------
    H : array_like, shape (..., K, M)
        True channel.
    W : array_like, shape (..., M, K)
        Precoder (built from whatever channel estimate the BS has).
    P, N0 : float
        Transmit power and noise power.
    """
    H = np.asarray(H)
    W = np.asarray(W)
    if H.shape[-1] != W.shape[-2] or H.shape[-2] != W.shape[-1]:
        raise ArgumentError(f"H {H.shape[-2:]} and W {W.shape[-2:]} are not conformable")
    if not (P > 0 and N0 > 0):
        raise ArgumentError("P and N0 must be positive")
    signal, interference = link_powers(H, W, P)
    return signal / (interference + N0)


def _draw_channel(scenario, stream):
    if scenario.model == "iid":
        return iid_rayleigh(scenario.M, scenario.K, stream)
    return los_channel(scenario.M, scenario.K, scenario.los, stream)


def _fixed_errors(scenario):
    if scenario.error_redraw != "fixed" or scenario.impairments.is_zero:
        return None
    return sample_branch_errors(scenario.M, scenario.impairments, derive_stream(scenario.seed, FIXED_ERROR_STREAM))


def _precode(scenario, H_est):
    if scenario.precoder == "mf":
        return mf_precoder(H_est, scenario.mf_norm, scenario.impairments.sigma_a_lin)
    if scenario.precoder == "zf_exact":
        return zf_precoder_exact(H_est)
    return zf_precoder_scaled(H_est)


def _draw_block(scenario, start, stop, fixed_eps):
    H = np.empty((stop - start, scenario.K, scenario.M), dtype=complex)
    eps = np.ones((stop - start, scenario.M), dtype=complex)
    for i, r in enumerate(range(start, stop)):
        stream = derive_stream(scenario.seed, r)
        H[i] = _draw_channel(scenario, stream)
        if fixed_eps is not None:
            eps[i] = fixed_eps
        else:
            eps[i] = sample_branch_errors(scenario.M, scenario.impairments, stream)
    return H, eps


def simulate_realization(scenario, r):
    """Single realization ``r``: true channel, estimate, precoder and SINR.

    Returns a dict with keys ``H``, ``H_est``, ``W``, ``sinr``.
    """
    H, eps = _draw_block(scenario, r, r + 1, _fixed_errors(scenario))
    H_est = apply_impairments(H, eps)
    W = _precode(scenario, H_est)
    sinr = instantaneous_sinr(H, W, scenario.tx_power, scenario.n0)
    return {"H": H[0], "H_est": H_est[0], "W": W[0], "sinr": sinr[0]}


def _run_block(scenario, start, stop, fixed_eps):
    H, eps = _draw_block(scenario, start, stop, fixed_eps)
    H_est = H if scenario.impairments.is_zero else apply_impairments(H, eps)
    ok = np.ones(stop - start, dtype=bool)
    try:
        W = _precode(scenario, H_est)
    except MimoLabError as exc:
        # fall back to one realization at a time to find the culprits
        W = np.zeros((stop - start, scenario.M, scenario.K), dtype=complex)
        for i in range(stop - start):
            try:
                W[i] = _precode(scenario, H_est[i])
            except MimoLabError as inner:
                if scenario.on_singular == "raise":
                    raise SimulationError(start + i, inner) from inner
                ok[i] = False
        if ok.all():
            raise SimulationError(start, exc) from exc
    signal, interference = link_powers(H, W, scenario.tx_power)
    return signal, interference, ok


def default_workers():
    """Worker count from ``MIMO_LAB_THREADS`` (default: CPU count)."""
    env = os.environ.get("MIMO_LAB_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise ArgumentError(f"MIMO_LAB_THREADS must be an integer, got {env!r}") from None
        return max(1, n)
    return os.cpu_count() or 1


def _simulate(scenario, workers=None):
    n = scenario.realizations
    K = scenario.K
    signal = np.empty((n, K))
    interference = np.empty((n, K))
    ok = np.empty(n, dtype=bool)
    fixed_eps = _fixed_errors(scenario)
    blocks = [(s, min(s + BLOCK_SIZE, n)) for s in range(0, n, BLOCK_SIZE)]

    def work(bounds):
        s, e = bounds
        signal[s:e], interference[s:e], ok[s:e] = _run_block(scenario, s, e, fixed_eps)

    workers = default_workers() if workers is None else max(1, int(workers))
    if workers == 1 or len(blocks) == 1:
        for b in blocks:
            work(b)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            # list() re-raises the first failure
            list(pool.map(work, blocks))
    if not ok.all():
        if not ok.any():
            raise SimulationError(0, MimoLabError("precoder failed for every realization"))
        signal, interference = signal[ok], interference[ok]
    return signal, interference, n - int(ok.sum())


def analytic_prediction(scenario):
    """Closed-form per-user SINR for `scenario`, or None if not available.

    Formulas exist for the IID channel with MF precoding (with or without
    branch errors) and for error-free ZF.
    """
    if scenario.model != "iid":
        return None
    budget = scenario.budget
    if scenario.precoder == "mf":
        return analytic.sinr_mf_impaired(budget, scenario.impairments)
    if scenario.impairments.is_zero:
        return analytic.sinr_zf(budget)
    return None


def estimate_rates(scenario, workers=None):
    """Monte Carlo per-user and sum rates for `scenario`.

    Parameters
    ----------
    scenario : ScenarioConfig
    workers : int, optional
        Thread count; defaults to `default_workers`. Does not affect results.

    Returns
    -------
    RateReport
    """
    signal, interference, skipped = _simulate(scenario, workers)
    n0 = scenario.n0
    sinr = signal / (interference + n0)
    rates = np.log2(1.0 + sinr)
    per_ue = rates.mean(axis=0)
    per_real = rates.sum(axis=1)
    n = len(per_real)
    stderr = float(per_real.std(ddof=1) / np.sqrt(n)) if n > 1 else float("nan")
    mean_sig = signal.mean(axis=0)
    mean_int = interference.mean(axis=0)
    pred = analytic_prediction(scenario)
    return RateReport(
        per_ue_rate=per_ue,
        sum_rate=float(np.sum(per_ue)),
        sum_rate_stderr=stderr,
        expected_sinr=mean_sig / (mean_int + n0),
        mean_sinr=float(mean_sig.mean() / (mean_int.mean() + n0)),
        realizations=n,
        analytic_sinr=pred,
        analytic_sum_rate=None if pred is None else analytic.sum_rate_analytic(scenario.K, pred),
        skipped=skipped,
    )


def estimate_expected_sinr(scenario, workers=None):
    """Ratio-of-means SINR per user.

    Estimates ``P E|h_k w_k|^2 / (P sum_{j != k} E|h_k w_j|^2 + N0)``
    by averaging numerator and denominator powers separately.
    """
    signal, interference, _ = _simulate(scenario, workers)
    return signal.mean(axis=0) / (interference.mean(axis=0) + scenario.n0)
