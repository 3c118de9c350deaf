"""
Headless statistical self-checks with fixed seeds and stated tolerances.

Used by ``mimo-lab validate``. Each check returns a `Check` carrying the
measured value, its target and whether it passed.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import analytic
from .channel import LosConfig, iid_rayleigh, los_channel
from .impairments import ImpairmentConfig, apply_impairments, sample_branch_errors
from .numerics import derive_stream, gram, hermitian_solve, sample_complex_gaussian_matrix
from .precoding import zf_precoder_exact, zf_precoder_scaled

__all__ = ["Check", "run_all"]


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    target: float
    tolerance: str
    passed: bool

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name}: value={self.value:.6g} target={self.target:.6g} ({self.tolerance})"


def wishart_trace(seed, realizations=10_000, M=100, K=10):
    """Mean of ``tr((H H^H)^{-1})`` for IID H against ``K / (M - K)``."""
    eye = np.eye(K)
    total = np.empty(realizations)
    for r in range(realizations):
        H = iid_rayleigh(M, K, derive_stream(seed, r))
        total[r] = np.trace(hermitian_solve(gram(H), eye)).real
    target = K / (M - K)
    value = float(total.mean())
    return Check("wishart trace E[tr((HH^H)^-1)]", value, target, "2% relative", abs(value / target - 1) <= 0.02)


def gaussian_moments(seed, draws=1_000_000):
    """Second and fourth moments of a unit-variance complex Gaussian."""
    z = sample_complex_gaussian_matrix(1, draws, 1.0, derive_stream(seed, 0))[0]
    p = z.real**2 + z.imag**2
    out = []
    for name, samples, target in (("E|z|^2", p, 1.0), ("E|z|^4", p**2, 2.0)):
        value = float(samples.mean())
        se = float(samples.std(ddof=1) / math.sqrt(draws))
        out.append(Check(f"complex gaussian {name}", value, target, f"3 s.e. = {3 * se:.2g}", abs(value - target) <= 3 * se))
    return out


def phase_characteristic(seed, draws=1_000_000, sigma_phi_deg=20.0):
    """``Re E[exp(j phi)]`` against ``exp(-sigma^2 / 2)``."""
    cfg = ImpairmentConfig(sigma_phi_deg=sigma_phi_deg)
    eps = sample_branch_errors(draws, cfg, derive_stream(seed, 0))
    value = float(eps.real.mean())
    target = math.exp(-cfg.sigma_phi_rad**2 / 2)
    return Check("phase characteristic Re E[e^{j phi}]", value, target, "0.2% relative", abs(value / target - 1) <= 0.002)


def impaired_norm(seed, realizations=10_000, M=100, K=10, config=ImpairmentConfig(1.0, 20.0)):
    """Mean squared row norm of the impaired channel against ``M (1 + sa^2)``."""
    acc = np.empty(realizations)
    for r in range(realizations):
        stream = derive_stream(seed, r)
        H = iid_rayleigh(M, K, stream)
        Ht = apply_impairments(H, sample_branch_errors(M, config, stream))
        acc[r] = np.mean(np.sum(np.abs(Ht) ** 2, axis=1))
    target = M * (1 + config.sigma_a_lin**2)
    value = float(acc.mean())
    return Check("impaired row norm E||h~_k||^2", value, target, "2% relative", abs(value / target - 1) <= 0.02)


def zero_forcing(seed, instances=100, M=100, K=10):
    """Worst off-diagonal ``|h_k w_j| / ||H||_F`` over both ZF variants."""
    worst = 0.0
    for r in range(instances):
        H = iid_rayleigh(M, K, derive_stream(seed, r))
        fro = np.linalg.norm(H)
        for W in (zf_precoder_exact(H), zf_precoder_scaled(H)):
            G = np.abs(H @ W)
            np.fill_diagonal(G, 0.0)
            worst = max(worst, float(G.max() / fro))
    return Check("zero-forcing residual max|h_k w_j|/||H||_F", worst, 1e-8, "<= target", worst <= 1e-8)


def los_normalization(seed, realizations=1000, M=64, K=8):
    worst = 0.0
    for r in range(realizations):
        H = los_channel(M, K, LosConfig(), derive_stream(seed, r))
        n2 = np.sum(np.abs(H) ** 2, axis=1)
        worst = max(worst, float(np.max(np.abs(n2 / M - 1))))
    return Check("LoS row norm ||h_k||^2 = M", worst, 1e-12, "max relative error <= target", worst <= 1e-12)


def rules_of_thumb():
    snr, K = 10.0, 10
    mf = analytic.sinr_mf(analytic.LinkBudget(snr, K, analytic.required_antennas("mf", K, snr)))
    zf = analytic.sinr_zf(analytic.LinkBudget(snr, K, analytic.required_antennas("zf", K, snr)))
    count = analytic.antennas_for_3db("mf", K, snr, ImpairmentConfig(1.0, 20.0))
    ok = mf == snr / 2 and zf == snr / 2 and count == 119
    return Check("rules of thumb (MF/ZF hit SNR_t/2, impaired MF -> 119)", float(count), 119.0, "exact", ok)


def run_all(seed=2024):
    """Run every check and return the list of results."""
    checks = [wishart_trace(seed)]
    checks.extend(gaussian_moments(seed))
    checks.append(phase_characteristic(seed))
    checks.append(impaired_norm(seed))
    checks.append(zero_forcing(seed))
    checks.append(los_normalization(seed))
    checks.append(rules_of_thumb())
    return checks
