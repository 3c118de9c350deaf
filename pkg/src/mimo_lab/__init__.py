"""Downlink massive MIMO: closed-form SINR approximations and Monte Carlo checks."""

from .analytic import (
    LinkBudget,
    antennas_for_3db,
    error_factor,
    rate_from_sinr,
    sinr_mf,
    sinr_mf_impaired,
    sinr_zf,
    sum_rate_analytic,
    tx_power,
)
from .channel import LosConfig, element_pattern_amplitude, iid_rayleigh, los_channel, sample_aod
from .engine import RateReport, ScenarioConfig, estimate_expected_sinr, estimate_rates, instantaneous_sinr
from .errors import (
    ArgumentError,
    ConfigParseError,
    DegenerateChannelError,
    InfeasibleError,
    MimoLabError,
    PrecoderInfeasibleError,
    SimulationError,
    SingularMatrixError,
)
from .impairments import ImpairmentConfig, apply_impairments, sample_branch_errors, sigma_a_linear
from .numerics import derive_stream, gram, hermitian_solve, right_pseudoinverse, sample_complex_gaussian_matrix
from .precoding import mf_precoder, zf_precoder_exact, zf_precoder_scaled

__version__ = "0.1.0"
