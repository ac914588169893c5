"""Hybrid beamforming for the massive MIMO downlink with reduced
phase-shifter counts.

The package builds analog RF beamformers from the channel's right singular
vectors for three hardware architectures (subconnected phase shifters, the
same behind fully-connected switches, and behind 1-of-S switches), maps
them to physical phase/switch settings, and evaluates zero-forcing sum
rates by seeded Monte-Carlo against the architectures' closed-form
large-array expressions.
"""

from .beamform import (
    FULL_SWITCH,
    SUB_PS,
    SUB_SWITCH,
    BlockPartition,
    HardwareConfig,
    RfBeamformer,
    extract_hardware_full,
    extract_hardware_sub,
    ps_full_switch,
    ps_sub_switch,
    subconnected_ps,
    threshold_for_ratio,
)
from .channel import (
    ChannelMatrix,
    ChannelModel,
    correlated_rayleigh,
    draw_channel,
    exp_correlation_matrix,
    iid_rayleigh,
    sparse_channel,
    steering_vector,
)
from .experiments import (
    SweepConfig,
    SweepResult,
    SweepRow,
    run_antenna_sweep,
    run_channel_compare,
    run_phase_shifter_sweep,
    run_snr_sweep,
    run_scenario,
)
from .numerics import (
    NotPositiveSemidefiniteError,
    NumericalError,
    SeededRng,
    SingularMatrixError,
    SvdResult,
    complex_gaussian,
    erf,
    hermitian_sqrt,
    svd,
)
from .rates import (
    LinkBudget,
    RateResult,
    expected_max_rayleigh,
    full_switch_rate_analytic,
    hybrid_zf_rate,
    rate_from_gamma,
    sub_switch_rate_analytic,
    subconnected_rate_analytic,
    sum_capacity,
    zf_rate,
    zf_rate_analytic,
)

__version__ = "0.1.0"
