"""Zero-forcing sum rates: per-realization Monte-Carlo evaluation and the
closed-form large-array expressions for every supported architecture.

Rate conventions
----------------
All rates are in bits/s/Hz summed over the K served streams.  The digital
zero-forcing benchmark and each hybrid architecture share the single form

    R = K * log2(1 + P / (Gamma * sigma^2))

where Gamma is the per-stream power normalization trace(F F^H)/K of the full
precoder.  For i.i.d. Rayleigh channels the expectation of Gamma has closed
form, giving the analytic curves; the Monte-Carlo paths use the realization's
own Gamma.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .beamform import RfBeamformer
from .channel import ChannelMatrix
from .numerics import SingularMatrixError, erf

__all__ = [
    "MAX_GROUP_SIZE",
    "LinkBudget",
    "RateResult",
    "sum_capacity",
    "zf_gamma",
    "hybrid_gamma",
    "zf_rate",
    "hybrid_zf_rate",
    "rate_from_gamma",
    "zf_rate_analytic",
    "subconnected_rate_analytic",
    "full_switch_rate_analytic",
    "sub_switch_rate_analytic",
    "expected_max_rayleigh",
]

# Alternating binomial sums lose precision as the group size grows; the
# closed forms are validated against quadrature up to this bound only.
MAX_GROUP_SIZE = 64

_COND_LIMIT = 1e12


@dataclass(frozen=True)
class LinkBudget:
    """Transmit power per stream and noise variance, both linear."""

    p: float
    sigma2: float = 1.0

    def __post_init__(self):
        if self.p <= 0 or self.sigma2 <= 0:
            raise ValueError("p and sigma2 must be > 0")

    @property
    def snr(self) -> float:
        return self.p / self.sigma2

    @property
    def snr_db(self) -> float:
        return 10.0 * math.log10(self.snr)

    @classmethod
    def from_snr_db(cls, snr_db: float, sigma2: float = 1.0) -> "LinkBudget":
        return cls(p=sigma2 * 10.0 ** (snr_db / 10.0), sigma2=sigma2)


@dataclass(frozen=True)
class RateResult:
    """Sum rate of one or more realizations plus the normalization used."""

    rate_bits: float
    gamma: float
    trials: int = 1
    per_trial: np.ndarray | None = None

    def __post_init__(self):
        if not math.isfinite(self.rate_bits) or self.rate_bits < 0:
            raise ValueError(f"rate must be finite and >= 0, got {self.rate_bits}")
        if self.gamma <= 0:
            raise ValueError(f"gamma must be > 0, got {self.gamma}")

    @property
    def stderr(self) -> float:
        """Standard error of the Monte-Carlo mean (0 for a single trial)."""
        if self.per_trial is None or self.trials < 2:
            return 0.0
        return float(np.std(self.per_trial, ddof=1) / math.sqrt(self.trials))


def _gram(h: np.ndarray) -> np.ndarray:
    return h @ h.conj().T


def _trace_inverse(a: np.ndarray, context: str, trial: int | None = None) -> float:
    """trace(a^-1) for a small Hermitian positive definite matrix.

    Refuses to answer when cond(a) exceeds 1e12: a silent near-singular
    inverse would corrupt the Monte-Carlo mean without any visible symptom.
    """
    if np.linalg.cond(a) > _COND_LIMIT:
        raise SingularMatrixError(f"{context}: condition number exceeds {_COND_LIMIT:.0e}", trial)
    return float(np.real(np.trace(np.linalg.inv(a))))


def sum_capacity(h: ChannelMatrix, lb: LinkBudget) -> float:
    """Instantaneous downlink sum capacity log2 det(I + (P/sigma^2) H H^H)."""
    gram = _gram(h.h)
    eye = np.eye(h.users)
    sign, logdet = np.linalg.slogdet(eye + (lb.p / lb.sigma2) * gram)
    if sign <= 0:
        raise SingularMatrixError("capacity determinant not positive")
    return logdet / math.log(2.0)


def zf_gamma(h: ChannelMatrix, trial: int | None = None) -> float:
    """Instantaneous ZF power normalization trace((H H^H)^-1) / K."""
    return _trace_inverse(_gram(h.h), "zero-forcing normalization", trial) / h.users


def hybrid_gamma(h: ChannelMatrix, f_rf: RfBeamformer, trial: int | None = None) -> float:
    """Instantaneous power normalization of the hybrid precoder.

    With effective channel H_e = H F_rf / sqrt(gamma_rf) and baseband
    zero-forcing F_b = H_e^-1, the combined precoder power per stream is
    trace(F_b^H (F_rf^H F_rf / gamma_rf) F_b) / M.
    """
    m = f_rf.chains
    if h.users != m:
        raise ValueError(f"rate evaluation requires chains == users, got {m} != {h.users}")
    h_eff = h.h @ f_rf.f_rf / math.sqrt(f_rf.gamma_rf)
    if np.linalg.cond(h_eff) > _COND_LIMIT:
        raise SingularMatrixError("hybrid effective channel nearly singular", trial)
    f_b = np.linalg.inv(h_eff)
    rf_gram = f_rf.f_rf.conj().T @ f_rf.f_rf / f_rf.gamma_rf
    return float(np.real(np.trace(f_b.conj().T @ rf_gram @ f_b))) / m


def rate_from_gamma(gamma: float, streams: int, lb: LinkBudget) -> float:
    """Sum rate of ``streams`` equal-SNR streams under normalization gamma."""
    return streams * math.log2(1.0 + lb.p / (gamma * lb.sigma2))


def zf_rate(h: ChannelMatrix, lb: LinkBudget, trial: int | None = None) -> RateResult:
    """Digital zero-forcing sum rate of one channel realization."""
    gamma = zf_gamma(h, trial)
    return RateResult(rate_bits=rate_from_gamma(gamma, h.users, lb), gamma=gamma)


def hybrid_zf_rate(
    h: ChannelMatrix, f_rf: RfBeamformer, lb: LinkBudget, trial: int | None = None
) -> RateResult:
    """Hybrid (analog RF + baseband ZF) sum rate of one realization."""
    gamma = hybrid_gamma(h, f_rf, trial)
    return RateResult(rate_bits=rate_from_gamma(gamma, f_rf.chains, lb), gamma=gamma)


def _gamma_zf_iid(n: int, k: int) -> float:
    # E[trace((H H^H)^-1)]/K = 1/(N-K) for an i.i.d. CN(0,1) channel (Wishart).
    if n <= k:
        raise ValueError(f"need antennas > users, got n={n}, k={k}")
    return 1.0 / (n - k)


def zf_rate_analytic(n: int, k: int, lb: LinkBudget) -> float:
    """Expected digital ZF sum rate over i.i.d. Rayleigh: K log2(1 + P(N-K)/sigma^2)."""
    return rate_from_gamma(_gamma_zf_iid(n, k), k, lb)


def subconnected_rate_analytic(n: int, m: int, lb: LinkBudget) -> float:
    """Large-array sum rate of the subconnected phase-shifter beamformer.

    The per-chain beamforming gain concentrates at the mean magnitude
    sqrt(pi)/2 of the scaled singular-vector entries, giving
    M log2(1 + pi P / (4 M Gamma_zf sigma^2)).
    """
    gamma = 4.0 * m / math.pi * _gamma_zf_iid(n, m)
    return rate_from_gamma(gamma, m, lb)


def full_switch_rate_analytic(n: int, m: int, l: int, lb: LinkBudget) -> float:
    """Large-array sum rate with L active shifters per chain behind
    fully-connected switches.

    Keeping only magnitudes above the threshold alpha replaces the Rayleigh
    mean with the truncated mean sqrt(pi)/2 + alpha e^{-alpha^2}
    - sqrt(pi)/2 erf(alpha); the active fraction M L / N enters both the
    threshold and the power normalization.  Reduces to the subconnected
    rate at L = N/M (alpha = 0).
    """
    if not 1 <= l <= n // m:
        raise ValueError(f"need 1 <= shifters <= block size {n // m}, got {l}")
    ratio = m * l / n
    alpha = math.sqrt(-math.log(ratio))
    half_sqrt_pi = math.sqrt(math.pi) / 2.0
    truncated_mean = half_sqrt_pi + alpha * math.exp(-alpha * alpha) - half_sqrt_pi * erf(alpha)
    gain = truncated_mean**2 / (m * ratio)
    gamma_zf = _gamma_zf_iid(n, m)
    return m * math.log2(1.0 + gain * lb.p / (gamma_zf * lb.sigma2))


_FIXED_POINT_BITS = 192


def expected_max_rayleigh(s: int) -> float:
    """Mean of the maximum of s i.i.d. Rayleigh variables with unit second
    moment (pdf 2 v e^{-v^2}).

    Evaluates the alternating binomial sum
    sum_{j=0}^{s-1} C(s-1, j) (-1)^j s sqrt(pi) / (2 (j+1)^(3/2))
    in fixed-point integer arithmetic (exact binomials, 192-bit scale): the
    terms grow to ~1e16 while the sum stays O(1), which double precision
    cannot survive beyond s ~ 20.  Rejected above ``MAX_GROUP_SIZE``, the
    range validated against quadrature.
    """
    if s < 1:
        raise ValueError("group size must be >= 1")
    if s > MAX_GROUP_SIZE:
        raise ValueError(f"group size {s} exceeds validated limit {MAX_GROUP_SIZE}")
    scale = 1 << _FIXED_POINT_BITS
    total = 0
    for j in range(s):
        # floor(C * scale / (j+1)^(3/2)) via an exact integer square root
        term = math.comb(s - 1, j) * scale * scale // math.isqrt((j + 1) ** 3 * scale * scale)
        total += -term if j % 2 else term
    return s * math.sqrt(math.pi) / 2.0 * (total / scale)


def sub_switch_rate_analytic(n: int, m: int, s: int, lb: LinkBudget) -> float:
    """Large-array sum rate with 1-of-S switched phase shifters.

    Selecting the strongest of S adjacent antennas replaces the Rayleigh
    mean with the order-statistic mean, giving
    M log2(1 + (sum_j C(S-1,j)(-1)^j/(j+1)^{3/2})^2 P S pi / (4 M Gamma_zf
    sigma^2)).  Reduces to the subconnected rate at S = 1.
    """
    if s < 1:
        raise ValueError("group size must be >= 1")
    if n % (m * s) != 0:
        raise ValueError(f"antennas ({n}) must equal chains*shifters*group for integer shifters")
    coeff_sum = expected_max_rayleigh(s) * 2.0 / (s * math.sqrt(math.pi))
    gamma_zf = _gamma_zf_iid(n, m)
    gain = coeff_sum**2 * s * math.pi / (4.0 * m)
    return m * math.log2(1.0 + gain * lb.p / (gamma_zf * lb.sigma2))
