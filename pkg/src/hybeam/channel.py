"""Downlink channel models: i.i.d. Rayleigh, exponentially correlated Rayleigh,
and a sparse geometric model for uniform linear arrays.

Every generator returns a :class:`ChannelMatrix` holding a K x N complex
matrix (K single-antenna users, N base-station antennas, K <= N).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .numerics import SeededRng, complex_gaussian, hermitian_sqrt

__all__ = [
    "ChannelModel",
    "ChannelMatrix",
    "iid_rayleigh",
    "exp_correlation_matrix",
    "correlated_rayleigh",
    "steering_vector",
    "sparse_channel",
    "draw_channel",
]

DEFAULT_SPACING = 0.5  # antenna spacing in wavelengths (half-wavelength array)


@dataclass(frozen=True)
class ChannelModel:
    """Propagation model selector.

    kind is one of ``"iid"``, ``"correlated"`` or ``"sparse"``; ``rho`` is the
    antenna correlation coefficient (correlated model), ``paths`` the number
    of multipath components per user (sparse model) and ``spacing`` the
    element spacing in wavelengths (sparse model).
    """

    kind: str = "iid"
    rho: float = 0.0
    paths: int = 1
    spacing: float = DEFAULT_SPACING

    def __post_init__(self):
        if self.kind not in ("iid", "correlated", "sparse"):
            raise ValueError(f"unknown channel kind {self.kind!r}")
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError("rho must be in [0, 1]")
        if self.paths < 1:
            raise ValueError("paths must be >= 1")
        if self.spacing <= 0:
            raise ValueError("spacing must be > 0")

    @classmethod
    def iid(cls) -> "ChannelModel":
        return cls(kind="iid")

    @classmethod
    def correlated(cls, rho: float) -> "ChannelModel":
        return cls(kind="correlated", rho=rho)

    @classmethod
    def sparse(cls, paths: int, spacing: float = DEFAULT_SPACING) -> "ChannelModel":
        return cls(kind="sparse", paths=paths, spacing=spacing)

    @property
    def label(self) -> str:
        """Short CSV-safe identifier."""
        if self.kind == "iid":
            return "iid"
        if self.kind == "correlated":
            return f"correlated(rho={self.rho:g})"
        if self.spacing == DEFAULT_SPACING:
            return f"sparse(c={self.paths})"
        return f"sparse(c={self.paths};d={self.spacing:g})"


@dataclass(frozen=True)
class ChannelMatrix:
    """K x N downlink channel realization plus the model that produced it."""

    h: np.ndarray
    model: ChannelModel
    users: int
    antennas: int

    def __post_init__(self):
        if self.h.shape != (self.users, self.antennas):
            raise ValueError(f"h has shape {self.h.shape}, expected ({self.users}, {self.antennas})")
        if self.users > self.antennas:
            raise ValueError("need users <= antennas")


def iid_rayleigh(k: int, n: int, rng: SeededRng) -> ChannelMatrix:
    """Uncorrelated Rayleigh fading: entries i.i.d. CN(0, 1)."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= users <= antennas, got k={k}, n={n}")
    h = complex_gaussian(k, n, 1.0, rng)
    return ChannelMatrix(h=h, model=ChannelModel.iid(), users=k, antennas=n)


def exp_correlation_matrix(n: int, rho: float) -> np.ndarray:
    """Exponential antenna correlation: entry (i, j) equals rho^|i-j|.

    Symmetric Toeplitz with unit diagonal; positive semidefinite for every
    rho in [0, 1].
    """
    if not 0.0 <= rho <= 1.0:
        raise ValueError("rho must be in [0, 1]")
    idx = np.arange(n)
    return (rho ** np.abs(idx[:, None] - idx[None, :])).astype(complex)


@lru_cache(maxsize=8)
def _correlation_root(n: int, rho: float) -> np.ndarray:
    # the square root is deterministic per (n, rho); recomputing the
    # eigendecomposition every Monte-Carlo trial would dominate the sweep
    root = hermitian_sqrt(exp_correlation_matrix(n, rho))
    root.setflags(write=False)
    return root


def correlated_rayleigh(k: int, n: int, rho: float, rng: SeededRng) -> ChannelMatrix:
    """Rayleigh fading with exponential correlation across the transmit array.

    The realization is an i.i.d. CN(0,1) matrix multiplied on the right by
    the Hermitian square root of the correlation matrix, so the covariance
    of each user's antenna vector equals the correlation matrix.  With
    rho = 0 the output is bit-identical to :func:`iid_rayleigh` under the
    same stream.
    """
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= users <= antennas, got k={k}, n={n}")
    if not 0.0 <= rho < 1.0:
        raise ValueError("rho must be in [0, 1)")
    h_w = complex_gaussian(k, n, 1.0, rng)
    h = h_w if rho == 0.0 else h_w @ _correlation_root(n, rho)
    return ChannelMatrix(h=h, model=ChannelModel.correlated(rho), users=k, antennas=n)


def steering_vector(n: int, phi: float, spacing_ratio: float = DEFAULT_SPACING) -> np.ndarray:
    """Unit-norm array response of an N-element uniform linear array.

    Entry m (0-based) is exp(j 2 pi spacing_ratio m cos(phi)) / sqrt(n) for a
    departure angle phi in [0, pi].
    """
    if not 0.0 <= phi <= np.pi:
        raise ValueError("phi must be in [0, pi]")
    if spacing_ratio <= 0:
        raise ValueError("spacing_ratio must be > 0")
    m = np.arange(n)
    return np.exp(2j * np.pi * spacing_ratio * m * np.cos(phi)) / np.sqrt(n)


def sparse_channel(
    k: int,
    n: int,
    c: int,
    spacing_ratio: float = DEFAULT_SPACING,
    rng: SeededRng | None = None,
) -> ChannelMatrix:
    """Geometry-based sparse channel with c multipath components per user.

    Row k is sqrt(n/c) * sum_c beta_ck * conj(a(phi_ck)) with path gains
    beta_ck ~ CN(0,1) and departure angles phi_ck uniform on [0, pi].  Draw
    order per realization: all path gains first (one k x c complex Gaussian
    block), then all angles (one k x c uniform block).
    """
    if rng is None:
        raise ValueError("rng is required")
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= users <= antennas, got k={k}, n={n}")
    if c < 1:
        raise ValueError("need at least one multipath component")
    gains = complex_gaussian(k, c, 1.0, rng)
    angles = np.pi * rng.uniform((k, c))
    h = np.zeros((k, n), dtype=complex)
    scale = np.sqrt(n / c)
    for user in range(k):
        for path in range(c):
            h[user] += scale * gains[user, path] * np.conj(steering_vector(n, angles[user, path], spacing_ratio))
    model = ChannelModel.sparse(c, spacing_ratio)
    return ChannelMatrix(h=h, model=model, users=k, antennas=n)


def draw_channel(model: ChannelModel, k: int, n: int, rng: SeededRng) -> ChannelMatrix:
    """Draw one realization of the given model."""
    if model.kind == "iid":
        return iid_rayleigh(k, n, rng)
    if model.kind == "correlated":
        return correlated_rayleigh(k, n, model.rho, rng)
    return sparse_channel(k, n, model.paths, model.spacing, rng)
