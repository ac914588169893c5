"""Complex linear algebra, special functions and seeded random streams.

All matrices are plain ``numpy`` arrays with ``complex128`` entries in the
usual row-major layout; the helpers here add the numerical contracts the
rest of the package relies on (explicit failure instead of silent garbage,
reproducible random streams, exact odd symmetry of ``erf``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "NumericalError",
    "SingularMatrixError",
    "NotPositiveSemidefiniteError",
    "SeededRng",
    "SvdResult",
    "svd",
    "complex_gaussian",
    "hermitian_sqrt",
    "erf",
]


class NumericalError(RuntimeError):
    """A numerical routine failed to produce a trustworthy result."""


class SingularMatrixError(NumericalError):
    """A matrix inversion was requested on an (effectively) singular matrix.

    ``trial`` carries the Monte-Carlo trial index when the failure happened
    inside a sweep, so the offending realization can be reproduced.
    """

    def __init__(self, message: str, trial: int | None = None):
        super().__init__(message if trial is None else f"{message} (trial {trial})")
        self.trial = trial


class NotPositiveSemidefiniteError(NumericalError):
    """A Hermitian matrix expected to be PSD has a clearly negative eigenvalue."""


class SeededRng:
    """Counter-based random stream identified by (master_seed, stream_index).

    Built on the Philox bit generator, so the stream for index ``i`` is the
    same no matter how many other streams were consumed before it or on which
    thread it runs.  Two instances created with equal (seed, stream) produce
    bit-identical sequences.
    """

    def __init__(self, master_seed: int, stream_index: int = 0):
        if stream_index < 0:
            raise ValueError("stream_index must be non-negative")
        self.master_seed = int(master_seed)
        self.stream_index = int(stream_index)
        key = [self.master_seed % 2**64, self.stream_index % 2**64]
        self._gen = np.random.Generator(np.random.Philox(key=key))

    def uniform(self, shape=None) -> np.ndarray:
        """Uniform doubles in [0, 1)."""
        return self._gen.random(size=shape)

    def spawn(self, stream_index: int) -> "SeededRng":
        """New independent stream under the same master seed."""
        return SeededRng(self.master_seed, stream_index)

    def __repr__(self) -> str:
        return f"SeededRng(master_seed={self.master_seed}, stream_index={self.stream_index})"


@dataclass(frozen=True)
class SvdResult:
    """Thin singular value decomposition ``a = u @ diag(s) @ v.conj().T``.

    ``u`` is rows x r and ``v`` cols x r with r = min(rows, cols); both have
    orthonormal columns and ``singular_values`` is sorted descending.  Column
    phases are whatever LAPACK returns; consumers must not rely on a
    particular phase convention.
    """

    u: np.ndarray
    singular_values: np.ndarray
    v: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.u * self.singular_values) @ self.v.conj().T


def svd(a: np.ndarray) -> SvdResult:
    """Thin SVD with an explicit error on non-convergence.

    Raises
    ------
    NumericalError
        If the iterative LAPACK driver fails to converge or the input
        contains non-finite entries.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError(f"expected a 2-d matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NumericalError("svd input contains NaN or Inf entries")
    try:
        u, s, vh = np.linalg.svd(a, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"svd did not converge: {exc}") from exc
    return SvdResult(u=u, singular_values=s, v=vh.conj().T)


def complex_gaussian(rows: int, cols: int, variance: float, rng: SeededRng) -> np.ndarray:
    """Matrix of i.i.d. circularly symmetric complex Gaussians.

    Each entry has total variance ``variance`` (so variance/2 per real and
    imaginary part).  Generated with the polar (Box-Muller) transform from
    two uniform draws per entry, consumed as two rows x cols blocks
    (magnitudes first, then phases); this fixed recipe is what makes golden
    outputs reproducible across platforms.
    """
    if rows < 1 or cols < 1:
        raise ValueError("rows and cols must be >= 1")
    if variance <= 0:
        raise ValueError("variance must be > 0")
    u_mag = rng.uniform((rows, cols))
    u_phase = rng.uniform((rows, cols))
    # |z|^2 ~ Exp(mean=variance); log1p(-u) keeps the argument in (0, 1].
    radius = np.sqrt(-variance * np.log1p(-u_mag))
    return radius * np.exp(2j * np.pi * u_phase)


def hermitian_sqrt(r: np.ndarray) -> np.ndarray:
    """Hermitian PSD square root B of a Hermitian PSD matrix, B @ B.conj().T = r.

    Eigenvalues in [-1e-8, 0) are clipped to zero; anything more negative
    raises :class:`NotPositiveSemidefiniteError`.
    """
    r = np.asarray(r, dtype=complex)
    if r.ndim != 2 or r.shape[0] != r.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {r.shape}")
    if not np.allclose(r, r.conj().T, atol=1e-10):
        raise ValueError("matrix is not Hermitian within 1e-10")
    eigvals, eigvecs = np.linalg.eigh(r)
    if eigvals.min() < -1e-8:
        raise NotPositiveSemidefiniteError(
            f"matrix has negative eigenvalue {eigvals.min():.3e}"
        )
    eigvals = np.clip(eigvals, 0.0, None)
    return (eigvecs * np.sqrt(eigvals)) @ eigvecs.conj().T


def erf(x: float) -> float:
    """Gauss error function with exact odd symmetry erf(-x) == -erf(x)."""
    if x < 0:
        return -math.erf(-x)
    return math.erf(x)
