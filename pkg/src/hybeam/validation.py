"""Fast self-consistency checks runnable from the command line.

Each check compares an implemented quantity against an independent route
(closed-form degeneracy, quadrature, or a known random-matrix expectation)
and reports pass/fail with the measured value, target and tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import quad

from .channel import iid_rayleigh
from .numerics import SeededRng, erf, svd
from .rates import (
    LinkBudget,
    full_switch_rate_analytic,
    sub_switch_rate_analytic,
    subconnected_rate_analytic,
)

__all__ = ["CheckResult", "run_validation", "truncated_rayleigh_mean"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    measured: float
    expected: float
    tolerance: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{status}  {self.name}: measured {self.measured:.6g}, "
            f"expected {self.expected:.6g}, tolerance {self.tolerance:.3g}"
        )


def truncated_rayleigh_mean(alpha: float, erf_fn: Callable[[float], float] = erf) -> float:
    """Mean of a Rayleigh variable (pdf 2 v e^{-v^2}) zeroed below ``alpha``:
    sqrt(pi)/2 + alpha e^{-alpha^2} - sqrt(pi)/2 erf(alpha)."""
    half_sqrt_pi = math.sqrt(math.pi) / 2.0
    return half_sqrt_pi + alpha * math.exp(-alpha * alpha) - half_sqrt_pi * erf_fn(alpha)


def _check(name, measured, expected, tolerance) -> CheckResult:
    return CheckResult(
        name=name,
        passed=abs(measured - expected) <= tolerance,
        measured=float(measured),
        expected=float(expected),
        tolerance=float(tolerance),
    )


def run_validation(
    trials: int = 500,
    seed: int = 1,
    erf_fn: Callable[[float], float] | None = None,
) -> list[CheckResult]:
    """Run the invariant suite; returns one result per check.

    ``erf_fn`` overrides the error function used in the truncated-mean
    check (hook for fault-injection tests).
    """
    if trials < 2:
        raise ValueError("trials must be >= 2")
    erf_fn = erf_fn or erf
    checks: list[CheckResult] = []
    lb = LinkBudget.from_snr_db(10.0)

    # Degeneracies: the switched closed forms must collapse to the
    # subconnected one when no reduction is configured.
    r_sub = subconnected_rate_analytic(512, 4, lb)
    r_full = full_switch_rate_analytic(512, 4, 128, lb)
    checks.append(_check("full-switch degeneracy (L=N/M)", r_full, r_sub, 1e-12 * r_sub))
    r_ss = sub_switch_rate_analytic(512, 4, 1, lb)
    checks.append(_check("sub-switch degeneracy (S=1)", r_ss, r_sub, 1e-12 * r_sub))

    # Truncated Rayleigh mean: closed form (contains erf) against direct
    # quadrature of the tail integral.
    worst = 0.0
    for alpha in (0.3, math.sqrt(math.log(2.0)), 1.2):
        closed = truncated_rayleigh_mean(alpha, erf_fn)
        integral, _ = quad(lambda v: 2.0 * v * v * math.exp(-v * v), alpha, np.inf)
        worst = max(worst, abs(closed - integral))
    checks.append(_check("truncated Rayleigh mean vs quadrature", worst, 0.0, 1e-9))

    # Scaled singular-vector magnitudes concentrate at sqrt(pi)/2.
    n, m, channels = 256, 4, 30
    acc = 0.0
    for i in range(channels):
        ch = iid_rayleigh(m, n, SeededRng(seed, 10_000 + i))
        v = svd(ch.h).v
        acc += float(np.mean(np.abs(math.sqrt(n) * v[:, :m])))
    mean_mag = acc / channels
    target = math.sqrt(math.pi) / 2.0
    checks.append(_check("singular-vector magnitude mean", mean_mag, target, 0.015 * target))

    # Wishart normalization: E[trace((H H^H)^-1)]/K = 1/(N-K); tolerance
    # scales with the measured standard error, so more trials tighten it.
    n, k = 64, 4
    samples = np.empty(trials)
    for t in range(trials):
        ch = iid_rayleigh(k, n, SeededRng(seed, 20_000 + t))
        gram = ch.h @ ch.h.conj().T
        samples[t] = np.real(np.trace(np.linalg.inv(gram))) / k
    mean = float(np.mean(samples))
    stderr = float(np.std(samples, ddof=1) / math.sqrt(trials))
    checks.append(_check("Wishart trace-inverse normalization", mean, 1.0 / (n - k), 4.0 * stderr))

    return checks
