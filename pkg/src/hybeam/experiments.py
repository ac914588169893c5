"""Seeded Monte-Carlo sweep engine and CSV emission.

Four sweep scenarios are provided, one per standard experiment:

* ``phase-shifters`` - sum rate versus the number of active phase shifters
  at fixed array size, for all three analog architectures.
* ``antennas``       - accuracy of the closed forms versus array size at a
  fixed 50% shifter reduction.
* ``snr``            - sum rate versus transmit SNR for the subconnected,
  binary-switched and digital beamformers.
* ``channels``       - the phase-shifter tradeoff repeated over i.i.d.,
  correlated and sparse channel models.

Reproducibility contract: trial t of every grid group draws its channel
from the counter-based stream (master_seed, t), so a configuration produces
a byte-identical CSV regardless of worker count or execution order, and all
architectures at a grid point see the same channel realizations.
"""

from __future__ import annotations

import math
import os
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .beamform import (
    FULL_SWITCH,
    SUB_PS,
    SUB_SWITCH,
    ps_full_switch,
    ps_sub_switch,
    subconnected_ps,
)
from .channel import ChannelModel, draw_channel
from .numerics import SeededRng, svd
from .rates import (
    LinkBudget,
    full_switch_rate_analytic,
    hybrid_gamma,
    rate_from_gamma,
    sub_switch_rate_analytic,
    subconnected_rate_analytic,
    zf_gamma,
    zf_rate_analytic,
)

__all__ = [
    "DIGITAL_ZF",
    "CSV_HEADER",
    "SweepConfig",
    "SweepRow",
    "SweepResult",
    "run_phase_shifter_sweep",
    "run_antenna_sweep",
    "run_snr_sweep",
    "run_channel_compare",
    "run_scenario",
    "load_config",
    "write_text_atomic",
]

DIGITAL_ZF = "digital-zf"

CSV_HEADER = "scenario,channel,N,M,K,L,S,snr_db,architecture,mc_rate,mc_stderr,analytic_rate,trials,seed"

SCENARIOS = ("phase-shifters", "antennas", "snr", "channels")


@dataclass
class SweepConfig:
    """Sweep description; unset grid fields fall back to scenario defaults."""

    scenario: str = "phase-shifters"
    n: int | Sequence[int] | None = None
    m: int = 4
    k: int = 4
    snr_db: float | Sequence[float] | None = None
    l_list: Sequence[int] | None = None
    s_list: Sequence[int] | None = None
    channel: ChannelModel = field(default_factory=ChannelModel.iid)
    trials: int = 1000
    master_seed: int = 1
    workers: int = 1

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ValueError(f"unknown scenario {self.scenario!r}; expected one of {SCENARIOS}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.m != self.k:
            raise ValueError("rate evaluation requires chains == users (m == k)")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass(frozen=True)
class SweepRow:
    """One (grid point, architecture) result."""

    scenario: str
    channel: str
    n: int
    m: int
    k: int
    l: int | None
    s: int | None
    snr_db: float
    architecture: str
    mc_rate: float
    mc_stderr: float
    analytic_rate: float | None
    trials: int
    seed: int

    @property
    def rel_error(self) -> float | None:
        """|mc - analytic| / analytic, when an analytic value exists."""
        if self.analytic_rate is None or self.analytic_rate == 0:
            return None
        return abs(self.mc_rate - self.analytic_rate) / self.analytic_rate

    def csv_line(self) -> str:
        def num(x):
            return "" if x is None else f"{x:.9g}"

        def integer(x):
            return "" if x is None else str(x)

        return ",".join(
            [
                self.scenario,
                self.channel,
                str(self.n),
                str(self.m),
                str(self.k),
                integer(self.l),
                integer(self.s),
                f"{self.snr_db:.9g}",
                self.architecture,
                num(self.mc_rate),
                num(self.mc_stderr),
                num(self.analytic_rate),
                str(self.trials),
                str(self.seed),
            ]
        )


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[SweepRow, ...]

    def csv_text(self) -> str:
        return "\n".join([CSV_HEADER] + [row.csv_line() for row in self.rows]) + "\n"

    def write_csv(self, path: str | os.PathLike) -> None:
        write_text_atomic(path, self.csv_text())

    def find(self, **attrs) -> list[SweepRow]:
        """Rows matching all given attribute values."""
        out = []
        for row in self.rows:
            if all(getattr(row, key) == val for key, val in attrs.items()):
                out.append(row)
        return out


def write_text_atomic(path: str | os.PathLike, text: str) -> None:
    """Write via a temp file and rename, so partial files never appear."""
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


@dataclass(frozen=True)
class _ArchSpec:
    """Architecture to evaluate at a grid point: name plus L and S."""

    name: str
    l: int | None = None
    s: int | None = None


def _build_beamformer(spec: _ArchSpec, v: np.ndarray, m: int):
    if spec.name == SUB_PS:
        return subconnected_ps(v, m)
    if spec.name == FULL_SWITCH:
        return ps_full_switch(v, m, spec.l)
    if spec.name == SUB_SWITCH:
        return ps_sub_switch(v, m, spec.l, spec.s)
    raise ValueError(f"unknown architecture {spec.name!r}")


def _analytic_rate(spec: _ArchSpec, model: ChannelModel, n: int, m: int, lb: LinkBudget) -> float | None:
    # Closed forms hold for the i.i.d. Rayleigh model only.
    if model.kind != "iid":
        return None
    if spec.name == DIGITAL_ZF:
        return zf_rate_analytic(n, m, lb)
    if spec.name == SUB_PS:
        return subconnected_rate_analytic(n, m, lb)
    if spec.name == FULL_SWITCH:
        return full_switch_rate_analytic(n, m, spec.l, lb)
    return sub_switch_rate_analytic(n, m, spec.s, lb)


def _evaluate_group(
    scenario: str,
    model: ChannelModel,
    n: int,
    m: int,
    k: int,
    snr_list: Sequence[float],
    specs: Sequence[_ArchSpec],
    trials: int,
    master_seed: int,
    workers: int,
) -> list[SweepRow]:
    """Monte-Carlo evaluation of several architectures on shared channels.

    One task per trial: draw the channel from stream ``trial``, decompose it
    once, and compute the per-architecture normalization factors; the rate
    at every SNR then follows in closed form from the factor.  Tasks write
    disjoint rows of a preallocated array, so the reduction is independent
    of scheduling order.
    """
    budgets = [LinkBudget.from_snr_db(s) for s in snr_list]
    gammas = np.empty((trials, len(specs)))

    def one_trial(trial: int) -> None:
        rng = SeededRng(master_seed, trial)
        ch = draw_channel(model, k, n, rng)
        v = None
        for j, spec in enumerate(specs):
            if spec.name == DIGITAL_ZF:
                gammas[trial, j] = zf_gamma(ch, trial)
            else:
                if v is None:
                    v = svd(ch.h).v
                f_rf = _build_beamformer(spec, v, m)
                gammas[trial, j] = hybrid_gamma(ch, f_rf, trial)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(one_trial, range(trials)))
    else:
        for trial in range(trials):
            one_trial(trial)

    rows = []
    for j, spec in enumerate(specs):
        for lb in budgets:
            per_trial = np.array([rate_from_gamma(g, m, lb) for g in gammas[:, j]])
            mc_rate = math.fsum(per_trial.tolist()) / trials
            stderr = float(np.std(per_trial, ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
            rows.append(
                SweepRow(
                    scenario=scenario,
                    channel=model.label,
                    n=n,
                    m=m,
                    k=k,
                    l=spec.l,
                    s=spec.s,
                    snr_db=lb.snr_db,
                    architecture=spec.name,
                    mc_rate=mc_rate,
                    mc_stderr=stderr,
                    analytic_rate=_analytic_rate(spec, model, n, m, lb),
                    trials=trials,
                    seed=master_seed,
                )
            )
    return rows


def _scalar(value, default, what: str):
    if value is None:
        return default
    if isinstance(value, (list, tuple)):
        if len(value) != 1:
            raise ValueError(f"{what} must be a single value for this scenario, got {value}")
        return value[0]
    return value


def _as_list(value, default):
    if value is None:
        return list(default)
    if isinstance(value, (list, tuple)):
        return list(value)
    return [value]


def _sub_ps_spec(n: int, m: int) -> _ArchSpec:
    return _ArchSpec(SUB_PS, l=n // m, s=None)


def _switch_grid(cfg: SweepConfig, n: int) -> list[_ArchSpec]:
    """Full-switch L grid and sub-switch S grid (with L = N/(M S)) specs."""
    block = n // cfg.m
    l_list = _as_list(cfg.l_list, [block // 4, block * 3 // 8, block // 2, block * 3 // 4, block])
    s_list = _as_list(cfg.s_list, [1, 2, 4])
    specs = [_sub_ps_spec(n, cfg.m)]
    for l in l_list:
        if not 1 <= l <= block:
            raise ValueError(f"full-switch grid point L={l} outside [1, {block}]")
        specs.append(_ArchSpec(FULL_SWITCH, l=l, s=None))
    for s in s_list:
        if s < 1 or block % s != 0:
            raise ValueError(f"sub-switch grid point S={s} does not divide block size {block}")
        specs.append(_ArchSpec(SUB_SWITCH, l=block // s, s=s))
    return specs


def run_phase_shifter_sweep(cfg: SweepConfig) -> SweepResult:
    """Sum rate versus active phase shifters at fixed N (all architectures)."""
    n = int(_scalar(cfg.n, 512, "n"))
    snr = float(_scalar(cfg.snr_db, 10.0, "snr_db"))
    specs = _switch_grid(cfg, n)
    rows = _evaluate_group(
        "phase-shifters", cfg.channel, n, cfg.m, cfg.k, [snr], specs,
        cfg.trials, cfg.master_seed, cfg.workers,
    )
    return SweepResult(rows=tuple(rows))


def run_antenna_sweep(cfg: SweepConfig) -> SweepResult:
    """Closed-form accuracy versus N at a 50% shifter reduction (ML/N = 0.5)."""
    n_list = _as_list(cfg.n, [32, 64, 128, 256, 512])
    snr = float(_scalar(cfg.snr_db, 10.0, "snr_db"))
    rows = []
    for n in n_list:
        n = int(n)
        if n % (2 * cfg.m) != 0:
            raise ValueError(f"antenna grid point N={n} not divisible by 2M={2 * cfg.m}")
        half = n // (2 * cfg.m)
        specs = [
            _ArchSpec(FULL_SWITCH, l=half, s=None),
            _ArchSpec(SUB_SWITCH, l=half, s=2),
        ]
        rows.extend(
            _evaluate_group(
                "antennas", cfg.channel, n, cfg.m, cfg.k, [snr], specs,
                cfg.trials, cfg.master_seed, cfg.workers,
            )
        )
    return SweepResult(rows=tuple(rows))


def run_snr_sweep(cfg: SweepConfig) -> SweepResult:
    """Sum rate versus transmit SNR for digital, subconnected and binary-switched."""
    n = int(_scalar(cfg.n, 128, "n"))
    snr_list = [float(s) for s in _as_list(cfg.snr_db, [-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0])]
    if n % (2 * cfg.m) != 0:
        raise ValueError(f"N={n} not divisible by 2M={2 * cfg.m}")
    specs = [
        _ArchSpec(DIGITAL_ZF),
        _sub_ps_spec(n, cfg.m),
        _ArchSpec(SUB_SWITCH, l=n // (2 * cfg.m), s=2),
    ]
    rows = _evaluate_group(
        "snr", cfg.channel, n, cfg.m, cfg.k, snr_list, specs,
        cfg.trials, cfg.master_seed, cfg.workers,
    )
    return SweepResult(rows=tuple(rows))


def run_channel_compare(cfg: SweepConfig) -> SweepResult:
    """Phase-shifter tradeoff over the three channel models.

    Each model runs at its conventional operating point: i.i.d. at 0 dB,
    correlated (rho from the config's channel if set, else 0.7) at 10 dB,
    sparse (paths from the config if set, else 2) at 20 dB.  A 3-element
    snr_db list overrides the per-model SNRs in that order.
    """
    n = int(_scalar(cfg.n, 512, "n"))
    rho = cfg.channel.rho if cfg.channel.kind == "correlated" else 0.7
    paths = cfg.channel.paths if cfg.channel.kind == "sparse" else 2
    snrs = _as_list(cfg.snr_db, [0.0, 10.0, 20.0])
    if len(snrs) != 3:
        raise ValueError("channel comparison needs exactly 3 SNR values (iid, correlated, sparse)")
    legs = [
        (ChannelModel.iid(), float(snrs[0])),
        (ChannelModel.correlated(rho), float(snrs[1])),
        (ChannelModel.sparse(paths), float(snrs[2])),
    ]
    rows = []
    for model, snr in legs:
        specs = _switch_grid(cfg, n)
        rows.extend(
            _evaluate_group(
                "channels", model, n, cfg.m, cfg.k, [snr], specs,
                cfg.trials, cfg.master_seed, cfg.workers,
            )
        )
    return SweepResult(rows=tuple(rows))


_RUNNERS = {
    "phase-shifters": run_phase_shifter_sweep,
    "antennas": run_antenna_sweep,
    "snr": run_snr_sweep,
    "channels": run_channel_compare,
}


def run_scenario(cfg: SweepConfig) -> SweepResult:
    return _RUNNERS[cfg.scenario](cfg)


def load_config(path: str | os.PathLike) -> dict[str, str]:
    """Parse a plain ``key = value`` configuration file.

    Blank lines and ``#`` comments are ignored; keys mirror the sweep
    configuration fields (scenario, n, m, k, snr_db, l_list, s_list,
    channel, rho, mpc, trials, seed, workers); list values are
    comma-separated.
    """
    values: dict[str, str] = {}
    with open(path) as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw.rstrip()!r}")
            key, _, value = line.partition("=")
            values[key.strip()] = value.strip()
    return values
