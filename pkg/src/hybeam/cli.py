"""Command-line frontend.

Subcommands
-----------
sweep {phase-shifters|antennas|snr|channels}
    Run a Monte-Carlo sweep and write its CSV (plus an optional plot).
design
    Draw one channel, build the requested beamformer, print the achieved
    rate and write the hardware (phase/switch) report.
validate
    Run the fast invariant suite and print a pass/fail table.

Exit codes: 0 success, 1 validation failure, 2 usage/config error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import os
import sys

from . import experiments
from .beamform import (
    FULL_SWITCH,
    SUB_PS,
    SUB_SWITCH,
    extract_hardware_full,
    extract_hardware_sub,
    ps_full_switch,
    ps_sub_switch,
    subconnected_ps,
)
from .channel import ChannelModel, draw_channel
from .numerics import NumericalError, SeededRng, erf, svd
from .rates import LinkBudget, hybrid_zf_rate
from .validation import run_validation

__all__ = ["main"]

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


def _int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok.strip()]


def _float_list(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hybeam",
        description="Hybrid beamformer construction and Monte-Carlo sum-rate evaluation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="run a Monte-Carlo sweep and write a CSV")
    sweep.add_argument("name", choices=experiments.SCENARIOS, help="sweep scenario")
    sweep.add_argument("--config", help="key = value configuration file (flags override it)")
    sweep.add_argument("--n", type=_int_list, help="antenna count(s), comma separated")
    sweep.add_argument("--m", type=int, help="RF chain count (default 4)")
    sweep.add_argument("--k", type=int, help="user count (default m)")
    sweep.add_argument("--snr-db", type=_float_list, help="SNR grid in dB, comma separated")
    sweep.add_argument("--l", type=_int_list, help="full-switch shifters-per-chain grid")
    sweep.add_argument("--s", type=_int_list, help="sub-switch group-size grid")
    sweep.add_argument("--channel", choices=("iid", "correlated", "sparse"), help="channel model")
    sweep.add_argument("--rho", type=float, help="correlation coefficient (correlated model)")
    sweep.add_argument("--mpc", type=int, help="multipath components per user (sparse model)")
    sweep.add_argument("--trials", type=int, help="Monte-Carlo realizations (default 1000)")
    sweep.add_argument("--seed", type=int, help="master seed (default 1)")
    sweep.add_argument("--workers", type=int, help="parallel trial workers (default 1)")
    sweep.add_argument("--output", "-o", help="output CSV path (default results/<timestamped>.csv)")
    sweep.add_argument("--plot", action="store_true", help="also write a PNG plot next to the CSV")
    sweep.set_defaults(func=cmd_sweep)

    design = sub.add_parser("design", help="build one beamformer and write its hardware report")
    design.add_argument("--arch", choices=(SUB_PS, FULL_SWITCH, SUB_SWITCH), default=SUB_PS)
    design.add_argument("--n", type=int, default=16, help="antenna count")
    design.add_argument("--m", type=int, default=4, help="RF chain count (= users)")
    design.add_argument("--l", type=int, help="shifters per chain (full-switch)")
    design.add_argument("--s", type=int, help="group size (sub-switch)")
    design.add_argument("--snr-db", type=float, default=10.0)
    design.add_argument("--channel", choices=("iid", "correlated", "sparse"), default="iid")
    design.add_argument("--rho", type=float, default=0.7)
    design.add_argument("--mpc", type=int, default=2)
    design.add_argument("--seed", type=int, default=1)
    design.add_argument("--output", "-o", help="report path (default results/<timestamped>.txt)")
    design.set_defaults(func=cmd_design)

    validate = sub.add_parser("validate", help="run the fast invariant suite")
    validate.add_argument("--trials", type=int, default=500)
    validate.add_argument("--seed", type=int, default=1)
    # Fault-injection hook for exercising the failure path; not for users.
    validate.add_argument("--erf-scale", type=float, default=1.0, help=argparse.SUPPRESS)
    validate.set_defaults(func=cmd_validate)

    return parser


def _default_output(prefix: str, extension: str) -> str:
    stamp = _dt.datetime.now().strftime("%Y%m%d-%H%M%S")
    return os.path.join("results", f"{prefix}-{stamp}.{extension}")


def _channel_model(kind: str | None, rho: float | None, mpc: int | None) -> ChannelModel:
    kind = kind or "iid"
    if kind == "iid":
        return ChannelModel.iid()
    if kind == "correlated":
        return ChannelModel.correlated(0.7 if rho is None else rho)
    return ChannelModel.sparse(2 if mpc is None else mpc)


def _merge_config(args: argparse.Namespace) -> experiments.SweepConfig:
    """File values first, then non-default flags on top."""
    file_values: dict[str, str] = {}
    if args.config:
        file_values = experiments.load_config(args.config)

    def pick(flag, key, convert, default=None):
        if flag is not None:
            return flag
        if key in file_values:
            return convert(file_values[key])
        return default

    m = pick(args.m, "m", int, default=4)
    k = pick(args.k, "k", int, default=m)
    channel = _channel_model(
        pick(args.channel, "channel", str),
        pick(args.rho, "rho", float),
        pick(args.mpc, "mpc", int),
    )
    return experiments.SweepConfig(
        scenario=args.name,
        n=pick(args.n, "n", _int_list),
        m=m,
        k=k,
        snr_db=pick(args.snr_db, "snr_db", _float_list),
        l_list=pick(args.l, "l_list", _int_list),
        s_list=pick(args.s, "s_list", _int_list),
        channel=channel,
        trials=pick(args.trials, "trials", int, default=1000),
        master_seed=pick(args.seed, "seed", int, default=1),
        workers=pick(args.workers, "workers", int, default=1),
    )


def _plot_result(result: experiments.SweepResult, scenario: str, png_path: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    def x_of(row):
        if scenario == "antennas":
            return row.n
        if scenario == "snr":
            return row.snr_db
        return (row.l or 0) * row.m  # total active phase shifters

    xlabel = {"antennas": "antennas", "snr": "P/sigma^2 (dB)"}.get(scenario, "active phase shifters")
    fig, ax = plt.subplots(figsize=(7, 5))
    keys = sorted({(row.channel, row.architecture) for row in result.rows})
    for channel, arch in keys:
        rows = [r for r in result.rows if r.channel == channel and r.architecture == arch]
        rows.sort(key=x_of)
        label = arch if len({c for c, _ in keys}) == 1 else f"{arch} [{channel}]"
        ax.plot([x_of(r) for r in rows], [r.mc_rate for r in rows], marker="o", label=label)
        if all(r.analytic_rate is not None for r in rows):
            ax.plot(
                [x_of(r) for r in rows],
                [r.analytic_rate for r in rows],
                linestyle="--",
                alpha=0.6,
                label=f"{label} (analytic)",
            )
    ax.set_xlabel(xlabel)
    ax.set_ylabel("sum rate (bits/s/Hz)")
    ax.grid(True, alpha=0.4)
    ax.legend(fontsize=8)
    fig.tight_layout()
    tmp = png_path + ".tmp.png"
    fig.savefig(tmp, dpi=120)
    plt.close(fig)
    os.replace(tmp, png_path)


def cmd_sweep(args: argparse.Namespace) -> int:
    cfg = _merge_config(args)
    result = experiments.run_scenario(cfg)
    out = args.output or _default_output(f"sweep-{args.name}", "csv")
    result.write_csv(out)
    print(f"wrote {out} ({len(result.rows)} rows, {cfg.trials} trials, seed {cfg.master_seed})")
    if args.plot:
        png = os.path.splitext(out)[0] + ".png"
        _plot_result(result, args.name, png)
        print(f"wrote {png}")
    return EXIT_OK


def cmd_design(args: argparse.Namespace) -> int:
    model = _channel_model(args.channel, args.rho, args.mpc)
    ch = draw_channel(model, args.m, args.n, SeededRng(args.seed, 0))
    v = svd(ch.h).v
    if args.arch == SUB_PS:
        f_rf = subconnected_ps(v, args.m)
        hardware = extract_hardware_full(f_rf)
    elif args.arch == FULL_SWITCH:
        if args.l is None:
            raise ValueError("full-switch design needs --l")
        f_rf = ps_full_switch(v, args.m, args.l)
        hardware = extract_hardware_full(f_rf)
    else:
        if args.s is None:
            raise ValueError("sub-switch design needs --s")
        if args.n % (args.m * args.s) != 0:
            raise ValueError(f"antennas ({args.n}) must be divisible by m*s ({args.m * args.s})")
        f_rf = ps_sub_switch(v, args.m, args.n // (args.m * args.s), args.s)
        hardware = extract_hardware_sub(f_rf)
    rate = hybrid_zf_rate(ch, f_rf, LinkBudget.from_snr_db(args.snr_db))
    out = args.output or _default_output(f"design-{args.arch}", "txt")
    experiments.write_text_atomic(out, hardware.to_report())
    print(
        f"{args.arch}: N={args.n} M={args.m} L={f_rf.shifters_per_chain} S={f_rf.group_size} "
        f"channel={model.label} seed={args.seed}"
    )
    print(f"achieved sum rate at {args.snr_db:g} dB: {rate.rate_bits:.6f} bits/s/Hz")
    print(f"wrote {out}")
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    erf_fn = None
    if args.erf_scale != 1.0:
        scale = args.erf_scale
        erf_fn = lambda x: scale * erf(x)  # noqa: E731
    checks = run_validation(trials=args.trials, seed=args.seed, erf_fn=erf_fn)
    for check in checks:
        print(check.line())
    failed = [c for c in checks if not c.passed]
    print(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    return EXIT_VALIDATION if failed else EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
