"""How many phase shifters does the array actually need?

A 512-antenna base station with 4 RF chains serves 4 users at 10 dB.  The
subconnected beamformer spends one phase shifter per antenna (512 total).
Routing fewer shifters through switch networks trades hardware for rate:
this script sweeps the number of active shifters for the fully-connected
and the 1-of-S switch networks and compares the Monte-Carlo sum rate with
each architecture's closed-form prediction.

Run:  python demos/phase_shifter_tradeoff.py [--plot]
(200 trials for speed; the experiments default is 1000.)
"""

import sys

from hybeam import SweepConfig, run_phase_shifter_sweep

cfg = SweepConfig(scenario="phase-shifters", n=512, trials=200, master_seed=1)
result = run_phase_shifter_sweep(cfg)

print(f"N=512, M=K=4, 10 dB, {cfg.trials} trials\n")
print(f"{'architecture':<14}{'shifters':>9}{'S':>4}{'MC rate':>10}{'analytic':>10}{'rel err':>9}")
for row in result.rows:
    shifters = row.l * row.m
    s = row.s if row.s is not None else ""
    print(
        f"{row.architecture:<14}{shifters:>9}{s:>4}{row.mc_rate:>10.3f}"
        f"{row.analytic_rate:>10.3f}{row.rel_error:>9.4f}"
    )

sub = result.find(architecture="sub-ps")[0]
half = result.find(architecture="full-switch", l=64)[0]
ss4 = result.find(architecture="sub-switch", s=4)[0]
print(f"\nhalving the shifters (fully-connected switches): "
      f"{abs(half.mc_rate - sub.mc_rate) / sub.mc_rate * 100:.2f}% rate change")
print(f"quartering them (1-of-4 switches): {ss4.mc_rate / sub.mc_rate * 100:.1f}% of the full rate")

if "--plot" in sys.argv:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 5))
    for arch, marker in (("full-switch", "o"), ("sub-switch", "s")):
        rows = sorted(result.find(architecture=arch), key=lambda r: r.l)
        ax.plot([r.l * r.m for r in rows], [r.mc_rate for r in rows], marker, ls="-", label=f"{arch} (MC)")
        ax.plot([r.l * r.m for r in rows], [r.analytic_rate for r in rows], ls="--", alpha=0.6,
                label=f"{arch} (closed form)")
    ax.axhline(sub.mc_rate, color="k", lw=0.8, label="sub-ps (all 512 shifters)")
    ax.set_xlabel("active phase shifters")
    ax.set_ylabel("sum rate (bits/s/Hz)")
    ax.legend(fontsize=8)
    ax.grid(alpha=0.4)
    fig.tight_layout()
    fig.savefig("phase_shifter_tradeoff.png", dpi=120)
    print("wrote phase_shifter_tradeoff.png")
