"""From a channel draw to switch positions and shifter angles.

Builds the binary-switched beamformer for a 32-antenna, 4-chain array,
extracts the physical settings (one phase per shifter, one-hot 1-of-2
select vectors), prints the plain-text hardware report, and shows that
parsing the report back reproduces the RF matrix.

Run:  python demos/hardware_report.py
"""

import numpy as np

from hybeam import (
    HardwareConfig,
    LinkBudget,
    SeededRng,
    extract_hardware_sub,
    hybrid_zf_rate,
    iid_rayleigh,
    ps_sub_switch,
    svd,
)

n, m, s = 32, 4, 2
channel = iid_rayleigh(m, n, SeededRng(3, 0))
v = svd(channel.h).v
beamformer = ps_sub_switch(v, m, n // (m * s), s)
rate = hybrid_zf_rate(channel, beamformer, LinkBudget.from_snr_db(10.0))
print(f"sub-switch beamformer, N={n}, M={m}, S={s}: "
      f"{rate.rate_bits:.3f} bits/s/Hz at 10 dB\n")

hardware = extract_hardware_sub(beamformer)
report = hardware.to_report()
print(report)

parsed = HardwareConfig.from_report(report)
roundtrip = np.max(np.abs(parsed.apply() - beamformer.f_rf))
print(f"report -> settings -> RF matrix round trip, max deviation: {roundtrip:.2e}")
print(f"selected antennas per chain: {[list(sel) for sel in beamformer.selected]}")
