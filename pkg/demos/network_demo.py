"""Characterize a measured two-port and a four-port crosstalk file.

Run from the repository root:  python3 demos/network_demo.py
"""
from pathlib import Path

import numpy as np

from socketlab import read_touchstone
from socketlab import network as nw

FX = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

# A 1 ns matched line: group and phase delay should both read 1 ns.
dut = read_touchstone(FX / "dut.s2p")
mp = nw.microwave_params(dut)
print(f"two-port: {len(dut)} points from {dut.freqs[0] / 1e9:.1f} to {dut.freqs[-1] / 1e9:.1f} GHz")
print(f"  median group delay  {np.median(mp.tau_g) * 1e9:.4f} ns")
print(f"  median phase delay  {np.median(mp.tau_phi) * 1e9:.4f} ns")
print(f"  worst input VSWR    {mp.vswr_in.max():.3f}")

# Worst-case coupling between neighbouring lines inside the 4-8 GHz band.
rep = nw.band_isolation(read_touchstone(FX / "xtalk.s4p"), 4e9, 8e9)
print(f"four-port: isolation {rep.isolation_db:.2f} dB at {rep.freq / 1e9:.3f} GHz via S{rep.worst_pair[0]}{rep.worst_pair[1]}")

# A transmission dip with flat group delay is an anomaly, not a resonance.
dip = nw.classify_dip(read_touchstone(FX / "dip.s2p"))
print(f"dip at {dip.center_freq / 1e9:.3f} GHz: depth {dip.depth:.1f} dB, "
      f"3 dB width {dip.bandwidth_3db / 1e6:.0f} MHz, {dip.classification}")
