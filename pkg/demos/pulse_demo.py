"""Send a Gaussian control pulse through a measured line and compare envelopes.

Run from the repository root:  python3 demos/pulse_demo.py
"""
from pathlib import Path

from socketlab import pulse as pl
from socketlab import read_touchstone

FX = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

spec = pl.PulseSpec()
t, x = pl.synthesize_pulse(spec)
y = pl.transmit(x, read_touchstone(FX / "dut.s2p"), sample_rate=spec.sample_rate)
m = pl.distortion_metrics(x, y, spec.sample_rate)
print(f"envelope correlation {m.envelope_correlation:.6f}")
print(f"FWHM change {m.fwhm_change_fraction:.2e}, delay {m.delay_s * 1e9:.3f} ns")
