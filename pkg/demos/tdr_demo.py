"""Synthesize a TDR trace from an impedance profile and extract it back.

Run from the repository root:  python3 demos/tdr_demo.py
"""
from socketlab import tdr
from socketlab.tdr import ImpedanceProfile, Segment

step = ImpedanceProfile((Segment(125e-12, 50.0), Segment(300e-12, 60.0), Segment(300e-12, 50.0)))
for order in ("first", "multi"):
    trace = tdr.synthesize_trace(step, order=order)
    got = tdr.profile_from_trace(trace)
    print(f"{order:>5}-order trace -> " + ", ".join(f"{s.z:.2f} ohm for {s.delay * 1e12:.0f} ps"
                                                  for s in got.segments))

# A resistive section shows up as a ramp; its height is the series resistance.
lossy = ImpedanceProfile((Segment(200e-12, 50.0), Segment(500e-12, 50.0, 98.0), Segment(200e-12, 50.0)))
got = tdr.profile_from_trace(tdr.synthesize_trace(lossy))
print("lossy line series resistance per segment:", [round(s.r_series, 2) for s in got.segments])
print("segment lengths at v = 0.5 c (mm):", [round(float(x) * 1e3, 2) for x in tdr.segment_lengths(got, 0.5)])
