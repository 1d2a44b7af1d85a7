"""Lattice planning, compression settings and a mating-yield Monte Carlo.

Run from the repository root:  python3 demos/layout_demo.py
"""
from socketlab import layout as ly

plan = ly.plan_lattice(ly.LatticeSpec(10))
print(f"10x10 lattice: {plan.chip_side * 1e3:.1f} mm side, {plan.total_pads} pads, {plan.readout_lines} readout lines")
for n in (4, 5, 10):
    w = ly.wiring_scaling(n)
    print(f"  n={n:>2}: {w.wirebond_count} edge bonds vs {w.socket_count} socket wires")

print("compression settings:", ", ".join(f"{s.protrusion * 1e3:.2f} mm" + ("*" if s.preferred else "")
                                       for s in ly.compression_settings()))
print(f"FE-113 225 at 2 mm: {ly.spring_force('FE-113 225', 2e-3).force:.3f} N")

for sigma in (25e-6, 50e-6, 100e-6):
    rep = ly.mating_yield(ly.ToleranceSpec(machining_sigma=sigma, dicing_sigma=4e-6, recess_gap=50e-6,
                                           contraction_al_coeff=4.15e-3,
                                           contraction_si_coeff=3.2e-6 / 15e-3, seed=1))
    print(f"machining sigma {sigma * 1e6:5.0f} um -> yield {rep.yield_fraction:.4f}, "
          f"p99 offset {rep.lateral_percentiles['p99'] * 1e6:.0f} um")
