"""Closed-form package estimates from the bundled material tables.

Run from the repository root:  python3 demos/estimators_demo.py
"""
from socketlab import estimators as est
from socketlab.errors import InputError

c = est.load_constants()
cav = est.CavitySpec(c["cavity"]["a"], c["cavity"]["b"], c["cavity"]["height"], c["cavity"]["eps_r_si"], 0.1e-3)
modes = est.cavity_modes(cav)
for name, f in modes["vacuum"].items():
    print(f"{name}: {f / 1e9:.2f} GHz (empty box)")
print(f"TE110 with a 0.1 mm silicon layer: {modes['perturbed_first'] / 1e9:.2f} GHz")

for label, spec in est.table_ii_specs().items():
    line = f"{label:>13}: trace {est.trace_resistance(spec):8.2f} ohm"
    try:
        line += f", contact bound {est.contact_resistance_bound(spec) * 1e3:.0f} mohm"
    except InputError as exc:  # some rows measure below the trace estimate
        line += f" ({exc})"
    print(line)

print(f"wire heat conductance: {est.heat_transfer_rate(est.table_vii_wire()):.3g} W/K")
m = c["magnetics"]
flux = est.dipole_field_and_flux(est.MagneticSpec(m["b_measured_mG"] * 1e-7, m["r0"], m["r_target"],
                                                  m["squid"][0] * m["squid"][1]))
print(f"dipole field at qubit {flux.b_q * 1e7:.4f} mG, flux {flux.flux:.2e} Wb = {flux.flux_ratio:.1e} flux quanta")
