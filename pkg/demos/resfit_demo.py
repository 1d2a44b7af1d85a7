"""Fit the inverse-S21 notch model to a noisy raw sweep.

Run from the repository root:  python3 demos/resfit_demo.py
"""
import numpy as np

from socketlab import resfit as rf

truth = rf.ResonatorModel(5064513933.0, 165790.0, 16002.0, -0.0347)
f = rf.resonance_grid(truth, points=801, span=12)
rng = np.random.default_rng(7)
cable = 0.5 * np.exp(-2j * np.pi * f * 30e-9)  # attenuation and electrical delay
raw = cable * rf.synthesize_s21(truth, f) + 5e-3 * (rng.standard_normal(f.size) + 1j * rng.standard_normal(f.size))

res = rf.fit_sweep(f, raw)
m, e = res.model, res.std_errors
print(f"f0   {m.f0:.1f} Hz   (truth {truth.f0:.1f})")
print(f"Qi   {m.q_i:.0f} +/- {e['q_i']:.0f}   (truth {truth.q_i:.0f})")
print(f"Qc*  {m.q_c_star:.0f} +/- {e['q_c_star']:.0f}   (truth {truth.q_c_star:.0f})")
print(f"phi  {m.phi:.4f} rad   (truth {truth.phi:.4f})")
print(f"removed delay {res.normalization.delay * 1e9:.3f} ns, {res.n_iter} iterations")
