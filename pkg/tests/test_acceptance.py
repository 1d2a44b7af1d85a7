"""Acceptance checks, one test per criterion.

Each test records a PASS/FAIL line (printed in the terminal summary by
conftest.py). Running this file directly prints the same lines.
"""
import json
import sys
import time
from pathlib import Path

import jsonschema
import numpy as np
import pytest

from socketlab import estimators as est
from socketlab import layout as ly
from socketlab import network as nw
from socketlab import pulse as pl
from socketlab import resfit as rf
from socketlab import tdr
from socketlab.cli import main
from socketlab.io_touchstone import NetworkData
from socketlab.schemas import SCHEMAS

FX = Path(__file__).parent / "fixtures"
RESULTS = {}


def record(num, title, checks):
    """``checks`` is a list of (label, ok); the criterion passes when all do."""
    ok = all(c for _, c in checks)
    failed = [label for label, c in checks if not c]
    detail = "; ".join(label for label, _ in checks)
    RESULTS[num] = f"[{'PASS' if ok else 'FAIL'}] {num:>2}. {title}: {detail}"
    if failed:
        RESULTS[num] += f"  <- failing: {', '.join(failed)}"
    print(RESULTS[num])
    assert ok, RESULTS[num]


def test_criterion_01_table_ii():
    t0 = time.perf_counter()
    expect = {"Au-100nm": 253.0, "Au-200nm": 126.5, "Au-200nm-77K": 26.16, "Ag-3um": 2.04, "Al-120nm": 166.1}
    specs = est.table_ii_specs()
    checks = []
    for label, ref in expect.items():
        r = est.trace_resistance(specs[label])
        checks.append((f"{label} {r:.4g} ohm", abs(r / ref - 1) <= 0.005))
    dt = time.perf_counter() - t0
    checks.append((f"{dt * 1e3:.1f} ms", dt < 1.0))
    record(1, "Table II trace resistance", checks)


def test_criterion_02_contact_bound():
    r = est.contact_resistance_bound(est.table_ii_specs()["Ag-3um"])
    record(2, "Ag contact-resistance bound", [(f"R_c <= {r:.4f} ohm", abs(r - 0.335) <= 0.02)])


def test_criterion_03_thermal():
    wire = est.table_vii_wire(30.5e-3)
    inner, outer = wire.conductors
    rate = est.heat_transfer_rate(wire)
    record(3, "Thermal conductance", [
        (f"A_inner {inner.area:.4g} m2", abs(inner.area / 4.74e-8 - 1) <= 0.005),
        (f"A_outer {outer.area:.4g} m2", abs(outer.area / 7.13e-7 - 1) <= 0.005),
        (f"Pi_t {rate:.3g} W/K", abs(rate / 6e-7 - 1) <= 0.10),
    ])


def test_criterion_04_magnetics():
    m = est.load_constants()["magnetics"]
    spec = est.MagneticSpec(m["b_measured_mG"] * 1e-3 * est.GAUSS, m["r0"], m["r_target"],
                            m["squid"][0] * m["squid"][1])
    r = est.dipole_field_and_flux(spec)
    b_mg = r.b_q / est.GAUSS * 1e3
    record(4, "Magnetic field and flux", [
        (f"B_q {b_mg:.4f} mG", abs(b_mg / 0.075 - 1) <= 0.02),
        (f"Phi_q {r.flux:.3g} Wb", 1 / 1.5 <= r.flux / 4e-18 <= 1.5),
    ])


def test_criterion_05_layout():
    plan = ly.plan_lattice(ly.LatticeSpec(10))
    settings = [round(s.protrusion * 1e3, 12) for s in ly.compression_settings()]
    al = ly.contraction(est.load_constants()["contraction"]["al_6061_alpha_4k"], 15e-3)
    si = ly.contraction(ly.implied_coefficient(3.2e-6, 15e-3), 15e-3)
    record(5, "Layout, compression, contraction", [
        (f"chip side {plan.chip_side!r} m", plan.chip_side == 0.072),
        (f"settings {settings} mm", settings == [3.55, 4.00, 4.45, 4.90, 5.35]),
        (f"Al {al * 1e6:.2f} um", abs(al - 62.25e-6) < 1e-12),
        (f"Si {si * 1e6:.2f} um", abs(si - 3.2e-6) < 1e-15),
    ])


def test_criterion_06_network():
    rng = np.random.default_rng(2024)
    worst = 0.0
    for ports in (2, 4):
        a = rng.standard_normal((1000, ports, ports)) + 1j * rng.standard_normal((1000, ports, ports))
        s = 0.9 * a / np.linalg.norm(a, 2, axis=(1, 2))[:, None, None]
        worst = max(worst, float(np.max(np.abs(nw.s_from_z(nw.z_from_s(s)) - s))))
    v = nw.vswr(10 ** (-13.8 / 20))
    f = np.linspace(4e9, 5e9, 101)
    h = f[1] - f[0]
    x = (f - 4.5e9) / 0.5e9
    poly_err = 0.0
    for deg in range(7):
        c = np.random.default_rng(deg).uniform(-1, 1, deg + 1)
        exact = np.polyval(np.polyder(c), x) / 0.5e9 if deg else 0 * x
        tau = -nw.derivative6(np.polyval(c, x), h) / (2 * np.pi)
        poly_err = max(poly_err, float(np.max(np.abs(tau + exact / (2 * np.pi)))))
    errs = []
    for n in (41, 81, 161):
        ff = np.linspace(1e9, 3e9, n)
        exact = -np.cos(2 * np.pi * ff / 1e9) / 1e9
        errs.append(np.max(np.abs(-nw.derivative6(np.sin(2 * np.pi * ff / 1e9), ff[1] - ff[0]) / (2 * np.pi)
                                  - exact)))
    rates = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    record(6, "Network oracle", [
        (f"S-Z roundtrip max err {worst:.1e}", worst <= 1e-10),
        (f"VSWR {v:.4f}", abs(v - 1.513) <= 0.001),
        (f"poly deg<=6 delay err {poly_err:.1e} s", poly_err <= 1e-15),
        (f"convergence order {', '.join(f'{r:.2f}' for r in rates)}", bool(np.all(rates > 5.5))),
    ])


def test_criterion_07_tdr():
    t0 = time.perf_counter()
    ratios = np.geomspace(1e-3, 1e3, 2001)
    z = 50 * ratios
    back = tdr.impedance_from_xi(tdr.reflection_coefficient(z, 50.0), 50.0)
    inv_err = float(np.max(np.abs(back / z - 1)))
    src = tdr.ImpedanceProfile(tuple(tdr.Segment(d, zz) for d, zz in
                                     ((125e-12, 50.0), (300e-12, 60.0), (300e-12, 50.0))))
    got = [s.z for s in tdr.profile_from_trace(tdr.synthesize_trace(src)).segments]
    rt_err = max(abs(g / r - 1) for g, r in zip(got, (50, 60, 50))) if len(got) == 3 else np.inf
    lossy = tdr.ImpedanceProfile(tuple(tdr.Segment(*s) for s in
                                       ((200e-12, 50.0), (500e-12, 50.0, 98.0), (200e-12, 50.0))))
    rise = sum(s.r_series for s in tdr.profile_from_trace(tdr.synthesize_trace(lossy)).segments)
    dt = time.perf_counter() - t0
    record(7, "TDR", [
        (f"inverse identity rel err {inv_err:.1e}", inv_err <= 1e-12),
        (f"50/60/50 roundtrip {[round(g, 2) for g in got]}", rt_err <= 0.01),
        (f"lossy rise {rise:.2f} ohm", abs(rise / 98 - 1) <= 0.01),
        (f"{dt:.2f} s", dt < 5),
    ])


def _fit_suite(model, trials=100, sigma=0.01, seed=0):
    f = rf.resonance_grid(model)
    r = rf.fit_resonator(f, rf.synthesize_s21(model, f))
    clean = (abs(r.model.f0 / model.f0 - 1) <= 1e-4, abs(r.model.q_i / model.q_i - 1) <= 0.01,
             abs(r.model.q_c_star / model.q_c_star - 1) <= 0.01, abs(r.model.phi - model.phi) <= 0.01)
    rng = np.random.default_rng(seed)
    base = rf.synthesize_s21(model, f)
    qi = []
    for _ in range(trials):
        noise = sigma * (rng.standard_normal(f.size) + 1j * rng.standard_normal(f.size))
        qi.append(rf.fit_resonator(f, base + noise).model.q_i)
    med = float(np.median(qi))
    return all(clean), med, abs(med / model.q_i - 1) <= 0.05


def test_criterion_08_resfit():
    t0 = time.perf_counter()
    s4 = rf.ResonatorModel(5064513933.0, 165790.0, 16002.0, -0.0347)
    clean, med, ok = _fit_suite(s4)
    checks = [(f"S4 noiseless {'ok' if clean else 'off'}", clean), (f"S4 median Qi {med:.0f}", ok)]
    for row in est.load_constants()["table_iii"]:
        m = rf.ResonatorModel(row["f0"], row["q_i"], row["q_c_star"])
        clean, med, ok = _fit_suite(m, seed=row["i"])
        checks.append((f"row {row['i']} {'ok' if clean else 'off'}/median Qi {med:.0f}", clean and ok))
    dt = time.perf_counter() - t0
    checks.append((f"{dt:.2f} s", dt < 30))
    record(8, "Resonator fit", checks)


def test_criterion_09_cavity():
    a = est.te_mode_frequency(13e-3, 13e-3, 2e-3, 1, 2, 0)
    b = est.te_mode_frequency(13e-3, 13e-3, 2e-3, 2, 1, 0)
    f110 = est.te_mode_frequency(13e-3, 13e-3, 2e-3, 1, 1, 0)
    trivial = (est.perturbed_mode(f110, 1.0, 0.5e-3, 2e-3) == f110
               and est.perturbed_mode(f110, 11.68, 0.0, 2e-3) == f110)
    record(9, "Cavity modes", [
        ("TE120 == TE210", a == b),
        (f"TE110 {f110 / 1e9:.2f} GHz", abs(f110 / 15.7e9 - 1) <= 0.10),
        ("eps_r = 1 and d_s = 0 leave f0 unchanged", trivial),
    ])


def test_criterion_10_isolation():
    f = np.linspace(3e9, 9e9, 601)
    s = np.zeros((f.size, 4, 4), complex)
    rng = np.random.default_rng(10)
    for i, j in nw.CROSSTALK_PAIRS:
        s[:, i - 1, j - 1] = 10 ** (rng.uniform(-70, -55, f.size) / 20)
    s[:, 2, 0] = np.where(np.isclose(f, 6e9), 10 ** (-45 / 20), s[:, 2, 0])
    rep = nw.band_isolation(NetworkData(f, s), 4e9, 8e9)
    record(10, "Crosstalk isolation", [
        (f"{rep.isolation_db:.2f} dB", abs(rep.isolation_db - 45.0) <= 0.1),
        (f"at {rep.freq / 1e9:.3f} GHz", abs(rep.freq - 6e9) < 1.0),
    ])


def test_criterion_11_pulse():
    spec = pl.PulseSpec()
    _, x = pl.synthesize_pulse(spec)
    f = np.linspace(1e6, 20e9, 4001)
    s = np.zeros((f.size, 2, 2), complex)
    s[:, 1, 0] = s[:, 0, 1] = np.exp(-2j * np.pi * f * 2e-9)
    y = pl.transmit(x, NetworkData(f, s), sample_rate=spec.sample_rate)
    m = pl.distortion_metrics(x, y, spec.sample_rate)
    record(11, "Pulse through all-pass delay", [
        (f"correlation {m.envelope_correlation:.7f}", m.envelope_correlation > 0.999),
        (f"FWHM change {m.fwhm_change_fraction:.1e}", abs(m.fwhm_change_fraction) < 0.01),
    ])


CLI_CASES = {
    "netparams": ["--in", str(FX / "dut.s2p"), "--z-load", "50"],
    "isolation": ["--in", str(FX / "xtalk.s4p")],
    "dips": ["--in", str(FX / "dip.s2p")],
    "tdr-extract": ["--in", str(FX / "tdr.csv")],
    "tdr-synth": ["--profile", str(FX / "profile.json")],
    "resfit": ["--in", str(FX / "sweep.csv")],
    "cavity": [],
    "dc": ["--sample", "Ag-3um"],
    "thermal": [],
    "magnetics": [],
    "layout": ["--n", "10"],
    "compression": [],
    "yield": ["--trials", "20000"],
    "pulse": ["--in", str(FX / "dut.s2p")],
}


def test_criterion_12_cli(tmp_path, capsys):
    checks = []
    for cmd, args in CLI_CASES.items():
        out = tmp_path / f"{cmd}.json"
        rc = main([cmd, *args, "--out", str(out)])
        valid = False
        if rc == 0:
            try:
                jsonschema.validate(json.loads(out.read_text()), SCHEMAS[cmd])
                valid = True
            except jsonschema.ValidationError:
                pass
        checks.append((cmd, rc == 0 and valid))
    capsys.readouterr()
    ok = all(c for _, c in checks)
    record(12, "End-to-end CLI (suite time is checked at session end)",
           [(f"{sum(c for _, c in checks)}/{len(checks)} subcommands exit 0 with valid JSON", ok)]
           + [(f"{name} failed", False) for name, c in checks if not c])


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
