"""``socketlab`` command line.

Every subcommand prints a human-readable table and, with ``--out``, writes a
JSON, CSV or SVG artifact (format from ``--format`` or the file extension).
Exit codes: 0 success, 1 computation failure, 2 bad input or usage.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings
from pathlib import Path

import numpy as np

from . import estimators as est
from . import layout as lay
from . import network as nw
from . import pulse as pu
from . import resfit as rf
from . import tdr
from .errors import ComputationError, InputError
from .io_touchstone import parse_sweep_csv, parse_tdr_csv, read_touchstone
from .plot import render_plot
from .schemas import SCHEMA_ID


class Artifact:
    """Outputs of one subcommand: JSON payload, table rows, optional CSV/SVG."""

    def __init__(self, kind, payload, rows, csv_table=None, svg=None):
        self.kind = kind
        self.payload = payload
        self.rows = rows  # (name, value, unit)
        self.csv_table = csv_table  # (header, columns)
        self.svg = svg  # (series, plot kind)

    def document(self):
        return {"schema": SCHEMA_ID, "kind": self.kind, **_clean(self.payload)}


def _clean(v):
    if isinstance(v, dict):
        return {k: _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    if isinstance(v, np.ndarray):
        return _clean(v.tolist())
    if isinstance(v, (np.bool_, bool)):
        return bool(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return float(v) if math.isfinite(v) else None
    return v


def _db(x):
    return 20 * np.log10(np.maximum(np.abs(x), np.finfo(float).tiny))


def _net(path, ports=None):
    try:
        return read_touchstone(path, ports=ports)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


def _text(path):
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


# ---------------------------------------------------------------- network


def cmd_netparams(a):
    net = _net(a.input)
    if net.ports != 2:
        raise InputError("netparams needs a 2-port file")
    z_load = net.z_ref if a.z_load is None else a.z_load
    mp = nw.microwave_params(net, z_load=z_load, subtract_load=a.subtract_load, smoothing=a.smoothing)
    payload = {
        "z_ref_ohm": net.z_ref, "z_load_ohm": z_load, "subtract_load": a.subtract_load,
        "freqs_hz": mp.freqs, "z_in_re_ohm": mp.z_in.real, "z_in_im_ohm": mp.z_in.imag,
        "vswr_in": mp.vswr_in, "tau_phi_s": mp.tau_phi, "tau_g_s": mp.tau_g,
    }
    mid = len(mp.freqs) // 2
    rows = [
        ("points", len(mp.freqs), ""),
        ("band", f"{mp.freqs[0] / 1e9:.4g}-{mp.freqs[-1] / 1e9:.4g}", "GHz"),
        ("max VSWR_in", f"{np.max(mp.vswr_in):.4g}", ""),
        (f"Z_in @ {mp.freqs[mid] / 1e9:.4g} GHz", f"{mp.z_in[mid]:.4g}", "ohm"),
        ("median tau_phi", f"{np.nanmedian(mp.tau_phi) * 1e9:.4g}", "ns"),
        ("median tau_g", f"{np.median(mp.tau_g) * 1e9:.4g}", "ns"),
    ]
    cols = [mp.freqs, mp.z_in.real, mp.z_in.imag, mp.vswr_in, mp.tau_phi, mp.tau_g]
    header = ["freq_hz", "z_in_re_ohm", "z_in_im_ohm", "vswr_in", "tau_phi_s", "tau_g_s"]
    series = {"|S11|": (net.freqs, _db(net.sparam(1, 1))), "|S21|": (net.freqs, _db(net.sparam(2, 1)))}
    return Artifact("netparams", payload, rows, (header, cols), (series, "magnitude"))


def cmd_isolation(a):
    net = _net(a.input)
    rep = nw.band_isolation(net, a.f_lo, a.f_hi)
    payload = {"f_lo_hz": a.f_lo, "f_hi_hz": a.f_hi, "isolation_db": rep.isolation_db,
               "freq_hz": rep.freq, "worst_pair": list(rep.worst_pair)}
    rows = [("isolation", f"{rep.isolation_db:.2f}", "dB"),
            ("worst frequency", f"{rep.freq / 1e9:.4g}", "GHz"),
            ("worst pair", "S%d%d" % rep.worst_pair, "")]
    series = {f"|S{i}{j}|": (net.freqs, _db(net.sparam(i, j))) for i, j in nw.CROSSTALK_PAIRS}
    cols = [net.freqs] + [s[1] for s in series.values()]
    header = ["freq_hz"] + [f"s{i}{j}_db" for i, j in nw.CROSSTALK_PAIRS]
    return Artifact("isolation", payload, rows, (header, cols), (series, "magnitude"))


def cmd_dips(a):
    net = _net(a.input)
    rep = nw.classify_dip(net, tuple(a.port_pair), window=tuple(a.window) if a.window else None)
    payload = {"center_freq_hz": rep.center_freq, "depth_db": rep.depth,
               "bandwidth_3db_hz": rep.bandwidth_3db, "phase_excursion_rad": rep.phase_excursion,
               "classification": rep.classification}
    rows = [("center", f"{rep.center_freq / 1e9:.5g}", "GHz"),
            ("depth", f"{rep.depth:.3g}", "dB"),
            ("3 dB bandwidth", f"{rep.bandwidth_3db / 1e6:.4g}", "MHz"),
            ("phase excursion", f"{rep.phase_excursion:.3g}", "rad"),
            ("classification", rep.classification, "")]
    s = net.sparam(*a.port_pair)
    label = "|S%d%d|" % tuple(a.port_pair)
    return Artifact("dips", payload, rows, (["freq_hz", "mag_db", "phase_rad"],
                                            [net.freqs, _db(s), nw.unwrap_phase(np.angle(s))]),
                    ({label: (net.freqs, _db(s))}, "magnitude"))


# ---------------------------------------------------------------- tdr


def _profile_rows(profile):
    rows = []
    for i, s in enumerate(profile.segments, 1):
        rows.append((f"segment {i}", f"{s.delay * 1e12:.1f} ps, {s.z:.2f} ohm, r {s.r_series:.2f} ohm", ""))
    return rows


def cmd_tdr_extract(a):
    trace = parse_tdr_csv(_text(a.input), v_plus=a.v_plus, rise_time=a.rise_time)
    profile = tdr.profile_from_trace(trace, z_c=a.z_c, min_step=a.min_step)
    z = tdr.impedance_from_trace(trace, a.z_c)
    payload = {**profile.to_dict(), "boundaries_s": profile.boundaries, "v_plus_v": a.v_plus}
    return Artifact("tdr-extract", payload, _profile_rows(profile),
                    (["time_s", "impedance_ohm"], [trace.times, z]),
                    ({"Z(t)": (trace.times, z)}, "impedance"))


def cmd_tdr_synth(a):
    try:
        profile = tdr.ImpedanceProfile.from_dict(json.loads(_text(a.profile)))
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise InputError(f"bad profile file {a.profile}: {exc}") from exc
    trace = tdr.synthesize_trace(profile, v_plus=a.v_plus, sample_dt=a.dt, total_time=a.total_time,
                                 order=a.order)
    z = tdr.impedance_from_trace(trace, profile.z_source)
    payload = {"order": a.order, "v_plus_v": a.v_plus, "times_s": trace.times,
               "volts": trace.v_meas, "impedance_ohm": z}
    rows = [("samples", len(trace.times), ""), ("span", f"{trace.times[-1] * 1e9:.4g}", "ns"),
            ("max Z", f"{np.max(z):.4g}", "ohm"), ("min Z", f"{np.min(z):.4g}", "ohm")]
    return Artifact("tdr-synth", payload, rows, (["time_s", "volts"], [trace.times, trace.v_meas]),
                    ({"Z(t)": (trace.times, z)}, "impedance"))


# ---------------------------------------------------------------- resfit


def cmd_resfit(a):
    if a.input.lower().endswith(".csv"):
        f, s = parse_sweep_csv(_text(a.input))
    else:
        net = _net(a.input)
        f, s = net.freqs, net.sparam(*a.port_pair)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", rf.NormalizationWarning)
        if a.normalized:
            res = rf.fit_resonator(f, s, max_iter=a.max_iter)
            s_norm = s
        else:
            res = rf.fit_sweep(f, s, wing_fraction=a.wing_fraction, max_iter=a.max_iter)
            s_norm = s / res.normalization(f)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    m = res.model
    payload = {**m.as_dict(), "q_loaded": m.q_loaded, "std_errors": res.std_errors,
               "residual_rms": res.residual_rms, "n_iter": res.n_iter, "normalized_input": a.normalized}
    if res.normalization is not None:
        payload["normalization"] = res.normalization.as_dict()
    e = res.std_errors
    rows = [("f0", f"{m.f0:.10g} +/- {e['f0_hz']:.2g}", "Hz"),
            ("Qi", f"{m.q_i:.6g} +/- {e['q_i']:.2g}", ""),
            ("Qc*", f"{m.q_c_star:.6g} +/- {e['q_c_star']:.2g}", ""),
            ("phi", f"{m.phi:.4g} +/- {e['phi_rad']:.2g}", "rad"),
            ("residual rms", f"{res.residual_rms:.3g}", ""), ("iterations", res.n_iter, "")]
    model = rf.synthesize_s21(m, f)
    cols = [f, s_norm.real, s_norm.imag, model.real, model.imag]
    series = {"data": (f, _db(s_norm)), "fit": (f, _db(model))}
    return Artifact("resfit", payload, rows,
                    (["freq_hz", "data_re", "data_im", "model_re", "model_im"], cols),
                    (series, "magnitude"))


# ---------------------------------------------------------------- estimators


def cmd_cavity(a):
    spec = est.CavitySpec(a.a, a.b, a.height, eps_r=a.eps_r, d_s=a.d_s)
    modes = [tuple(m) for m in a.mode] if a.mode else [(1, 1, 0), (1, 2, 0), (2, 1, 0)]
    res = est.cavity_modes(spec, modes)
    vac = [{"mode": k, "freq_hz": v} for k, v in res["vacuum"].items()]
    payload = {"a_m": a.a, "b_m": a.b, "height_m": a.height, "modes": vac,
               "perturbed_first_hz": res.get("perturbed_first")}
    rows = [(d["mode"], f"{d['freq_hz'] / 1e9:.4g}", "GHz") for d in vac]
    if "perturbed_first" in res:
        rows.append(("perturbed lowest", f"{res['perturbed_first'] / 1e9:.4g}", "GHz"))
    return Artifact("cavity", payload, rows)


def cmd_dc(a):
    if a.sample:
        specs = est.table_ii_specs()
        if a.sample not in specs:
            raise InputError(f"unknown sample {a.sample!r}; known: {sorted(specs)}")
        spec = specs[a.sample]
    else:
        missing = [n for n in ("rho", "length", "width", "thickness") if getattr(a, n) is None]
        if missing:
            raise InputError("dc needs --sample or all of --rho --length --width --thickness")
        spec = est.DcLineSpec(a.rho, a.length, a.width, a.thickness, r_wire_chain=a.r_wc,
                              measured_r_io=a.r_io)
    r_t = est.trace_resistance(spec)
    bound = est.contact_resistance_bound(spec) if spec.measured_r_io is not None else None
    payload = {"r_trace_ohm": r_t, "r_io_ohm": spec.measured_r_io, "r_contact_bound_ohm": bound}
    rows = [("R^t", f"{r_t:.4g}", "ohm")]
    if bound is not None:
        rows += [("R_io", f"{spec.measured_r_io:.4g}", "ohm"), ("R^c bound", f"{bound * 1e3:.4g}", "mohm")]
    return Artifact("dc", payload, rows)


def cmd_thermal(a):
    if a.conductor:
        spec = est.ThermalSpec(tuple(est.Conductor(di, do, k, a.length) for di, do, k in a.conductor))
    else:
        spec = est.table_vii_wire(a.length)
    cs = [{"d_i_m": c.d_i, "d_o_m": c.d_o, "k_t": c.k_t, "length_m": c.length, "area_m2": c.area,
           "rate_w_per_k": c.k_t * c.area / c.length} for c in spec.conductors]
    total = est.heat_transfer_rate(spec)
    rows = [(f"conductor {i}", f"A {c['area_m2']:.3g} m^2, {c['rate_w_per_k']:.3g}", "W/K")
            for i, c in enumerate(cs, 1)]
    rows.append(("total", f"{total:.3g}", "W/K"))
    return Artifact("thermal", {"conductors": cs, "total_w_per_k": total}, rows)


def cmd_magnetics(a):
    spec = est.MagneticSpec(a.b_mg * 1e-3 * est.GAUSS, a.r0, a.r, a.loop[0] * a.loop[1])
    res = est.dipole_field_and_flux(spec)
    payload = {"b_q_t": res.b_q, "b_q_mg": res.b_q / est.GAUSS * 1e3, "flux_wb": res.flux,
               "flux_ratio": res.flux_ratio}
    rows = [("B_q", f"{payload['b_q_mg']:.4g}", "mG"), ("flux", f"{res.flux:.3g}", "Wb"),
            ("flux / flux quantum", f"{res.flux_ratio:.3g}", "")]
    return Artifact("magnetics", payload, rows)


# ---------------------------------------------------------------- layout


def cmd_layout(a):
    spec = lay.LatticeSpec(a.n, a.a, a.b, a.c, wire_pitch=a.pitch, max_chip_side=a.max_side)
    plan = lay.plan_lattice(spec)
    settings = [{"k": s.k, "protrusion_m": s.protrusion, "preferred": s.preferred}
                for s in lay.compression_settings()]
    wiring = lay.wiring_scaling(a.n)
    k = est.load_constants()["contraction"]
    al = lay.contraction(a.alpha_al, a.recess_side)
    si = lay.contraction(a.alpha_si, a.recess_side) if a.alpha_si is not None else k["si_delta_4k"]
    payload = {**plan.as_dict(), "settings": settings, "wiring": wiring._asdict(),
               "contraction": {"al_m": al, "si_m": si, "bias_m": abs(al - si) / 2}}
    rows = [("cell", f"{plan.cell * 1e3:.4g}", "mm"), ("chip side", f"{plan.chip_side * 1e3:.4g}", "mm"),
            ("qubits", a.n * a.n, ""), ("readout lines", plan.readout_lines, ""),
            ("total pads", plan.total_pads, ""), ("wire bonds (4N)", wiring.wirebond_count, ""),
            ("socket wires (N^2)", wiring.socket_count, ""),
            ("contraction Al / Si", f"{al * 1e6:.4g} / {si * 1e6:.4g}", "um")]
    cols = [[p["kind"] for p in plan.pads], [p["x"] for p in plan.pads], [p["y"] for p in plan.pads]]
    return Artifact("layout", payload, rows, (["kind", "x_m", "y_m"], cols))


def cmd_compression(a):
    plan = lay.CompressionPlan(a.l_c, a.stroke, a.base, a.pitch, a.k)
    settings = lay.compression_settings(plan)
    spring = None
    if a.spring:
        comp = a.spring_compression
        fe = lay.spring_force(a.spring, comp, a.conductor)
        spring = {"id": a.spring, "compression_m": comp, "force_n": fe.force,
                  "operating_range_n": list(fe.operating_range) if fe.operating_range else None}
    payload = {"l_c_m": a.l_c, "stroke_m": a.stroke,
               "settings": [{"k": s.k, "protrusion_m": s.protrusion, "preferred": s.preferred}
                            for s in settings],
               "spring": spring}
    rows = [(f"k={s.k}" + (" (preferred)" if s.preferred else ""), f"{s.protrusion * 1e3:.2f}", "mm")
            for s in settings]
    if spring:
        rows.append((f"{a.spring} force", f"{spring['force_n']:.3g}", "N"))
    cols = [[s.k for s in settings], [s.protrusion for s in settings], [s.preferred for s in settings]]
    return Artifact("compression", payload, rows, (["k", "protrusion_m", "preferred"], cols))


def cmd_yield(a):
    spec = lay.ToleranceSpec(a.lateral_tol, math.radians(a.rot_tol_deg), a.machining_sigma,
                             a.dicing_sigma, a.recess_gap, a.alpha_al, a.alpha_si, a.chip_side,
                             a.trials, a.seed)
    rep = lay.mating_yield(spec)
    payload = {**rep.as_dict(), "seed": a.seed}
    lp = rep.lateral_percentiles
    rows = [("yield", f"{rep.yield_fraction:.4f}", ""), ("trials", rep.trials, ""),
            ("lateral p50/p95/p99", f"{lp['p50'] * 1e6:.1f} / {lp['p95'] * 1e6:.1f} / {lp['p99'] * 1e6:.1f}",
             "um"),
            ("contraction bias", f"{rep.contraction_bias * 1e6:.2f}", "um")]
    return Artifact("yield", payload, rows)


# ---------------------------------------------------------------- pulse


def cmd_pulse(a):
    net = _net(a.input)
    spec = pu.PulseSpec(a.carrier, a.sideband, a.fwhm, a.sample_rate, a.duration)
    t, x = pu.synthesize_pulse(spec)
    y = pu.transmit(x, net, tuple(a.port_pair), sample_rate=spec.sample_rate)
    met = pu.distortion_metrics(x, y, spec.sample_rate)
    ratio = float(np.sum(y ** 2) / np.sum(x ** 2))
    payload = {"carrier_hz": a.carrier, "sideband_hz": a.sideband, "fwhm_s": a.fwhm,
               "sample_rate_hz": a.sample_rate, **met.as_dict(), "energy_ratio": ratio}
    rows = [("envelope correlation", f"{met.envelope_correlation:.6f}", ""),
            ("FWHM change", f"{met.fwhm_change_fraction * 100:.3g}", "%"),
            ("delay", f"{met.delay_s * 1e9:.4g}", "ns"), ("energy ratio", f"{ratio:.4g}", "")]
    series = {"input envelope": (t, pu.envelope(x)), "output envelope": (t, pu.envelope(y))}
    return Artifact("pulse", payload, rows, (["time_s", "in_v", "out_v"], [t, x, y]), (series, "envelope"))


# ---------------------------------------------------------------- plumbing


def _pair(p):
    p.add_argument("--port-pair", nargs=2, type=int, default=[2, 1], metavar=("OUT", "IN"))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="socketlab", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", metavar="COMMAND")

    def add(name, func, help):
        p = sub.add_parser(name, help=help, description=help)
        p.set_defaults(func=func)
        p.add_argument("--out", help="artifact path (.json, .csv or .svg)")
        p.add_argument("--format", choices=("json", "csv", "svg"), help="override the artifact format")
        return p

    p = add("netparams", cmd_netparams, "input impedance, VSWR, phase and group delay of a 2-port")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--z-load", type=float)
    p.add_argument("--subtract-load", action="store_true", help="use Z22 - ZL in the input impedance")
    p.add_argument("--smoothing", type=float, default=0.01)

    p = add("isolation", cmd_isolation, "worst crosstalk isolation of a 4-port over a band")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--f-lo", type=float, default=4e9)
    p.add_argument("--f-hi", type=float, default=8e9)

    p = add("dips", cmd_dips, "classify a transmission dip as resonance or anomaly")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--window", nargs=2, type=float, metavar=("F_LO", "F_HI"))
    _pair(p)

    p = add("tdr-extract", cmd_tdr_extract, "impedance profile from a TDR trace")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--v-plus", type=float, default=0.25)
    p.add_argument("--z-c", type=float, default=50.0)
    p.add_argument("--min-step", type=float, default=2.0)
    p.add_argument("--rise-time", type=float, default=20e-12)

    p = add("tdr-synth", cmd_tdr_synth, "TDR trace from a profile JSON")
    p.add_argument("--profile", required=True)
    p.add_argument("--v-plus", type=float, default=0.25)
    p.add_argument("--dt", type=float, default=1e-12)
    p.add_argument("--total-time", type=float)
    p.add_argument("--order", choices=("first", "multi"), default="first")

    p = add("resfit", cmd_resfit, "fit the inverse-transmission resonator model")
    p.add_argument("--in", dest="input", required=True, help="sweep CSV (freq_hz,re,im) or .s2p")
    p.add_argument("--normalized", action="store_true", help="input is already normalized")
    p.add_argument("--wing-fraction", type=float, default=0.1)
    p.add_argument("--max-iter", type=int, default=200)
    _pair(p)

    c = est.load_constants()
    p = add("cavity", cmd_cavity, "box modes of a rectangular package cavity")
    p.add_argument("--a", type=float, default=c["cavity"]["a"])
    p.add_argument("--b", type=float, default=c["cavity"]["b"])
    p.add_argument("--height", type=float, default=c["cavity"]["height"])
    p.add_argument("--eps-r", type=float, default=1.0)
    p.add_argument("--d-s", type=float, default=0.0)
    p.add_argument("--mode", nargs=3, type=int, action="append", metavar=("M", "N", "L"))

    p = add("dc", cmd_dc, "trace resistance and contact-resistance bound")
    p.add_argument("--sample", help="bundled DC-test row, e.g. Ag-3um")
    p.add_argument("--rho", type=float)
    p.add_argument("--length", type=float)
    p.add_argument("--width", type=float)
    p.add_argument("--thickness", type=float)
    p.add_argument("--r-io", type=float)
    p.add_argument("--r-wc", type=float, default=0.0)

    p = add("thermal", cmd_thermal, "conductive heat-transfer rate of wire conductors")
    p.add_argument("--conductor", nargs=3, type=float, action="append", metavar=("D_I", "D_O", "K_T"))
    p.add_argument("--length", type=float, default=30.5e-3)

    m = c["magnetics"]
    p = add("magnetics", cmd_magnetics, "dipole field at a qubit and the flux through a loop")
    p.add_argument("--b-mg", type=float, default=m["b_measured_mG"])
    p.add_argument("--r0", type=float, default=m["r0"])
    p.add_argument("--r", type=float, default=m["r_target"])
    p.add_argument("--loop", nargs=2, type=float, default=m["squid"], metavar=("W", "H"))

    lt = c["lattice"]
    p = add("layout", cmd_layout, "N x N lattice plan, wiring count and contraction")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--a", type=float, default=lt["dist_a"])
    p.add_argument("--b", type=float, default=lt["dist_b"])
    p.add_argument("--c", type=float, default=lt["dist_c"])
    p.add_argument("--pitch", type=float, default=lt["wire_pitch"])
    p.add_argument("--max-side", type=float, default=lt["max_chip_side"])
    p.add_argument("--alpha-al", type=float, default=c["contraction"]["al_6061_alpha_4k"])
    p.add_argument("--alpha-si", type=float)
    p.add_argument("--recess-side", type=float, default=c["contraction"]["recess_side"])

    p = add("compression", cmd_compression, "wire compression settings and spring force")
    p.add_argument("--l-c", type=float, default=3.05e-3)
    p.add_argument("--stroke", type=float, default=2.5e-3)
    p.add_argument("--base", type=float, default=3.10e-3)
    p.add_argument("--pitch", type=float, default=0.45e-3)
    p.add_argument("--k", type=int, default=lay.PREFERRED_K)
    p.add_argument("--spring", help="spring id, e.g. 'FE-113 225'")
    p.add_argument("--spring-compression", type=float, default=2e-3)
    p.add_argument("--conductor", choices=("inner", "outer"), default="inner")

    p = add("yield", cmd_yield, "Monte Carlo wire-pad mating yield")
    p.add_argument("--lateral-tol", type=float, default=140e-6)
    p.add_argument("--rot-tol-deg", type=float, default=28.0)
    p.add_argument("--machining-sigma", type=float, default=25.4e-6)
    p.add_argument("--dicing-sigma", type=float, default=4e-6)
    p.add_argument("--recess-gap", type=float, default=0.0)
    p.add_argument("--alpha-al", type=float, default=c["contraction"]["al_6061_alpha_4k"])
    p.add_argument("--alpha-si", type=float,
                   default=c["contraction"]["si_delta_4k"] / c["contraction"]["recess_side"])
    p.add_argument("--chip-side", type=float, default=c["contraction"]["recess_side"])
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)

    p = add("pulse", cmd_pulse, "Gaussian control pulse through a measured 2-port")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--carrier", type=float, default=4.5e9)
    p.add_argument("--sideband", type=float, default=200e6)
    p.add_argument("--fwhm", type=float, default=15e-9)
    p.add_argument("--sample-rate", type=float, default=40e9)
    p.add_argument("--duration", type=float, default=120e-9)
    _pair(p)
    return ap


def _print_table(title, rows, stream):
    w = max([len(str(r[0])) for r in rows] + [4])
    print(title, file=stream)
    for name, value, unit in rows:
        print(f"  {str(name):<{w}}  {value} {unit}".rstrip(), file=stream)


def _render(art: Artifact, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(art.document(), indent=2, allow_nan=False) + "\n"
    if fmt == "csv":
        if art.csv_table is None:
            raise InputError(f"{art.kind} has no CSV output")
        header, cols = art.csv_table
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(header)
        for row in zip(*cols):
            wr.writerow(["" if isinstance(v, float) and not math.isfinite(v) else
                         repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
        return buf.getvalue()
    if art.svg is None:
        raise InputError(f"{art.kind} has no SVG output")
    series, kind = art.svg
    return render_plot(series, kind, title=art.kind)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2
    fmt = args.format
    if fmt is None and args.out:
        ext = Path(args.out).suffix.lower().lstrip(".")
        fmt = ext if ext in ("json", "csv", "svg") else "json"
    try:
        art = args.func(args)
        text = _render(art, fmt) if args.out else None
    except InputError as exc:
        print(f"socketlab {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (ComputationError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"socketlab {args.command}: computation failed: {exc}", file=sys.stderr)
        return 1
    _print_table(args.command, art.rows, sys.stdout)
    if args.out:
        try:
            Path(args.out).write_text(text, encoding="utf-8")
        except OSError as exc:
            print(f"socketlab {args.command}: cannot write {args.out}: {exc.strerror}", file=sys.stderr)
            return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
