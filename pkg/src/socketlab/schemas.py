"""JSON Schemas (draft 2020-12) for every CLI artifact."""
from __future__ import annotations

SCHEMA_ID = "socketlab/v1"

_num = {"type": "number"}
_nnum = {"type": ["number", "null"]}
_int = {"type": "integer"}
_str = {"type": "string"}
_bool = {"type": "boolean"}


def _arr(item=_num):
    return {"type": "array", "items": item}


def _obj(props: dict, required=None) -> dict:
    return {
        "type": "object",
        "properties": props,
        "required": list(props) if required is None else required,
    }


def _doc(kind: str, props: dict) -> dict:
    body = {"schema": {"const": SCHEMA_ID}, "kind": {"const": kind}, **props}
    return {"$schema": "https://json-schema.org/draft/2020-12/schema", **_obj(body)}


_SETTING = _obj({"k": _int, "protrusion_m": _num, "preferred": _bool})
_segment = _obj({"delay_s": _num, "z_ohm": _num, "r_series_ohm": _num})
_profile = {"z_source_ohm": _num, "segments": _arr(_segment)}
_pct = _obj({"p50": _num, "p95": _num, "p99": _num})

SCHEMAS = {
    "netparams": _doc("netparams", {
        "z_ref_ohm": _num, "z_load_ohm": _num, "subtract_load": _bool,
        "freqs_hz": _arr(), "z_in_re_ohm": _arr(), "z_in_im_ohm": _arr(),
        "vswr_in": _arr(), "tau_phi_s": _arr(_nnum), "tau_g_s": _arr(),
    }),
    "isolation": _doc("isolation", {
        "f_lo_hz": _num, "f_hi_hz": _num, "isolation_db": _num, "freq_hz": _num,
        "worst_pair": _arr(_int),
    }),
    "dips": _doc("dips", {
        "center_freq_hz": _num, "depth_db": _num, "bandwidth_3db_hz": _num,
        "phase_excursion_rad": _num, "classification": {"enum": ["resonance", "non-resonant-anomaly"]},
    }),
    "tdr-extract": _doc("tdr-extract", {**_profile, "boundaries_s": _arr(), "v_plus_v": _num}),
    "tdr-synth": _doc("tdr-synth", {
        "order": {"enum": ["first", "multi"]}, "v_plus_v": _num,
        "times_s": _arr(), "volts": _arr(), "impedance_ohm": _arr(_nnum),
    }),
    "resfit": _doc("resfit", {
        "f0_hz": _num, "q_i": _num, "q_c_star": _num, "phi_rad": _num, "q_loaded": _num,
        "std_errors": _obj({"f0_hz": _num, "q_i": _num, "q_c_star": _num, "phi_rad": _num}),
        "residual_rms": _num, "n_iter": _int, "normalized_input": _bool,
    }),
    "cavity": _doc("cavity", {
        "a_m": _num, "b_m": _num, "height_m": _num,
        "modes": _arr(_obj({"mode": _str, "freq_hz": _num})),
        "perturbed_first_hz": _nnum,
    }),
    "dc": _doc("dc", {"r_trace_ohm": _num, "r_io_ohm": _nnum, "r_contact_bound_ohm": _nnum}),
    "thermal": _doc("thermal", {
        "conductors": _arr(_obj({"d_i_m": _num, "d_o_m": _num, "k_t": _num, "length_m": _num,
                                 "area_m2": _num, "rate_w_per_k": _num})),
        "total_w_per_k": _num,
    }),
    "magnetics": _doc("magnetics", {"b_q_t": _num, "b_q_mg": _num, "flux_wb": _num, "flux_ratio": _num}),
    "layout": _doc("layout", {
        "n": _int, "cell_m": _num, "chip_side_m": _num, "cells": _int, "wires_per_qubit": _int,
        "readout_lines": _int, "total_pads": _int,
        "qubits": _arr(_arr()),
        "pads": _arr({"type": "object", "required": ["kind", "x", "y"]}),
        "settings": _arr(_SETTING),
        "wiring": _obj({"wirebond_count": _int, "socket_count": _int, "socket_exceeds": _bool}),
        "contraction": _obj({"al_m": _num, "si_m": _num, "bias_m": _num}),
    }),
    "compression": _doc("compression", {
        "l_c_m": _num, "stroke_m": _num,
        "settings": _arr(_SETTING),
        "spring": {"type": ["object", "null"]},
    }),
    "yield": _doc("yield", {
        "yield": _num, "trials": _int, "seed": _int, "lateral_percentiles_m": _pct,
        "rotation_percentiles_rad": _pct, "contraction_bias_m": _num,
    }),
    "pulse": _doc("pulse", {
        "carrier_hz": _num, "sideband_hz": _num, "fwhm_s": _num, "sample_rate_hz": _num,
        "envelope_correlation": _num, "fwhm_change_fraction": _num, "delay_s": _num,
        "energy_ratio": _num,
    }),
}
