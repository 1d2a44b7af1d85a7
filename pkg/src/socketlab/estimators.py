"""Closed-form physical estimators for the socket package.

Box modes of the rectangular package cavity and their dielectric
perturbation, DC trace and contact resistance, conductive heat transfer per
kelvin, and the field/flux of a magnetic dipole at a qubit.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

import numpy as np
from scipy.constants import c as C0
from scipy.constants import physical_constants

from .errors import ComputationError, InputError

FLUX_QUANTUM = physical_constants["mag. flux quantum"][0]
GAUSS = 1e-4  # tesla


@lru_cache(maxsize=None)
def load_constants() -> dict:
    """Bundled material and geometry tables (SI units)."""
    text = resources.files("socketlab").joinpath("data/constants.json").read_text(encoding="utf-8")
    return json.loads(text)


@dataclass(frozen=True)
class CavitySpec:
    a: float
    b_width: float
    height_b: float
    eps_r: float = 1.0
    d_s: float = 0.0

    def __post_init__(self):
        if min(self.a, self.b_width, self.height_b) <= 0:
            raise InputError("cavity dimensions must be > 0")
        if self.eps_r < 1:
            raise InputError("eps_r must be >= 1")
        if not 0 <= self.d_s < self.height_b:
            raise InputError("substrate thickness must satisfy 0 <= d_s < height")


@dataclass(frozen=True)
class DcLineSpec:
    rho: float
    length_pp: float
    width_w: float
    thickness_d: float
    r_wire_chain: float = 0.0
    measured_r_io: float | None = None
    r_ig: float | None = None
    r_og: float | None = None

    def __post_init__(self):
        if min(self.rho, self.length_pp, self.width_w, self.thickness_d) <= 0:
            raise InputError("rho, length, width and thickness must be > 0")
        if self.r_wire_chain < 0:
            raise InputError("r_wire_chain must be >= 0")


@dataclass(frozen=True)
class Conductor:
    d_i: float  # 0 for a solid cylinder
    d_o: float
    k_t: float  # W / (K m)
    length: float

    def __post_init__(self):
        if not self.d_o > self.d_i >= 0:
            raise InputError("need d_o > d_i >= 0")
        if self.k_t <= 0 or self.length <= 0:
            raise InputError("k_t and length must be > 0")

    @property
    def area(self) -> float:
        return np.pi * (self.d_o ** 2 - self.d_i ** 2) / 4


@dataclass(frozen=True)
class ThermalSpec:
    conductors: tuple

    def __post_init__(self):
        cs = tuple(c if isinstance(c, Conductor) else Conductor(*c) for c in self.conductors)
        if not cs:
            raise InputError("need at least one conductor")
        object.__setattr__(self, "conductors", cs)


@dataclass(frozen=True)
class MagneticSpec:
    b_measured: float  # tesla
    r0: float
    r_target: float
    loop_area: float

    def __post_init__(self):
        if min(self.b_measured, self.r0, self.r_target, self.loop_area) <= 0:
            raise InputError("all magnetic inputs must be > 0")


@dataclass(frozen=True)
class FluxEstimate:
    b_q: float  # tesla
    flux: float  # weber
    flux_ratio: float  # flux / flux quantum


def te_mode_frequency(a, b, d, m, n, l, eps_r: float = 1.0) -> float:
    """Resonance of mode (m, n, l) in an ``a x b x d`` rectangular cavity.

    Indices count half-wavelengths along the x (a), y (b) and z (d)
    dimensions. ``eps_r`` fills the cavity uniformly.
    """
    if min(a, b, d) <= 0:
        raise InputError("cavity dimensions must be > 0")
    idx = (m, n, l)
    if any(i < 0 for i in idx):
        raise InputError("mode indices must be >= 0")
    if sum(1 for i in idx if i) < 2:
        raise InputError(f"mode {idx} does not exist: need at least two nonzero indices")
    if eps_r < 1:
        raise InputError("eps_r must be >= 1")
    v = C0 / np.sqrt(eps_r)
    return float(v / 2 * np.sqrt((m / a) ** 2 + (n / b) ** 2 + (l / d) ** 2))


def perturbed_mode(f0, eps_r, d_s, b) -> float:
    """First-order downward shift of a box mode by a dielectric slab.

    ``f = f0 - f0 (eps_r - 1) d_s / (2 b)`` with slab thickness ``d_s`` and
    cavity height ``b``.
    """
    if eps_r < 1:
        raise InputError("eps_r must be >= 1")
    if not 0 <= d_s < b:
        raise InputError("need 0 <= d_s < b")
    f = f0 - f0 * (eps_r - 1) * d_s / (2 * b)
    if f <= 0:
        raise ComputationError(
            f"perturbation too large (eps_r={eps_r}, d_s/b={d_s / b:.3g}): "
            "first-order formula gives a non-positive frequency")
    return float(f)


def perturbation_ratio(f0, f, eps_r) -> float:
    """``d_s / (2 b)`` that moves ``f0`` to ``f``; inverse of ``perturbed_mode``."""
    if eps_r <= 1:
        raise InputError("eps_r must be > 1 to invert the perturbation")
    return float((1 - f / f0) / (eps_r - 1))


def cavity_modes(spec: CavitySpec, modes=((1, 1, 0), (1, 2, 0), (2, 1, 0))) -> dict:
    """Vacuum frequencies of ``modes`` and the perturbed lowest one."""
    vac = {f"TE{m}{n}{l}": te_mode_frequency(spec.a, spec.b_width, spec.height_b, m, n, l)
           for m, n, l in modes}
    out = {"vacuum": vac}
    if spec.eps_r > 1 and spec.d_s > 0:
        f0 = min(vac.values())
        out["perturbed_first"] = perturbed_mode(f0, spec.eps_r, spec.d_s, spec.height_b)
    return out


def trace_resistance(spec: DcLineSpec) -> float:
    """Series resistance ``rho L / (W d)`` of the CPW center trace."""
    return spec.rho * spec.length_pp / (spec.width_w * spec.thickness_d)


def contact_resistance_bound(spec: DcLineSpec) -> float:
    """Upper bound on the contact resistance per wire-pad interface.

    From ``R_io = R_t + 2 (R_c + R_wc)``; the Ti adhesion layer's parallel
    path is ignored.
    """
    if spec.measured_r_io is None:
        raise InputError("measured_r_io is required for the contact-resistance bound")
    r_t = trace_resistance(spec)
    if spec.measured_r_io < r_t:
        raise InputError(
            f"inconsistent measurement: R_io = {spec.measured_r_io} ohm is below the "
            f"trace resistance {r_t:.4g} ohm")
    return max(0.0, (spec.measured_r_io - r_t) / 2 - spec.r_wire_chain)


def heat_transfer_rate(spec: ThermalSpec) -> float:
    """Total conductance ``sum k_t A / l`` in W/K."""
    return float(sum(c.k_t * c.area / c.length for c in spec.conductors))


def dipole_field_and_flux(spec: MagneticSpec) -> FluxEstimate:
    """Cube-law scaling of a measured dipole field and the flux it threads."""
    b_q = spec.b_measured * (spec.r0 / spec.r_target) ** 3
    flux = b_q * spec.loop_area
    return FluxEstimate(b_q, flux, flux / FLUX_QUANTUM)


def table_ii_specs() -> dict:
    """Bundled DC-test rows keyed by sample label."""
    t = load_constants()["table_ii"]
    return {
        row["label"]: DcLineSpec(row["rho"], t["length_pp"], row["width"], row["thickness"],
                                 measured_r_io=row.get("r_io"))
        for row in t["rows"]
    }


def table_vii_wire(length: float = 30.5e-3) -> ThermalSpec:
    """Inner and outer conductor of a wire as two hollow cylinders of ``length``."""
    rows = load_constants()["table_vii"]
    return ThermalSpec(tuple(Conductor(rows[k]["d_i"], rows[k]["d_o"], rows[k]["k_t"], length)
                             for k in ("inner", "outer")))
