"""Lattice planning and mechanical tolerances for a socket-wired qubit grid."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import ComputationError, InputError
from .estimators import load_constants

READOUT_GROUP = 4  # qubits sharing one readout line
PREFERRED_K = 3
_CHUNK = 1 << 16


@dataclass(frozen=True)
class LatticeSpec:
    n: int
    dist_a: float = 2.25e-3
    dist_b: float = 3.5e-3
    dist_c: float = 2.25e-3
    wire_pitch: float = 1e-3
    max_chip_side: float = 72e-3

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise InputError(f"n must be an integer >= 1, got {self.n}")
        if min(self.dist_a, self.dist_b, self.dist_c, self.wire_pitch) <= 0:
            raise InputError("distances and wire pitch must be > 0")
        if not self.max_chip_side > 0:
            raise InputError("max_chip_side must be > 0")


@dataclass(frozen=True)
class LatticePlan:
    n: int
    cell: float
    chip_side: float
    qubits: np.ndarray  # (n*n, 2) metres
    pads: list  # dicts: kind, qubit / group, x, y
    readout_lines: int
    wires_per_qubit: int = 3
    settings: list = field(default_factory=list)

    @property
    def total_pads(self) -> int:
        return len(self.pads)

    def as_dict(self):
        return {
            "n": self.n,
            "cell_m": self.cell,
            "chip_side_m": self.chip_side,
            "cells": max(self.n - 1, 0) ** 2,
            "wires_per_qubit": self.wires_per_qubit,
            "readout_lines": self.readout_lines,
            "total_pads": self.total_pads,
            "qubits": self.qubits.tolist(),
            "pads": self.pads,
            "settings": self.settings,
        }


class WiringScaling(NamedTuple):
    wirebond_count: int
    socket_count: int
    socket_exceeds: bool


@dataclass(frozen=True)
class CompressionPlan:
    l_c: float = 3.05e-3
    stroke: float = 2.5e-3
    base: float = 3.10e-3
    pitch: float = 0.45e-3
    k: int = PREFERRED_K

    def __post_init__(self):
        if self.stroke < 0 or self.pitch <= 0 or self.l_c <= 0 or self.base <= 0:
            raise InputError("compression plan lengths must be positive (stroke >= 0)")
        if self.k < 0:
            raise InputError("k must be >= 0")


class Setting(NamedTuple):
    k: int
    protrusion: float
    preferred: bool


@dataclass(frozen=True)
class ToleranceSpec:
    lateral_tol: float = 140e-6
    rot_tol: float = math.radians(28.0)
    machining_sigma: float = 0.0
    dicing_sigma: float = 0.0
    recess_gap: float = 0.0
    contraction_al_coeff: float = 0.0
    contraction_si_coeff: float = 0.0
    chip_side: float = 15e-3
    trials: int = 100_000
    seed: int = 0

    def __post_init__(self):
        vals = (self.lateral_tol, self.rot_tol, self.machining_sigma, self.dicing_sigma, self.recess_gap)
        if min(vals) < 0:
            raise InputError("tolerances, sigmas and gap must be >= 0")
        if not self.chip_side > 0:
            raise InputError("chip_side must be > 0")
        if int(self.trials) != self.trials or self.trials < 1:
            raise InputError("trials must be an integer >= 1")


@dataclass(frozen=True)
class YieldReport:
    yield_fraction: float
    trials: int
    lateral_percentiles: dict  # metres, keyed "p50", "p95", "p99"
    rotation_percentiles: dict  # radians
    contraction_bias: float

    def as_dict(self):
        return {
            "yield": self.yield_fraction,
            "trials": self.trials,
            "lateral_percentiles_m": self.lateral_percentiles,
            "rotation_percentiles_rad": self.rotation_percentiles,
            "contraction_bias_m": self.contraction_bias,
        }


def plan_lattice(spec: LatticeSpec) -> LatticePlan:
    """Place an ``n x n`` qubit grid with cell pitch ``A + B + C``.

    Each qubit gets an XY and a Z pad one wire pitch away (toward the chip
    centre); each 2x2 block of qubits shares a readout line with an input
    and an output pad.
    """
    cell = math.fsum((spec.dist_a, spec.dist_b, spec.dist_c))
    n = int(spec.n)
    side = math.fsum((spec.dist_a, spec.dist_b, spec.dist_c) * (n - 1))
    if side > spec.max_chip_side * (1 + 1e-12):
        raise ComputationError(
            f"chip side {side * 1e3:.4g} mm exceeds the {spec.max_chip_side * 1e3:.4g} mm wafer bound")
    grid = np.array([math.fsum((spec.dist_a, spec.dist_b, spec.dist_c) * i) for i in range(n)])
    xs, ys = np.meshgrid(grid, grid, indexing="xy")
    qubits = np.column_stack((xs.ravel(), ys.ravel()))
    centre = side / 2
    p = spec.wire_pitch
    pads = []
    for q, (x, y) in enumerate(qubits):
        sx = 1.0 if x <= centre else -1.0
        sy = 1.0 if y <= centre else -1.0
        pads.append({"kind": "xy", "qubit": q, "x": float(x), "y": float(y + sy * p)})
        pads.append({"kind": "z", "qubit": q, "x": float(x + sx * p), "y": float(y)})
    groups = 0
    for bi in range(0, n, 2):
        for bj in range(0, n, 2):
            members = [(i, j) for i in (bi, bi + 1) for j in (bj, bj + 1) if i < n and j < n]
            gx = float(np.mean([grid[j] for _, j in members]))
            gy = float(np.mean([grid[i] for i, _ in members]))
            off = p / 2 if len(members) > 1 else p
            pads.append({"kind": "readout_in", "group": groups, "x": gx - off, "y": gy})
            pads.append({"kind": "readout_out", "group": groups, "x": gx + off, "y": gy})
            groups += 1
    return LatticePlan(n, cell, side, qubits, pads, groups)


def wiring_scaling(n: int) -> WiringScaling:
    """Edge wire bonds (4N) against socket wires (N^2) for an N x N lattice."""
    if int(n) != n or n < 1:
        raise InputError("n must be an integer >= 1")
    n = int(n)
    return WiringScaling(4 * n, n * n, n * n > 4 * n)


def compression_settings(plan: CompressionPlan = CompressionPlan()) -> list:
    """Thread-pitch protrusions ``base + pitch k`` (k >= 1) inside the stroke."""
    lo, hi = plan.l_c, plan.l_c + plan.stroke
    eps = 1e-12
    out = []
    k = 1
    while True:
        lp = plan.base + plan.pitch * k
        if lp > hi + eps:
            break
        if lp >= lo - eps:
            out.append(Setting(k, lp, k == plan.k))
        k += 1
    return out


def contraction(coeff: float, length: float) -> float:
    """Length change ``coeff * length`` for an integrated expansion coefficient."""
    if not length > 0:
        raise InputError("length must be > 0")
    return coeff * length


def implied_coefficient(delta: float, length: float) -> float:
    if not length > 0:
        raise InputError("length must be > 0")
    return delta / length


def _chunk_rngs(seed, trials):
    nchunks = -(-trials // _CHUNK)
    seqs = np.random.SeedSequence(seed).spawn(nchunks)
    for i, ss in enumerate(seqs):
        size = min(_CHUNK, trials - i * _CHUNK)
        yield np.random.Generator(np.random.Philox(ss)), size


def mating_yield(spec: ToleranceSpec) -> YieldReport:
    """Monte Carlo pass fraction of wire-pad mating.

    Lateral offset is the quadrature sum of a normal machining error, a
    uniform slack over the recess-die gap and the differential contraction
    bias ``|dL_Al - dL_Si| / 2``. Rotation is ``atan(e / chip_side)`` with a
    normal dicing error ``e``. Each block of 65536 trials draws from its own
    stream split off ``seed``, so results do not depend on evaluation order.
    """
    bias = abs(spec.contraction_al_coeff - spec.contraction_si_coeff) * spec.chip_side / 2
    lat_parts, rot_parts = [], []
    for rng, size in _chunk_rngs(spec.seed, int(spec.trials)):
        z_mach = rng.standard_normal(size)
        u_gap = rng.uniform(-0.5, 0.5, size)
        z_dice = rng.standard_normal(size)
        lateral = np.sqrt((spec.machining_sigma * z_mach) ** 2 + (spec.recess_gap * u_gap) ** 2 + bias ** 2)
        rot = np.arctan(spec.dicing_sigma * z_dice / spec.chip_side)
        lat_parts.append(lateral)
        rot_parts.append(rot)
    lateral = np.concatenate(lat_parts)
    rot = np.abs(np.concatenate(rot_parts))
    ok = (lateral <= spec.lateral_tol) & (rot <= spec.rot_tol)
    q = (50, 95, 99)
    return YieldReport(
        float(ok.mean()), int(spec.trials),
        {f"p{p}": float(v) for p, v in zip(q, np.percentile(lateral, q))},
        {f"p{p}": float(v) for p, v in zip(q, np.percentile(rot, q))},
        float(bias),
    )


class ForceEstimate(NamedTuple):
    force: float
    operating_range: tuple | None


def spring_travel(spring_id: str) -> float:
    """Free length minus solid height (coils x wire diameter)."""
    s = _spring(spring_id)
    return s["free_length"] - s["coils"] * s["wire_diameter"]


def _spring(spring_id):
    table = load_constants()["table_viii_springs"]
    if spring_id not in table:
        raise InputError(f"unknown spring {spring_id!r}; known: {sorted(table)}")
    return table[spring_id]


def spring_force(spring_id: str, compression: float, conductor: str = "inner") -> ForceEstimate:
    """Linear spring force, reaching the tabulated full-compression force at
    full travel. At the 2.0 mm operating compression the quoted force range
    for ``conductor`` ("inner" or "outer") is attached."""
    s = _spring(spring_id)
    travel = spring_travel(spring_id)
    if not 0 <= compression <= travel * (1 + 1e-12):
        raise InputError(f"compression {compression} m outside [0, {travel:.4g}] m for {spring_id}")
    ops = load_constants()["spring_operating_ranges"]
    rng = None
    if math.isclose(compression, ops["compression"], rel_tol=1e-9):
        if conductor not in ("inner", "outer"):
            raise InputError("conductor must be 'inner' or 'outer'")
        rng = tuple(ops[conductor])
    return ForceEstimate(s["force"] * compression / travel, rng)
