"""Frequency-domain network analysis of measured S-parameters.

Impedance matrices, terminated input impedance, VSWR, phase and group delay,
crosstalk isolation in a band, and classification of transmission dips as
resonant or non-resonant.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ComputationError, InputError, SingularNetworkError
from .io_touchstone import NetworkData

# 6th-order central first-derivative stencil for offsets -3..3 (times 1/h)
CENTRAL6 = np.array([-1.0, 9.0, -45.0, 0.0, 45.0, -9.0, 1.0]) / 60.0
CROSSTALK_PAIRS = ((3, 1), (4, 1), (3, 2), (4, 2))
RESONANCE_THRESHOLD = np.pi / 2


@dataclass(frozen=True)
class MicrowaveParams:
    freqs: np.ndarray
    z_in: np.ndarray
    vswr_in: np.ndarray
    tau_phi: np.ndarray
    tau_g: np.ndarray


@dataclass(frozen=True)
class IsolationReport:
    isolation_db: float
    freq: float
    worst_pair: tuple


@dataclass(frozen=True)
class DipReport:
    center_freq: float
    depth: float
    bandwidth_3db: float
    phase_excursion: float
    classification: str

    @property
    def is_resonance(self) -> bool:
        return self.classification == "resonance"


def _smatrix(net_or_s):
    if isinstance(net_or_s, NetworkData):
        return net_or_s.s, net_or_s.freqs, net_or_s.z_ref
    s = np.asarray(net_or_s, dtype=complex)
    return s, None, None


def z_from_s(net, z_ref: float | None = None) -> np.ndarray:
    """Impedance matrices ``Z = Zc (I + S)(I - S)^-1`` at every frequency.

    Accepts NetworkData or a bare ``(..., P, P)`` array (then ``z_ref``
    defaults to 50 ohm).
    """
    s, freqs, zr = _smatrix(net)
    z0 = z_ref if z_ref is not None else (zr if zr is not None else 50.0)
    eye = np.eye(s.shape[-1])
    a = eye - s
    cond = np.linalg.cond(a.reshape(-1, *a.shape[-2:])).reshape(a.shape[:-2])
    bad = ~np.isfinite(cond) | (cond > 1e13)
    if np.any(bad):
        idx = np.unravel_index(np.argmax(bad), bad.shape)
        where = f"{freqs[idx[0]]:.6g} Hz" if freqs is not None else f"index {idx}"
        raise SingularNetworkError(
            f"(I - S) is singular at {where}: Z undefined for ideal through")
    # (I + S)(I - S)^-1 == solve((I - S)^T, (I + S)^T)^T
    x = np.linalg.solve(np.swapaxes(a, -1, -2), np.swapaxes(eye + s, -1, -2))
    return z0 * np.swapaxes(x, -1, -2)


def s_from_z(z, z_ref: float = 50.0) -> np.ndarray:
    """Inverse map ``S = (Z - Zc I)(Z + Zc I)^-1``."""
    z = np.asarray(z, dtype=complex)
    eye = np.eye(z.shape[-1])
    num = z - z_ref * eye
    den = z + z_ref * eye
    x = np.linalg.solve(np.swapaxes(den, -1, -2), np.swapaxes(num, -1, -2))
    return np.swapaxes(x, -1, -2)


def input_impedance(z, z_load=50.0, subtract_load: bool = False):
    """Input impedance of a two-port terminated at port 2 by ``z_load``.

    Uses ``Z11 - Z12 Z21 / (Z22 + ZL)``. With ``subtract_load=True`` the
    denominator is ``Z22 - ZL`` instead. ``z`` may be a single 2x2 matrix or
    a stack of them.
    """
    z = np.asarray(z, dtype=complex)
    if z.shape[-2:] != (2, 2):
        raise InputError(f"input_impedance needs 2x2 Z matrices, got {z.shape}")
    den = z[..., 1, 1] - z_load if subtract_load else z[..., 1, 1] + z_load
    scale = np.maximum(np.abs(z[..., 1, 1]), np.abs(z_load))
    if np.any(np.abs(den) <= 1e-12 * np.maximum(scale, 1e-300)):
        raise ComputationError("input impedance undefined: vanishing denominator")
    out = z[..., 0, 0] - z[..., 0, 1] * z[..., 1, 0] / den
    return out[()] if out.ndim == 0 else out


def vswr(s11):
    """``(1 + |S11|) / (1 - |S11|)``; passive reflections only."""
    g = np.abs(np.asarray(s11))
    if np.any(g >= 1):
        raise InputError("VSWR undefined for |S11| >= 1 (active or total reflection)")
    out = (1 + g) / (1 - g)
    return float(out) if out.ndim == 0 else out


def unwrap_phase(angles) -> np.ndarray:
    """Remove 2*pi jumps so that consecutive steps lie in (-pi, pi].

    Aliased input (true steps beyond pi between samples) cannot be detected.
    """
    a = np.asarray(angles, dtype=float)
    if a.size < 2:
        return a.copy()
    d = np.diff(a)
    step = np.pi - np.mod(np.pi - d, 2 * np.pi)
    return np.concatenate(([a[0]], a[0] + np.cumsum(step)))


def _anchored_phase(freqs, sxy):
    """Unwrapped phase shifted by 2*pi*k so its low-frequency extrapolation to DC
    falls in (-pi, pi]."""
    ph = unwrap_phase(np.angle(sxy))
    if freqs.size >= 2:
        k = min(freqs.size, 5)
        slope, icept = np.polyfit(freqs[:k], ph[:k], 1)
        ph = ph - 2 * np.pi * np.round(icept / (2 * np.pi))
    return ph


def phase_delay(net: NetworkData, port_pair=(2, 1)) -> np.ndarray:
    """``-(unwrapped angle S_xy) / (2 pi f)`` per point (NaN where f == 0)."""
    f = net.freqs
    ph = _anchored_phase(f, net.sparam(*port_pair))
    with np.errstate(divide="ignore", invalid="ignore"):
        tau = -ph / (2 * np.pi * f)
    tau[f == 0] = np.nan
    return tau


@lru_cache(maxsize=None)
def fd_weights(offsets: tuple) -> np.ndarray:
    """First-derivative finite-difference weights (unit spacing) on ``offsets``.

    Exact for polynomials of degree < len(offsets).
    """
    x = np.asarray(offsets, dtype=float)
    n = x.size
    vander = np.vander(x, n, increasing=True).T
    rhs = np.zeros(n)
    rhs[1] = 1.0
    w = np.linalg.solve(vander, rhs)
    w.setflags(write=False)
    return w


def derivative6(y, h: float) -> np.ndarray:
    """6th-order accurate first derivative of uniformly sampled ``y``.

    Central 7-point stencil inside, one-sided 7-point stencils for the three
    samples at each edge.
    """
    y = np.asarray(y, dtype=float)
    n = y.size
    if n < 7:
        raise InputError("6th-order derivative needs at least 7 samples")
    d = np.empty(n)
    d[3:n - 3] = np.correlate(y, CENTRAL6, mode="valid")
    for i in range(3):
        w = fd_weights(tuple(range(-i, 7 - i)))
        d[i] = w @ y[:7]
        j = n - 1 - i
        w = fd_weights(tuple(range(-(6 - i), i + 1)))
        d[j] = w @ y[n - 7:]
    return d / h


def smooth(y, fraction: float = 0.01) -> np.ndarray:
    """Centered moving average over ``fraction`` of the samples.

    The window is rounded to an odd count (minimum 1) and shrinks
    symmetrically near the ends, so linear trends pass through unchanged.
    """
    y = np.asarray(y, dtype=float)
    n = y.size
    w = max(1, int(round(fraction * n)))
    if w % 2 == 0:
        w += 1
    half = w // 2
    if half == 0 or n == 0:
        return y.copy()
    i = np.arange(n)
    r = np.minimum(half, np.minimum(i, n - 1 - i))
    c = np.concatenate(([0.0], np.cumsum(y)))
    return (c[i + r + 1] - c[i - r]) / (2 * r + 1)


def is_uniform(freqs, rtol: float = 1e-6) -> bool:
    d = np.diff(np.asarray(freqs, dtype=float))
    return d.size > 0 and np.all(np.abs(d - d.mean()) <= rtol * abs(d.mean()))


def group_delay(net: NetworkData, port_pair=(2, 1), smoothing: float = 0.01) -> np.ndarray:
    """``-(1/2pi) d(angle S_xy)/df`` with a 6th-order stencil, then smoothing.

    ``smoothing`` is the moving-average window as a fraction of the point
    count; 0 disables it. Requires a uniform grid (see ``resample_uniform``).
    """
    f = net.freqs
    if f.size < 7:
        raise InputError("group delay needs at least 7 frequency points")
    if not is_uniform(f):
        raise InputError("group delay needs a uniform frequency grid; use resample_uniform() first")
    h = (f[-1] - f[0]) / (f.size - 1)
    ph = unwrap_phase(np.angle(net.sparam(*port_pair)))
    tau = -derivative6(ph, h) / (2 * np.pi)
    return smooth(tau, smoothing) if smoothing > 0 else tau


def resample_uniform(net: NetworkData, npoints: int | None = None) -> NetworkData:
    """Linear interpolation of real and imaginary parts onto a uniform grid."""
    n = npoints or len(net)
    f = np.linspace(net.freqs[0], net.freqs[-1], n)
    flat = net.s.reshape(len(net), -1)
    out = np.empty((n, flat.shape[1]), dtype=complex)
    for j in range(flat.shape[1]):
        out[:, j] = np.interp(f, net.freqs, flat[:, j].real) + 1j * np.interp(f, net.freqs, flat[:, j].imag)
    return NetworkData(f, out.reshape(n, net.ports, net.ports), net.z_ref)


def microwave_params(net: NetworkData, z_load: float | None = None, subtract_load: bool = False,
                     smoothing: float = 0.01) -> MicrowaveParams:
    """Input impedance, input VSWR, phase and group delay of a two-port."""
    if net.ports != 2:
        raise InputError("microwave_params expects a 2-port network")
    zl = net.z_ref if z_load is None else z_load
    z = z_from_s(net)
    return MicrowaveParams(
        freqs=net.freqs,
        z_in=input_impedance(z, zl, subtract_load=subtract_load),
        vswr_in=vswr(net.sparam(1, 1)),
        tau_phi=phase_delay(net),
        tau_g=group_delay(net, smoothing=smoothing),
    )


def band_isolation(net: NetworkData, f_lo: float, f_hi: float) -> IsolationReport:
    """Worst-case isolation ``-max 20 log10 |S|`` over S31, S41, S32, S42 in band."""
    if net.ports != 4:
        raise InputError("band isolation needs a 4-port network")
    if not f_lo < f_hi:
        raise InputError("f_lo must be below f_hi")
    if f_lo < net.freqs[0] or f_hi > net.freqs[-1]:
        raise InputError(
            f"band [{f_lo:.6g}, {f_hi:.6g}] Hz outside data range "
            f"[{net.freqs[0]:.6g}, {net.freqs[-1]:.6g}] Hz")
    sel = (net.freqs >= f_lo) & (net.freqs <= f_hi)
    if not np.any(sel):
        raise InputError("no frequency points inside the band")
    mags = np.stack([np.abs(net.sparam(*p)[sel]) for p in CROSSTALK_PAIRS])
    k, i = np.unravel_index(np.argmax(mags), mags.shape)
    worst = mags[k, i]
    iso = np.inf if worst == 0 else -20 * np.log10(worst)
    return IsolationReport(float(iso), float(net.freqs[sel][i]), CROSSTALK_PAIRS[k])


def _crossing(x, y, level, i0, step):
    """Walk from index i0 by ``step`` until y rises above level; interpolate."""
    i = i0
    while 0 <= i + step < y.size:
        j = i + step
        if y[j] >= level:
            return x[i] + (level - y[i]) * (x[j] - x[i]) / (y[j] - y[i])
        i = j
    return None


def classify_dip(net: NetworkData, port_pair=(2, 1), window=None, wing_fraction: float = 0.1) -> DipReport:
    """Characterize the deepest transmission dip inside ``window = (f_lo, f_hi)``.

    The magnitude and linear phase baseline are estimated on the outer
    ``wing_fraction`` of the window and divided out. The resonant deviation
    ``1/S - 1`` of a notch rotates through nearly pi across its core, while a
    non-resonant dip with transmission-line phase keeps a fixed argument; the
    spread of that argument over the dip core (deviation at least a quarter
    of its peak) is reported as ``phase_excursion`` and compared with pi/2.
    """
    f = net.freqs
    if window is None:
        sel = np.ones(f.size, bool)
    else:
        f_lo, f_hi = window
        sel = (f >= f_lo) & (f <= f_hi)
    f = f[sel]
    sxy = net.sparam(*port_pair)[sel]
    n = f.size
    if n < 5:
        raise InputError("dip window holds fewer than 5 points")
    mag = np.abs(sxy)
    i0 = int(np.argmin(mag))
    if i0 == 0 or i0 == n - 1:
        raise InputError("no local |S| minimum inside the window")

    nw = max(1, int(np.ceil(wing_fraction * n)))
    wings = np.r_[0:nw, n - nw:n]
    if i0 in wings:
        raise InputError("no local |S| minimum inside the window (minimum lies in the wings)")
    mag_db = 20 * np.log10(np.maximum(mag, 1e-300))
    ref_db = float(np.mean(mag_db[wings]))
    depth = ref_db - float(mag_db[i0])
    if not depth > 0:
        raise InputError("no dip below the wing level in the window")

    level = ref_db - min(3.0, depth / 2)
    lo = _crossing(f, mag_db, level, i0, -1)
    hi = _crossing(f, mag_db, level, i0, +1)
    if lo is None or hi is None:
        raise InputError("dip is wider than the window; cannot measure its 3 dB bandwidth")
    bw = hi - lo

    ph = unwrap_phase(np.angle(sxy))
    slope, icept = np.polyfit(f[wings], ph[wings], 1)
    base = 10 ** (ref_db / 20) * np.exp(1j * (slope * f + icept))
    dev = base / sxy - 1
    core = np.abs(dev) >= 0.25 * np.abs(dev).max()
    arg = unwrap_phase(np.angle(dev[core]))
    excursion = float(arg.max() - arg.min()) if arg.size else 0.0
    cls = "resonance" if excursion > RESONANCE_THRESHOLD else "non-resonant-anomaly"
    return DipReport(float(f[i0]), depth, float(bw), excursion, cls)
