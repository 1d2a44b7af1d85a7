"""Time-domain reflectometry: instantaneous impedance and piecewise line models.

All quantities are kept on the round-trip time axis. Converting to distance
needs a per-segment velocity, which only the caller can supply
(see ``segment_lengths``).
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field

import numpy as np
from scipy.constants import c as C0
from scipy.ndimage import median_filter

from .errors import InputError
from .io_touchstone import TdrTrace

OPEN_MARGIN = 1e-9
BOUNCE_FLOOR = 1e-6
LUMP_OHMS = 0.5  # largest lumped resistor in multi-order synthesis


@dataclass(frozen=True)
class Segment:
    delay: float  # one-way, seconds
    z: float
    r_series: float = 0.0

    def __post_init__(self):
        if not self.delay > 0:
            raise InputError(f"segment delay must be > 0, got {self.delay}")
        if not self.z > 0:
            raise InputError(f"segment impedance must be > 0, got {self.z}")
        if self.r_series < 0:
            raise InputError(f"segment series resistance must be >= 0, got {self.r_series}")


@dataclass(frozen=True)
class ImpedanceProfile:
    """Cascade of line segments seen from a source of impedance ``z_source``.

    The last segment is taken to continue into a matched termination.
    """

    segments: tuple = field(default_factory=tuple)
    z_source: float = 50.0

    def __post_init__(self):
        segs = tuple(s if isinstance(s, Segment) else Segment(*s) for s in self.segments)
        if not segs:
            raise InputError("profile needs at least one segment")
        if not self.z_source > 0:
            raise InputError("z_source must be > 0")
        object.__setattr__(self, "segments", segs)

    @property
    def boundaries(self) -> np.ndarray:
        """Round-trip times at which each segment starts."""
        d = np.array([s.delay for s in self.segments])
        return 2 * np.concatenate(([0.0], np.cumsum(d)[:-1]))

    def to_dict(self):
        return {
            "z_source_ohm": self.z_source,
            "segments": [
                {"delay_s": s.delay, "z_ohm": s.z, "r_series_ohm": s.r_series}
                for s in self.segments
            ],
        }

    @classmethod
    def from_dict(cls, d):
        try:
            segs = [Segment(float(s["delay_s"]), float(s["z_ohm"]), float(s.get("r_series_ohm", 0.0)))
                    for s in d["segments"]]
        except (KeyError, TypeError) as e:
            raise InputError(f"malformed profile: {e}")
        return cls(tuple(segs), float(d.get("z_source_ohm", 50.0)))


def reflection_coefficient(z, z_c: float = 50.0):
    """The xi that ``impedance_from_xi`` maps back to ``z``: ``(Z - Zc) / (Z + Zc)``."""
    z = np.asarray(z, dtype=float)
    return (z - z_c) / (z + z_c)


def impedance_from_xi(xi, z_c: float = 50.0) -> np.ndarray:
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    z = np.empty_like(xi)
    op = xi >= 1 - OPEN_MARGIN
    sh = xi <= -1 + OPEN_MARGIN
    mid = ~(op | sh)
    z[mid] = z_c * (1 + xi[mid]) / (1 - xi[mid])
    z[op] = np.inf
    z[sh] = 0.0
    return z


def impedance_from_trace(trace: TdrTrace, z_c: float = 50.0) -> np.ndarray:
    """First-order instantaneous impedance ``Zc (1 + xi) / (1 - xi)``.

    ``xi = (V_meas - V+) / V+``. Opens map to ``inf`` and shorts to 0.
    """
    if not z_c > 0:
        raise InputError("z_c must be > 0")
    xi = (trace.v_meas - trace.v_plus) / trace.v_plus
    return impedance_from_xi(xi, z_c)


def segment_lengths(profile: ImpedanceProfile, velocity_factor) -> np.ndarray:
    """Physical lengths from one-way delays; ``velocity_factor`` scalar or per segment."""
    vf = np.broadcast_to(np.asarray(velocity_factor, dtype=float), (len(profile.segments),))
    if np.any(vf <= 0) or np.any(vf > 1):
        raise InputError("velocity factor must be in (0, 1]")
    return np.array([s.delay for s in profile.segments]) * C0 * vf


def first_order_impedance(profile: ImpedanceProfile, times) -> np.ndarray:
    """Apparent impedance ``Z_k + accumulated series resistance`` at each
    round-trip time; series resistance ramps linearly inside its segment."""
    t = np.asarray(times, dtype=float)
    segs = profile.segments
    starts = profile.boundaries
    two_d = np.array([2 * s.delay for s in segs])
    r = np.array([s.r_series for s in segs])
    r_before = np.concatenate(([0.0], np.cumsum(r)[:-1]))
    tol = 1e-9 * max(two_d.min(), 1e-300)
    k = np.clip(np.searchsorted(starts, t + tol, side="right") - 1, 0, len(segs) - 1)
    frac = np.clip((t - starts[k]) / two_d[k], 0.0, 1.0)
    z = np.array([s.z for s in segs])
    out = z[k] + r_before[k] + r[k] * frac
    out[t < -tol] = profile.z_source
    return out


def _lattice_sections(profile, lumps):
    """Sections and node resistors for the bounce diagram.

    A lossy segment becomes ``2 k`` half-sections with a series resistor of
    ``r / k`` between each pair, ``k = max(lumps, ceil(2 r / 1 ohm))``, so the resulting staircase
    is centred on the first-order ramp. ``node_r[i]`` sits between section
    ``i`` and ``i + 1`` (section 0 is the source line).
    """
    delays, zs, node_r = [], [], [0.0]
    for s in profile.segments:
        if s.r_series > 0:
            k = max(lumps, int(np.ceil(s.r_series / LUMP_OHMS)))
            half = s.delay / (2 * k)
            for _ in range(k):
                delays += [half, half]
                zs += [s.z, s.z]
                node_r += [s.r_series / k, 0.0]
        else:
            delays.append(s.delay)
            zs.append(s.z)
            node_r.append(0.0)
    return delays, zs, node_r


def _multi_reflection(profile, times, v_plus, lumps=16):
    delays, zs, node_r = _lattice_sections(profile, lumps)
    nsec = len(delays)
    # section 0 = source line, 1..nsec = segments, nsec+1 = matched termination
    zsec = [profile.z_source] + zs + [zs[-1]]
    quantum = min(delays) * 1e-6
    dsec = [0] + [int(round(d / quantum)) for d in delays] + [0]
    t_end = int(np.ceil(float(times[-1]) / quantum))
    floor = BOUNCE_FLOOR * v_plus

    def scatter(node, from_left):
        z1, z2, r = zsec[node], zsec[node + 1], node_r[node]
        tot = z1 + z2 + r
        if from_left:
            return (r + z2 - z1) / tot, 2 * z2 / tot
        return (r + z1 - z2) / tot, 2 * z1 / tot

    # wavefronts meeting at the same node, time and direction are merged
    pending = {(0, 0, True): v_plus}
    heap = [(0, 0, True)]
    arrivals = {}
    while heap:
        key = heapq.heappop(heap)
        a = pending.pop(key)
        t, node, from_left = key
        if abs(a) < floor:
            continue
        g, tr = scatter(node, from_left)
        if from_left:
            out = ((node, a * g, False), (node + 1, a * tr, True))
        else:
            out = ((node + 1, a * g, True), (node, a * tr, False))
        for sec, amp, rightward in out:
            if sec == 0:
                arrivals[t] = arrivals.get(t, 0.0) + amp
                continue
            if sec == nsec + 1 or abs(amp) < floor:
                continue
            nkey = (t + dsec[sec], sec if rightward else sec - 1, rightward)
            if nkey[0] > t_end:
                continue
            if nkey in pending:
                pending[nkey] += amp
            else:
                pending[nkey] = amp
                heapq.heappush(heap, nkey)
    v = np.full(times.shape, float(v_plus))
    if not arrivals:
        return v
    at = np.array(sorted(arrivals))
    cum = np.cumsum([arrivals[k] for k in at])
    idx = np.searchsorted(at * quantum, times + 0.5 * quantum, side="right") - 1
    ok = idx >= 0
    v[ok] += cum[idx[ok]]
    return v


def synthesize_trace(profile: ImpedanceProfile, v_plus: float = 0.25, sample_dt: float = 1e-12,
                     total_time: float | None = None, order: str = "first", lumps: int = 16) -> TdrTrace:
    """Forward TDR model of ``profile`` with an ideal (zero rise time) step.

    ``order="first"`` gives the trace whose xi-to-Z inversion is exactly the
    first-order impedance staircase. ``order="multi"`` runs a lattice
    (bounce) diagram with all re-reflections down to 1e-6 V+; distributed
    series resistance is lumped into at least ``lumps`` resistors of at most
    0.5 ohm each per lossy segment.
    """
    if not sample_dt > 0:
        raise InputError("sample_dt must be > 0")
    if not v_plus > 0:
        raise InputError("v_plus must be > 0")
    span = 2 * sum(s.delay for s in profile.segments)
    if total_time is None:
        total_time = 1.25 * span
    if total_time < span:
        raise InputError("total_time must cover the round trip of the whole profile")
    n = int(np.floor(total_time / sample_dt + 1e-9)) + 1
    t = np.arange(n) * sample_dt
    if order == "first":
        xi = reflection_coefficient(first_order_impedance(profile, t), profile.z_source)
        v = v_plus * (1 + xi)
    elif order == "multi":
        v = _multi_reflection(profile, t, v_plus, lumps=lumps)
    else:
        raise InputError(f"order must be 'first' or 'multi', got {order!r}")
    return TdrTrace(t, v, v_plus=v_plus, rise_time=0.0)


def _line_sse(t, z):
    """Prefix sums for O(1) least-squares line fits on any prefix."""
    n = np.arange(1, t.size + 1)
    st, sz = np.cumsum(t), np.cumsum(z)
    stt, stz, szz = np.cumsum(t * t), np.cumsum(t * z), np.cumsum(z * z)
    return n, st, sz, stt, stz, szz


def _sse(n, st, sz, stt, stz, szz):
    var_t = stt - st * st / n
    cov = stz - st * sz / n
    var_z = szz - sz * sz / n
    with np.errstate(divide="ignore", invalid="ignore"):
        out = var_z - np.where(var_t > 0, cov * cov / var_t, 0.0)
    return np.maximum(out, 0.0)


def _best_split(t, z, min_len):
    """Index splitting [0, n) into two independent line fits of least SSE."""
    left = _line_sse(t, z)
    right = _line_sse(t[::-1], z[::-1])
    sl = _sse(*left)
    sr = _sse(*right)[::-1]
    n = t.size
    cand = np.arange(min_len, n - min_len + 1)
    if cand.size == 0:
        return None
    cost = sl[cand - 1] + sr[cand]
    return int(cand[np.argmin(cost)])


def _split_pieces(t, z, lo, hi, tol, min_len, out):
    tt, zz = t[lo:hi], z[lo:hi]
    if tt.size >= 2:
        a, b = np.polyfit(tt, zz, 1)
        resid = np.max(np.abs(zz - (a * tt + b)))
    else:
        resid = 0.0
    if resid > tol and hi - lo >= 2 * min_len:
        k = _best_split(tt, zz, min_len)
        if k is not None:
            _split_pieces(t, z, lo, lo + k, tol, min_len, out)
            _split_pieces(t, z, lo + k, hi, tol, min_len, out)
            return
    out.append((lo, hi))


def _merge_pieces(t, z, sub, tol):
    """Undo splits whose neighbours still share one line within ``tol``."""
    merged = [sub[0]]
    for lo, hi in sub[1:]:
        plo, _ = merged[-1]
        tt, zz = t[plo:hi], z[plo:hi]
        a, b = np.polyfit(tt, zz, 1)
        if np.max(np.abs(zz - (a * tt + b))) <= tol:
            merged[-1] = (plo, hi)
        else:
            merged.append((lo, hi))
    return merged


def profile_from_trace(trace: TdrTrace, z_c: float = 50.0, min_step: float = 2.0,
                       median_window: int = 5, kink_tol: float | None = None) -> ImpedanceProfile:
    """Fit a piecewise (constant + linear ramp) line model to ``Z(t)``.

    Steps larger than ``min_step`` on the median-filtered impedance start a
    new segment; the lag used to detect them follows the trace's rise time.
    Pieces whose slope changes without a step (a lossy section running into
    a lossless one) are split where two line fits explain them best. Each
    segment's ramp becomes its ``r_series``; ``z`` is the level at the
    segment start minus the series resistance accumulated before it.
    """
    z = impedance_from_trace(trace, z_c)
    n = z.size
    if n < 3:
        raise InputError("trace too short to segment")
    z = np.where(np.isfinite(z), z, 1e9)
    t = trace.times
    dt = trace.dt
    w = max(1, int(median_window)) | 1
    zf = median_filter(z, size=w, mode="nearest") if w > 1 else z
    lag = max(1, int(np.ceil(trace.rise_time / dt))) if dt > 0 else 1
    if kink_tol is None:
        kink_tol = min_step / 4

    jump = zf[lag:] - zf[:-lag]
    big = np.abs(jump) > min_step
    cuts = []
    i = 0
    while i < big.size:
        if big[i]:
            j = i
            while j + 1 < big.size and big[j + 1] and np.sign(jump[j + 1]) == np.sign(jump[i]):
                j += 1
            peak = np.abs(jump[i:j + 1])
            top = np.flatnonzero(peak >= peak.max() - 1e-12 * max(peak.max(), 1.0))
            mid = i + (top[0] + top[-1]) / 2
            cuts.append(int(np.ceil(mid + lag / 2)))
            i = j + 1
        else:
            i += 1
    edges = [0] + [c for c in cuts if 0 < c < n] + [n]
    guard = lag + w // 2
    min_len = max(3, w)

    pieces = []  # (start, stop) index ranges of fitted segments
    for lo, hi in zip(edges[:-1], edges[1:]):
        a = lo + (guard if lo > 0 else 0)
        b = hi - (guard if hi < n else 0)
        if b - a < 2:
            a, b = lo, hi
        sub = []
        _split_pieces(t, zf, a, b, kink_tol, min_len, sub)
        sub = _merge_pieces(t, zf, sub, kink_tol)
        # map inner split points back onto the unguarded range
        bounds = [lo] + [s for s, _ in sub[1:]] + [hi]
        for (s0, s1), (c0, c1) in zip(sub, zip(bounds[:-1], bounds[1:])):
            pieces.append((c0, c1, s0, s1))

    segs = []
    r_acc = 0.0
    for k, (c0, c1, s0, s1) in enumerate(pieces):
        t0 = t[c0]
        t1 = t[c1] if c1 < n else t[-1]
        tt, zz = t[s0:s1], zf[s0:s1]
        if tt.size >= 2 and tt[-1] > tt[0]:
            slope, icept = np.polyfit(tt, zz, 1)
        else:
            slope, icept = 0.0, float(np.mean(zz))
        start_level = icept + slope * t0
        rise = max(0.0, slope * (t1 - t0))
        if abs(rise) < kink_tol:
            # flat: report the mean level, no ramp
            start_level, rise = float(np.mean(zz)), 0.0
        delay = max((t1 - t0) / 2, dt / 2 if dt > 0 else 1e-15)
        zseg = start_level - r_acc
        if not zseg > 0:
            zseg = max(float(np.min(zz)) - r_acc, 1e-6)
        segs.append(Segment(float(delay), float(zseg), float(rise)))
        r_acc += rise
    return ImpedanceProfile(tuple(segs), z_source=z_c)
