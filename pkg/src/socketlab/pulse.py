"""Microwave control-pulse transmission through a measured two-port."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import correlate, hilbert

from .errors import InputError
from .io_touchstone import NetworkData

COVERAGE_LIMIT = 0.10


@dataclass(frozen=True)
class PulseSpec:
    carrier: float = 4.5e9
    sideband: float = 200e6
    fwhm: float = 15e-9
    sample_rate: float = 40e9
    duration: float = 120e-9

    def __post_init__(self):
        if not self.fwhm > 0:
            raise InputError("fwhm must be > 0")
        if self.carrier < 0 or self.duration <= 0:
            raise InputError("carrier must be >= 0 and duration > 0")
        need = 2 * (self.carrier + self.sideband + 3 / self.fwhm)
        if not self.sample_rate > need:
            raise InputError(
                f"undersampled pulse: sample_rate {self.sample_rate:.4g} Hz must exceed {need:.4g} Hz")


@dataclass(frozen=True)
class DistortionMetrics:
    envelope_correlation: float
    fwhm_change_fraction: float
    delay_s: float

    def as_dict(self):
        return {
            "envelope_correlation": self.envelope_correlation,
            "fwhm_change_fraction": self.fwhm_change_fraction,
            "delay_s": self.delay_s,
        }


def time_axis(spec: PulseSpec) -> np.ndarray:
    n = int(round(spec.duration * spec.sample_rate))
    return np.arange(n) / spec.sample_rate


def gaussian_envelope(spec: PulseSpec, t=None) -> np.ndarray:
    t = time_axis(spec) if t is None else t
    t0 = spec.duration / 2
    return np.exp(-4 * np.log(2) * (t - t0) ** 2 / spec.fwhm ** 2)


def synthesize_pulse(spec: PulseSpec) -> tuple:
    """Single-sideband Gaussian pulse ``g(t) cos(2 pi (carrier + sideband) t)``.

    Returns ``(t, volts)`` with the envelope centred in the record.
    """
    t = time_axis(spec)
    g = gaussian_envelope(spec, t)
    return t, g * np.cos(2 * np.pi * (spec.carrier + spec.sideband) * t)


def transmit(pulse, net: NetworkData, port_pair=(2, 1), sample_rate: float | None = None,
             t=None) -> np.ndarray:
    """Apply ``S_xy(f)`` to a real pulse in the frequency domain.

    S_xy is interpolated linearly (real and imaginary parts) onto the FFT
    grid and held at its edge values outside the measured band. Raises if
    more than 10% of the pulse energy falls outside the measured band.
    """
    x = np.asarray(pulse, dtype=float)
    if sample_rate is None:
        if t is None:
            raise InputError("need sample_rate or the time axis")
        dt = np.diff(np.asarray(t, dtype=float))
        if not np.allclose(dt, dt[0], rtol=1e-6):
            raise InputError("pulse must be uniformly sampled")
        sample_rate = 1 / dt[0]
    X = np.fft.rfft(x)
    f = np.fft.rfftfreq(x.size, 1 / sample_rate)
    energy = np.abs(X) ** 2
    outside = (f < net.freqs[0]) | (f > net.freqs[-1])
    total = energy.sum()
    if total == 0:
        raise InputError("zero-energy pulse")
    if energy[outside].sum() > COVERAGE_LIMIT * total:
        raise InputError(
            f"network data [{net.freqs[0]:.4g}, {net.freqs[-1]:.4g}] Hz misses more than "
            f"{COVERAGE_LIMIT:.0%} of the pulse energy")
    s = net.sparam(*port_pair)
    h = np.interp(f, net.freqs, s.real) + 1j * np.interp(f, net.freqs, s.imag)
    return np.fft.irfft(X * h, n=x.size)


def envelope(x) -> np.ndarray:
    """Magnitude of the analytic signal."""
    return np.abs(hilbert(np.asarray(x, dtype=float)))


def fwhm(y, dt: float) -> float:
    """Full width at half maximum of a single-peaked, non-negative trace."""
    y = np.asarray(y, dtype=float)
    i0 = int(np.argmax(y))
    half = y[i0] / 2
    above = y >= half
    lo = i0
    while lo > 0 and above[lo - 1]:
        lo -= 1
    hi = i0
    while hi < y.size - 1 and above[hi + 1]:
        hi += 1
    left = lo - (y[lo] - half) / (y[lo] - y[lo - 1]) if lo > 0 else 0.0
    right = hi + (y[hi] - half) / (y[hi] - y[hi + 1]) if hi < y.size - 1 else y.size - 1.0
    return (right - left) * dt


def distortion_metrics(in_pulse, out_pulse, sample_rate: float) -> DistortionMetrics:
    """Envelope similarity of ``out_pulse`` to ``in_pulse``.

    The normalized envelope cross-correlation is maximized over lag; the
    best lag (refined by a parabola through the peak) is the delay.
    """
    a = envelope(in_pulse)
    b = envelope(out_pulse)
    if a.size != b.size:
        raise InputError("pulses must have equal length")
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0:
        raise InputError("zero-energy input pulse")
    if nb == 0:
        raise InputError("zero-energy output pulse")
    xc = correlate(b, a, mode="full", method="fft") / (na * nb)
    lags = np.arange(-a.size + 1, a.size)
    k = int(np.argmax(xc))
    shift = float(lags[k])
    if 0 < k < xc.size - 1:
        y0, y1, y2 = xc[k - 1], xc[k], xc[k + 1]
        den = y0 - 2 * y1 + y2
        if den < 0:
            shift += 0.5 * (y0 - y2) / den
    dt = 1 / sample_rate
    w_in = fwhm(a, dt)
    w_out = fwhm(b, dt)
    return DistortionMetrics(float(min(xc[k], 1.0)), float((w_out - w_in) / w_in), shift * dt)
