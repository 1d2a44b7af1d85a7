"""Notch-type resonator fitting in inverse-transmission space.

The model is

    1 / S21(f) = 1 + (Qi / Qc*) e^{i phi} / (1 + 2 i Qi dx),   dx = (f - f0) / f0

Fits run on a sweep whose off-resonance transmission has been normalized to
1 (0 dB, 0 rad) by ``normalize_sweep``.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ComputationError, ConvergenceError, InputError


class NormalizationWarning(UserWarning):
    pass


@dataclass(frozen=True)
class ResonatorModel:
    f0: float
    q_i: float
    q_c_star: float
    phi: float = 0.0

    def __post_init__(self):
        for name in ("f0", "q_i", "q_c_star"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise InputError(f"{name} must be finite and > 0, got {v}")
        # keep phi in (-pi, pi]
        phi = float(np.pi - np.mod(np.pi - self.phi, 2 * np.pi))
        object.__setattr__(self, "phi", phi)

    @property
    def q_loaded(self) -> float:
        return 1.0 / (1.0 / self.q_i + 1.0 / self.q_c_star)

    @property
    def linewidth(self) -> float:
        """Full width at half maximum of the notch, Hz."""
        return self.f0 / self.q_loaded

    def as_dict(self):
        return {"f0_hz": self.f0, "q_i": self.q_i, "q_c_star": self.q_c_star, "phi_rad": self.phi}


@dataclass(frozen=True)
class Baseline:
    """Off-resonance transmission ``exp(a0 + a1 (f - fc)) * exp(i (b0 + b1 (f - fc)))``."""

    f_center: float
    log_mag: tuple  # (a0, a1)
    phase: tuple  # (b0, b1)

    def __call__(self, freqs):
        x = np.asarray(freqs, dtype=float) - self.f_center
        return np.exp(self.log_mag[0] + self.log_mag[1] * x + 1j * (self.phase[0] + self.phase[1] * x))

    @property
    def delay(self) -> float:
        """Cable delay implied by the phase slope, seconds."""
        return -self.phase[1] / (2 * np.pi)

    def as_dict(self):
        return {"f_center_hz": self.f_center, "log_mag": list(self.log_mag), "phase": list(self.phase)}


@dataclass(frozen=True)
class FitResult:
    model: ResonatorModel
    std_errors: dict
    residual_rms: float
    n_iter: int
    normalization: Baseline | None = None
    initial: ResonatorModel | None = None
    initial_residual_rms: float = float("nan")
    metadata: dict = field(default_factory=dict)

    def as_dict(self):
        d = {
            **self.model.as_dict(),
            "std_errors": dict(self.std_errors),
            "residual_rms": self.residual_rms,
            "n_iter": self.n_iter,
        }
        if self.normalization is not None:
            d["normalization"] = self.normalization.as_dict()
        if self.metadata:
            d["metadata"] = dict(self.metadata)
        return d


def synthesize_s21(model: ResonatorModel, freqs) -> np.ndarray:
    f = np.asarray(freqs, dtype=float)
    dx = (f - model.f0) / model.f0
    inv = 1 + (model.q_i / model.q_c_star) * np.exp(1j * model.phi) / (1 + 2j * model.q_i * dx)
    return 1 / inv


def resonance_grid(model: ResonatorModel, points: int = 801, span: float = 10.0) -> np.ndarray:
    """Uniform sweep of ``span`` linewidths centred on ``f0``."""
    half = 0.5 * span * model.linewidth
    return np.linspace(model.f0 - half, model.f0 + half, points)


def _wings(n, fraction):
    nw = max(2, int(np.ceil(fraction * n)))
    if 2 * nw >= n:
        raise InputError("wing_fraction leaves no points for the resonance")
    return np.r_[0:nw, n - nw:n]


def fit_baseline(freqs, s21, wing_fraction: float = 0.1) -> Baseline:
    """Least-squares log-magnitude and phase lines through the sweep wings."""
    f = np.asarray(freqs, dtype=float)
    s = np.asarray(s21, dtype=complex)
    if f.shape != s.shape or f.size < 8:
        raise InputError("need matching frequency and S21 arrays with at least 8 points")
    w = _wings(f.size, wing_fraction)
    fc = 0.5 * (f[0] + f[-1])
    x = f - fc
    a1, a0 = np.polyfit(x[w], np.log(np.abs(s[w])), 1)
    ph = np.unwrap(np.angle(s))
    b1, b0 = np.polyfit(x[w], ph[w], 1)
    return Baseline(fc, (float(a0), float(a1)), (float(b0), float(b1)))


MIN_SPAN_WIDTHS = 4.0


def normalize_sweep(freqs, s21_raw, wing_fraction: float = 0.1, return_baseline: bool = False):
    """Divide out the off-resonance baseline so the wings sit at 1 (0 dB, 0 rad).

    Warns (``NormalizationWarning``) when the wings are not flat compared with
    the dip, or when no dip is found at all.
    """
    f = np.asarray(freqs, dtype=float)
    s = np.asarray(s21_raw, dtype=complex)
    base = fit_baseline(f, s, wing_fraction)
    out = s / base(f)
    w = _wings(f.size, wing_fraction)
    depth = 1 - np.min(np.abs(out))
    wing_rms = float(np.sqrt(np.mean(np.abs(out[w] - 1) ** 2)))
    # a sweep only a few half-power widths wide leaves the resonance tail in the wings
    dev = np.abs(1 - out)
    core = f[dev >= dev.max() / np.sqrt(2)]
    narrow = core.size > 1 and (f[-1] - f[0]) < MIN_SPAN_WIDTHS * (core[-1] - core[0])
    if depth < 1e-3:
        warnings.warn("no resonance dip found in sweep", NormalizationWarning, stacklevel=2)
    elif wing_rms > 0.1 * depth or narrow:
        warnings.warn(
            f"sweep wings are not flat (rms {wing_rms:.3g} vs dip depth {depth:.3g}); "
            "the resonance may overlap the wings", NormalizationWarning, stacklevel=2)
    return (out, base) if return_baseline else out


def initial_guess(freqs, s21_norm) -> ResonatorModel:
    """Seed parameters from the dip minimum and its half-power width."""
    f = np.asarray(freqs, dtype=float)
    s = np.asarray(s21_norm, dtype=complex)
    mag = np.abs(s)
    i0 = int(np.argmin(mag))
    smin = mag[i0]
    if i0 == 0 or i0 == f.size - 1 or smin >= 1:
        raise InputError("no resonance dip found")
    f0 = f[i0]
    # |1 - S21| is Lorentzian with FWHM f0/Ql for a symmetric notch
    dev = np.abs(1 - s)
    half = dev[i0] / np.sqrt(2)

    def edge(step):
        i = i0
        while 0 <= i + step < f.size:
            j = i + step
            if dev[j] <= half:
                return f[i] + (half - dev[i]) * (f[j] - f[i]) / (dev[j] - dev[i])
            i = j
        return None

    lo, hi = edge(-1), edge(+1)
    if lo is not None and hi is not None and hi > lo:
        width = hi - lo
    elif lo is not None:
        width = 2 * (f0 - lo)
    elif hi is not None:
        width = 2 * (hi - f0)
    else:
        width = 0.1 * (f[-1] - f[0])
    q_l = f0 / width
    q_c = q_l / max(1 - smin, 1e-6)
    inv_qi = 1 / q_l - 1 / q_c
    q_i = 1 / inv_qi if inv_qi > 0 else 10 * q_l
    return ResonatorModel(f0, q_i, q_c, 0.0)


def _pack(m: ResonatorModel):
    return np.array([np.log(m.f0), np.log(m.q_i), np.log(m.q_c_star), m.phi])


def _unpack(p):
    return np.exp(p[0]), np.exp(p[1]), np.exp(p[2]), p[3]


def _model_and_jac(p, f):
    f0, qi, qc, phi = _unpack(p)
    dx = f / f0 - 1
    lor = 1 / (1 + 2j * qi * dx)
    a = (qi / qc) * np.exp(1j * phi)
    m = 1 + a * lor
    jac = np.empty((f.size, 4), dtype=complex)
    jac[:, 0] = a * lor * lor * 2j * qi * (f / f0)
    jac[:, 1] = a * lor * lor
    jac[:, 2] = -a * lor
    jac[:, 3] = 1j * a * lor
    return m, jac


def _stack(z):
    return np.concatenate((z.real, z.imag), axis=0)


def _levenberg_marquardt(fun, p0, max_iter=200, xtol=1e-10, lam0=1e-3):
    """Damped Gauss-Newton with Marquardt scaling.

    ``fun(p)`` returns (residual vector, Jacobian). Damping grows x10 after a
    rejected step and shrinks /10 after an accepted one; stops when the
    relative parameter step falls below ``xtol``.
    """
    p = np.asarray(p0, dtype=float).copy()
    r, jac = fun(p)
    cost = r @ r
    lam = lam0
    for it in range(1, max_iter + 1):
        jtj = jac.T @ jac
        g = jac.T @ r
        dscale = np.maximum(np.diag(jtj), 1e-300)
        while True:
            a = jtj + lam * np.diag(dscale)
            try:
                step = -np.linalg.solve(a, g)
            except np.linalg.LinAlgError:
                step = -np.linalg.lstsq(a, g, rcond=None)[0]
            p_new = p + step
            r_new, jac_new = fun(p_new)
            cost_new = r_new @ r_new
            if np.isfinite(cost_new) and cost_new <= cost:
                small = np.linalg.norm(step) <= xtol * (np.linalg.norm(p) + xtol)
                p, r, jac, cost = p_new, r_new, jac_new, cost_new
                lam = max(lam / 10, 1e-15)
                if small:
                    return p, r, jac, it, True
                break
            lam *= 10
            if lam > 1e16:
                # no downhill step left at machine precision
                return p, r, jac, it, True
    return p, r, jac, max_iter, False


def fit_resonator(freqs, s21_norm, initial: ResonatorModel | None = None, max_iter: int = 200,
                  weighted: bool = True) -> FitResult:
    """Least-squares fit of the inverse-transmission notch model.

    Residuals are taken in ``1/S21`` space and multiplied by ``|S21|^2`` of
    the data, which makes their noise level uniform across the notch.
    Standard errors come from the linearized covariance at the optimum.
    """
    f = np.asarray(freqs, dtype=float)
    s = np.asarray(s21_norm, dtype=complex)
    if f.shape != s.shape or f.size < 5:
        raise InputError("need matching frequency and S21 arrays with at least 5 points")
    if np.any(s == 0):
        raise InputError("S21 contains exact zeros; inverse-space fit undefined")
    init = initial if initial is not None else initial_guess(f, s)
    y = 1 / s
    w = np.abs(s) ** 2 if weighted else np.ones(f.size)

    def fun(p):
        m, jac = _model_and_jac(p, f)
        return _stack(w * (m - y)), _stack(w[:, None] * jac)

    p0 = _pack(init)
    r0, _ = fun(p0)
    p, r, jac, n_iter, ok = _levenberg_marquardt(fun, p0, max_iter=max_iter)
    rms = float(np.sqrt(np.mean(r ** 2)))
    f0, qi, qc, phi = _unpack(p)
    model = ResonatorModel(float(f0), float(qi), float(qc), float(phi))

    dof = max(r.size - p.size, 1)
    s2 = (r @ r) / dof
    try:
        cov = s2 * np.linalg.inv(jac.T @ jac)
        sd = np.sqrt(np.maximum(np.diag(cov), 0.0))
    except np.linalg.LinAlgError:
        sd = np.full(4, np.nan)
    errors = {
        "f0_hz": float(f0 * sd[0]),
        "q_i": float(qi * sd[1]),
        "q_c_star": float(qc * sd[2]),
        "phi_rad": float(sd[3]),
    }
    result = FitResult(model, errors, rms, n_iter, initial=init,
                       initial_residual_rms=float(np.sqrt(np.mean(r0 ** 2))))
    if not ok:
        raise ConvergenceError(
            f"fit did not converge in {max_iter} iterations (residual rms {rms:.3g})", result)
    if not np.all(np.isfinite(p)):
        raise ComputationError("fit diverged to non-finite parameters")
    return result


def fit_sweep(freqs, s21_raw, wing_fraction: float = 0.1, initial=None, max_iter: int = 200,
              refine: int = 10) -> FitResult:
    """Normalize a raw sweep and fit it; the baseline is kept on the result.

    The resonance tail still reaches into the wings, which biases a plain
    wing baseline by roughly ``Ql / Qc`` over the span in linewidths. Up to
    ``refine`` rounds re-estimate the baseline from ``raw / model`` on the
    wings and refit, stopping once the parameters settle.
    """
    f = np.asarray(freqs, dtype=float)
    s_raw = np.asarray(s21_raw, dtype=complex)
    s_norm, base = normalize_sweep(f, s_raw, wing_fraction, return_baseline=True)
    res = fit_resonator(f, s_norm, initial=initial, max_iter=max_iter)
    first, total_iter = res, res.n_iter
    for _ in range(refine):
        base = fit_baseline(f, s_raw / synthesize_s21(res.model, f), wing_fraction)
        new = fit_resonator(f, s_raw / base(f), initial=res.model, max_iter=max_iter)
        old_p, new_p = _pack(res.model), _pack(new.model)
        res = new
        total_iter += new.n_iter
        if np.max(np.abs(new_p - old_p)) < 1e-10:
            break
    return FitResult(res.model, res.std_errors, res.residual_rms, total_iter, base,
                     first.initial, first.initial_residual_rms)
