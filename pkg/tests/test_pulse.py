import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from socketlab import pulse as pl
from socketlab.errors import InputError
from socketlab.io_touchstone import NetworkData
from socketlab.pulse import PulseSpec


def through(f, s21):
    s = np.zeros((f.size, 2, 2), complex)
    s[:, 1, 0] = s21
    s[:, 0, 1] = s21
    return NetworkData(f, s)


def delay_net(tau, fmax=20e9):
    f = np.linspace(1e6, fmax, 4001)
    return through(f, np.exp(-2j * np.pi * f * tau))


class TestSynthesis:
    def test_envelope_is_gaussian(self):
        spec = PulseSpec()
        t, x = pl.synthesize_pulse(spec)
        g = pl.gaussian_envelope(spec, t)
        mid = slice(len(t) // 4, 3 * len(t) // 4)
        np.testing.assert_allclose(pl.envelope(x)[mid], g[mid], atol=1e-3)

    def test_fwhm_of_gaussian(self):
        spec = PulseSpec()
        assert pl.fwhm(pl.gaussian_envelope(spec), 1 / spec.sample_rate) == pytest.approx(15e-9, rel=1e-4)

    def test_fwhm_triangle_oracle(self):
        y = np.r_[np.arange(11), np.arange(9, -1, -1)].astype(float)
        assert pl.fwhm(y, 1.0) == pytest.approx(10.0)

    def test_time_axis(self):
        t = pl.time_axis(PulseSpec())
        assert t.size == 4800 and t[1] == 1 / 40e9

    def test_undersampled(self):
        with pytest.raises(InputError, match="undersampled"):
            PulseSpec(sample_rate=5e9)

    def test_bad_width(self):
        with pytest.raises(InputError):
            PulseSpec(fwhm=0)


class TestTransmit:
    def test_unit_through_is_identity(self):
        spec = PulseSpec()
        t, x = pl.synthesize_pulse(spec)
        f = np.linspace(1e6, 20e9, 101)
        y = pl.transmit(x, through(f, np.ones(f.size)), sample_rate=spec.sample_rate)
        np.testing.assert_allclose(y, x, atol=1e-12)

    def test_time_axis_input(self):
        spec = PulseSpec()
        t, x = pl.synthesize_pulse(spec)
        a = pl.transmit(x, delay_net(1e-9), t=t)
        b = pl.transmit(x, delay_net(1e-9), sample_rate=spec.sample_rate)
        np.testing.assert_allclose(a, b)

    def test_needs_rate(self):
        with pytest.raises(InputError):
            pl.transmit(np.ones(8), delay_net(0))

    def test_coverage_check(self):
        spec = PulseSpec()
        _, x = pl.synthesize_pulse(spec)
        f = np.linspace(6e9, 8e9, 11)
        with pytest.raises(InputError, match="pulse energy"):
            pl.transmit(x, through(f, np.ones(f.size)), sample_rate=spec.sample_rate)

    def test_attenuation_scales(self):
        spec = PulseSpec()
        _, x = pl.synthesize_pulse(spec)
        f = np.linspace(1e6, 20e9, 11)
        y = pl.transmit(x, through(f, np.full(f.size, 0.5)), sample_rate=spec.sample_rate)
        np.testing.assert_allclose(y, 0.5 * x, atol=1e-12)


class TestDistortion:
    def test_all_pass_linear_phase(self):
        spec = PulseSpec()
        _, x = pl.synthesize_pulse(spec)
        y = pl.transmit(x, delay_net(2e-9), sample_rate=spec.sample_rate)
        m = pl.distortion_metrics(x, y, spec.sample_rate)
        assert m.envelope_correlation > 0.999
        assert abs(m.fwhm_change_fraction) < 0.01
        assert m.delay_s == pytest.approx(2e-9, abs=1e-12)

    @settings(max_examples=15, deadline=None)
    @given(tau=st.floats(0, 20e-9))
    def test_delay_recovered(self, tau):
        spec = PulseSpec()
        _, x = pl.synthesize_pulse(spec)
        m = pl.distortion_metrics(x, pl.transmit(x, delay_net(tau), sample_rate=spec.sample_rate),
                                  spec.sample_rate)
        assert m.delay_s == pytest.approx(tau, abs=2e-12)
        assert m.envelope_correlation > 0.999

    def test_narrow_filter_distorts(self):
        # a single-pole response much narrower than the pulse bandwidth stretches the envelope
        spec = PulseSpec()
        _, x = pl.synthesize_pulse(spec)
        f = np.linspace(1e6, 20e9, 4001)
        h = 1 / (1 + 2j * (f - 4.7e9) / 10e6)
        m = pl.distortion_metrics(x, pl.transmit(x, through(f, h), sample_rate=spec.sample_rate),
                                  spec.sample_rate)
        assert m.fwhm_change_fraction > 0.1
        assert m.envelope_correlation < 0.999

    def test_self_metrics(self):
        _, x = pl.synthesize_pulse(PulseSpec())
        m = pl.distortion_metrics(x, x, 40e9)
        assert m.envelope_correlation == pytest.approx(1.0, abs=1e-12)
        assert m.delay_s == pytest.approx(0, abs=1e-18) and m.fwhm_change_fraction == 0
        assert set(m.as_dict()) == {"envelope_correlation", "fwhm_change_fraction", "delay_s"}

    def test_zero_output(self):
        _, x = pl.synthesize_pulse(PulseSpec())
        with pytest.raises(InputError, match="output"):
            pl.distortion_metrics(x, 0 * x, 40e9)

    def test_length_mismatch(self):
        with pytest.raises(InputError):
            pl.distortion_metrics(np.ones(10), np.ones(11), 1.0)
