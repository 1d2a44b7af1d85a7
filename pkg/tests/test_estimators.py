import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.constants import c, e, h

from socketlab import estimators as est
from socketlab.errors import ComputationError, InputError
from socketlab.estimators import CavitySpec, Conductor, DcLineSpec, MagneticSpec, ThermalSpec

TABLE_II_RT = {"Au-100nm": 253.0, "Au-200nm": 126.5, "Au-200nm-77K": 26.16, "Ag-3um": 2.04,
               "Al-120nm": 166.1}


class TestCavity:
    def test_te110_closed_form(self):
        # square cross-section: f = c / (a sqrt 2)
        assert est.te_mode_frequency(13e-3, 13e-3, 2e-3, 1, 1, 0) == pytest.approx(c / (13e-3 * np.sqrt(2)),
                                                                                  rel=1e-15)

    def test_te110_near_table_value(self):
        f = est.te_mode_frequency(13e-3, 13e-3, 2e-3, 1, 1, 0)
        assert abs(f / 15.7e9 - 1) < 0.10

    def test_square_degeneracy_exact(self):
        a = est.te_mode_frequency(13e-3, 13e-3, 2e-3, 1, 2, 0)
        b = est.te_mode_frequency(13e-3, 13e-3, 2e-3, 2, 1, 0)
        assert a == b

    def test_dielectric_fill_scales(self):
        f1 = est.te_mode_frequency(1e-2, 2e-2, 3e-3, 1, 1, 0)
        f4 = est.te_mode_frequency(1e-2, 2e-2, 3e-3, 1, 1, 0, eps_r=4)
        assert f4 == pytest.approx(f1 / 2, rel=1e-15)

    @pytest.mark.parametrize("idx", [(1, 0, 0), (0, 0, 1), (0, 0, 0), (-1, 1, 0)])
    def test_invalid_modes(self, idx):
        with pytest.raises(InputError):
            est.te_mode_frequency(1e-2, 1e-2, 1e-3, *idx)

    def test_trivial_perturbation_boundaries(self):
        assert est.perturbed_mode(10e9, 1.0, 0.5e-3, 2e-3) == 10e9
        assert est.perturbed_mode(10e9, 11.68, 0.0, 2e-3) == 10e9

    def test_perturbation_value(self):
        # (eps_r - 1) d_s / (2 b) = 10 * 0.1 / 2 = 0.5
        assert est.perturbed_mode(10e9, 11.0, 0.1e-3, 1e-3) == pytest.approx(5e9)

    def test_too_large_perturbation(self):
        with pytest.raises(ComputationError, match="non-positive"):
            est.perturbed_mode(10e9, 11.68, 1.9e-3, 2e-3)

    @settings(max_examples=100)
    @given(eps=st.floats(1.5, 12), frac=st.floats(0.0, 0.05))
    def test_ratio_inverts_perturbation(self, eps, frac):
        f = est.perturbed_mode(10e9, eps, frac * 2e-3, 2e-3)
        assert est.perturbation_ratio(10e9, f, eps) == pytest.approx(frac / 2, abs=1e-15)

    def test_cavity_modes(self):
        out = est.cavity_modes(CavitySpec(13e-3, 13e-3, 2e-3, 11.68, 0.1e-3))
        assert set(out["vacuum"]) == {"TE110", "TE120", "TE210"}
        assert out["perturbed_first"] < out["vacuum"]["TE110"]
        assert "perturbed_first" not in est.cavity_modes(CavitySpec(13e-3, 13e-3, 2e-3))

    def test_spec_invariants(self):
        with pytest.raises(InputError):
            CavitySpec(0, 1, 1)
        with pytest.raises(InputError):
            CavitySpec(1, 1, 1, eps_r=0.5)
        with pytest.raises(InputError):
            CavitySpec(1, 1, 1e-3, d_s=1e-3)


class TestDc:
    @pytest.mark.parametrize("label", sorted(TABLE_II_RT))
    def test_table_ii_trace_resistance(self, label):
        spec = est.table_ii_specs()[label]
        assert est.trace_resistance(spec) == pytest.approx(TABLE_II_RT[label], rel=0.005)

    def test_trace_formula(self):
        assert est.trace_resistance(DcLineSpec(1e-8, 1e-2, 1e-5, 1e-6)) == pytest.approx(10.0)

    def test_contact_bound_ag(self):
        r = est.contact_resistance_bound(est.table_ii_specs()["Ag-3um"])
        assert r == pytest.approx(0.335, abs=0.02)

    def test_contact_bound_formula(self):
        spec = DcLineSpec(1e-8, 1e-2, 1e-5, 1e-6, r_wire_chain=0.1, measured_r_io=11.0)
        assert est.contact_resistance_bound(spec) == pytest.approx(0.4)

    def test_contact_bound_clamped_at_zero(self):
        spec = DcLineSpec(1e-8, 1e-2, 1e-5, 1e-6, r_wire_chain=5.0, measured_r_io=11.0)
        assert est.contact_resistance_bound(spec) == 0.0

    def test_inconsistent_measurement(self):
        with pytest.raises(InputError, match="inconsistent"):
            est.contact_resistance_bound(DcLineSpec(1e-8, 1e-2, 1e-5, 1e-6, measured_r_io=5.0))

    def test_missing_measurement(self):
        with pytest.raises(InputError):
            est.contact_resistance_bound(DcLineSpec(1e-8, 1e-2, 1e-5, 1e-6))

    @settings(max_examples=50)
    @given(k=st.floats(0.1, 10))
    def test_scales_with_length_and_inverse_area(self, k):
        base = DcLineSpec(2e-8, 1e-2, 1e-5, 1e-7)
        longer = DcLineSpec(2e-8, 1e-2 * k, 1e-5, 1e-7)
        thicker = DcLineSpec(2e-8, 1e-2, 1e-5, 1e-7 * k)
        assert est.trace_resistance(longer) == pytest.approx(k * est.trace_resistance(base))
        assert est.trace_resistance(thicker) == pytest.approx(est.trace_resistance(base) / k)


class TestThermal:
    def test_table_vii_areas(self):
        inner, outer = est.table_vii_wire().conductors
        assert inner.area == pytest.approx(4.74e-8, rel=0.005)
        assert outer.area == pytest.approx(7.13e-7, rel=0.005)

    def test_wire_conductance(self):
        assert est.heat_transfer_rate(est.table_vii_wire(30.5e-3)) == pytest.approx(6e-7, rel=0.10)

    def test_solid_cylinder(self):
        spec = ThermalSpec(((0.0, 2e-3, 1.0, 1.0),))
        assert est.heat_transfer_rate(spec) == pytest.approx(np.pi * 1e-6)

    def test_sum_of_parallel_paths(self):
        a = Conductor(0, 1e-3, 2.0, 0.1)
        b = Conductor(1e-3, 2e-3, 3.0, 0.2)
        both = est.heat_transfer_rate(ThermalSpec((a, b)))
        assert both == pytest.approx(est.heat_transfer_rate(ThermalSpec((a,)))
                                     + est.heat_transfer_rate(ThermalSpec((b,))))

    @settings(max_examples=50)
    @given(k=st.floats(1.1, 100))
    def test_inverse_in_length(self, k):
        short = est.heat_transfer_rate(est.table_vii_wire(10e-3))
        assert est.heat_transfer_rate(est.table_vii_wire(10e-3 * k)) == pytest.approx(short / k)

    def test_invariants(self):
        with pytest.raises(InputError):
            Conductor(2e-3, 1e-3, 1, 1)
        with pytest.raises(InputError):
            Conductor(0, 1e-3, 0, 1)
        with pytest.raises(InputError):
            ThermalSpec(())


class TestMagnetics:
    def spec(self):
        return MagneticSpec(0.25e-3 * 1e-4, 10e-3, 15e-3, 40e-6 * 10e-6)

    def test_field_at_qubit(self):
        b = est.dipole_field_and_flux(self.spec()).b_q
        assert b / est.GAUSS * 1e3 == pytest.approx(0.075, rel=0.02)

    def test_flux_order(self):
        flux = est.dipole_field_and_flux(self.spec()).flux
        assert 4e-18 / 1.5 <= flux <= 4e-18 * 1.5

    def test_flux_quantum_ratio(self):
        r = est.dipole_field_and_flux(self.spec())
        assert r.flux_ratio == pytest.approx(r.flux * 2 * e / h, rel=1e-12)

    def test_cube_law(self):
        a = est.dipole_field_and_flux(MagneticSpec(1.0, 1.0, 2.0, 1.0))
        assert a.b_q == 1 / 8

    def test_invariants(self):
        with pytest.raises(InputError):
            MagneticSpec(0, 1, 1, 1)


def test_constants_loaded_once():
    assert est.load_constants() is est.load_constants()
