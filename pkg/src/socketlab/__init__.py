"""Analysis toolkit for 3D-wired superconducting qubit sockets."""
from .errors import (ComputationError, ConvergenceError, InputError, ParseError, SingularNetworkError,
                     SocketlabError)
from .estimators import (CavitySpec, Conductor, DcLineSpec, MagneticSpec, ThermalSpec, cavity_modes,
                         contact_resistance_bound, dipole_field_and_flux, heat_transfer_rate,
                         perturbation_ratio, perturbed_mode, te_mode_frequency, trace_resistance)
from .io_touchstone import (NetworkData, TdrTrace, parse_sweep_csv, parse_tdr_csv, parse_touchstone,
                            read_touchstone, write_touchstone)
from .layout import (CompressionPlan, LatticeSpec, ToleranceSpec, compression_settings, contraction,
                     implied_coefficient, mating_yield, plan_lattice, spring_force, wiring_scaling)
from .network import (band_isolation, classify_dip, group_delay, input_impedance, microwave_params,
                      phase_delay, s_from_z, unwrap_phase, vswr, z_from_s)
from .plot import render_plot
from .pulse import PulseSpec, distortion_metrics, synthesize_pulse, transmit
from .resfit import (FitResult, ResonatorModel, fit_resonator, fit_sweep, normalize_sweep,
                     synthesize_s21)
from .tdr import ImpedanceProfile, Segment, impedance_from_trace, profile_from_trace, synthesize_trace

__version__ = "0.1.0"
