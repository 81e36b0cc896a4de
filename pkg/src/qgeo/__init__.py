# src/qgeo/__init__.py

"""qgeo: computational quantum geometry.

Kahler structure on pure-state space, the principal-bundle structure of
mixed-state orbits, Hamiltonian dynamics, geometric phases via holonomy of
the mechanical connection, distance measures, and geometric uncertainty
relations.
"""

from .config import get_hbar, resolve_hbar, set_hbar
from .dynamics import (HamiltonianSystem, evolve_density, evolve_pure,
                       expectation, hamiltonian_field, poisson_bracket,
                       trajectory_to_csv)
from .bundle import (big_G, big_Omega, chi_hat, connection, lie_metric, split,
                     u_sigma_basis, xi_field, xi_perp)
from .holonomy import (StateCurve, StepSizeError, UndefinedPhaseError,
                       UnitaryFamily, aharonov_anandan_phase,
                       circular_distance, geometric_phase, horizontal_lift,
                       lift_curve, lift_from, precessing_qubit_closed_form,
                       precessing_qubit_family, precessing_qubit_lift,
                       precessing_qubit_state)
from .kahler import (fs_hermitian, fs_metric, fs_symplectic, metric_G,
                     project_perp, symplectic_Omega)
from .linops import (PAULI, SIGMA_1, SIGMA_2, SIGMA_3, anticommutator,
                     commutator, dagger, expm_skew, hermitian_eig)
from .measures import (DistanceReport, MeasurementOutcome, SearchConfig,
                       bures, bures_family_closed_form, bures_qubit,
                       curve_length, dynamic_distance, fidelity, fs_distance,
                       hs_distance, kappa, measure, mixed_probability,
                       probability, rotation_family, trace_distance)
from .states import (Purification, Spectrum, as_density, as_pure,
                     bloch_coords, density_from_bloch, density_from_json,
                     density_to_json, p_sigma, projector, pure_from_json,
                     pure_to_json, purify, reduce, spectrum_of)
from .uncertainty import (UncertaintyReport, delta, dispersion_identity,
                          geometric_bound_mixed, geometric_bound_pure,
                          rs_bound, uncertainty_report)
from .verify import run_suites

__version__ = "0.1.0"
