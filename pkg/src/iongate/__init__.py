"""Simulation and pulse design for a two-ion entangling gate driven by a
simultaneous sideband + carrier pulse pair, valid at arbitrary Lamb-Dicke
parameter.

Layers, from the bottom up:

- :mod:`iongate.hilbert`     truncated bus (+ spectator) Hilbert space
- :mod:`iongate.couplings`   Fock-dependent coupling strengths
- :mod:`iongate.propagator`  closed-form block evolution (exact and legacy tables)
- :mod:`iongate.oracle`      independent numeric dynamics (effective and full)
- :mod:`iongate.design`      resonance conditions, solver, integer scan
- :mod:`iongate.entangle`    deterministic EPR-pair preparation
- :mod:`iongate.cli`         the ``iongate`` command
"""

from .couplings import (CouplingSpec, LaserGeometry, coupling_profile,
                        generalized_rabi, ld_parameter, ld_regime_check)
from .design import (CnotEquivalence, GateSolution, PhysicalParameters,
                     ResonanceIntegers, SweepResult, cnot_equivalence,
                     condition_probabilities, condition_residuals,
                     convert_physical, ideal_gate, realized_gate,
                     robustness_sweep, scan_integers, solve_gate,
                     success_probability)
from .entangle import (PSI_MINUS, PSI_PLUS, EntangledPair, EntanglementRecipe,
                       bell_recipe, carrier_rate, concurrence, epr_fidelity,
                       expected_amplitudes, prepare_entangled)
from .errors import (BusEntangledError, ConfigError, SolverError,
                     TruncationError)
from .hilbert import (HilbertGeometry, OperatorMatrix, StateVector,
                      default_geometry, displacement_matrix_element,
                      ladder_operators, make_basis_state,
                      top_level_population)
from .oracle import (Drive, IntegratorConfig, SpectatorMode, debye_waller,
                     default_timestep, effective_hamiltonian,
                     evolve_effective, evolve_full, integrate,
                     interaction_hamiltonian_at, sideband_operator)
from .propagator import (AnalyticCoefficients, PulsePair, carrier_rotation,
                         compute_coefficients, evolve, evolve_basis,
                         legacy_discrepancy_table, unitarity_defect,
                         write_discrepancy_report)

__version__ = "0.1.0"

__all__ = [
    "AnalyticCoefficients", "BusEntangledError", "CnotEquivalence",
    "ConfigError", "CouplingSpec", "Drive", "EntangledPair",
    "EntanglementRecipe", "GateSolution", "HilbertGeometry",
    "IntegratorConfig", "LaserGeometry", "OperatorMatrix",
    "PhysicalParameters", "PSI_MINUS", "PSI_PLUS", "PulsePair",
    "ResonanceIntegers", "SolverError", "SpectatorMode", "StateVector",
    "SweepResult", "TruncationError", "bell_recipe", "carrier_rate",
    "carrier_rotation", "cnot_equivalence", "compute_coefficients",
    "concurrence", "condition_probabilities", "condition_residuals",
    "convert_physical", "coupling_profile", "debye_waller",
    "default_geometry", "default_timestep", "displacement_matrix_element",
    "effective_hamiltonian", "epr_fidelity", "evolve", "evolve_basis",
    "evolve_effective", "evolve_full", "expected_amplitudes",
    "generalized_rabi", "ideal_gate", "integrate",
    "interaction_hamiltonian_at", "ladder_operators", "ld_parameter",
    "ld_regime_check", "legacy_discrepancy_table", "make_basis_state",
    "prepare_entangled", "realized_gate", "robustness_sweep",
    "scan_integers", "sideband_operator", "solve_gate",
    "success_probability", "top_level_population", "unitarity_defect",
    "write_discrepancy_report",
]
