"""Deterministic two-qubit entanglement from a gate solution.

Two pulses in sequence: an ion-1 carrier for time t1 splits |g,g> into
cos(a1 t1)|g,g> - i e^{-i phi1} sin(a1 t1)|e,g>, then the two-pulse gate
maps the |e,g> branch onto the doubly excited state.  For a clean gate
solution the bus factorizes and the spins end in

    U |g,g> + V |e,e>,   U = cos(a1 t1),   V = -e^{-i(phi1 + phi2)} sin(a1 t1),

so a quarter-period carrier (a1 t1 = pi/4) with phi1 + phi2 = 0 (mod 2 pi)
lands on the EPR state (|gg> - |ee>)/sqrt(2) and phi1 + phi2 = pi on
(|gg> + |ee>)/sqrt(2).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .couplings import coupling_profile
from .design import GateSolution
from .errors import BusEntangledError, ConfigError
from .hilbert import default_geometry, make_basis_state
from .propagator import carrier_rotation, evolve

SCHMIDT_TOL = 1e-6

PSI_PLUS = np.array([1.0, 0.0, 0.0, 1.0]) / np.sqrt(2.0)
PSI_MINUS = np.array([1.0, 0.0, 0.0, -1.0]) / np.sqrt(2.0)

_BELL_STATES = {"psi_plus": PSI_PLUS, "psi_minus": PSI_MINUS}


@dataclass(frozen=True)
class EntanglementRecipe:
    """Carrier duration and the two phases, tied to one gate solution."""

    t1: float
    phi1: float
    phi2: float
    gate: GateSolution
    initial_m: int = 0

    def __post_init__(self) -> None:
        if self.t1 < 0:
            raise ConfigError("t1 must be >= 0")
        if self.initial_m < 0:
            raise ConfigError("initial_m must be >= 0")


@dataclass(frozen=True)
class EntangledPair:
    """Projected spin state after the sequence, with the bus purity probe."""

    spin_amplitudes: np.ndarray
    schmidt_weight: float
    recipe: EntanglementRecipe


def carrier_rate(gate: GateSolution, m: int = 0) -> float:
    """Ion-1 carrier half-rate at Omega = 1 (the a1 of the module docstring)."""
    return 0.5 * float(coupling_profile(gate.eta1, m, 0))


def bell_recipe(gate: GateSolution, which: str = "psi_minus") -> EntanglementRecipe:
    """Quarter-period carrier plus the phase choice hitting the named state."""
    if which not in _BELL_STATES:
        raise ConfigError("which must be psi_plus or psi_minus")
    t1 = (np.pi / 4.0) / carrier_rate(gate)
    phi2 = np.pi if which == "psi_plus" else 0.0
    return EntanglementRecipe(t1=t1, phi1=0.0, phi2=phi2, gate=gate)


def expected_amplitudes(recipe: EntanglementRecipe) -> tuple[complex, complex]:
    """(U, V) of the closed form above, for cross-checking the sequence."""
    ang = carrier_rate(recipe.gate, recipe.initial_m) * recipe.t1
    u = complex(np.cos(ang))
    v = -np.exp(-1j * (recipe.phi1 + recipe.phi2)) * np.sin(ang)
    return u, v


def prepare_entangled(recipe: EntanglementRecipe, mode: str = "auto") -> EntangledPair:
    """Run the two-step sequence through the closed form.

    The final state must factorize as (bus) x (spins): the largest Schmidt
    weight across the bus/spin split has to exceed 1 - 1e-6, otherwise the
    bus is still entangled with the qubits (leaked gate) and a
    BusEntangledError is raised.  The returned spin state is the projection
    onto the initial bus level, renormalized.
    """
    gate = recipe.gate
    geometry = default_geometry(recipe.initial_m, gate.k1)
    state = make_basis_state(geometry, recipe.initial_m, "g", "g")
    state = carrier_rotation(state, ion=1, omega=1.0, eta=gate.eta1,
                             phi=recipe.phi1, t=recipe.t1)
    pulses = gate.pulses(omega=1.0, phi1=recipe.phi1, phi2=recipe.phi2)
    state = evolve(state, pulses, gate.omega_tau, mode=mode)
    resh = state.reshaped().reshape(geometry.fock_dims[0], 4)
    weights = np.linalg.svd(resh, compute_uv=False) ** 2
    top = float(weights[0] / np.sum(weights))
    if top < 1.0 - SCHMIDT_TOL:
        raise BusEntangledError(
            f"bus does not factorize: top Schmidt weight {top:.6f} < {1 - SCHMIDT_TOL}")
    spins = resh[recipe.initial_m]
    nrm = np.linalg.norm(spins)
    if nrm < 1e-6:
        raise BusEntangledError("no weight left on the initial bus level")
    return EntangledPair(spin_amplitudes=spins / nrm, schmidt_weight=top,
                         recipe=recipe)


def epr_fidelity(spin_state: np.ndarray, which: str = "psi_minus") -> float:
    """|<target|state>|^2 against the named EPR state (gg, ge, eg, ee order)."""
    if which not in _BELL_STATES:
        raise ConfigError("which must be psi_plus or psi_minus")
    state = np.asarray(spin_state, complex).reshape(4)
    return float(abs(np.vdot(_BELL_STATES[which], state)) ** 2)


def concurrence(spin_state: np.ndarray) -> float:
    """2 |a_gg a_ee - a_ge a_eg| for a pure two-qubit state."""
    a = np.asarray(spin_state, complex).reshape(4)
    return float(2.0 * abs(a[0] * a[3] - a[1] * a[2]))
