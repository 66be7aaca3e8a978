"""Numeric reference dynamics: effective and full Hamiltonians.

Everything here is independent of the closed-form tables in
:mod:`iongate.propagator`; the two routes are compared in the test suite
rather than merged.  Three levels of fidelity:

1. ``effective_hamiltonian`` builds the time-independent resonant
   Hamiltonian (vibrational RWA already applied) from the exact finite
   series for the sideband operator, so it is exact on the truncated space.
2. ``evolve_full`` / ``full_hamiltonian_parts`` keep every vibrational
   harmonic: in the frame of the free Hamiltonian the drive term is a full
   displacement operator, and the time dependence can be rolled into a
   diagonal phase, so one matrix exponential still suffices.
3. ``integrate`` steps the explicitly time-dependent interaction-picture
   Hamiltonian with either midpoint matrix exponentials ("expm") or a
   fourth-order commutator-free scheme ("cf4"); this is the slow path used
   to validate route 2 and to expose integrator order.

Spectator vibrational modes enter route 2/3 through
:class:`SpectatorMode`; each drive couples to them with a scaled
displacement argument (default scale sqrt(nu / nu_l)).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import expm
from scipy.special import gammaln

from .errors import ConfigError
from .hilbert import HilbertGeometry, StateVector, _ladder, check_truncation

_SIGMA_PLUS = np.array([[0.0, 0.0], [1.0, 0.0]])
_I2 = np.eye(2)

# CF4 nodes and weights (two Gauss nodes, two exponentials per step)
_CF4_C1 = 0.5 - np.sqrt(3.0) / 6.0
_CF4_C2 = 0.5 + np.sqrt(3.0) / 6.0
_CF4_A1 = (3.0 - 2.0 * np.sqrt(3.0)) / 12.0
_CF4_A2 = (3.0 + 2.0 * np.sqrt(3.0)) / 12.0

INTEGRATOR_METHODS = ("expm", "cf4")


@dataclass(frozen=True)
class Drive:
    """One laser tone: addressed ion, sideband order, strength, LD, phase."""

    ion: int
    order: int
    omega: float
    eta: float
    phi: float = 0.0

    def __post_init__(self) -> None:
        if self.ion not in (1, 2):
            raise ConfigError("ion must be 1 or 2")
        if self.omega < 0:
            raise ConfigError("omega must be >= 0")


@dataclass(frozen=True)
class SpectatorMode:
    """Extra vibrational mode at frequency_ratio * nu.

    ld_scale overrides the default coupling scale sqrt(1 / frequency_ratio)
    applied to each drive's bus LD parameter.
    """

    frequency_ratio: float
    ld_scale: float | None = None

    def __post_init__(self) -> None:
        if self.frequency_ratio <= 0:
            raise ConfigError("spectator frequency ratio must be > 0")

    def coupling_scale(self) -> float:
        if self.ld_scale is not None:
            return self.ld_scale
        return float(1.0 / np.sqrt(self.frequency_ratio))


@dataclass(frozen=True)
class IntegratorConfig:
    """Time-stepper knobs.  dt=None picks the default via default_timestep."""

    dt: float | None = None
    method: str = "cf4"
    leak_tolerance: float = 1e-8

    def __post_init__(self) -> None:
        if self.method not in INTEGRATOR_METHODS:
            raise ConfigError(f"method must be one of {INTEGRATOR_METHODS}")
        if self.dt is not None and self.dt <= 0:
            raise ConfigError("dt must be > 0")
        if self.leak_tolerance <= 0:
            raise ConfigError("leak_tolerance must be > 0")


def default_timestep(nu: float, fastest_rate: float) -> float:
    """1/400 of the shortest period among the trap cycle and the fastest
    closed-form angular rate (usually lambda_plus)."""
    if nu <= 0 or fastest_rate <= 0:
        raise ConfigError("rates must be > 0")
    return min(2.0 * np.pi / nu, 2.0 * np.pi / fastest_rate) / 400.0


def sideband_operator(eta: float, k: int, m_max: int) -> np.ndarray:
    """Resonance-surviving part of the displacement operator, k levels up.

    <m|O|m+k> = e^{-eta^2/2} sum_{n=0}^{m} (i eta)^{2n+k}
                sqrt((m+k)! m!) / (n! (n+k)! (m-n)!),

    a finite sum, hence exact on the truncated space (no tail is cut).
    """
    if k < 0:
        raise ConfigError("k must be >= 0 here; transpose for the raising variant")
    out = np.zeros((m_max + 1, m_max + 1), complex)
    x = eta * eta
    for m in range(m_max + 1 - k):
        tot = 0.0 + 0.0j
        for n in range(m + 1):
            lg = (0.5 * (gammaln(m + k + 1) + gammaln(m + 1))
                  - gammaln(n + 1) - gammaln(n + k + 1) - gammaln(m - n + 1))
            tot += (1j * eta) ** (2 * n + k) * np.exp(lg)
        out[m, m + k] = np.exp(-x / 2.0) * tot
    return out


def _spin_embed(ion: int, op2: np.ndarray) -> np.ndarray:
    return np.kron(op2, _I2) if ion == 1 else np.kron(_I2, op2)


def effective_hamiltonian(drives: Sequence[Drive], geometry: HilbertGeometry) -> np.ndarray:
    """Resonant time-independent Hamiltonian on bus x spin1 x spin2."""
    if geometry.n_spectator_modes:
        raise ConfigError("the effective Hamiltonian covers the bus mode only")
    dim = geometry.dim
    h = np.zeros((dim, dim), complex)
    for d in drives:
        k = abs(d.order)
        op = sideband_operator(d.eta, k, geometry.m_max)
        if d.order < 0:
            op = op.T.copy()  # blue: sigma+ pairs with raising
        h += (d.omega / 2.0) * np.exp(-1j * d.phi) * np.kron(op, _spin_embed(d.ion, _SIGMA_PLUS))
    return h + h.conj().T


def evolve_effective(state: StateVector, drives: Sequence[Drive], t: float) -> StateVector:
    h = effective_hamiltonian(drives, state.geometry)
    return StateVector(expm(-1j * h * t) @ state.amplitudes, state.geometry)


def _mode_setup(geometry: HilbertGeometry, nu: float,
                spectators: Sequence[SpectatorMode]):
    if len(spectators) != geometry.n_spectator_modes:
        raise ConfigError("geometry and spectator list disagree on mode count")
    truncs = list(geometry.fock_dims)
    freqs = [nu] + [sp.frequency_ratio * nu for sp in spectators]
    scales = [1.0] + [sp.coupling_scale() for sp in spectators]
    # position operator of each mode, embedded in the mode product
    xops = []
    for li, dim_l in enumerate(truncs):
        a = _ladder(dim_l - 1)
        ops = [np.eye(d) for d in truncs]
        ops[li] = a + a.T
        full = ops[0]
        for o in ops[1:]:
            full = np.kron(full, o)
        xops.append(full)
    # sum_l nu_l n_l as a diagonal vector on the mode product
    nvec = np.zeros(int(np.prod(truncs)))
    for li, dim_l in enumerate(truncs):
        ns = [np.ones(d) for d in truncs]
        ns[li] = np.arange(float(dim_l))
        v = ns[0]
        for o in ns[1:]:
            v = np.kron(v, o)
        nvec += freqs[li] * v
    return truncs, freqs, scales, xops, nvec


def full_hamiltonian_parts(drives: Sequence[Drive], nu: float,
                           geometry: HilbertGeometry,
                           spectators: Sequence[SpectatorMode] = ()):
    """(H_G, h_B) such that psi_I(t) = e^{+i h_B t} expm(-i H_G t) psi(0).

    H_G = h_B + sum_j [(omega_j/2) e^{-i phi_j} sigma_j^+  D(i sum_l eta_j^l x_l) + h.c.]
    with h_B = sum_l nu_l n_l + sum_j (k_j nu / 2) sigma_j^z, all time independent.
    The diagonal phase undoes h_B, leaving the interaction-picture state.
    """
    if nu <= 0:
        raise ConfigError("nu must be > 0")
    truncs, freqs, scales, xops, nvec = _mode_setup(geometry, nu, spectators)
    fdim = int(np.prod(truncs))
    dim = fdim * 4
    hg = np.zeros((dim, dim), complex)
    hb_spin = np.zeros(4)
    for d in drives:
        arg = sum((d.eta * scales[li]) * xops[li] for li in range(len(truncs)))
        disp = expm(1j * arg)
        hg += (d.omega / 2.0) * np.exp(-1j * d.phi) * np.kron(disp, _spin_embed(d.ion, _SIGMA_PLUS))
        szdiag = np.array([-1.0, -1.0, 1.0, 1.0]) if d.ion == 1 else np.array([-1.0, 1.0, -1.0, 1.0])
        hb_spin = hb_spin + (d.order * nu / 2.0) * szdiag
    hg = hg + hg.conj().T
    hb = np.add.outer(nvec, hb_spin).reshape(-1)
    hg += np.diag(hb)
    return hg, hb


def evolve_full(state: StateVector, drives: Sequence[Drive], nu: float, t: float,
                spectators: Sequence[SpectatorMode] = (),
                leak_tolerance: float | None = 1e-6) -> StateVector:
    """Interaction-picture state after time t, all harmonics kept (one expm)."""
    hg, hb = full_hamiltonian_parts(drives, nu, state.geometry, spectators)
    psi = expm(-1j * hg * t) @ state.amplitudes
    out = StateVector(np.exp(1j * hb * t) * psi, state.geometry)
    if leak_tolerance is not None:
        check_truncation(out, leak_tolerance)
    return out


def interaction_hamiltonian_at(drives: Sequence[Drive], nu: float,
                               geometry: HilbertGeometry, t: float,
                               spectators: Sequence[SpectatorMode] = ()) -> np.ndarray:
    """Explicit interaction-picture H(t).

    Each drive contributes (omega/2) e^{-i phi} e^{+i k nu t} sigma^+
    D(i sum_l eta^l (a_l^dag e^{i nu_l t} + a_l e^{-i nu_l t})) + h.c.
    """
    truncs, freqs, scales, _, _ = _mode_setup(geometry, nu, spectators)
    fdim = int(np.prod(truncs))
    h = np.zeros((fdim * 4, fdim * 4), complex)
    for d in drives:
        arg = np.zeros((fdim, fdim), complex)
        for li, dim_l in enumerate(truncs):
            a = _ladder(dim_l - 1).astype(complex)
            block = (d.eta * scales[li]) * (a.T * np.exp(1j * freqs[li] * t)
                                            + a * np.exp(-1j * freqs[li] * t))
            ops = [np.eye(dl, dtype=complex) for dl in truncs]
            ops[li] = block
            full = ops[0]
            for o in ops[1:]:
                full = np.kron(full, o)
            arg += full
        disp = expm(1j * arg)
        h += ((d.omega / 2.0) * np.exp(-1j * d.phi) * np.exp(1j * d.order * nu * t)
              * np.kron(disp, _spin_embed(d.ion, _SIGMA_PLUS)))
    return h + h.conj().T


def integrate(state: StateVector, drives: Sequence[Drive], nu: float, t: float,
              config: IntegratorConfig,
              spectators: Sequence[SpectatorMode] = ()) -> StateVector:
    """Step the time-dependent H(t) from 0 to t; checks the truncation leak."""
    if t < 0:
        raise ConfigError("t must be >= 0")
    if config.dt is None:
        rabi = max((d.omega for d in drives), default=0.0)
        dt = default_timestep(nu, max(rabi, 1e-12))
    else:
        dt = config.dt
    nstep = max(int(np.ceil(t / dt)), 1) if t > 0 else 0
    h = t / nstep if nstep else 0.0
    psi = state.amplitudes.copy()
    geom = state.geometry

    def h_at(tt: float) -> np.ndarray:
        return interaction_hamiltonian_at(drives, nu, geom, tt, spectators)

    for i in range(nstep):
        t0 = i * h
        if config.method == "expm":
            hm = h_at(t0 + 0.5 * h)
            psi = expm(-1j * h * hm) @ psi
        else:
            h1 = h_at(t0 + _CF4_C1 * h)
            h2 = h_at(t0 + _CF4_C2 * h)
            psi = expm(-1j * h * (_CF4_A2 * h1 + _CF4_A1 * h2)) @ psi
            psi = expm(-1j * h * (_CF4_A1 * h1 + _CF4_A2 * h2)) @ psi
    out = StateVector(psi, geom)
    check_truncation(out, config.leak_tolerance)
    return out


def debye_waller(eta: float) -> float:
    """Coupling renormalization e^{-eta^2/2} from an unexcited extra mode."""
    return float(np.exp(-eta * eta / 2.0))
