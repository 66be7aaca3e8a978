"""State and operator algebra on (truncated Fock space) x C2 x C2.

The composite space is one motional "bus" mode truncated at ``m_max``,
optionally a few spectator modes, and the two ion qubits.  Amplitudes are
stored flat in C order over the index tuple

    (bus m, spectator m_1, ..., spin_1, spin_2)

with spin basis (g, e) = (0, 1), so for the common no-spectator case the
flat index of |m, s1, s2> is ``(m*2 + s1)*2 + s2``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .errors import ConfigError, TruncationError

SPIN_LABELS = {"g": 0, "e": 1, 0: 0, 1: 1}


@dataclass(frozen=True)
class HilbertGeometry:
    """Shape of the composite Hilbert space.

    m_max is the highest retained bus Fock index; the runtime leak check
    (see :func:`top_level_population`) guards that it was large enough.
    """

    m_max: int
    n_spectator_modes: int = 0
    spectator_m_max: int = 0

    def __post_init__(self) -> None:
        if self.m_max < 1:
            raise ConfigError("m_max must be >= 1")
        if self.n_spectator_modes < 0 or self.spectator_m_max < 0:
            raise ConfigError("spectator counts must be >= 0")
        if self.n_spectator_modes > 0 and self.spectator_m_max < 1:
            raise ConfigError("spectator_m_max must be >= 1 when spectator modes are present")

    @property
    def fock_dims(self) -> tuple[int, ...]:
        return (self.m_max + 1,) + (self.spectator_m_max + 1,) * self.n_spectator_modes

    @property
    def dim(self) -> int:
        return int(np.prod(self.fock_dims)) * 4

    @property
    def shape(self) -> tuple[int, ...]:
        return self.fock_dims + (2, 2)

    def index(self, m: int, spin1, spin2, spectators: tuple[int, ...] = ()) -> int:
        """Flat index of a basis ket."""
        s1, s2 = SPIN_LABELS[spin1], SPIN_LABELS[spin2]
        if not 0 <= m <= self.m_max:
            raise ConfigError(f"bus index {m} outside [0, {self.m_max}]")
        if len(spectators) != self.n_spectator_modes:
            raise ConfigError("wrong number of spectator indices")
        idx = (m,) + tuple(spectators) + (s1, s2)
        return int(np.ravel_multi_index(idx, self.shape))


def default_geometry(m_work: int, k1: int, buffer: int = 20) -> HilbertGeometry:
    """Default truncation: m_max = m_work + |k1| + buffer.

    The two-tone effective Hamiltonian only couples |m> to |m + |k1|>, so a
    modest buffer suffices there; the full-model oracle reuses the same
    headroom and relies on the leak check.
    """
    return HilbertGeometry(m_max=m_work + abs(k1) + buffer)


@dataclass
class StateVector:
    """Normalized amplitude vector on a :class:`HilbertGeometry`."""

    amplitudes: np.ndarray
    geometry: HilbertGeometry

    def __post_init__(self) -> None:
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (self.geometry.dim,):
            raise ConfigError(
                f"amplitude vector has length {self.amplitudes.shape}, expected {self.geometry.dim}"
            )

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def check_normalized(self, tol: float = 1e-10) -> "StateVector":
        if abs(self.norm - 1.0) > tol:
            raise ConfigError(f"state norm {self.norm} deviates from 1 by more than {tol}")
        return self

    def reshaped(self) -> np.ndarray:
        return self.amplitudes.reshape(self.geometry.shape)

    def overlap(self, other: "StateVector") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))


@dataclass
class OperatorMatrix:
    """Dense square operator with an optional asserted Hermiticity flag."""

    entries: np.ndarray
    hermitian_flag: bool = False

    def __post_init__(self) -> None:
        self.entries = np.asarray(self.entries, dtype=complex)
        n, m = self.entries.shape
        if n != m:
            raise ConfigError("operator must be square")
        if self.hermitian_flag:
            defect = np.abs(self.entries - self.entries.conj().T).max()
            if defect >= 1e-12:
                raise ConfigError(f"hermitian_flag set but max |A - A^dag| = {defect:.3e}")

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def make_basis_state(geometry: HilbertGeometry, m: int, spin1, spin2,
                     spectators: tuple[int, ...] = ()) -> StateVector:
    """Unit basis ket |m, spin1, spin2> (spectators in |0> unless given)."""
    if not spectators and geometry.n_spectator_modes:
        spectators = (0,) * geometry.n_spectator_modes
    amps = np.zeros(geometry.dim, dtype=complex)
    amps[geometry.index(m, spin1, spin2, spectators)] = 1.0
    return StateVector(amps, geometry)


def ladder_operators(geometry: HilbertGeometry) -> tuple[OperatorMatrix, OperatorMatrix]:
    """(a, a_dagger) on the bus Fock factor alone (dimension m_max + 1)."""
    a = _ladder(geometry.m_max)
    return OperatorMatrix(a), OperatorMatrix(a.T.copy())


def _ladder(m_max: int) -> np.ndarray:
    n = np.arange(m_max)
    a = np.zeros((m_max + 1, m_max + 1))
    a[n, n + 1] = np.sqrt(n + 1.0)
    return a


def displacement_operator(eta: float, m_max: int) -> np.ndarray:
    """exp[i eta (a^dag + a)] on a truncated Fock space, by matrix exponential."""
    a = _ladder(m_max)
    return expm(1j * eta * (a + a.T))


def displacement_matrix_element(eta: float, m: int, n: int, m_max: int) -> complex:
    """<m| exp[i eta (a^dag + a)] |n> with a truncation refinement check.

    Computed by matrix exponentiation at m_max and again at m_max + 10; if the
    two disagree by more than 1e-9 the truncation was insufficient and a
    TruncationError is raised.  This is the independent oracle against which
    the Laguerre-form couplings are validated.
    """
    if not (0 <= m <= m_max and 0 <= n <= m_max):
        raise ConfigError("m, n must lie within [0, m_max]")
    first = displacement_operator(eta, m_max)[m, n]
    refined = displacement_operator(eta, m_max + 10)[m, n]
    if abs(first - refined) > 1e-9:
        raise TruncationError(
            f"displacement element ({m},{n}) at eta={eta} moved by "
            f"{abs(first - refined):.3e} under refinement; increase m_max"
        )
    return complex(refined)


def top_level_population(state: StateVector) -> float:
    """Total probability in the top two bus Fock levels (truncation leak probe)."""
    resh = state.reshaped()
    return float(np.sum(np.abs(resh[-2:]) ** 2))


def check_truncation(state: StateVector, tol: float) -> None:
    leak = top_level_population(state)
    if leak > tol:
        raise TruncationError(
            f"population {leak:.3e} in the top two Fock levels exceeds {tol:.1e}"
        )
