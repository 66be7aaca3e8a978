"""Pulse design: resonance conditions, solution scan, gate analysis.

A gate run closes when three angles hit resonance simultaneously at the
pulse end t = tau (working in units Omega = 1, so "duration" always means
the product Omega*tau):

    at2 * tau = 2 pi p
    lam_plus  * tau = 2 pi q_plus  + pi/2
    lam_minus * tau = 2 pi q_minus + pi/2

with at2, lam_plus, lam_minus the m = 0 block rates from
:func:`condition_residuals`.  ``solve_gate`` eliminates tau through the
first condition and Newton-iterates the remaining two in (eta1, eta2);
``scan_integers`` enumerates integer triples and harvests every root from
a coarse grid.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .couplings import coupling_profile
from .errors import ConfigError, SolverError
from .propagator import PulsePair, compute_coefficients

ETA_MIN, ETA_MAX = 0.01, 4.0  # search box; couplings die off beyond eta ~ 3


@dataclass(frozen=True)
class ResonanceIntegers:
    p: int
    q_plus: int
    q_minus: int

    def __post_init__(self) -> None:
        if self.p < 1:
            raise ConfigError("p must be >= 1")
        if self.q_minus < 0:
            raise ConfigError("q_minus must be >= 0")
        if self.q_plus <= self.q_minus:
            raise ConfigError("q_plus must exceed q_minus (lam_plus > lam_minus)")


@dataclass(frozen=True)
class GateSolution:
    """One root of the resonance system, in Omega = 1 units."""

    k1: int
    integers: ResonanceIntegers
    eta1: float
    eta2: float
    omega_tau: float
    residuals: tuple[float, float, float]

    def pulses(self, omega: float = 1.0, phi1: float = 0.0,
               phi2: float = 0.0) -> PulsePair:
        """Concrete pulse pair at Rabi strength omega (duration rescales)."""
        if omega <= 0:
            raise ConfigError("omega must be > 0")
        return PulsePair(omega1=omega, omega2=omega, eta1=self.eta1,
                         eta2=self.eta2, phi1=phi1, phi2=phi2, k1=self.k1,
                         duration=self.omega_tau / omega)


def _block_rates(k1: int, eta1: float, eta2: float) -> tuple[float, float, float, float]:
    """(at2, lam_plus, lam_minus, al1) of the m = 0 block at Omega = 1."""
    k = abs(k1)
    al1 = 0.5 * float(coupling_profile(eta1, 0, k))
    at2 = 0.5 * float(coupling_profile(eta2, 0, 0))
    gt2 = 0.5 * float(coupling_profile(eta2, k, 0))
    s = 0.5 * (at2 + gt2)
    d = 0.5 * (at2 - gt2)
    r = float(np.hypot(d, al1))
    return at2, abs(s) + r, abs(abs(s) - r), al1


def condition_residuals(k1: int, eta1: float, eta2: float,
                        omega_tau: float) -> tuple[float, float, float]:
    """(|cos(at2 tau) - 1|, |sin(lam_plus tau) - 1|, |sin(lam_minus tau) - 1|).

    All three vanish exactly at a gate solution.  omega_tau = 0 gives
    (0, 1, 1): the carrier condition holds trivially, the others cannot.
    """
    at2, lp, lm, _ = _block_rates(k1, eta1, eta2)
    tau = omega_tau
    return (abs(np.cos(at2 * tau) - 1.0),
            abs(np.sin(lp * tau) - 1.0),
            abs(np.sin(lm * tau) - 1.0))


def condition_probabilities(k1: int, eta1: float, eta2: float,
                            omega_tau: float) -> tuple[float, float, float]:
    """(cos^2(at2 tau), sin^2(lam_plus tau), sin^2(lam_minus tau)).

    Each is the population that one resonance condition routes onto the
    ideal gate output; all three reach 1 exactly at a solution.
    """
    at2, lp, lm, _ = _block_rates(k1, eta1, eta2)
    tau = omega_tau
    return (float(np.cos(at2 * tau) ** 2),
            float(np.sin(lp * tau) ** 2),
            float(np.sin(lm * tau) ** 2))


def success_probability(k1: int, eta1: float, eta2: float, omega_tau: float) -> float:
    """Worst of the three condition probabilities at duration omega_tau.

    cos^2 tracks the spectator spin configurations (carrier return), the
    two sin^2 track the driven block; the minimum is the population
    guaranteed to land on the ideal gate output regardless of input.
    """
    return min(condition_probabilities(k1, eta1, eta2, omega_tau))


def _residual_pair(k1: int, integers: ResonanceIntegers, eta1: float,
                   eta2: float) -> tuple[np.ndarray, float]:
    at2, lp, lm, _ = _block_rates(k1, eta1, eta2)
    if at2 <= 0:
        raise SolverError(f"carrier rate vanished at eta2={eta2}")
    tau = 2.0 * np.pi * integers.p / at2
    res = np.array([lp * tau - (2.0 * np.pi * integers.q_plus + np.pi / 2.0),
                    lm * tau - (2.0 * np.pi * integers.q_minus + np.pi / 2.0)])
    return res, tau


def _axis_bisect(k1: int, integers: ResonanceIntegers, x: np.ndarray,
                 comp: int, axis: int) -> float | None:
    """Bracket a sign change of residual component `comp` along `axis`."""
    lo, hi = ETA_MIN, ETA_MAX
    grid = np.linspace(lo, hi, 200)
    vals = []
    for g in grid:
        pt = x.copy()
        pt[axis] = g
        try:
            vals.append(_residual_pair(k1, integers, *pt)[0][comp])
        except SolverError:
            vals.append(np.nan)
    vals = np.asarray(vals)
    for i in range(len(grid) - 1):
        if np.isfinite(vals[i]) and np.isfinite(vals[i + 1]) and vals[i] * vals[i + 1] < 0:
            a, b = grid[i], grid[i + 1]
            fa = vals[i]
            for _ in range(80):
                mid = 0.5 * (a + b)
                pt = x.copy()
                pt[axis] = mid
                fm = _residual_pair(k1, integers, *pt)[0][comp]
                if fa * fm <= 0:
                    b = mid
                else:
                    a, fa = mid, fm
            return 0.5 * (a + b)
    return None


def solve_gate(k1: int, integers: ResonanceIntegers, seed_eta1: float,
               seed_eta2: float, tol: float = 1e-10,
               max_iter: int = 200) -> GateSolution:
    """Damped Newton on the two free resonance residuals.

    The Jacobian is central-difference (h = 1e-6).  If it goes singular the
    solver bisects the dominant residual component along one eta axis and
    resumes.  Raises SolverError when no root is reached within max_iter or
    the iterate escapes the search box.
    """
    if k1 == 0:
        raise ConfigError("k1 must be nonzero")
    x = np.array([float(seed_eta1), float(seed_eta2)])
    if not (ETA_MIN <= x[0] <= ETA_MAX and ETA_MIN <= x[1] <= ETA_MAX):
        raise ConfigError(f"seeds must lie in [{ETA_MIN}, {ETA_MAX}]")
    h = 1e-6
    for _ in range(max_iter):
        res, tau = _residual_pair(k1, integers, *x)
        norm0 = float(np.linalg.norm(res))
        if norm0 < tol:
            sol_res = condition_residuals(k1, x[0], x[1], tau)
            return GateSolution(k1=k1, integers=integers, eta1=float(x[0]),
                                eta2=float(x[1]), omega_tau=float(tau),
                                residuals=sol_res)
        jac = np.empty((2, 2))
        for c in range(2):
            xp, xm = x.copy(), x.copy()
            xp[c] += h
            xm[c] -= h
            jac[:, c] = (_residual_pair(k1, integers, *xp)[0]
                         - _residual_pair(k1, integers, *xm)[0]) / (2.0 * h)
        try:
            step = np.linalg.solve(jac, res)
            if not np.all(np.isfinite(step)):
                raise np.linalg.LinAlgError
        except np.linalg.LinAlgError:
            comp = int(np.argmax(np.abs(res)))
            moved = False
            for axis in (0, 1):
                root = _axis_bisect(k1, integers, x, comp, axis)
                if root is not None:
                    x[axis] = root
                    moved = True
                    break
            if not moved:
                raise SolverError(
                    f"singular Jacobian and no axis bracket for k1={k1}, {integers}")
            continue
        lam = 1.0
        for _ in range(40):
            xn = x - lam * step
            if ETA_MIN < xn[0] < ETA_MAX and ETA_MIN < xn[1] < ETA_MAX:
                if float(np.linalg.norm(_residual_pair(k1, integers, *xn)[0])) < norm0:
                    x = xn
                    break
            lam *= 0.5
        else:
            raise SolverError(
                f"line search stalled at eta=({x[0]:.6f}, {x[1]:.6f}) "
                f"for k1={k1}, {integers} (residual {norm0:.3e})")
    raise SolverError(f"no convergence within {max_iter} iterations for k1={k1}, {integers}")


def _scan_one_k(args) -> list[tuple]:
    """Grid + Newton harvest for a single sideband order (worker function)."""
    k1, p_max, q_max, grid_n, eta_hi = args
    etas = np.linspace(0.02, eta_hi, grid_n)
    k = abs(k1)
    al1 = 0.5 * coupling_profile(etas, 0, k)
    at2 = 0.5 * coupling_profile(etas, 0, 0)
    gt2 = 0.5 * coupling_profile(etas, k, 0)
    s = 0.5 * (at2 + gt2)
    d = 0.5 * (at2 - gt2)
    r = np.hypot(d[None, :], al1[:, None])   # (eta1, eta2)
    lp = np.abs(s)[None, :] + r
    lm = np.abs(np.abs(s)[None, :] - r)
    found: list[tuple] = []
    for p in range(1, p_max + 1):
        with np.errstate(divide="ignore", invalid="ignore"):
            tau = 2.0 * np.pi * p / at2
        for qp in range(1, q_max + 1):
            for qm in range(0, qp):
                rp = lp * tau[None, :] - (2.0 * np.pi * qp + np.pi / 2.0)
                rm = lm * tau[None, :] - (2.0 * np.pi * qm + np.pi / 2.0)
                cost = rp**2 + rm**2
                inner = cost[1:-1, 1:-1]
                mask = ((inner < 2.0)
                        & (inner <= cost[:-2, 1:-1]) & (inner <= cost[2:, 1:-1])
                        & (inner <= cost[1:-1, :-2]) & (inner <= cost[1:-1, 2:]))
                for i, j in zip(*np.nonzero(mask)):
                    try:
                        sol = solve_gate(k1, ResonanceIntegers(p, qp, qm),
                                         etas[i + 1], etas[j + 1],
                                         tol=1e-12, max_iter=80)
                    except (SolverError, ConfigError):
                        continue
                    if 0.03 < sol.eta1 < 3.5 and 0.03 < sol.eta2 < 3.5:
                        found.append((sol.k1, p, qp, qm, sol.eta1, sol.eta2,
                                      sol.omega_tau, sol.residuals))
    return found


def scan_integers(k1_values=(1, 2, 3), p_max: int = 6, q_max: int = 6,
                  grid_n: int = 140, eta_hi: float = 3.2,
                  jobs: int = 1) -> list[GateSolution]:
    """Enumerate integer triples, harvest all roots, dedupe, sort by duration.

    Dedupe key is (eta1, eta2) rounded to 1e-6 and omega_tau to 1e-5: the
    same physical root is often reachable from several grid cells.  Sorting
    is total (duration, then k1 and the integers) so runs are reproducible
    regardless of jobs.
    """
    tasks = [(int(k1), p_max, q_max, grid_n, eta_hi) for k1 in k1_values]
    if not tasks or p_max < 1 or q_max < 1:
        return []
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_scan_one_k, tasks))
    else:
        chunks = [_scan_one_k(t) for t in tasks]
    raw = [rec for chunk in chunks for rec in chunk]
    raw.sort(key=lambda z: (round(z[6], 5), z[0], z[1], z[2], z[3]))
    seen, out = set(), []
    for k1, p, qp, qm, e1, e2, otau, res in raw:
        key = (round(e1, 6), round(e2, 6), round(otau, 5))
        if key in seen:
            continue
        seen.add(key)
        out.append(GateSolution(k1=k1, integers=ResonanceIntegers(p, qp, qm),
                                eta1=e1, eta2=e2, omega_tau=otau,
                                residuals=res))
    return out


@dataclass(frozen=True)
class SweepResult:
    parameter: str
    rel_offsets: np.ndarray
    probabilities: np.ndarray
    baseline: float


def robustness_sweep(solution: GateSolution, parameter: str = "eta2",
                     rel_span: float = 0.01, n_points: int = 21) -> SweepResult:
    """success_probability under a relative detuning of one design parameter."""
    if parameter not in ("eta1", "eta2", "omega_tau"):
        raise ConfigError("parameter must be eta1, eta2 or omega_tau")
    if n_points < 2 or rel_span <= 0:
        raise ConfigError("need rel_span > 0 and n_points >= 2")
    offsets = np.linspace(-rel_span, rel_span, n_points)
    base = dict(k1=solution.k1, eta1=solution.eta1, eta2=solution.eta2,
                omega_tau=solution.omega_tau)
    probs = np.empty(n_points)
    for i, eps in enumerate(offsets):
        args = dict(base)
        args[parameter] = base[parameter] * (1.0 + eps)
        probs[i] = success_probability(**args)
    return SweepResult(parameter=parameter, rel_offsets=offsets,
                       probabilities=probs,
                       baseline=success_probability(**base))


def realized_gate(solution: GateSolution, phi1: float = 0.0, phi2: float = 0.0,
                  mode: str = "exact") -> np.ndarray:
    """The two-qubit map actually produced on the m = 0 bus level.

    Basis order (gg, ge, eg, ee).  The eg/ee columns come from the block
    coefficients E3, E4 / F3, F4; any weight left on the displaced bus
    level (E1, E2, F1, F2) makes the spin map non-unitary, in which case a
    SolverError reports the leak instead of returning a wrong matrix.
    """
    pulses = solution.pulses(omega=1.0, phi1=phi1, phi2=phi2)
    coeffs = compute_coefficients(pulses, 0, solution.omega_tau, mode=mode)
    ang = coeffs.alpha2_tilde * solution.omega_tau
    c, s = np.cos(ang), np.sin(ang)
    gate = np.zeros((4, 4), complex)
    gate[:2, :2] = [[c, -1j * np.exp(1j * phi2) * s],
                    [-1j * np.exp(-1j * phi2) * s, c]]
    gate[2:, 2] = coeffs.e_coeffs[2:]
    gate[2:, 3] = coeffs.f_coeffs[2:]
    defect = float(np.abs(gate.conj().T @ gate - np.eye(4)).max())
    if defect > 1e-6:
        leak = float(np.sum(np.abs(coeffs.e_coeffs[:2]) ** 2))
        raise SolverError(
            f"realized spin map is not unitary (defect {defect:.3e}); "
            f"population {leak:.3e} leaks to the displaced bus level")
    return gate


def ideal_gate(phi2: float = 0.0) -> np.ndarray:
    """Target conditional flip: identity on g-control, -i X(phi2) on e-control."""
    xg = -1j * np.array([[0.0, np.exp(1j * phi2)],
                         [np.exp(-1j * phi2), 0.0]])
    gate = np.zeros((4, 4), complex)
    gate[:2, :2] = np.eye(2)
    gate[2:, 2:] = xg
    return gate


@dataclass(frozen=True)
class CnotEquivalence:
    """Exact local dressing turning the realized flip into a CNOT.

    CNOT = (q1_phase x I) (I x q2_post) G (I x q2_pre), where G is
    ideal_gate(phi2).  single_rotation is the Frobenius-closest lone
    target-qubit rotation (no control-side phase); its residual shows one
    rotation alone cannot complete the equivalence except at special phi2.
    """

    phi2: float
    q1_phase: np.ndarray
    q2_pre: np.ndarray
    q2_post: np.ndarray
    residual: float
    single_rotation: np.ndarray
    single_rotation_residual: float


def cnot_equivalence(phi2: float = 0.0) -> CnotEquivalence:
    gate = ideal_gate(phi2)
    cnot = np.eye(4, dtype=complex)
    cnot[2:, 2:] = [[0.0, 1.0], [1.0, 0.0]]
    def rz(th: float) -> np.ndarray:
        return np.diag([np.exp(-1j * th / 2.0), np.exp(1j * th / 2.0)])

    q1 = np.diag([1.0, 1j])
    pre, post = rz(-phi2), rz(phi2)
    dressed = np.kron(q1, np.eye(2)) @ np.kron(np.eye(2), post) @ gate @ np.kron(np.eye(2), pre)
    residual = float(np.abs(dressed - cnot).max())
    # best single rotation on the target qubit (polar factor of the overlap)
    overlap = np.eye(2, dtype=complex) + gate[2:, 2:].conj().T @ np.array([[0.0, 1.0],
                                                                           [1.0, 0.0]])
    u, _, vt = np.linalg.svd(overlap)
    rot = u @ vt
    single_residual = float(np.abs(np.kron(np.eye(2), rot) @ gate - cnot).max())
    return CnotEquivalence(phi2=phi2, q1_phase=q1, q2_pre=pre, q2_post=post,
                           residual=residual, single_rotation=rot,
                           single_rotation_residual=single_residual)


@dataclass(frozen=True)
class PhysicalParameters:
    rabi_ratio: float     # Omega / nu
    omega_tau: float      # dimensionless duration
    tau_seconds: float


def convert_physical(rabi_hz: float, trap_hz: float, omega_tau: float) -> PhysicalParameters:
    """Cyclic lab frequencies (Hz) to dimensionless ratio and seconds."""
    if trap_hz <= 0:
        raise ConfigError("trap frequency must be > 0")
    if rabi_hz <= 0:
        raise ConfigError("Rabi frequency must be > 0")
    return PhysicalParameters(rabi_ratio=rabi_hz / trap_hz,
                              omega_tau=omega_tau,
                              tau_seconds=omega_tau / (2.0 * np.pi * rabi_hz))
