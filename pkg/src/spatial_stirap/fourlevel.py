"""Reduced four-level description over the asymptotic trap ground states.

Basis order: left trap, middle trap, near (left) well of the double well,
far (right) well.  Two sign conventions appear:

* :func:`hamiltonian` is the textbook matrix in units of hbar*omega, whose
  basis vectors alternate in sign along the chain.  The double dark states
  ``Phi+/-`` and the resonance condition ``omega - omega_R = +/- Omega_R``
  live in this convention.
* :func:`real_space_hamiltonian` is the same physics for asymptotic states
  that are all positive Gaussians, with tunneling frequencies equal to level
  splittings.  It equals ``-U H U / 2`` with ``U = diag(1, -1, 1, -1)`` and is
  what :func:`integrate_four_level` propagates, so its amplitudes can be
  compared with the wavefunction simulation directly.  In this basis the
  ``+`` branch (omega > omega_R) ends in the antisymmetric double-well state.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import erfc

from .errors import ConfigurationError, IntegrationError, NumericalDomainError
from .geometry import MotionSchedule, TrapLayout, distance_LM, distance_MR

SQRT2 = math.sqrt(2.0)
_ALTERNATING = np.array([1.0, -1.0, 1.0, -1.0])


class Branch(str, enum.Enum):
    """Sign choice in ``omega - omega_R = +/- Omega_R``."""

    PLUS = "+"
    MINUS = "-"

    @property
    def sign(self) -> int:
        return 1 if self is Branch.PLUS else -1

    @property
    def target(self) -> str:
        """Parity of the real-space double-well state the branch transfers into."""
        return "antisymmetric" if self is Branch.PLUS else "symmetric"

    @classmethod
    def parse(cls, value) -> "Branch":
        if isinstance(value, cls):
            return value
        aliases = {"+": cls.PLUS, "plus": cls.PLUS, "antisymmetric": cls.PLUS,
                   "-": cls.MINUS, "minus": cls.MINUS, "symmetric": cls.MINUS}
        try:
            return aliases[str(value).strip().lower()]
        except KeyError:
            raise ConfigurationError(f"unknown branch {value!r}; use '+' or '-'") from None


def tunneling_rate(d):
    """Tunneling frequency of two identical harmonic wells in units of their trap frequency.

    ``d`` is the tunneling distance (half the centre spacing) in units of the
    ground-state width and must exceed 1.  Evaluated in a rescaled form that
    does not overflow for large ``d``.
    """
    d = np.asarray(d, dtype=float)
    if np.any(~(d > 1)):
        raise NumericalDomainError(f"tunneling_rate needs d > 1, got {d.min() if d.size else d}")
    e1 = np.exp(-d * d)
    num = -e1 * e1 + e1 * (1.0 + d * erfc(d))
    den = math.sqrt(math.pi) * (1.0 - e1 * e1) / (2.0 * d)
    out = num / den
    return float(out) if out.ndim == 0 else out


def resonant_omega_R(omega: float, d_R: float, branch) -> float:
    """Double-well frequency that puts one double-well parity state in resonance.

    ``+`` gives omega_R < omega (antisymmetric target), ``-`` gives
    omega_R > omega (symmetric target).
    """
    branch = Branch.parse(branch)
    f = tunneling_rate(d_R)
    if branch is Branch.MINUS and f >= 1:
        raise NumericalDomainError(f"no '-' resonance: tunneling ratio {f:g} >= 1")
    return omega / (1.0 + branch.sign * f)


@dataclass(frozen=True)
class CouplingSet:
    Omega_LM: float
    Omega_MR: float
    Omega_R: float
    detuning: float

    def __post_init__(self):
        if not self.Omega_R > 0:
            raise ConfigurationError(f"Omega_R must be positive, got {self.Omega_R}")
        if self.Omega_LM < 0 or self.Omega_MR < 0:
            raise ConfigurationError("tunneling frequencies must be non-negative")

    @classmethod
    def resonant(cls, Omega_LM: float, Omega_MR: float, Omega_R: float, branch) -> "CouplingSet":
        return cls(Omega_LM, Omega_MR, Omega_R, Branch.parse(branch).sign * Omega_R)


def hamiltonian(c: CouplingSet) -> np.ndarray:
    return np.array(
        [
            [0.0, -c.Omega_LM, 0.0, 0.0],
            [-c.Omega_LM, 0.0, -c.Omega_MR, 0.0],
            [0.0, -c.Omega_MR, c.detuning, -c.Omega_R],
            [0.0, 0.0, -c.Omega_R, c.detuning],
        ]
    )


def real_space_hamiltonian(c: CouplingSet) -> np.ndarray:
    u = np.diag(_ALTERNATING)
    return -0.5 * u @ hamiltonian(c) @ u


def to_real_space(amplitudes) -> np.ndarray:
    """Map amplitudes from the alternating-sign basis to the positive-Gaussian one."""
    return _ALTERNATING * np.asarray(amplitudes)


@dataclass(frozen=True)
class DarkState:
    theta: float
    branch: Branch
    amplitudes: np.ndarray = field(repr=False)

    def real_space(self) -> np.ndarray:
        return to_real_space(self.amplitudes)


def dark_state(Omega_LM: float, Omega_MR: float, branch) -> DarkState:
    """Zero-energy eigenvector cos(t)|L> - sin(t)(|RL> +/- |RR>)/sqrt2 with tan t = sqrt2 LM/MR."""
    branch = Branch.parse(branch)
    if Omega_LM == 0 and Omega_MR == 0:
        raise NumericalDomainError("mixing angle undefined when both tunneling rates vanish")
    theta = math.atan2(SQRT2 * Omega_LM, Omega_MR)
    s = math.sin(theta) / SQRT2
    amps = np.array([math.cos(theta), 0.0, -s, -branch.sign * s])
    return DarkState(theta, branch, amps)


def dark_state_nullity_check(c: CouplingSet, branch) -> float:
    """Residual ||H Phi|| of the branch's dark state; vanishes under resonance."""
    phi = dark_state(c.Omega_LM, c.Omega_MR, branch)
    return float(np.linalg.norm(hamiltonian(c) @ phi.amplitudes))


def couplings_from_geometry(layout: TrapLayout, s: MotionSchedule, t: float) -> CouplingSet:
    """Tunneling frequencies implied by the trap distances at time ``t``.

    The middle/near-well pair has unequal frequencies; it is treated as a
    pair of width sqrt(alpha*alpha_R) and frequency sqrt(omega*omega_R),
    which is exact when the frequencies coincide.
    """
    width = math.sqrt(layout.alpha * layout.alpha_R)
    Omega_LM = layout.omega * tunneling_rate(distance_LM(t, s) / layout.alpha)
    Omega_MR = math.sqrt(layout.omega * layout.omega_R) * tunneling_rate(distance_MR(t, s) / width)
    Omega_R = layout.omega_R * tunneling_rate(layout.d_R)
    return CouplingSet(Omega_LM, Omega_MR, Omega_R, layout.omega - layout.omega_R)


@dataclass
class FourLevelState:
    amplitudes: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (4,):
            raise ConfigurationError("a four-level state needs exactly four amplitudes")

    @property
    def populations(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    @property
    def relative_phase(self) -> float:
        """arg(c_RL) - arg(c_RR) wrapped to [0, 2*pi)."""
        return float(np.angle(self.amplitudes[2] * np.conj(self.amplitudes[3])) % (2 * np.pi))

    @classmethod
    def left(cls) -> "FourLevelState":
        return cls(np.array([1, 0, 0, 0], dtype=complex))


def _hamiltonian_series(layout, s, times):
    out = np.empty((len(times), 4, 4))
    for i, t in enumerate(times):
        out[i] = real_space_hamiltonian(couplings_from_geometry(layout, s, t))
    return out


def integrate_four_level(
    initial: FourLevelState,
    layout: TrapLayout,
    s: MotionSchedule,
    dt: float,
    t_final: float,
    sample_every: int = 10,
    hamiltonian_of_time=None,
) -> list:
    """Fixed-step RK4 for ``i dc/dt = H(t) c`` in the real-space basis.

    Returns states sampled every ``sample_every`` steps plus the final one.
    ``hamiltonian_of_time`` overrides the geometry-derived Hamiltonian.
    """
    n0 = float(np.sum(initial.populations))
    if abs(n0 - 1.0) > 1e-10:
        raise ConfigurationError(f"initial four-level state not normalized (norm {n0:.12g})")
    if t_final <= 0:
        return [FourLevelState(initial.amplitudes.copy(), initial.time)]
    n_steps = max(1, math.ceil(t_final / dt - 1e-9))
    h = t_final / n_steps
    t0 = initial.time
    if hamiltonian_of_time is None:
        half_times = t0 + 0.5 * h * np.arange(2 * n_steps + 1)
        hs = _hamiltonian_series(layout, s, half_times)
    else:
        hs = np.array([hamiltonian_of_time(t0 + 0.5 * h * j) for j in range(2 * n_steps + 1)])
    hs = -1j * hs

    c = initial.amplitudes.copy()
    traj = [FourLevelState(c.copy(), t0)]
    for n in range(n_steps):
        a, m, b = hs[2 * n], hs[2 * n + 1], hs[2 * n + 2]
        k1 = a @ c
        k2 = m @ (c + 0.5 * h * k1)
        k3 = m @ (c + 0.5 * h * k2)
        k4 = b @ (c + h * k3)
        c = c + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        if (n + 1) % sample_every == 0 or n + 1 == n_steps:
            drift = abs(float(np.vdot(c, c).real) - 1.0)
            if drift > 1e-6:
                raise IntegrationError(
                    f"four-level norm drift {drift:.2e} at t = {t0 + (n + 1) * h:.4g}; reduce dt"
                )
            traj.append(FourLevelState(c.copy(), t0 + (n + 1) * h))
    return traj
