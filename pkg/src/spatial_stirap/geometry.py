"""Trap layout, counter-intuitive motion schedule and the triple-trap potential.

Distance convention
-------------------
Every trap distance here (``d_R``, ``d_min``, ``d_LM(t)``, ``d_MR(t)``) is the
*tunneling distance* of a trap pair: half of the centre-to-centre spacing,
i.e. the distance from either centre to the point between them.  This is
the quantity the closed-form tunneling rate in :mod:`.fourlevel` takes as
its argument, so a pair at tunneling distance ``d`` (in units of its
ground-state width) tunnels at exactly ``tunneling_rate(d)``.  The
middle-to-right distance is measured to the *near* well of the double well.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError


@dataclass(frozen=True)
class TrapLayout:
    """Trap frequencies and double-well size.

    ``omega`` is shared by the left and middle traps, ``omega_R`` by the two
    wells of the double well, whose tunneling distance is ``d_R * alpha_R``.
    """

    omega_R: float
    omega: float = 1.0
    d_R: float = 1.5

    def __post_init__(self):
        if not (self.omega > 0 and self.omega_R > 0):
            raise ConfigurationError(
                f"trap frequencies must be positive (omega={self.omega}, omega_R={self.omega_R})"
            )
        if not self.d_R > 1:
            raise ConfigurationError(f"d_R must exceed 1, got {self.d_R}")

    @property
    def alpha(self) -> float:
        return 1.0 / math.sqrt(self.omega)

    @property
    def alpha_R(self) -> float:
        return 1.0 / math.sqrt(self.omega_R)

    @property
    def max_alpha(self) -> float:
        return max(self.alpha, self.alpha_R)

    @property
    def well_spacing(self) -> float:
        """Centre-to-centre spacing of the two right-hand wells."""
        return 2.0 * self.d_R * self.alpha_R


@dataclass(frozen=True)
class MotionSchedule:
    """Approach/reproach sequence: duration ``T``, delay ``delta_t`` between the
    two passes, closest distance ``d_min`` and the resting distances.

    With ``intuitive=True`` the order is swapped (left pair moves first);
    this exists only as a control experiment.
    """

    T: float
    delta_t: float
    d_min: float
    d_LM0: float
    d_MR0: float
    intuitive: bool = False

    def __post_init__(self):
        if not self.T > 0:
            raise ConfigurationError(f"T must be positive, got {self.T}")
        if not self.delta_t >= 0:
            raise ConfigurationError(f"delta_t must be non-negative, got {self.delta_t}")
        if not (self.d_LM0 > self.d_min and self.d_MR0 > self.d_min):
            raise ConfigurationError(
                f"initial distances ({self.d_LM0}, {self.d_MR0}) must exceed d_min = {self.d_min}"
            )

    @property
    def T0(self) -> float:
        return self.T + self.delta_t

    def validate_for(self, layout: TrapLayout) -> None:
        if not self.d_min > layout.max_alpha:
            raise ConfigurationError(
                f"d_min = {self.d_min:g} must exceed max(alpha, alpha_R) = {layout.max_alpha:g}"
            )


def _cosine_pass(t: float, start: float, T: float, d0: float, d_min: float) -> float:
    if t < start or t > start + T:
        return d0
    return 0.5 * (math.cos(2.0 * math.pi * (t - start) / T) + 1.0) * (d0 - d_min) + d_min


def distance_LM(t: float, s: MotionSchedule) -> float:
    # cosine argument shifted to (t - delta_t) so the pass starts smoothly
    start = 0.0 if s.intuitive else s.delta_t
    return _cosine_pass(t, start, s.T, s.d_LM0, s.d_min)


def distance_MR(t: float, s: MotionSchedule) -> float:
    start = s.delta_t if s.intuitive else 0.0
    return _cosine_pass(t, start, s.T, s.d_MR0, s.d_min)


@dataclass(frozen=True)
class TrapCenters:
    x_L: float
    x_M: float
    x_RL: float
    x_RR: float

    def __post_init__(self):
        if not (self.x_L < self.x_M < self.x_RL < self.x_RR):
            raise ConfigurationError(f"trap centres out of order: {self}")

    @property
    def double_well_center(self) -> float:
        return 0.5 * (self.x_RL + self.x_RR)

    def as_tuple(self) -> tuple:
        return (self.x_L, self.x_M, self.x_RL, self.x_RR)


def centers_at(t: float, layout: TrapLayout, s: MotionSchedule) -> TrapCenters:
    """Middle trap fixed at 0; the outer traps sit at twice their tunneling distance."""
    x_L = -2.0 * distance_LM(t, s)
    x_RL = 2.0 * distance_MR(t, s)
    return TrapCenters(x_L, 0.0, x_RL, x_RL + layout.well_spacing)


def potential_from_centers(x, centers: TrapCenters, layout: TrapLayout):
    """Fixed-depth piecewise-harmonic potential: the minimum of the four parabolas."""
    x = np.asarray(x, dtype=float)
    w2, wr2 = layout.omega**2, layout.omega_R**2
    return np.minimum.reduce(
        [
            0.5 * w2 * (x - centers.x_L) ** 2,
            0.5 * w2 * (x - centers.x_M) ** 2,
            0.5 * wr2 * (x - centers.x_RL) ** 2,
            0.5 * wr2 * (x - centers.x_RR) ** 2,
        ]
    )


def potential_at(x, t: float, layout: TrapLayout, s: MotionSchedule):
    return potential_from_centers(x, centers_at(t, layout, s), layout)


def double_well_potential(x, centers: TrapCenters, layout: TrapLayout):
    """The right-hand double well on its own, used for eigenstate targets."""
    x = np.asarray(x, dtype=float)
    wr2 = layout.omega_R**2
    return np.minimum(0.5 * wr2 * (x - centers.x_RL) ** 2, 0.5 * wr2 * (x - centers.x_RR) ** 2)


class TripleTrapPotential:
    """Callable ``t -> V(x_grid, t)`` for :func:`spatial_stirap.numerics.evolve`.

    Times beyond ``freeze_after`` reuse the configuration at ``freeze_after``
    (post-protocol hold).
    """

    def __init__(self, x: np.ndarray, layout: TrapLayout, schedule: MotionSchedule, freeze_after=None):
        self.x = np.asarray(x, dtype=float)
        self.layout = layout
        self.schedule = schedule
        self.freeze_after = schedule.T0 if freeze_after is None else freeze_after

    def centers(self, t: float) -> TrapCenters:
        return centers_at(min(t, self.freeze_after), self.layout, self.schedule)

    def __call__(self, t: float) -> np.ndarray:
        return potential_from_centers(self.x, self.centers(t), self.layout)
