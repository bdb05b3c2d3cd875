"""Observables extracted from wavefunction snapshots."""

from __future__ import annotations

import math
from dataclasses import astuple, dataclass, fields
from typing import NamedTuple, Sequence

import numpy as np

from .errors import ConfigurationError, NumericalDomainError
from .geometry import TrapCenters, TrapLayout, TripleTrapPotential, double_well_potential
from .numerics import SpatialGrid, Wavefunction, boundary_mass, ground_states_by_diagonalization

CSV_COLUMNS = ("t", "rho_L", "rho_M", "rho_RL", "rho_RR", "S_R", "S_I", "fid_sym", "fid_antisym", "leak")


@dataclass(frozen=True)
class RegionPartition:
    """Three cuts splitting the line into left / middle / near-well / far-well regions."""

    cuts: tuple

    def __post_init__(self):
        if len(self.cuts) != 3 or not (self.cuts[0] < self.cuts[1] < self.cuts[2]):
            raise ConfigurationError(f"region cuts must be three increasing positions, got {self.cuts}")

    @classmethod
    def from_centers(cls, c: TrapCenters) -> "RegionPartition":
        return cls(((c.x_L + c.x_M) / 2, (c.x_M + c.x_RL) / 2, (c.x_RL + c.x_RR) / 2))

    def validate_for(self, grid: SpatialGrid) -> None:
        if self.cuts[0] <= grid.x_min or self.cuts[2] >= grid.x_max:
            raise ConfigurationError(f"region cuts {self.cuts} not inside the grid")

    def double_well_window(self) -> tuple:
        """Interval centred on the double well, reaching back to the middle/near-well cut."""
        half = self.cuts[2] - self.cuts[1]
        return (self.cuts[2] - half, self.cuts[2] + half)


@dataclass(frozen=True)
class DiagnosticsRecord:
    time: float
    rho_L: float
    rho_M: float
    rho_RL: float
    rho_RR: float
    S_R: float
    S_I: float
    fidelity_sym: float
    fidelity_antisym: float
    boundary_leak: float

    @property
    def double_well_population(self) -> float:
        return self.rho_RL + self.rho_RR

    def as_row(self) -> tuple:
        return astuple(self)

    @classmethod
    def from_row(cls, row: Sequence) -> "DiagnosticsRecord":
        return cls(*(float(v) for v in row))


assert len(fields(DiagnosticsRecord)) == len(CSV_COLUMNS)


def _mass_left_of(cum: np.ndarray, weights: np.ndarray, grid: SpatialGrid, cut: float) -> float:
    # sample i owns the cell [x_i - dx/2, x_i + dx/2); a cut splits its cell proportionally
    s = (cut - grid.x_min) / grid.dx + 0.5
    i = int(np.floor(s))
    if i <= 0:
        return 0.0
    if i >= grid.n_points:
        return float(cum[-1])
    return float(cum[i - 1] + (s - i) * weights[i])


def region_populations(psi: Wavefunction, p: RegionPartition) -> np.ndarray:
    """Probability in each of the four regions; sums to ``norm(psi)``."""
    weights = psi.density * psi.grid.dx
    cum = np.cumsum(weights)
    left = [0.0] + [_mass_left_of(cum, weights, psi.grid, c) for c in p.cuts] + [float(cum[-1])]
    return np.diff(left)


class SymmetryValues(NamedTuple):
    S_R: float
    S_I: float


def _window_mask(grid: SpatialGrid, window) -> np.ndarray:
    lo, hi = window
    # closed and symmetric about the centre, so mirror-image points pair up
    center, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    mask = np.abs(grid.x - center) <= half * (1 + 1e-12)
    if not mask.any():
        raise ConfigurationError(f"symmetry window {window} contains no grid points")
    return mask


def _ratio(values: np.ndarray) -> float:
    den = np.sum(np.abs(values))
    if den < 1e-12 * values.size:
        return 0.0
    return float(np.sum(values) / den)


def symmetry_functions(psi: Wavefunction, window) -> SymmetryValues:
    """S = sum(part) / sum(|part|) over the window, separately for Re and Im.

    +/-1 for a symmetric state, 0 for an antisymmetric one.  A component
    that vanishes identically is reported as 0.
    """
    mask = _window_mask(psi.grid, window)
    amps = psi.amplitudes[mask]
    if np.sum(np.abs(amps) ** 2) * psi.grid.dx <= 1e-6:
        raise NumericalDomainError("wavefunction has no weight inside the symmetry window")
    return SymmetryValues(_ratio(amps.real), _ratio(amps.imag))


def dominant_symmetry(psi: Wavefunction, window) -> float:
    """|S| of whichever component (Re or Im) carries more weight in the window."""
    mask = _window_mask(psi.grid, window)
    amps = psi.amplitudes[mask]
    part = amps.real if np.sum(np.abs(amps.real)) >= np.sum(np.abs(amps.imag)) else amps.imag
    return abs(_ratio(part))


def double_well_eigenstates(grid: SpatialGrid, layout: TrapLayout, centers: TrapCenters):
    """Symmetric and antisymmetric ground doublet of the isolated double well."""
    eig = ground_states_by_diagonalization(
        double_well_potential(grid.x, centers, layout), grid, n_states=2
    )
    return eig.states[0], eig.states[1]


def eigenstate_fidelities(psi: Wavefunction, layout: TrapLayout, centers: TrapCenters) -> tuple:
    e_sym, e_anti = double_well_eigenstates(psi.grid, layout, centers)
    dx = psi.grid.dx
    f_sym = abs(np.vdot(e_sym.amplitudes, psi.amplitudes) * dx) ** 2
    f_anti = abs(np.vdot(e_anti.amplitudes, psi.amplitudes) * dx) ** 2
    return float(f_sym), float(f_anti)


def imbalance_amplitude(records: Sequence[DiagnosticsRecord], Omega_R: float, min_periods: float = 3.0) -> float:
    """Largest near-well minus far-well population over a post-protocol hold."""
    if not records:
        raise ConfigurationError("no hold-phase records")
    period = 2 * math.pi / Omega_R
    span = records[-1].time - records[0].time
    if span < min_periods * period * (1 - 1e-9):
        raise ConfigurationError(
            f"hold records span {span:.4g} but {min_periods:g} tunneling periods "
            f"({min_periods * period:.4g}) are required"
        )
    return max(r.rho_RL - r.rho_RR for r in records)


class DiagnosticsObserver:
    """``evolve`` observer producing a :class:`DiagnosticsRecord` per snapshot.

    The double well is rigid, so its eigenstates are diagonalized once and
    translated spectrally to wherever the double well sits at time ``t``.
    """

    def __init__(self, grid: SpatialGrid, potential: TripleTrapPotential, leak_margin: float = 2.0):
        self.grid = grid
        self.potential = potential
        self.leak_margin = leak_margin
        self._ref = potential.centers(potential.freeze_after)
        e_sym, e_anti = double_well_eigenstates(grid, potential.layout, self._ref)
        self._e_hat = np.stack([np.fft.fft(e_sym.amplitudes), np.fft.fft(e_anti.amplitudes)])
        self._k = grid.k

    def fidelities(self, psi: Wavefunction, centers: TrapCenters) -> tuple:
        shift = centers.double_well_center - self._ref.double_well_center
        psi_hat = np.fft.fft(psi.amplitudes)
        # translate the targets by `shift`: e(x - shift) <-> e_hat * exp(-i k shift)
        phase = np.exp(-1j * self._k * shift)
        amps = (np.conj(self._e_hat * phase) @ psi_hat) * self.grid.dx / self.grid.n_points
        f = np.abs(amps) ** 2
        return float(f[0]), float(f[1])

    def __call__(self, t: float, psi: Wavefunction) -> DiagnosticsRecord:
        centers = self.potential.centers(t)
        part = RegionPartition.from_centers(centers)
        pops = region_populations(psi, part)
        window = part.double_well_window()
        mask = _window_mask(self.grid, window)
        amps = psi.amplitudes[mask]
        s_r, s_i = _ratio(amps.real), _ratio(amps.imag)
        f_sym, f_anti = self.fidelities(psi, centers)
        return DiagnosticsRecord(
            float(t), *(float(p) for p in pops), s_r, s_i, f_sym, f_anti,
            boundary_mass(psi, self.leak_margin),
        )
