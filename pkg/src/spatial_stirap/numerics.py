"""Uniform 1D grid, wavefunctions and a Strang split-operator propagator.

Natural units throughout: hbar = m = 1, lengths in units of the left-trap
ground-state width.  The grid is periodic (the kinetic factor is applied in
Fourier space), so callers are expected to keep the wavefunction well away
from the box edges; :func:`boundary_mass` measures how well they did.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence, Union

import numpy as np
from scipy.sparse import diags
from scipy.sparse.linalg import eigsh

from .errors import ConfigurationError, NumericalDomainError, ObserverError

Potential = Union[np.ndarray, Callable[[np.ndarray], np.ndarray]]


@dataclass(frozen=True)
class SpatialGrid:
    """Periodic grid ``x_i = x_min + i*dx`` with ``dx = (x_max - x_min)/n_points``."""

    n_points: int = 2048
    x_min: float = -24.0
    x_max: float = 24.0

    def __post_init__(self):
        if int(self.n_points) != self.n_points or self.n_points < 2:
            raise ConfigurationError(f"n_points must be an integer >= 2, got {self.n_points}")
        if not self.x_max > self.x_min:
            raise ConfigurationError(f"x_max ({self.x_max}) must exceed x_min ({self.x_min})")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n_points

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n_points)

    @property
    def k(self) -> np.ndarray:
        """Angular wavenumbers conjugate to :attr:`x` (numpy FFT ordering)."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n_points, d=self.dx)

    def to_momentum(self, values: np.ndarray) -> np.ndarray:
        return np.fft.fft(values)

    def to_position(self, values: np.ndarray) -> np.ndarray:
        return np.fft.ifft(values)


@dataclass
class Wavefunction:
    grid: SpatialGrid
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (self.grid.n_points,):
            raise ConfigurationError(
                f"expected {self.grid.n_points} amplitudes, got shape {self.amplitudes.shape}"
            )

    @property
    def density(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def copy(self) -> "Wavefunction":
        return Wavefunction(self.grid, self.amplitudes.copy())

    def scaled(self, factor: complex) -> "Wavefunction":
        return Wavefunction(self.grid, self.amplitudes * factor)

    def __add__(self, other: "Wavefunction") -> "Wavefunction":
        _check_same_grid(self, other)
        return Wavefunction(self.grid, self.amplitudes + other.amplitudes)

    def __sub__(self, other: "Wavefunction") -> "Wavefunction":
        _check_same_grid(self, other)
        return Wavefunction(self.grid, self.amplitudes - other.amplitudes)


@dataclass(frozen=True)
class PropagationSettings:
    """Time step (units 1/omega) and the number of steps between snapshots."""

    dt: float = 0.01
    record_stride: int = 10

    def __post_init__(self):
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise ConfigurationError(f"dt must be positive, got {self.dt}")
        if int(self.record_stride) != self.record_stride or self.record_stride < 1:
            raise ConfigurationError(f"record_stride must be a positive integer, got {self.record_stride}")

    def check_resolution(self, max_frequency: float, bound: float = 0.05) -> None:
        if self.dt * max_frequency > bound:
            raise ConfigurationError(
                f"dt*max_frequency = {self.dt * max_frequency:.3g} exceeds {bound}"
            )


def _check_same_grid(a: Wavefunction, b: Wavefunction) -> None:
    if a.grid != b.grid:
        raise ConfigurationError("wavefunctions live on different grids")


def make_gaussian(grid: SpatialGrid, center: float, width: float) -> Wavefunction:
    """Normalized ``exp(-(x-center)^2 / (2 width^2))``.

    The width must be resolved by at least four grid spacings and the
    Gaussian must fit in the box out to five widths on either side.
    """
    if width < 4 * grid.dx:
        raise ConfigurationError(
            f"width {width:g} below resolvable bound 4*dx = {4 * grid.dx:g}"
        )
    if center - 5 * width < grid.x_min or center + 5 * width > grid.x_max:
        raise ConfigurationError(
            f"center {center:g} +/- 5*width ({5 * width:g}) leaves the grid "
            f"[{grid.x_min:g}, {grid.x_max:g}]"
        )
    values = np.exp(-((grid.x - center) ** 2) / (2.0 * width**2))
    psi = Wavefunction(grid, values)
    return normalize(psi)


def norm(psi: Wavefunction) -> float:
    return float(np.sum(psi.density) * psi.grid.dx)


def normalize(psi: Wavefunction) -> Wavefunction:
    n = norm(psi)
    if n == 0:
        raise NumericalDomainError("cannot normalize a zero wavefunction")
    return psi.scaled(1.0 / math.sqrt(n))


def overlap(psi1: Wavefunction, psi2: Wavefunction) -> complex:
    """Discrete <psi1|psi2>."""
    _check_same_grid(psi1, psi2)
    return complex(np.vdot(psi1.amplitudes, psi2.amplitudes) * psi1.grid.dx)


def expectation_x(psi: Wavefunction) -> float:
    return float(np.sum(psi.grid.x * psi.density) * psi.grid.dx / norm(psi))


def energy(psi: Wavefunction, potential: Potential) -> float:
    """<H> with a spectral kinetic term."""
    grid = psi.grid
    v = _potential_values(potential, grid)
    phi = grid.to_momentum(psi.amplitudes)
    # Parseval: sum |psi|^2 dx == sum |phi|^2 dx / N
    kinetic = 0.5 * np.sum(grid.k**2 * np.abs(phi) ** 2) * grid.dx / grid.n_points
    pot = np.sum(v * psi.density) * grid.dx
    return float((kinetic + pot) / norm(psi))


def boundary_mass(psi: Wavefunction, margin: float = 2.0) -> float:
    """Probability within ``margin`` of either edge of the box."""
    x = psi.grid.x
    mask = (x < psi.grid.x_min + margin) | (x >= psi.grid.x_max - margin)
    return float(np.sum(psi.density[mask]) * psi.grid.dx)


def _potential_values(potential: Potential, grid: SpatialGrid) -> np.ndarray:
    v = potential(grid.x) if callable(potential) else potential
    v = np.asarray(v, dtype=float)
    if v.shape != (grid.n_points,):
        raise ConfigurationError(f"potential has shape {v.shape}, expected ({grid.n_points},)")
    bad = ~np.isfinite(v)
    if bad.any():
        x_bad = grid.x[np.argmax(bad)]
        raise NumericalDomainError(f"non-finite potential value at x = {x_bad:g}")
    return v


def _kinetic_factor(grid: SpatialGrid, dt: float) -> np.ndarray:
    return np.exp(-0.5j * grid.k**2 * dt)


def _strang(amplitudes, half_v, kinetic, grid):
    amplitudes = half_v * amplitudes
    amplitudes = grid.to_position(kinetic * grid.to_momentum(amplitudes))
    return half_v * amplitudes


def split_step(psi: Wavefunction, potential: Potential, dt: float) -> Wavefunction:
    """One Strang step exp(-iV dt/2) exp(-iT dt) exp(-iV dt/2)."""
    grid = psi.grid
    v = _potential_values(potential, grid)
    half_v = np.exp(-0.5j * v * dt)
    out = _strang(psi.amplitudes, half_v, _kinetic_factor(grid, dt), grid)
    return Wavefunction(grid, out)


Observer = Callable[[float, Wavefunction], object]


def evolve(
    psi0: Wavefunction,
    potential_of_time: Union[np.ndarray, Callable[[float], np.ndarray]],
    t_final: float,
    settings: PropagationSettings,
    observers: Sequence[Observer] = (),
    t_start: float = 0.0,
) -> tuple[Wavefunction, list]:
    """Propagate ``psi0`` from ``t_start`` to ``t_start + t_final``.

    ``potential_of_time(t)`` returns the potential sampled on the grid; it
    is evaluated at the midpoint of every step.  A plain array means a
    static potential, which lets the half-step factor be computed once.
    The step is shrunk so that an integer number of steps lands exactly on
    ``t_final``.  Every observer is called as ``observer(t, psi)`` at the
    start, every ``record_stride`` steps and at the end; non-None return
    values are collected (in call order) into the returned list.
    """
    if t_final < 0:
        raise ConfigurationError(f"t_final must be non-negative, got {t_final}")
    grid = psi0.grid
    records: list = []

    def observe(step: int, t: float, amplitudes: np.ndarray) -> None:
        snapshot = Wavefunction(grid, amplitudes)
        for observer in observers:
            try:
                rec = observer(t, snapshot)
            except Exception as exc:  # noqa: BLE001 - rewrapped with context
                raise ObserverError(
                    f"observer {getattr(observer, '__name__', observer)!r} failed at "
                    f"step {step}, t = {t:.6g}: {exc}"
                ) from exc
            if rec is not None:
                records.append(rec)

    observe(0, t_start, psi0.amplitudes)
    if t_final == 0:
        return psi0.copy(), records

    n_steps = max(1, math.ceil(t_final / settings.dt - 1e-9))
    h = t_final / n_steps
    kinetic = _kinetic_factor(grid, h)
    static = not callable(potential_of_time)
    if static:
        half_v = np.exp(-0.5j * _potential_values(potential_of_time, grid) * h)

    amplitudes = psi0.amplitudes.copy()
    for step in range(1, n_steps + 1):
        if not static:
            t_mid = t_start + (step - 0.5) * h
            half_v = np.exp(-0.5j * _potential_values(potential_of_time(t_mid), grid) * h)
        amplitudes = _strang(amplitudes, half_v, kinetic, grid)
        if step % settings.record_stride == 0 or step == n_steps:
            observe(step, t_start + step * h, amplitudes)
    return Wavefunction(grid, amplitudes), records


@dataclass
class Eigenstates:
    """Lowest eigenpairs of a grid Hamiltonian.

    Iterating yields ``(energy, Wavefunction)`` pairs in ascending energy.
    ``confined`` is False when any eigenfunction carries more than 1e-6 of
    its probability within two length units of the box edges.
    """

    energies: np.ndarray
    states: list
    boundary_mass: float

    @property
    def confined(self) -> bool:
        return self.boundary_mass <= 1e-6

    def __iter__(self) -> Iterator[tuple]:
        return iter(zip(self.energies, self.states))

    def __len__(self) -> int:
        return len(self.states)

    def __getitem__(self, i):
        return self.energies[i], self.states[i]


def ground_states_by_diagonalization(
    potential: Potential, grid: SpatialGrid, n_states: int = 2
) -> Eigenstates:
    """Lowest ``n_states`` eigenpairs of the 3-point finite-difference Hamiltonian.

    The Laplacian uses hard-wall (non-periodic) ends. Eigenfunctions are
    returned real, normalized, with the sign fixed so that the largest lobe
    is positive.
    """
    if n_states < 1:
        raise ConfigurationError("n_states must be >= 1")
    v = _potential_values(potential, grid)
    n, dx = grid.n_points, grid.dx
    off = np.full(n - 1, -0.5 / dx**2)
    h = diags([off, v + 1.0 / dx**2, off], [-1, 0, 1], format="csc")
    # fixed start vector keeps ARPACK (and everything downstream) deterministic
    energies, vectors = eigsh(
        h, k=n_states, sigma=float(v.min()) - 1.0, which="LM", v0=np.ones(n)
    )
    order = np.argsort(energies)
    energies, vectors = energies[order], vectors[:, order]
    states = []
    worst = 0.0
    for col in vectors.T:
        col = col / math.sqrt(np.sum(col**2) * dx)
        if col[np.argmax(np.abs(col))] < 0:
            col = -col
        psi = Wavefunction(grid, col)
        worst = max(worst, boundary_mass(psi))
        states.append(psi)
    return Eigenstates(energies, states, worst)
