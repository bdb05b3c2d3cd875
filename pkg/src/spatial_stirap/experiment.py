"""Protocol configuration, single runs, sweeps and adiabaticity checks."""

from __future__ import annotations

import dataclasses
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .diagnostics import DiagnosticsObserver, RegionPartition, dominant_symmetry, imbalance_amplitude
from .errors import BoundaryContaminationError, ConfigurationError, SimulationError
from .fourlevel import Branch, FourLevelState, integrate_four_level, resonant_omega_R, tunneling_rate
from .geometry import MotionSchedule, TrapLayout, TripleTrapPotential, centers_at
from .numerics import PropagationSettings, SpatialGrid, Wavefunction, evolve, make_gaussian

log = logging.getLogger(__name__)

SWEEP_AXES = ("detuning_fraction", "T0_scale", "d_R", "delta_t_fraction")
LEAK_LIMIT = 1e-6

# nested sections of the config file -> flat field names
SECTIONS = {
    "layout": ("omega", "d_R"),
    "schedule": ("T_scale", "delta_t_fraction", "d_min_scale", "start_scale", "intuitive"),
    "propagation": ("dt", "record_stride"),
    "grid": ("n_points", "x_min", "x_max"),
}


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything needed to reproduce one protocol run.

    Times are tied to the resonant double-well tunneling frequency
    ``Omega_R``: the approach time is ``T = T_scale / Omega_R`` and the
    delay ``delta_t = delta_t_fraction * T``.  Distances are multiples of
    ``max(alpha, alpha_R)``.  ``None`` for ``dt`` / ``hold_time`` selects
    ``0.01 / max(omega, omega_R)`` and five double-well tunneling periods.
    """

    branch: str = "+"
    detuning_fraction: float = 0.0
    omega: float = 1.0
    d_R: float = 1.5
    T_scale: float = 1 / 1.3
    delta_t_fraction: float = 0.1
    d_min_scale: float = 1.2
    start_scale: float = 4.0
    intuitive: bool = False
    hold_time: Optional[float] = None
    dt: Optional[float] = None
    record_stride: int = 10
    n_points: int = 2048
    x_min: float = -24.0
    x_max: float = 24.0
    sweep_axis: Optional[str] = None
    sweep_values: tuple = ()
    workers: int = 1
    output_path: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "branch", Branch.parse(self.branch).value)
        object.__setattr__(self, "sweep_values", tuple(float(v) for v in self.sweep_values))
        if not -0.5 <= self.detuning_fraction <= 0.5:
            raise ConfigurationError(f"detuning_fraction must lie in [-0.5, 0.5], got {self.detuning_fraction}")
        if not self.d_R > 1:
            raise ConfigurationError(f"d_R must exceed 1, got {self.d_R}")
        if not (self.T_scale > 0 and self.delta_t_fraction >= 0):
            raise ConfigurationError("T_scale must be positive and delta_t_fraction non-negative")
        if self.hold_time is not None and self.hold_time < 0:
            raise ConfigurationError(f"hold_time must be non-negative, got {self.hold_time}")
        if int(self.workers) != self.workers or self.workers < 1:
            raise ConfigurationError(f"workers must be a positive integer, got {self.workers}")
        if self.sweep_axis is not None:
            if self.sweep_axis not in SWEEP_AXES:
                raise ConfigurationError(f"sweep axis {self.sweep_axis!r} not one of {SWEEP_AXES}")
            if not self.sweep_values or not all(math.isfinite(v) for v in self.sweep_values):
                raise ConfigurationError("sweep values must be finite and non-empty")

    # -- derived physics -------------------------------------------------
    @property
    def branch_enum(self) -> Branch:
        return Branch(self.branch)

    @property
    def resonant_omega_R(self) -> float:
        return resonant_omega_R(self.omega, self.d_R, self.branch)

    @property
    def omega_R(self) -> float:
        return self.resonant_omega_R * (1.0 + self.detuning_fraction)

    @property
    def Omega_R_resonant(self) -> float:
        return self.resonant_omega_R * tunneling_rate(self.d_R)

    @property
    def Omega_R(self) -> float:
        """Tunneling frequency of the double well actually simulated."""
        return self.omega_R * tunneling_rate(self.d_R)

    @property
    def T(self) -> float:
        return self.T_scale / self.Omega_R_resonant

    @property
    def delta_t(self) -> float:
        return self.delta_t_fraction * self.T

    @property
    def T0(self) -> float:
        return self.T + self.delta_t

    @property
    def T0_scale(self) -> float:
        """Total protocol time in units of 1/Omega_R."""
        return self.T_scale * (1.0 + self.delta_t_fraction)

    @property
    def time_step(self) -> float:
        return self.dt if self.dt is not None else 0.01 / max(self.omega, self.omega_R)

    @property
    def hold(self) -> float:
        return self.hold_time if self.hold_time is not None else 5 * 2 * math.pi / self.Omega_R

    def layout(self) -> TrapLayout:
        return TrapLayout(omega_R=self.omega_R, omega=self.omega, d_R=self.d_R)

    def schedule(self) -> MotionSchedule:
        unit = self.layout().max_alpha
        d0 = self.start_scale * unit
        return MotionSchedule(
            T=self.T, delta_t=self.delta_t, d_min=self.d_min_scale * unit,
            d_LM0=d0, d_MR0=d0, intuitive=self.intuitive,
        )

    def grid(self) -> SpatialGrid:
        return SpatialGrid(self.n_points, self.x_min, self.x_max)

    def propagation(self) -> PropagationSettings:
        return PropagationSettings(self.time_step, self.record_stride)

    # -- variations and serialization ------------------------------------
    def with_axis(self, axis: str, value: float) -> "ExperimentConfig":
        if axis == "T0_scale":
            return dataclasses.replace(self, T_scale=value / (1.0 + self.delta_t_fraction),
                                       sweep_axis=None, sweep_values=())
        if axis not in SWEEP_AXES:
            raise ConfigurationError(f"sweep axis {axis!r} not one of {SWEEP_AXES}")
        return dataclasses.replace(self, **{axis: value, "sweep_axis": None, "sweep_values": ()})

    def to_dict(self) -> dict:
        flat = dataclasses.asdict(self)
        out = {}
        for section, keys in SECTIONS.items():
            out[section] = {k: flat.pop(k) for k in keys}
        sweep = {"axis": flat.pop("sweep_axis"), "values": list(flat.pop("sweep_values"))}
        out.update(flat)
        out["sweep"] = sweep
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        return cls(**flatten_config(data))


def flatten_config(data: dict) -> dict:
    """Nested file layout -> flat keyword arguments, with type coercion."""
    data = dict(data or {})
    flat = {}
    for section in SECTIONS:
        sub = data.pop(section, None) or {}
        if not isinstance(sub, dict):
            raise ConfigurationError(f"section {section!r} must be a mapping")
        for key, value in sub.items():
            if key not in SECTIONS[section]:
                raise ConfigurationError(f"unknown key {section}.{key}")
            flat[key] = value
    sweep = data.pop("sweep", None) or {}
    if sweep.get("axis") is not None:
        flat["sweep_axis"] = sweep["axis"]
    if sweep.get("values") is not None:
        flat["sweep_values"] = tuple(sweep["values"])
    flat.update(data)
    return coerce_fields(flat)


def coerce_fields(flat: dict) -> dict:
    types = {f.name: f.type for f in dataclasses.fields(ExperimentConfig)}
    out = {}
    for key, value in flat.items():
        if key not in types:
            raise ConfigurationError(f"unknown configuration key {key!r}")
        kind = types[key]
        try:
            if value is None:
                out[key] = None
            elif kind in ("float", "Optional[float]"):
                out[key] = float(value)
            elif kind == "int":
                out[key] = int(value)
            elif kind == "bool":
                out[key] = value if isinstance(value, bool) else str(value).lower() in ("1", "true", "yes")
            elif key == "sweep_values":
                out[key] = tuple(float(v) for v in value)
            else:
                out[key] = value
        except (TypeError, ValueError) as exc:
            raise ConfigurationError(f"bad value for {key}: {value!r}") from exc
    return out


@dataclass(frozen=True)
class AdiabaticityReport:
    trap_ok: bool
    tunneling_ok: bool
    trap_margin: float
    tunneling_margin: float

    def warnings(self) -> list:
        out = []
        if not self.trap_ok:
            out.append(f"T0*min(omega, omega_R) = {self.trap_margin:.3f} <= 1: trap levels may be excited")
        if not self.tunneling_ok:
            out.append(f"T0*Omega_R = {self.tunneling_margin:.3f} <= 1: final state may oscillate")
        return out


def check_adiabaticity(config: ExperimentConfig) -> AdiabaticityReport:
    """Both timing conditions: T0 > 1/min(omega, omega_R) and T0 > 1/Omega_R."""
    trap = config.T0 * min(config.omega, config.omega_R)
    tunnel = config.T0 * config.Omega_R_resonant
    return AdiabaticityReport(trap > 1, tunnel > 1, trap, tunnel)


@dataclass
class RunResult:
    config: ExperimentConfig
    records: list
    hold_records: list
    summary: dict
    adiabaticity: AdiabaticityReport
    final_state: Wavefunction
    model_trajectory: list = field(repr=False, default_factory=list)
    wall_time: float = 0.0

    @property
    def all_records(self) -> list:
        return self.records + self.hold_records[1:]


def initial_state(config: ExperimentConfig) -> Wavefunction:
    layout = config.layout()
    x_L = centers_at(0.0, layout, config.schedule()).x_L
    return make_gaussian(config.grid(), x_L, layout.alpha)


def run_protocol(config: ExperimentConfig, four_level: bool = True, abort_on_leak: bool = True) -> RunResult:
    """Full wavefunction simulation of the approach sequence plus a hold.

    The reduced four-level model is integrated over the same protocol for
    comparison unless ``four_level`` is False.  With ``abort_on_leak`` False
    a boundary-contaminated run completes and only reports ``max_leak``.
    """
    started = time.perf_counter()
    layout, schedule, grid = config.layout(), config.schedule(), config.grid()
    schedule.validate_for(layout)
    settings = config.propagation()
    settings.check_resolution(max(config.omega, config.omega_R))
    report = check_adiabaticity(config)
    for msg in report.warnings():
        log.warning(msg)

    potential = TripleTrapPotential(grid.x, layout, schedule)
    for t in (0.0, schedule.T / 2, schedule.T0):
        RegionPartition.from_centers(potential.centers(t)).validate_for(grid)
    observer = DiagnosticsObserver(grid, potential)
    psi0 = initial_state(config)

    psi_end, records = evolve(psi0, potential, schedule.T0, settings, [observer])
    if abort_on_leak:
        _check_leak(records)
    _, hold_records = evolve(psi_end, potential(schedule.T0), config.hold, settings, [observer],
                             t_start=schedule.T0)
    if abort_on_leak:
        _check_leak(hold_records)

    final = records[-1]
    window = RegionPartition.from_centers(potential.centers(schedule.T0)).double_well_window()
    summary = {
        "omega_R": config.omega_R,
        "Omega_R": config.Omega_R,
        "T": schedule.T,
        "delta_t": schedule.delta_t,
        "T0_Omega_R": config.T0_scale,
        "rho_L": final.rho_L,
        "rho_M": final.rho_M,
        "rho_RL": final.rho_RL,
        "rho_RR": final.rho_RR,
        "double_well": final.double_well_population,
        "max_rho_M": max(r.rho_M for r in records),
        "S_R": final.S_R,
        "S_I": final.S_I,
        "S_dominant": dominant_symmetry(psi_end, window),
        "fid_sym": final.fidelity_sym,
        "fid_antisym": final.fidelity_antisym,
        "fid_target": final.fidelity_antisym if config.branch_enum is Branch.PLUS else final.fidelity_sym,
        "delta_rho_A": _imbalance_or_nan(hold_records, config.Omega_R),
        "max_leak": max(r.boundary_leak for r in records + hold_records),
    }
    trajectory = []
    if four_level:
        trajectory = integrate_four_level(FourLevelState.left(), layout, schedule,
                                          settings.dt, schedule.T0, sample_every=settings.record_stride)
        pops = trajectory[-1].populations
        summary.update({
            "model_rho_L": float(pops[0]),
            "model_rho_M": float(pops[1]),
            "model_rho_RL": float(pops[2]),
            "model_rho_RR": float(pops[3]),
            "model_max_rho_M": max(float(s.populations[1]) for s in trajectory),
            "model_relative_phase": trajectory[-1].relative_phase,
        })
    return RunResult(config, records, hold_records, summary, report, psi_end, trajectory,
                     time.perf_counter() - started)


def _imbalance_or_nan(records, Omega_R) -> float:
    try:
        return imbalance_amplitude(records, Omega_R)
    except ConfigurationError:
        return float("nan")


def _check_leak(records) -> None:
    worst = max(r.boundary_leak for r in records)
    if worst > LEAK_LIMIT:
        raise BoundaryContaminationError(
            f"probability {worst:.2e} reached the grid edges; enlarge the box"
        )


@dataclass
class SweepPoint:
    index: int
    value: float
    result: Optional[RunResult] = None
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.result is not None


@dataclass
class SweepResult:
    axis: str
    points: list

    @property
    def results(self) -> list:
        return [p.result for p in self.points if p.ok]

    def table(self) -> list:
        """One dict per sweep value, in sweep order."""
        rows = []
        for p in self.points:
            row = {"index": p.index, self.axis: p.value, "status": "ok" if p.ok else "error",
                   "error": p.error or ""}
            if p.ok:
                row.update(p.result.summary)
            rows.append(row)
        return rows


def _sweep_point(args) -> SweepPoint:
    index, value, config, four_level, abort_on_leak = args
    try:
        point_config = config.with_axis(config.sweep_axis, value)
        return SweepPoint(index, value, run_protocol(point_config, four_level, abort_on_leak))
    except (SimulationError, ValueError, ArithmeticError) as exc:
        return SweepPoint(index, value, error=f"{type(exc).__name__}: {exc}")


def run_sweep(config: ExperimentConfig, four_level: bool = True, abort_on_leak: bool = True) -> SweepResult:
    """Independent runs along ``config.sweep_axis``; failures are recorded, not raised."""
    if config.sweep_axis is None:
        raise ConfigurationError("run_sweep needs a sweep axis")
    jobs = [(i, v, config, four_level, abort_on_leak) for i, v in enumerate(config.sweep_values)]
    if config.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            points = list(pool.map(_sweep_point, jobs))
    else:
        points = [_sweep_point(job) for job in jobs]
    points.sort(key=lambda p: p.index)
    return SweepResult(config.sweep_axis, points)


def linspace_values(start: float, stop: float, num: int) -> tuple:
    return tuple(float(v) for v in np.linspace(start, stop, int(num)))
