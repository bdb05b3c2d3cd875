"""Spatial adiabatic passage of a single atom into a double-well parity state.

Wavefunction simulation of a left trap, a middle trap and a double well that
approach each other in counter-intuitive order, together with the reduced
four-level model it is compared against.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    BoundaryContaminationError,
    ConfigurationError,
    IntegrationError,
    NumericalDomainError,
    ObserverError,
    SimulationError,
)
from .numerics import (  # noqa: E402
    PropagationSettings,
    SpatialGrid,
    Wavefunction,
    energy,
    evolve,
    ground_states_by_diagonalization,
    make_gaussian,
    norm,
    overlap,
    split_step,
)
from .geometry import MotionSchedule, TrapCenters, TrapLayout, TripleTrapPotential, centers_at  # noqa: E402
from .fourlevel import (  # noqa: E402
    Branch,
    CouplingSet,
    FourLevelState,
    dark_state,
    hamiltonian,
    integrate_four_level,
    real_space_hamiltonian,
    resonant_omega_R,
    tunneling_rate,
)
from .diagnostics import (  # noqa: E402
    DiagnosticsObserver,
    DiagnosticsRecord,
    RegionPartition,
    imbalance_amplitude,
    region_populations,
    symmetry_functions,
)
from .experiment import ExperimentConfig, RunResult, check_adiabaticity, run_protocol, run_sweep  # noqa: E402
