import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spatial_stirap.diagnostics import (
    CSV_COLUMNS,
    DiagnosticsObserver,
    DiagnosticsRecord,
    RegionPartition,
    dominant_symmetry,
    double_well_eigenstates,
    eigenstate_fidelities,
    imbalance_amplitude,
    region_populations,
    symmetry_functions,
)
from spatial_stirap.errors import ConfigurationError, NumericalDomainError
from spatial_stirap.geometry import MotionSchedule, TrapCenters, TrapLayout, TripleTrapPotential
from spatial_stirap.numerics import (
    PropagationSettings,
    SpatialGrid,
    Wavefunction,
    evolve,
    make_gaussian,
    normalize,
)

GRID = SpatialGrid(2048, -24, 24)
LAYOUT = TrapLayout(omega_R=1.0, d_R=1.5)
CENTERS = TrapCenters(-16.0, -6.0, 3.0, 6.0)  # double well centred on 4.5
PART = RegionPartition.from_centers(CENTERS)
WINDOW = PART.double_well_window()


def pair(sign, phase=1.0):
    a = make_gaussian(GRID, 3.0, 1.0)
    b = make_gaussian(GRID, 6.0, 1.0)
    return normalize(a + b.scaled(sign)).scaled(phase)


class TestPartition:
    def test_cuts(self):
        assert PART.cuts == (-11.0, -1.5, 4.5)
        assert WINDOW == (-1.5, 10.5)

    def test_invalid(self):
        with pytest.raises(ConfigurationError):
            RegionPartition((0.0, -1.0, 2.0))
        with pytest.raises(ConfigurationError):
            RegionPartition((-30.0, 0.0, 1.0)).validate_for(GRID)


class TestPopulations:
    def test_left_gaussian(self):
        pops = region_populations(make_gaussian(GRID, -16.0, 1.0), PART)
        np.testing.assert_allclose(pops, [1, 0, 0, 0], atol=1e-10)

    def test_symmetric_eigenstate_splits_evenly(self):
        e_sym, _ = double_well_eigenstates(GRID, LAYOUT, CENTERS)
        pops = region_populations(e_sym, PART)
        assert pops[2] == pytest.approx(0.5, abs=1e-6)
        assert pops[3] == pytest.approx(0.5, abs=1e-6)

    def test_cut_between_grid_points(self):
        off = TrapCenters(-16.0, -6.0, 3.01, 6.01)
        e_sym, _ = double_well_eigenstates(GRID, LAYOUT, off)
        pops = region_populations(e_sym, RegionPartition.from_centers(off))
        assert pops[2] == pytest.approx(0.5, abs=1e-6)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_sum_is_norm(self, seed):
        rng = np.random.default_rng(seed)
        cuts = np.sort(rng.uniform(-20, 20, 3))
        psi = Wavefunction(GRID, rng.normal(size=GRID.n_points) + 1j * rng.normal(size=GRID.n_points))
        pops = region_populations(psi, RegionPartition(tuple(cuts)))
        assert np.all(pops >= 0)
        assert pops.sum() == pytest.approx(np.sum(psi.density) * GRID.dx, rel=1e-12)


class TestSymmetry:
    def test_in_phase_real(self):
        s = symmetry_functions(pair(+1), WINDOW)
        assert s.S_R == pytest.approx(1.0, abs=1e-12)
        assert s.S_I == 0.0

    def test_anti_phase(self):
        s = symmetry_functions(pair(-1), WINDOW)
        assert abs(s.S_R) < 1e-10

    def test_rotated_symmetric(self):
        s = symmetry_functions(pair(+1, np.exp(1j * math.pi / 4)), WINDOW)
        assert s.S_R == pytest.approx(1.0, abs=1e-12)
        assert s.S_I == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("sign", [1, -1])
    def test_phase_covariance(self, sign):
        ref = symmetry_functions(pair(sign, np.exp(0.3j)), WINDOW)
        for phi in np.linspace(0.1, 1.4, 7):
            s = symmetry_functions(pair(sign, np.exp(1j * phi)), WINDOW)
            assert abs(s.S_R) == pytest.approx(abs(ref.S_R), abs=1e-9)
            assert abs(s.S_I) == pytest.approx(abs(ref.S_I), abs=1e-9)

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.sampled_from([1, -1]))
    def test_constructed_parity(self, seed, parity):
        rng = np.random.default_rng(seed)
        c = 4.5
        # random smooth profile f, then f(x - c) +/- f(-(x - c)), sampled symmetrically about c
        a, w, mu = rng.uniform(0.2, 1.0, 3), rng.uniform(0.4, 1.2, 3), rng.uniform(-2.5, 2.5, 3)

        def f(u):
            return sum(ai * np.exp(-((u - m) ** 2) / (2 * wi**2)) for ai, wi, m in zip(a, w, mu))

        u = GRID.x - c
        psi = Wavefunction(GRID, f(u) + parity * f(-u))
        s = symmetry_functions(psi, WINDOW)
        if parity == 1:
            assert s.S_R == pytest.approx(1.0, abs=1e-12) and s.S_I == 0.0
        else:
            assert abs(s.S_R) < 1e-9 and s.S_I == 0.0

    def test_empty_window(self):
        with pytest.raises(NumericalDomainError):
            symmetry_functions(make_gaussian(GRID, -12, 1), WINDOW)
        with pytest.raises(ConfigurationError):
            symmetry_functions(pair(1), (30.0, 40.0))

    def test_dominant(self):
        assert dominant_symmetry(pair(1, 1j), WINDOW) == pytest.approx(1.0)
        assert dominant_symmetry(pair(-1, np.exp(0.7j)), WINDOW) < 1e-9


class TestFidelities:
    def test_eigenstates(self):
        e0, e1 = double_well_eigenstates(GRID, LAYOUT, CENTERS)
        assert eigenstate_fidelities(e0, LAYOUT, CENTERS) == pytest.approx((1, 0), abs=1e-12)
        sup = (e0 + e1).scaled(1 / math.sqrt(2))
        assert eigenstate_fidelities(sup, LAYOUT, CENTERS) == pytest.approx((0.5, 0.5), abs=1e-12)
        # global phase invariant
        assert eigenstate_fidelities(e1.scaled(1j), LAYOUT, CENTERS) == pytest.approx((0, 1), abs=1e-12)

    def test_parities(self):
        e0, e1 = double_well_eigenstates(GRID, LAYOUT, CENTERS)
        assert symmetry_functions(e0, WINDOW).S_R == pytest.approx(1.0, abs=1e-12)
        assert abs(symmetry_functions(e1, WINDOW).S_R) < 1e-6


def _records(values, dt=0.1):
    return [DiagnosticsRecord(i * dt, 0, 0, v, 1 - v, 0, 0, 0, 0, 0) for i, v in enumerate(values)]


# isolated double well at 10..13, far from the other traps
HOLD_SCHED = MotionSchedule(T=1, delta_t=0, d_min=1.2, d_LM0=6, d_MR0=5)


class TestImbalance:
    def test_max_difference(self):
        recs = _records(0.5 + 0.3 * np.sin(np.linspace(0, 10, 400)), dt=0.1)
        assert imbalance_amplitude(recs, Omega_R=1.0) == pytest.approx(0.6, abs=1e-3)

    def test_span_required(self):
        recs = _records(np.full(10, 0.5))
        with pytest.raises(ConfigurationError, match="tunneling periods"):
            imbalance_amplitude(recs, Omega_R=1.0)
        with pytest.raises(ConfigurationError):
            imbalance_amplitude([], Omega_R=1.0)

    def _hold(self, psi):
        pot = TripleTrapPotential(GRID.x, LAYOUT, HOLD_SCHED, freeze_after=0.0)
        obs = DiagnosticsObserver(GRID, pot)
        span = 3.2 * 2 * math.pi / 0.178
        _, recs = evolve(psi, pot(0.0), span, PropagationSettings(0.01, 20), [obs])
        return recs, pot

    def test_eigenstate_has_no_imbalance(self):
        c = TripleTrapPotential(GRID.x, LAYOUT, HOLD_SCHED).centers(0.0)
        e0, _ = double_well_eigenstates(GRID, LAYOUT, c)
        recs, _ = self._hold(e0)
        assert imbalance_amplitude(recs, 0.178) < 1e-3

    def test_single_well_oscillates_fully(self):
        c = TripleTrapPotential(GRID.x, LAYOUT, HOLD_SCHED).centers(0.0)
        recs, _ = self._hold(make_gaussian(GRID, c.x_RL, 1.0))
        assert imbalance_amplitude(recs, 0.178) > 0.95


class TestObserver:
    def test_record_fields(self):
        sched = MotionSchedule(T=20, delta_t=2, d_min=1.2, d_LM0=5, d_MR0=5)
        pot = TripleTrapPotential(GRID.x, LAYOUT, sched)
        obs = DiagnosticsObserver(GRID, pot)
        rec = obs(0.0, make_gaussian(GRID, -10.0, 1.0))
        assert rec.rho_L == pytest.approx(1, abs=1e-10)
        assert len(rec.as_row()) == len(CSV_COLUMNS)
        assert DiagnosticsRecord.from_row(rec.as_row()) == rec

    def test_translated_fidelity_matches_direct(self):
        sched = MotionSchedule(T=20, delta_t=2, d_min=1.2, d_LM0=5, d_MR0=5)
        pot = TripleTrapPotential(GRID.x, LAYOUT, sched)
        obs = DiagnosticsObserver(GRID, pot)
        t = 7.3
        c = pot.centers(t)
        psi = normalize(make_gaussian(GRID, c.x_RL, 1.0) + make_gaussian(GRID, c.x_RR, 1.0).scaled(-0.8j))
        direct = eigenstate_fidelities(psi, LAYOUT, c)
        assert obs.fidelities(psi, c) == pytest.approx(direct, abs=2e-4)
