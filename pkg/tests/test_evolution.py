import csv
import io
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from collapsim.evolution import (AUTO_STEP_DIVISOR, EvolutionConfig,
                                 IntegrationError, Method, analytic_isolated,
                                 convergence_order, derivative, evolve,
                                 trajectory_to_csv, trajectory_to_json,
                                 unitary_baseline)
from collapsim.states import (CollapseRateMatrix, DensityMatrix, Hamiltonian,
                              coherence_visibility, make_basis, pure_state)
from collapsim.units import HBAR, quantity

BASIS = make_basis("here", "there")


def rate_matrix(gamma, basis=BASIS):
    n = len(basis)
    m = np.zeros((n, n))
    m[0, 1] = m[1, 0] = gamma
    return CollapseRateMatrix(basis, m)


def equal_superposition(basis=BASIS):
    return pure_state(np.ones(len(basis)), basis)


def random_system(n, seed, h_scale=1.0, rate_scale=1.0):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    h = HBAR.value * h_scale * (a + a.conj().T) / 2.0
    r = np.abs(rng.normal(size=(n, n))) * rate_scale
    r = (r + r.T) / 2.0
    np.fill_diagonal(r, 0.0)
    b = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    rho = b @ b.conj().T
    rho = rho / np.trace(rho).real
    basis = make_basis(*(f"s{i}" for i in range(n)))
    return (DensityMatrix(basis, rho), Hamiltonian(basis, h),
            CollapseRateMatrix(basis, r))


class TestDerivative:
    def test_static_limit_is_zero(self):
        rhs = derivative(equal_superposition(), Hamiltonian.zero(BASIS),
                         rate_matrix(0.0))
        assert np.allclose(rhs, 0.0)

    def test_pure_damping(self):
        rhs = derivative(equal_superposition(), Hamiltonian.zero(BASIS),
                         rate_matrix(2.0))
        assert rhs[0, 1] == pytest.approx(-2.0 * 0.5)
        assert rhs[1, 0] == pytest.approx(-2.0 * 0.5)
        assert rhs[0, 0] == rhs[1, 1] == 0.0

    def test_diagonal_hamiltonian_rotates_phase(self):
        # [H, rho]_01 = (E0 - E1) rho_01, so drho_01/dt = +i (E/hbar) rho_01
        # for H = diag(0, E); the modulus stays constant.
        E = 2e-25
        H = Hamiltonian(BASIS, np.diag([0.0, E]).astype(complex))
        rhs = derivative(equal_superposition(), H, rate_matrix(0.0))
        assert rhs[0, 1] == pytest.approx(1j * (E / HBAR.value) * 0.5, rel=1e-12)

    def test_basis_mismatch_rejected(self):
        other = make_basis("a", "b")
        with pytest.raises(ValueError, match="basis"):
            derivative(equal_superposition(), Hamiltonian.zero(other),
                       rate_matrix(0.0))


class TestEvolve:
    def test_static_problem_constant(self):
        cfg = EvolutionConfig(t_end=quantity(1, "s"))
        traj = evolve(equal_superposition(), Hamiltonian.zero(BASIS),
                      rate_matrix(0.0), cfg)
        for state in traj.states:
            assert np.allclose(state.elements, 0.5)

    def test_decay_visibility_reaches_one_over_e(self):
        cfg = EvolutionConfig(t_end=quantity(1, "s"))
        traj = evolve(equal_superposition(), Hamiltonian.zero(BASIS),
                      rate_matrix(1.0), cfg)
        vis = coherence_visibility(traj.final_state(), "here", "there")
        assert traj.times[-1] == pytest.approx(1.0, rel=1e-12)
        assert vis == pytest.approx(math.exp(-1.0), rel=1e-8)

    def test_rabi_period_returns_to_start(self):
        omega = 2 * math.pi
        H = Hamiltonian(BASIS, (HBAR.value * omega / 2)
                        * np.array([[0, 1], [1, 0]], dtype=complex))
        rho0 = pure_state([1, 0], BASIS)
        cfg = EvolutionConfig(t_end=quantity(1.0, "s"),
                              dt=quantity(1 / 512, "s"), record_stride=64)
        traj = evolve(rho0, H, rate_matrix(0.0), cfg)
        # closed form rho_00(t) = cos^2(omega t / 2)
        for t, state in zip(traj.times, traj.states):
            assert state.elements[0, 0].real == pytest.approx(
                math.cos(omega * t / 2) ** 2, abs=1e-9)

    def test_final_time_reaches_t_end(self):
        cfg = EvolutionConfig(t_end=quantity(0.77, "s"))
        traj = evolve(equal_superposition(), Hamiltonian.zero(BASIS),
                      rate_matrix(1.0), cfg)
        dt = traj.times[1] - traj.times[0]
        assert traj.times[-1] >= 0.77 - dt

    def test_times_strictly_increasing(self):
        cfg = EvolutionConfig(t_end=quantity(1, "s"), record_stride=7)
        traj = evolve(equal_superposition(), Hamiltonian.zero(BASIS),
                      rate_matrix(1.0), cfg)
        assert np.all(np.diff(traj.times) > 0)
        assert len(traj.states) == len(traj.times) == len(traj.flags)

    def test_invalid_initial_state_rejected(self):
        bad = DensityMatrix(BASIS, np.diag([0.9, 0.3]))
        cfg = EvolutionConfig(t_end=quantity(1, "s"))
        with pytest.raises(ValueError, match="density"):
            evolve(bad, Hamiltonian.zero(BASIS), rate_matrix(0.0), cfg)

    @pytest.mark.filterwarnings("ignore::RuntimeWarning")
    def test_overflow_reports_failing_time(self):
        # a wildly too-large explicit step makes Euler blow up
        cfg = EvolutionConfig(t_end=quantity(2000, "s"), dt=quantity(4, "s"),
                              method=Method.EULER)
        with pytest.raises(IntegrationError) as err:
            evolve(equal_superposition(), Hamiltonian.zero(BASIS),
                   rate_matrix(200.0), cfg)
        assert err.value.time > 0


class TestAutoStep:
    def test_auto_uses_fastest_timescale(self):
        cfg = EvolutionConfig(t_end=quantity(10, "s"))
        traj = evolve(equal_superposition(), Hamiltonian.zero(BASIS),
                      rate_matrix(1.0), cfg)
        dt = traj.times[1] - traj.times[0]
        assert dt == pytest.approx(1.0 / AUTO_STEP_DIVISOR)

    def test_auto_uses_hamiltonian_scale(self):
        H = Hamiltonian(BASIS, np.diag([0.0, 2.0 * HBAR.value]).astype(complex))
        cfg = EvolutionConfig(t_end=quantity(10, "s"))
        traj = evolve(equal_superposition(), H, rate_matrix(0.0), cfg)
        dt = traj.times[1] - traj.times[0]
        assert dt == pytest.approx(0.5 / AUTO_STEP_DIVISOR)


class TestAnalyticIsolated:
    def test_time_zero_identity(self):
        rho0 = equal_superposition()
        out = analytic_isolated(rho0, rate_matrix(2.0), quantity(0, "s"))
        assert np.array_equal(out.elements, rho0.elements)

    def test_single_decay_factor(self):
        out = analytic_isolated(equal_superposition(), rate_matrix(2.0),
                                quantity(0.5, "s"))
        assert out.elements[0, 1] == pytest.approx(0.5 * math.exp(-1.0), rel=1e-12)
        assert out.elements[0, 0] == pytest.approx(0.5)

    def test_zero_rates_static(self):
        rho0 = equal_superposition()
        out = analytic_isolated(rho0, rate_matrix(0.0), quantity(100, "s"))
        assert np.array_equal(out.elements, rho0.elements)

    def test_negative_time_rejected(self):
        with pytest.raises(ValueError):
            analytic_isolated(equal_superposition(), rate_matrix(1.0),
                              quantity(-1, "s"))


class TestOracleAgreement:
    def test_evolve_matches_analytic_at_ten_lifetimes(self):
        gamma = 1.0
        cfg = EvolutionConfig(t_end=quantity(10.0 / gamma, "s"), record_stride=64)
        traj = evolve(equal_superposition(), Hamiltonian.zero(BASIS),
                      rate_matrix(gamma), cfg)
        for t, state in zip(traj.times, traj.states):
            exact = analytic_isolated(equal_superposition(), rate_matrix(gamma),
                                      quantity(t, "s")).elements
            err = np.abs(state.elements - exact)
            scale = np.maximum(np.abs(exact), 1e-300)
            assert np.max(err / scale) <= 1e-8

    def test_oracle_agreement_heterogeneous_rates(self):
        basis = make_basis("a", "b", "c")
        rho0 = pure_state([1, 1, 1], basis)
        r = np.array([[0.0, 2.0, 0.5], [2.0, 0.0, 1.0], [0.5, 1.0, 0.0]])
        rates = CollapseRateMatrix(basis, r)
        cfg = EvolutionConfig(t_end=quantity(5.0, "s"),   # 10x the fastest tau
                              record_stride=64)
        traj = evolve(rho0, Hamiltonian.zero(basis), rates, cfg)
        exact = analytic_isolated(rho0, rates,
                                  quantity(float(traj.times[-1]), "s")).elements
        rel = np.abs(traj.final_state().elements - exact) / np.abs(exact)
        assert np.max(rel) <= 1e-8

    def test_phase_decay_factorization(self):
        # diagonal H and one finite rate: |rho_01(t)| = |rho_01(0)| e^(-G t)
        gap = 3.0 * HBAR.value
        H = Hamiltonian(BASIS, np.diag([0.0, gap]).astype(complex))
        gamma = 1.0
        cfg = EvolutionConfig(t_end=quantity(2.0, "s"), record_stride=32)
        traj = evolve(equal_superposition(), H, rate_matrix(gamma), cfg)
        for t, state in zip(traj.times, traj.states):
            assert abs(state.elements[0, 1]) == pytest.approx(
                0.5 * math.exp(-gamma * t), rel=1e-8)

    def test_off_diagonal_moduli_non_increasing(self):
        gap = 2.0 * HBAR.value
        H = Hamiltonian(BASIS, np.diag([0.0, gap]).astype(complex))
        cfg = EvolutionConfig(t_end=quantity(2.0, "s"))
        traj = evolve(equal_superposition(), H, rate_matrix(0.7), cfg)
        moduli = [abs(s.elements[0, 1]) for s in traj.states]
        assert all(b <= a + 1e-10 for a, b in zip(moduli, moduli[1:]))


class TestUnitaryBaseline:
    def test_matches_zero_rates_bit_for_bit(self):
        omega = 2 * math.pi
        H = Hamiltonian(BASIS, (HBAR.value * omega / 2)
                        * np.array([[0, 1], [1, 0]], dtype=complex))
        rho0 = pure_state([1, 0], BASIS)
        cfg = EvolutionConfig(t_end=quantity(1, "s"), dt=quantity(0.01, "s"))
        baseline = unitary_baseline(rho0, H, cfg)
        explicit = evolve(rho0, H, rate_matrix(0.0), cfg)
        for a, b in zip(baseline.states, explicit.states):
            assert np.array_equal(a.elements, b.elements)

    def test_purity_constant(self):
        omega = 2 * math.pi
        H = Hamiltonian(BASIS, (HBAR.value * omega / 2)
                        * np.array([[0, 1j], [-1j, 0]], dtype=complex))
        rho0 = pure_state([1, 0], BASIS)
        cfg = EvolutionConfig(t_end=quantity(1, "s"), dt=quantity(1 / 512, "s"),
                              record_stride=64)
        traj = unitary_baseline(rho0, H, cfg)
        for state in traj.states:
            purity = np.trace(state.elements @ state.elements).real
            assert purity == pytest.approx(1.0, abs=1e-10)

    def test_coherence_survives_without_rates(self):
        cfg = EvolutionConfig(t_end=quantity(5, "s"))
        traj = unitary_baseline(equal_superposition(), Hamiltonian.zero(BASIS),
                                cfg)
        assert coherence_visibility(traj.final_state(), "here", "there") \
            == pytest.approx(1.0, rel=1e-12)


class TestConvergence:
    def test_rk4_fourth_order(self):
        order = convergence_order(Method.RK4)
        assert order == pytest.approx(4.0, abs=0.3)

    def test_euler_first_order(self):
        order = convergence_order(Method.EULER)
        assert order == pytest.approx(1.0, abs=0.2)

    def test_halving_dt_cuts_rk4_error_16x(self):
        # restatement of order 4 via the raw error ratio
        order = convergence_order(Method.RK4, refinements=1)
        assert 2.0 ** order == pytest.approx(16.0, rel=0.25)


@settings(deadline=None, max_examples=20)
@given(st.integers(min_value=2, max_value=4), st.integers(min_value=0, max_value=10 ** 6))
def test_trace_and_hermiticity_preserved(n, seed):
    rho0, H, rates = random_system(n, seed)
    cfg = EvolutionConfig(t_end=quantity(1.0, "s"), dt=quantity(1e-3, "s"),
                          record_stride=100)
    traj = evolve(rho0, H, rates, cfg)
    for flag in traj.flags:
        assert flag.trace_drift <= 1e-10
        assert flag.hermiticity_defect <= 1e-10


def test_two_level_positivity_never_below_floor():
    cfg = EvolutionConfig(t_end=quantity(3, "s"))
    traj = evolve(equal_superposition(), Hamiltonian.zero(BASIS),
                  rate_matrix(1.0), cfg)
    for flag in traj.flags:
        assert flag.min_eigenvalue >= cfg.positivity_floor
        assert flag.warnings == ()


def test_three_level_positivity_violation_is_flagged():
    # Heterogeneous rates on a fully coherent 3-state superposition push an
    # eigenvalue negative; the sample is flagged, not repaired or dropped.
    basis = make_basis("a", "b", "c")
    rho0 = pure_state([1, 1, 1], basis)
    rates = np.zeros((3, 3))
    rates[0, 1] = rates[1, 0] = 50.0
    cfg = EvolutionConfig(t_end=quantity(1, "s"))
    traj = evolve(rho0, Hamiltonian.zero(basis),
                  CollapseRateMatrix(basis, rates), cfg)
    final_flag = traj.flags[-1]
    assert final_flag.min_eigenvalue < -1e-6
    assert any("below floor" in w for w in final_flag.warnings)
    # the state itself still carries the un-projected eigenvalue
    eigs = np.linalg.eigvalsh(traj.final_state().elements)
    assert eigs.min() < -1e-6


class TestExports:
    def make_trajectory(self):
        cfg = EvolutionConfig(t_end=quantity(1, "s"), dt=quantity(0.01, "s"),
                              record_stride=25)
        return evolve(equal_superposition(), Hamiltonian.zero(BASIS),
                      rate_matrix(1.0), cfg)

    def test_csv_columns(self):
        traj = self.make_trajectory()
        text = trajectory_to_csv(traj, ("here", "there"))
        rows = list(csv.reader(io.StringIO(text)))
        assert rows[0] == ["time_s",
                           "rho_00_re", "rho_00_im", "rho_01_re", "rho_01_im",
                           "rho_10_re", "rho_10_im", "rho_11_re", "rho_11_im",
                           "visibility", "min_eigenvalue"]
        assert len(rows) == 1 + len(traj.times)
        last = rows[-1]
        assert float(last[0]) == pytest.approx(1.0)
        assert float(last[-2]) == pytest.approx(math.exp(-1.0), rel=1e-6)

    def test_csv_is_crlf_terminated(self):
        text = trajectory_to_csv(self.make_trajectory())
        assert text.endswith("\r\n")
        assert "\r\n" in text

    def test_json_document(self):
        traj = self.make_trajectory()
        doc = trajectory_to_json(traj, ("here", "there"))
        assert doc["schema"] == "trajectory/1"
        assert doc["basis"] == ["here", "there"]
        assert doc["pair"] == ["here", "there"]
        assert doc["samples"][0]["time"] == {"value": 0.0, "unit": "s"}
        assert doc["samples"][-1]["visibility"] == pytest.approx(
            math.exp(-1.0), rel=1e-6)
