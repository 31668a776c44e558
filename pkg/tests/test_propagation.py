"""Stepper, trajectory, and superoperator propagation oracles."""
import numpy as np
import pytest
import scipy.linalg
from scipy.integrate import solve_ivp

from fluxgate.hamiltonian import PulseSequence, SIGMA_Z
from fluxgate.propagation import (DecoherenceRates,
                                  decoherence_rates_from_T1_T2,
                                  step_unitary, propagate_unitary,
                                  propagate_superoperator, build_liouvillian,
                                  evolve_populations)
from conftest import rng


def random_hermitian(n, scale, seed):
    g = rng(seed)
    A = g.normal(size=(n, n)) + 1j * g.normal(size=(n, n))
    return scale * (A + A.conj().T) / 2


class _AffineStub:
    """Duck-typed stand-in for the reduced model in generic stepper tests."""

    def __init__(self, H0, D1, D2):
        self.H0, self.D1, self.D2 = H0, D1, D2
        self.dimension = H0.shape[0]

    def hamiltonian(self, fc1, fc2):
        return self.H0 + fc1 * self.D1 + fc2 * self.D2


class TestStepUnitary:
    def test_matches_scipy_expm(self):
        H = random_hermitian(4, 30.0, seed=3)
        dt = 5e-4
        np.testing.assert_allclose(step_unitary(H, dt),
                                   scipy.linalg.expm(-1j * H * dt),
                                   atol=1e-14)

    def test_diagonal_phase(self):
        omega = 20.7
        H = (omega / 2) * SIGMA_Z.astype(complex)
        dt = 1e-3
        U = step_unitary(H, dt)
        # sigma_z = diag(-1, 1): the ground state acquires e^{+i omega dt/2}
        np.testing.assert_allclose(
            np.diag(U), [np.exp(1j * omega * dt / 2),
                         np.exp(-1j * omega * dt / 2)], atol=1e-15)

    def test_unitarity(self):
        H = random_hermitian(25, 5000.0, seed=5)
        U = step_unitary(H, 5e-4)
        np.testing.assert_allclose(U @ U.conj().T, np.eye(25), atol=1e-10)

    def test_rejects_non_hermitian(self):
        H = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
        with pytest.raises(ValueError):
            step_unitary(H, 1e-3)


class TestUnitaryPropagation:
    def test_static_closed_form(self, reduced):
        n = 400
        dt = 5e-4
        pulses = PulseSequence(dt=dt, fc1=np.zeros(n), fc2=np.zeros(n))
        traj = propagate_unitary(reduced, pulses)
        exact = scipy.linalg.expm(-1j * reduced.H0 * n * dt)
        np.testing.assert_allclose(traj.final, exact, atol=1e-11)

    def test_unitarity_along_trajectory(self, reduced):
        g = rng(11)
        n = 300
        t = np.arange(n) * 5e-4
        pulses = PulseSequence(dt=5e-4,
                               fc1=1e-3 * np.sin(20.7 * t),
                               fc2=1e-3 * g.normal(size=n) * 0.3)
        traj = propagate_unitary(reduced, pulses)
        for U in traj.U[:: n // 7]:
            np.testing.assert_allclose(U @ U.conj().T, np.eye(4),
                                       atol=1e-10)

    def test_against_adaptive_integrator(self, reduced):
        """DOP853 on the same piecewise-constant Hamiltonian."""
        n = 200
        dt = 5e-4
        t = np.arange(n) * dt
        fc1 = 8e-4 * np.sin(20.7 * t) * np.sin(np.pi * t / (n * dt)) ** 2
        fc2 = 8e-4 * np.sin(51.8 * t) * np.sin(np.pi * t / (n * dt)) ** 2
        pulses = PulseSequence(dt=dt, fc1=fc1, fc2=fc2)

        def deriv(time, y):
            j = min(int(time / dt), n - 1)
            H = reduced.hamiltonian(fc1[j], fc2[j])
            return (-1j * H @ y.reshape(4, 4)).ravel()

        sol = solve_ivp(deriv, (0.0, n * dt), np.eye(4, dtype=complex).ravel(),
                        method="DOP853", rtol=1e-12, atol=1e-12,
                        max_step=dt)
        U_ref = sol.y[:, -1].reshape(4, 4)
        traj = propagate_unitary(reduced, pulses)
        np.testing.assert_allclose(traj.final, U_ref, atol=5e-9)

    def test_substep_self_convergence(self, reduced):
        """Halving the step on held values leaves U(T) essentially fixed."""
        n = 400
        dt = 5e-4
        t = np.arange(n) * dt
        fc1 = 9e-4 * np.sin(20.7 * t)
        fc2 = 9e-4 * np.sin(51.8 * t)
        coarse = propagate_unitary(reduced,
                                   PulseSequence(dt=dt, fc1=fc1, fc2=fc2))
        fine = propagate_unitary(reduced,
                                 PulseSequence(dt=dt / 2,
                                               fc1=np.repeat(fc1, 2),
                                               fc2=np.repeat(fc2, 2)))
        assert np.linalg.norm(coarse.final - fine.final) < 1e-8

    def test_dt_refinement_second_order(self):
        """Midpoint sampling of a smooth drive converges as O(dt^2)."""
        H0 = random_hermitian(4, 25.0, seed=21)
        D1 = random_hermitian(4, 4000.0, seed=22)
        D2 = random_hermitian(4, 9000.0, seed=23)
        model = _AffineStub(H0, D1, D2)
        T = 0.1

        def waveform(t):
            return (6e-4 * np.sin(150.0 * t) + 4e-4 * np.sin(83.0 * t),
                    5e-4 * np.cos(211.0 * t))

        def final_u(dt):
            n = int(round(T / dt))
            mid = (np.arange(n) + 0.5) * dt
            f1, f2 = waveform(mid)
            traj = propagate_unitary(model,
                                     PulseSequence(dt=dt, fc1=f1, fc2=f2))
            return traj.final

        U1, U2, U4 = final_u(T / 100), final_u(T / 200), final_u(T / 400)
        d12 = np.linalg.norm(U1 - U2)
        d24 = np.linalg.norm(U2 - U4)
        assert d12 / d24 == pytest.approx(4.0, rel=0.20)


class TestDecoherenceRates:
    def test_rates_from_paper_times(self):
        rates = decoherence_rates_from_T1_T2(13.0, 2.5)
        assert rates.gamma1 == pytest.approx(1.0 / 13000.0, rel=1e-12)
        # 1/T2 = 1/(2 T1) + gamma_phi
        gamma2 = 1.0 / 2500.0
        assert rates.gamma_phi == pytest.approx(gamma2 - rates.gamma1 / 2,
                                                rel=1e-12)

    def test_rejects_unphysical_t2(self):
        with pytest.raises(ValueError):
            decoherence_rates_from_T1_T2(1.0, 2.5)

    def test_zero_rates(self):
        z = DecoherenceRates.zero()
        assert z.gamma1 == 0.0 and z.gamma_phi == 0.0


class TestSuperoperator:
    def test_zero_rates_reduce_to_unitary(self, reduced):
        n = 250
        dt = 5e-4
        t = np.arange(n) * dt
        pulses = PulseSequence(dt=dt,
                               fc1=7e-4 * np.sin(20.7 * t),
                               fc2=7e-4 * np.sin(51.8 * t))
        sup = propagate_superoperator(reduced, pulses,
                                      DecoherenceRates.zero())
        traj = propagate_unitary(reduced, pulses)
        G_expected = np.kron(traj.final, traj.final.conj())
        assert np.abs(sup.final - G_expected).max() < 1e-9

    def test_trace_preservation(self, reduced):
        n = 200
        dt = 5e-4
        t = np.arange(n) * dt
        pulses = PulseSequence(dt=dt,
                               fc1=6e-4 * np.sin(20.7 * t),
                               fc2=np.zeros(n))
        rates = decoherence_rates_from_T1_T2(13.0, 2.5)
        sup = propagate_superoperator(reduced, pulses, rates)
        # tr rho is the overlap with vec(I); it must be conserved exactly
        tr_row = np.eye(4).ravel() @ sup.final
        np.testing.assert_allclose(tr_row, np.eye(4).ravel(), atol=1e-10)

    def test_liouvillian_annihilates_maximally_mixed_without_dissipation(
            self, reduced):
        H = reduced.hamiltonian(3e-4, -2e-4)
        L = build_liouvillian(H, DecoherenceRates.zero())
        rho = np.eye(4, dtype=complex).ravel() / 4.0
        np.testing.assert_allclose(L @ rho, 0.0, atol=1e-14)

    def test_coherence_decay_matches_t2(self, pair):
        """With the qubit-qubit coupling switched off, a superposition of
        qubit 1 decays at exactly 1/T2 while qubit 2 idles."""
        from dataclasses import replace
        from fluxgate.hamiltonian import ReducedModel
        coeffs = replace(pair["coeffs"], Lambda=np.zeros((2, 2)))
        model = ReducedModel(coeffs)
        rates = decoherence_rates_from_T1_T2(13.0, 2.5)
        n = 500
        dt = 5e-4
        pulses = PulseSequence(dt=dt, fc1=np.zeros(n), fc2=np.zeros(n))
        sup = propagate_superoperator(model, pulses, rates)
        # rho(0) = |+><+| (x) |g><g| in the g-first product basis
        plus = np.array([1.0, 1.0]) / np.sqrt(2)
        ground = np.array([1.0, 0.0])
        psi = np.kron(plus, ground)
        rho0 = np.outer(psi, psi.conj())
        rho_T = (sup.final @ rho0.ravel()).reshape(4, 4)
        T = n * dt
        gamma2 = rates.gamma1 / 2 + rates.gamma_phi
        # |ge><gg| coherence element: indices (0, 2) once qubit 2 idles in g
        coh0 = rho0[0, 2]
        coh_T = abs(rho_T[0, 2])
        assert coh_T / abs(coh0) == pytest.approx(np.exp(-gamma2 * T),
                                                  rel=1e-6)


class TestPopulationTraces:
    def test_initial_state_and_norm(self, multilevel):
        n = 60
        dt = 5e-4
        t = np.arange(n) * dt
        pulses = PulseSequence(dt=dt,
                               fc1=5e-4 * np.sin(20.7 * t),
                               fc2=5e-4 * np.sin(51.8 * t))
        times, traces = evolve_populations(multilevel, pulses, "ge")
        assert traces.shape == (n + 1, 5)
        np.testing.assert_allclose(traces[0], [0, 1, 0, 0, 0], atol=1e-14)
        np.testing.assert_allclose(traces.sum(axis=1), 1.0, atol=1e-10)

    def test_rejects_unknown_label(self, multilevel):
        pulses = PulseSequence(dt=5e-4, fc1=np.zeros(4), fc2=np.zeros(4))
        with pytest.raises(ValueError):
            evolve_populations(multilevel, pulses, "xx")
