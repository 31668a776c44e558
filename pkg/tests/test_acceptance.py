"""End-to-end acceptance run: derives the circuit coefficients, synthesizes
all six gates with the shipped default settings, and checks every headline
number the package promises.  Each criterion is marked so the terminal
summary prints one pass/fail line per criterion."""
import time

import numpy as np
import pytest

from fluxgate.circuit import TWO_PI, derive_pair_coefficients
from fluxgate.hamiltonian import ReducedModel, PulseSequence
from fluxgate.propagation import (propagate_unitary, propagate_superoperator,
                                  evolve_populations,
                                  decoherence_rates_from_T1_T2,
                                  DecoherenceRates, COMPUTATIONAL_LABELS)
from fluxgate.krotov import (OptimizationConfig, optimize_gate,
                             optimize_gate_dissipative, gate_error_eta,
                             backward_propagate_costate,
                             step_response_matrices,
                             _unitary_system, _build_steps)
from fluxgate.gates import (make_target, GATE_NAMES, SubspaceProjector,
                            projected_error_eta_p, dissipative_error_eta_d,
                            resonant_pi_pulse_baseline)
from fluxgate.cli import load_config, optimizer_config, build_guess
from conftest import make_designs, rng

SINGLE_GATES = ("X1", "Z1", "X2", "Z2")
CNOT_GATES = ("CNOT12", "CNOT21")

# where each computational state must end up, by gate
STATE_MAPS = {
    "X1": {"gg": "eg", "ge": "ee", "eg": "gg", "ee": "ge"},
    "CNOT12": {"gg": "gg", "ge": "ge", "eg": "ee", "ee": "eg"},
}


@pytest.fixture(scope="session")
def shipped():
    return load_config()


@pytest.fixture(scope="session")
def optimized(pair, shipped):
    """All six gates synthesized with the bundled default settings."""
    cfg = shipped
    coeffs = pair["coeffs"]
    model = ReducedModel(coeffs)
    seed = int(cfg.get("seed", 0))
    out = {}
    for gate in GATE_NAMES:
        T = float(cfg["gate_times_ns"][gate])
        opt_raw, opt = optimizer_config(cfg, gate)
        guess = build_guess(coeffs, gate, T, opt.dt, opt_raw, seed)
        t0 = time.time()
        run = optimize_gate(model, make_target(gate), opt, guess)
        out[gate] = {"run": run, "wall": time.time() - t0, "T": T,
                     "opt": opt, "opt_raw": opt_raw, "model": model}
    return out


@pytest.fixture(scope="session")
def dissipative(pair, shipped, optimized):
    """Second-stage runs against the decohering model, from the unitary
    optima."""
    cfg = shipped
    deco = cfg["decoherence"]
    rates = decoherence_rates_from_T1_T2(float(deco["T1_us"]),
                                         float(deco["T2_us"]))
    model = ReducedModel(pair["coeffs"])
    out = {}
    for gate in GATE_NAMES:
        res = optimized[gate]
        opt_raw, opt = res["opt_raw"], res["opt"]
        d_opt = OptimizationConfig(
            shape_over_weight=opt.shape_over_weight,
            stop_error=float(opt_raw["dissipative_stop_error"]),
            max_iterations=int(opt_raw["dissipative_max_iterations"]),
            dt=opt.dt, amplitude_clamp=opt.amplitude_clamp,
            halving_recovery=opt.halving_recovery)
        t0 = time.time()
        run = optimize_gate_dissipative(model, make_target(gate), rates,
                                        d_opt, res["run"].final_pulses)
        out[gate] = {"run": run, "wall": time.time() - t0, "rates": rates}
    return out


def leakage_eta_p(multilevel, pulses, gate):
    final = propagate_unitary(multilevel, pulses).final
    return projected_error_eta_p(final, make_target(gate))


@pytest.mark.criterion(num=1, label="coefficient derivation within "
                                    "published windows, under 30 s")
class TestCoefficientDerivation:
    def test_windows_and_runtime(self):
        d1, d2, coupling = make_designs()
        t0 = time.time()
        coeffs, sols, elems = derive_pair_coefficients(d1, d2, coupling)
        elapsed = time.time() - t0
        assert elapsed < 30.0
        assert coeffs.omega[0] / TWO_PI == pytest.approx(3.30, rel=0.02)
        assert coeffs.omega[1] / TWO_PI == pytest.approx(8.24, rel=0.02)
        assert coeffs.Lambda[1, 1] / TWO_PI == pytest.approx(0.4, rel=0.05)
        assert coeffs.kappa2_slope[0] / TWO_PI \
            == pytest.approx(-1.02e3, rel=0.05)
        assert coeffs.kappa2_slope[1] / TWO_PI \
            == pytest.approx(-2.57e3, rel=0.05)
        assert coeffs.chi1_slope[0] / TWO_PI \
            == pytest.approx(4.4e-3, rel=0.10)
        assert coeffs.Xi_slope[0][0][1] / TWO_PI \
            == pytest.approx(8.22e-2, rel=0.10)
        assert coeffs.Theta_slope[0, 0] / TWO_PI \
            == pytest.approx(1.66e-2, rel=0.10)


@pytest.mark.criterion(num=2, label="unitary synthesis below 1e-10 for all "
                                    "six gates, monotone cost")
class TestUnitarySynthesis:
    @pytest.mark.parametrize("gate", GATE_NAMES)
    def test_converges_below_target(self, optimized, gate):
        res = optimized[gate]
        run = res["run"]
        assert run.converged, \
            "%s: eta %.3e after %d iterations (%s)" % (
                gate, run.final_eta, int(run.iterations[-1, 0]),
                run.termination_reason)
        assert run.final_eta < 1e-10
        assert res["wall"] < 1800.0
        J = run.iterations[:, 2]
        assert np.all(np.diff(J) <= 1e-12), \
            "%s: accepted cost sequence must not increase" % gate

    @pytest.mark.parametrize("gate", GATE_NAMES)
    def test_pulses_respect_amplitude_bound(self, optimized, gate):
        res = optimized[gate]
        pulses = res["run"].final_pulses
        bound = res["opt"].amplitude_clamp
        assert np.abs(pulses.fc1).max() <= bound + 1e-18
        assert np.abs(pulses.fc2).max() <= bound + 1e-18
        assert pulses.n_steps == int(round(res["T"] / res["opt"].dt))


@pytest.mark.criterion(num=3, label="25-level leakage eta_P at or below "
                                    "1e-6 singles, 1e-5 CNOTs")
class TestLeakageValidation:
    @pytest.mark.parametrize("gate", SINGLE_GATES)
    def test_single_qubit_leakage(self, optimized, multilevel, gate):
        eta_p = leakage_eta_p(multilevel, optimized[gate]["run"].final_pulses,
                              gate)
        assert eta_p <= 1e-6, "%s: eta_P %.3e" % (gate, eta_p)

    @pytest.mark.parametrize("gate", CNOT_GATES)
    def test_cnot_leakage(self, optimized, multilevel, gate):
        eta_p = leakage_eta_p(multilevel, optimized[gate]["run"].final_pulses,
                              gate)
        assert eta_p <= 1e-5, "%s: eta_P %.3e" % (gate, eta_p)


@pytest.mark.criterion(num=4, label="resonant baseline window and >=1000x "
                                    "leakage improvement for X1")
class TestBaselineContrast:
    def test_baseline_and_improvement(self, pair, optimized, multilevel):
        model = ReducedModel(pair["coeffs"])
        pulses, reference, eta = resonant_pi_pulse_baseline(pair["coeffs"],
                                                           model)
        assert 1.6e-3 <= eta <= 6.6e-3
        proj = SubspaceProjector(n_levels=5)
        PU = proj.project(propagate_unitary(multilevel, pulses).final)
        diff = reference - PU
        baseline_eta_p = float(np.trace(diff.conj().T @ diff).real / 8.0)
        optimized_eta_p = leakage_eta_p(
            multilevel, optimized["X1"]["run"].final_pulses, "X1")
        assert baseline_eta_p >= 1e3 * optimized_eta_p, \
            "baseline eta_P %.3e vs optimized %.3e" % (baseline_eta_p,
                                                       optimized_eta_p)


@pytest.mark.criterion(num=5, label="dissipative eta_D at or below 1e-5 "
                                    "singles, 1e-4 CNOTs")
class TestDecoherence:
    @pytest.mark.parametrize("gate", SINGLE_GATES)
    def test_single_qubit_eta_d(self, dissipative, gate):
        run = dissipative[gate]["run"]
        assert run.final_eta <= 1e-5, "%s: eta_D %.3e" % (gate,
                                                          run.final_eta)

    @pytest.mark.parametrize("gate", CNOT_GATES)
    def test_cnot_eta_d(self, dissipative, gate):
        run = dissipative[gate]["run"]
        assert run.final_eta <= 1e-4, "%s: eta_D %.3e" % (gate,
                                                          run.final_eta)


@pytest.mark.criterion(num=6, label="property suite: unitarity, limits, "
                                    "gradients, dt order, determinism")
class TestPropertySuite:
    def test_unitarity_along_trajectory(self, pair, optimized):
        model = ReducedModel(pair["coeffs"])
        traj = propagate_unitary(model,
                                 optimized["CNOT12"]["run"].final_pulses)
        eye = np.eye(4)
        for U in traj.U[:: max(1, len(traj.U) // 50)]:
            assert np.abs(U.conj().T @ U - eye).max() < 1e-10

    def test_zero_rate_superoperator_matches_unitary(self, pair, optimized):
        model = ReducedModel(pair["coeffs"])
        pulses = optimized["X1"]["run"].final_pulses
        U = propagate_unitary(model, pulses).final
        G = propagate_superoperator(model, pulses,
                                    DecoherenceRates.zero()).final
        assert np.abs(G - np.kron(U, U.conj())).max() < 1e-9

    def test_analytic_response_matches_finite_differences(self, reduced,
                                                          pair):
        from fluxgate.krotov import default_initial_guess
        guess = default_initial_guess(pair["coeffs"].omega, 0.2, 5e-4,
                                      amplitude=7e-4)
        O = make_target("CNOT12").matrix
        system = _unitary_system(reduced, O)
        n, d = guess.n_steps, 4
        steps = _build_steps(system, guess)
        B = backward_propagate_costate(O, steps)
        prefixes = np.empty((n + 1, d, d), dtype=complex)
        prefixes[0] = np.eye(d)
        for j in range(n):
            prefixes[j + 1] = steps[j] @ prefixes[j]
        j = n // 3
        f1, f2 = guess.fc1[j], guess.fc2[j]
        H = (system.H0 + f1 * system.D1 + f2 * system.D2
             + f1 * f2 * system.D12)
        _, Y1, _ = step_response_matrices(H, system.D1 + f2 * system.D12,
                                          system.D2 + f1 * system.D12,
                                          guess.dt)
        analytic = -np.sum((B[j + 1].conj() * (Y1 @ prefixes[j])).real) / d

        def eta_at(eps):
            p = guess.copy()
            p.fc1[j] += eps
            shifted = _build_steps(system, p)
            U = np.eye(d, dtype=complex)
            for k in range(n):
                U = shifted[k] @ U
            return gate_error_eta(U, O)

        fd = (eta_at(1e-8) - eta_at(-1e-8)) / 2e-8
        assert analytic == pytest.approx(fd, rel=1e-2)

    def test_parity_nulls(self, pair):
        coeffs = pair["coeffs"]
        scale = np.abs(coeffs.kappa2_slope).max()
        assert np.abs(coeffs.kappa1_slope).max() / scale < 1e-10
        assert np.abs(coeffs.lambda1).max() \
            / np.abs(coeffs.lambda2).max() < 1e-10
        assert np.abs(coeffs.Omega2).max() \
            / np.abs(coeffs.Omega1).max() < 1e-10

    def test_dt_halving_second_order(self, reduced):
        T = 0.05
        amp = 5e-4

        def final_at(dt):
            n = int(round(T / dt))
            t = (np.arange(n) + 0.5) * dt
            fc1 = amp * np.sin(20.7 * t) * np.sin(np.pi * t / T) ** 2
            fc2 = amp * np.sin(51.8 * t) * np.sin(np.pi * t / T) ** 2
            pulses = PulseSequence(dt=dt, fc1=fc1, fc2=fc2)
            return propagate_unitary(reduced, pulses).final

        U1, U2, U4 = (final_at(dt) for dt in (1e-3, 5e-4, 2.5e-4))
        d12 = np.abs(U1 - U2).max()
        d24 = np.abs(U2 - U4).max()
        assert d12 / d24 == pytest.approx(4.0, rel=0.20)

    def test_determinism_under_fixed_seed(self, pair):
        model = ReducedModel(pair["coeffs"])
        target = make_target("Z1")
        cfg = OptimizationConfig(dt=5e-4, max_iterations=40,
                                 stop_error=1e-12)
        from fluxgate.krotov import default_initial_guess
        runs = []
        for _ in range(2):
            guess = default_initial_guess(pair["coeffs"].omega, 0.2, 5e-4,
                                          seed=5, perturbation=0.3)
            runs.append(optimize_gate(model, target, cfg, guess))
        assert np.array_equal(runs[0].iterations, runs[1].iterations)
        assert np.array_equal(runs[0].final_pulses.fc1,
                              runs[1].final_pulses.fc1)
        assert np.array_equal(runs[0].final_pulses.fc2,
                              runs[1].final_pulses.fc2)


@pytest.mark.criterion(num=7, label="multi-level state transfer endpoints "
                                    "for X1 and CNOT12")
class TestStateEvolutionEndpoints:
    @pytest.mark.parametrize("start", COMPUTATIONAL_LABELS)
    def test_x1_maps_basis_states(self, optimized, multilevel, start):
        pulses = optimized["X1"]["run"].final_pulses
        times, traces = evolve_populations(multilevel, pulses, start)
        kind = COMPUTATIONAL_LABELS.index(STATE_MAPS["X1"][start])
        assert traces[-1, kind] >= 1.0 - 1e-6, \
            "X1 %s -> %s: population %.8f" % (start, STATE_MAPS["X1"][start],
                                              traces[-1, kind])

    @pytest.mark.parametrize("start", COMPUTATIONAL_LABELS)
    def test_cnot12_truth_table(self, optimized, multilevel, start):
        pulses = optimized["CNOT12"]["run"].final_pulses
        times, traces = evolve_populations(multilevel, pulses, start)
        kind = COMPUTATIONAL_LABELS.index(STATE_MAPS["CNOT12"][start])
        assert traces[-1, kind] >= 1.0 - 1e-5, \
            "CNOT12 %s -> %s: population %.8f" % (
                start, STATE_MAPS["CNOT12"][start], traces[-1, kind])
