"""Monotone iterative pulse optimization for unitary and dissipative targets.

Each iteration sweeps once through time: the costate is propagated
backward from the target using the previous iteration's steps, then the
forward pass updates channel 1 and channel 2 at every sample (sequentially,
so the bilinear flux-flux term always sees the other channel's current
value), clamps, and rebuilds the step before moving on.  The recorded cost

    J = eta + (lambda/S) sum_l sum_j (f_l[j] - f_l_prev[j])^2 dt

is non-increasing; a rise beyond tolerance either aborts the run (default)
or triggers step-size halving with revert when recovery is enabled.  After
enough clean sweeps the step size grows back toward its configured value.

The dissipative variant runs the identical loop on the vectorized channel:
generator pieces i*L replace the Hamiltonian pieces, the target becomes
O kron O*, and the error is evaluated with the general (non-unitary)
trace-distance formula.
"""
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _kernel
from .hamiltonian import PulseSequence, ReducedModel
from .propagation import DecoherenceRates, build_liouvillian

TWO_PI = 2.0 * np.pi

# S/lambda default: 1e-10 in inverse-GHz units, expressed in (rad/ns)^-1.
DEFAULT_SHAPE_OVER_WEIGHT = 1e-10 / TWO_PI


@dataclass
class OptimizationConfig:
    shape_over_weight: float = DEFAULT_SHAPE_OVER_WEIGHT
    stop_error: float = 1e-10
    max_iterations: int = 100000
    dt: float = 5e-4
    amplitude_clamp: float = 1e-3
    halving_recovery: bool = False
    monotonicity_tolerance: float = 1e-12
    regrow_after: int = 30
    max_halvings_per_step: int = 60

    def __post_init__(self):
        if min(self.shape_over_weight, self.stop_error, self.dt,
               self.amplitude_clamp) <= 0:
            raise ValueError("config scales must be positive")
        if not self.stop_error < 1:
            raise ValueError("stop_error must be below 1")


@dataclass
class OptimizationRun:
    """Accepted-iteration history plus the final state of one run."""
    iterations: np.ndarray          # rows (index, eta, J)
    final_pulses: PulseSequence
    final_propagator: np.ndarray
    converged: bool
    termination_reason: str
    n_halvings: int = 0
    shape_over_weight_final: float = None

    @property
    def final_eta(self):
        return float(self.iterations[-1, 1])


def gate_error_eta(U: np.ndarray, O: np.ndarray) -> float:
    """(1/2d) Tr[(O-U)^dag (O-U)]; 1 - Re Tr(O^dag U)/d for unitary U."""
    if U.shape != O.shape:
        raise ValueError("dimension mismatch between propagator and target")
    d = U.shape[0]
    diff = O - U
    return float(np.trace(diff.conj().T @ diff).real / (2.0 * d))


def cost_J(eta: float, pulses: PulseSequence, ref_pulses: PulseSequence,
           config: OptimizationConfig) -> float:
    """Error plus the weighted squared pulse change against the reference."""
    if pulses.n_steps != ref_pulses.n_steps or pulses.dt != ref_pulses.dt:
        raise ValueError("pulse grids differ")
    pen = (np.sum((pulses.fc1 - ref_pulses.fc1) ** 2)
           + np.sum((pulses.fc2 - ref_pulses.fc2) ** 2))
    return eta + pen * pulses.dt / config.shape_over_weight


@dataclass
class _AffineSystem:
    """Generator pieces in the form H0 + f1 D1 + f2 D2 + f1 f2 D12."""
    H0: np.ndarray
    D1: np.ndarray
    D2: np.ndarray
    D12: np.ndarray
    O: np.ndarray

    @property
    def dim(self):
        return self.O.shape[0]

    def as_args(self):
        c = np.ascontiguousarray
        return (c(self.H0.astype(np.complex128)),
                c(self.D1.astype(np.complex128)),
                c(self.D2.astype(np.complex128)),
                c(self.D12.astype(np.complex128)))


def _unitary_system(model: ReducedModel, target_matrix: np.ndarray):
    return _AffineSystem(H0=model.H0, D1=model.D1, D2=model.D2,
                         D12=model.D12,
                         O=np.ascontiguousarray(target_matrix,
                                                dtype=np.complex128))


def _dissipative_system(model: ReducedModel, rates: DecoherenceRates,
                        target_matrix: np.ndarray):
    """i*L pieces so that exp(-i H_eff dt) equals exp(L dt).

    The drive derivatives are commutator generators and come out Hermitian,
    so the same update expression applies unchanged.
    """
    d = model.dimension
    eye = np.eye(d)

    def commutator_piece(D):
        return np.kron(D, eye) - np.kron(eye, D.T)

    L0 = build_liouvillian(model.H0, rates)
    return _AffineSystem(H0=1j * L0,
                         D1=commutator_piece(model.D1),
                         D2=commutator_piece(model.D2),
                         D12=commutator_piece(model.D12),
                         O=np.kron(target_matrix, target_matrix.conj()))


def _build_steps(system: _AffineSystem, pulses: PulseSequence) -> np.ndarray:
    n = pulses.n_steps
    d = system.dim
    steps = np.empty((n, d, d), dtype=np.complex128)
    _kernel.build_steps(pulses.fc1, pulses.fc2, *system.as_args(),
                        pulses.dt, steps)
    return steps


def backward_propagate_costate(target_matrix: np.ndarray,
                               steps: np.ndarray) -> np.ndarray:
    """Costate at every grid point, terminal condition B[n] = target."""
    n, d = steps.shape[0], steps.shape[1]
    B = np.empty((n + 1, d, d), dtype=np.complex128)
    B[n] = target_matrix
    for j in range(n - 1, -1, -1):
        B[j] = steps[j].conj().T @ B[j + 1]
    return B


def krotov_sweep(model: ReducedModel, pulses_prev: PulseSequence,
                 B_prev: np.ndarray, config: OptimizationConfig,
                 target_matrix: np.ndarray):
    """One explicit sweep through the numpy path; returns
    (pulses_next, forward step array, eta, J).

    B_prev must be the grid-point costate built from the previous forward
    steps; entry j+1 pairs with step j in the update.
    """
    system = _unitary_system(model, target_matrix)
    f1 = pulses_prev.fc1.copy()
    f2 = pulses_prev.fc2.copy()
    steps = _build_steps(system, pulses_prev)
    S = np.ones(pulses_prev.n_steps)
    eta, J = _sweep_reference(f1, f2, steps, S, system, pulses_prev.dt,
                              config.shape_over_weight,
                              config.amplitude_clamp, B_prev)
    return (PulseSequence(dt=pulses_prev.dt, fc1=f1, fc2=f2), steps, eta, J)


def step_response_matrices(H, E1, E2, dt):
    """Step exp(-i H dt) (order-8 Taylor) and its exact derivatives along
    E1 and E2, via the companion Horner recursion."""
    d = H.shape[0]
    X = np.empty((d, d), dtype=np.complex128)
    Y1 = np.empty((d, d), dtype=np.complex128)
    Y2 = np.empty((d, d), dtype=np.complex128)
    t1 = np.empty((d, d), dtype=np.complex128)
    t2 = np.empty((d, d), dtype=np.complex128)
    _kernel.step_derivatives(np.ascontiguousarray(H, dtype=complex),
                             np.ascontiguousarray(E1, dtype=complex),
                             np.ascontiguousarray(E2, dtype=complex),
                             dt, X, Y1, Y2, t1, t2)
    return X, Y1, Y2


def _sweep_reference(f1, f2, steps, S, system: _AffineSystem, dt, sl, clamp,
                     B_grid=None):
    """Plain-numpy mirror of the compiled sweep (same math, same order)."""
    n = len(f1)
    d = system.dim
    if B_grid is None:
        B_grid = backward_propagate_costate(system.O, steps)
    U = np.eye(d, dtype=np.complex128)
    work = np.empty((d, d), dtype=np.complex128)
    pen = 0.0
    for j in range(n):
        H = (system.H0 + f1[j] * system.D1 + f2[j] * system.D2
             + (f1[j] * f2[j]) * system.D12)
        E1 = system.D1 + f2[j] * system.D12
        E2 = system.D2 + f1[j] * system.D12
        X, Y1, Y2 = step_response_matrices(H, E1, E2, dt)
        g1 = np.sum((B_grid[j + 1].conj() * (Y1 @ U)).real) / (d * dt)
        new1 = float(np.clip(f1[j] + sl * S[j] * g1, -clamp, clamp))
        df1 = new1 - f1[j]
        f1[j] = new1
        g2 = np.sum((B_grid[j + 1].conj() * (Y2 @ U)).real) / (d * dt)
        new2 = float(np.clip(f2[j] + sl * S[j] * g2, -clamp, clamp))
        df2 = new2 - f2[j]
        f2[j] = new2
        pen += (df1 * df1 + df2 * df2) / S[j]
        H = (system.H0 + f1[j] * system.D1 + f2[j] * system.D2
             + (f1[j] * f2[j]) * system.D12)
        _kernel._expm_taylor8(H.astype(np.complex128), dt, steps[j], work)
        U = steps[j] @ U
    eta = gate_error_eta(U, system.O)
    return eta, eta + pen * dt / sl


def _run_loop(system: _AffineSystem, config: OptimizationConfig,
              initial_guess: PulseSequence) -> OptimizationRun:
    f1 = initial_guess.fc1.copy()
    f2 = initial_guess.fc2.copy()
    n = initial_guess.n_steps
    dt = initial_guess.dt
    S = np.ones(n)
    args = system.as_args()
    O = np.ascontiguousarray(system.O, dtype=np.complex128)
    steps = np.empty((n, system.dim, system.dim), dtype=np.complex128)
    _kernel.build_steps(f1, f2, *args, dt, steps)
    eta0 = _kernel.forward_error(steps, O)
    history = [(0, eta0, eta0)]
    sl0 = config.shape_over_weight
    sl = sl0
    tol = config.monotonicity_tolerance
    J_prev = eta0 + 0.0
    halvings = 0
    clean = 0
    converged = eta0 < config.stop_error
    reason = "initial-guess-already-converged" if converged else None
    it = 0
    while not converged and it < config.max_iterations:
        it += 1
        fb1, fb2, sb = f1.copy(), f2.copy(), steps.copy()
        eta, J = _kernel.krotov_sweep_inplace(f1, f2, steps, S, *args, O,
                                             dt, sl, config.amplitude_clamp)
        if J > J_prev + tol:
            if not config.halving_recovery:
                f1, f2, steps = fb1, fb2, sb
                reason = ("cost-increase: J rose by %.3e at iteration %d"
                          % (J - J_prev, it))
                break
            nh = 0
            while J > J_prev + tol and nh < config.max_halvings_per_step:
                f1[:], f2[:] = fb1, fb2
                steps[:] = sb
                sl *= 0.5
                halvings += 1
                nh += 1
                clean = 0
                eta, J = _kernel.krotov_sweep_inplace(
                    f1, f2, steps, S, *args, O, dt, sl,
                    config.amplitude_clamp)
            if J > J_prev + tol:
                f1, f2, steps = fb1, fb2, sb
                reason = ("cost-increase persisted through %d halvings "
                          "at iteration %d" % (nh, it))
                break
        history.append((it, eta, J))
        J_prev = J
        clean += 1
        if clean >= config.regrow_after and sl < sl0:
            sl = min(sl0, 2.0 * sl)
            clean = 0
        if eta < config.stop_error:
            converged = True
            reason = "stop-error-reached"
    if reason is None:
        reason = "iteration-budget-exhausted"
    U = np.eye(system.dim, dtype=complex)
    for j in range(n):
        U = steps[j] @ U
    return OptimizationRun(
        iterations=np.array(history, dtype=float),
        final_pulses=PulseSequence(dt=dt, fc1=f1, fc2=f2),
        final_propagator=U,
        converged=converged,
        termination_reason=reason,
        n_halvings=halvings,
        shape_over_weight_final=sl)


def optimize_gate(model: ReducedModel, target, config: OptimizationConfig,
                  initial_guess: PulseSequence) -> OptimizationRun:
    """Iterate sweeps until the gate error crosses stop_error."""
    matrix = target.matrix if hasattr(target, "matrix") else np.asarray(target)
    return _run_loop(_unitary_system(model, matrix), config, initial_guess)


def optimize_gate_dissipative(model: ReducedModel, target,
                              rates: DecoherenceRates,
                              config: OptimizationConfig,
                              initial_guess: PulseSequence) -> OptimizationRun:
    """Same loop on the vectorized channel; the history eta column is the
    dissipative error against O kron O*."""
    matrix = target.matrix if hasattr(target, "matrix") else np.asarray(target)
    return _run_loop(_dissipative_system(model, rates, matrix), config,
                     initial_guess)


def default_initial_guess(omega: np.ndarray, T: float, dt: float,
                          amplitude: float = 1e-4,
                          seed: Optional[int] = None,
                          perturbation: float = 0.0) -> PulseSequence:
    """Resonant sine guess with smooth ends.

    f_l(t) = A sin(omega_l t) sin^2(pi t / T), optionally perturbed by a
    seeded smooth random envelope for guess-sensitivity studies.
    """
    n = int(round(T / dt))
    t = np.arange(n) * dt
    env = np.sin(np.pi * t / max(T, dt)) ** 2
    f1 = amplitude * np.sin(omega[0] * t) * env
    f2 = amplitude * np.sin(omega[1] * t) * env
    if perturbation > 0.0:
        rng = np.random.default_rng(seed)
        for f in (f1, f2):
            phase = rng.uniform(0, TWO_PI)
            scale = 1.0 + perturbation * rng.standard_normal()
            f *= scale
            f += amplitude * perturbation * np.sin(
                TWO_PI * t / max(T, dt) + phase) * env
    return PulseSequence(dt=dt, fc1=f1, fc2=f2)
