"""Time-ordered propagation for unitary and dissipative dynamics.

Pulses are piecewise constant, so each step is an exact matrix exponential
of the frozen Hamiltonian (or Liouvillian).  Density matrices are
vectorized row-major, vec(rho)[i*d+j] = rho[i,j], which makes
vec(A rho B) = (A kron B^T) vec(rho); the unitary channel is then
U kron U*, and the commutator generator is -i(H kron I - I kron H^T).
"""
from dataclasses import dataclass
from typing import List, Tuple, Union

import numpy as np
import scipy.linalg

from .hamiltonian import (MultiLevelModel, PulseSequence, ReducedModel,
                          pulse_time_derivative)

SIGMA_MINUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
SIGMA_Z2 = np.array([[-1.0, 0.0], [0.0, 1.0]], dtype=complex)

COMPUTATIONAL_LABELS = ("gg", "ge", "eg", "ee")


@dataclass
class UnitaryTrajectory:
    """Propagators at every grid point; U[0] is the identity."""
    U: np.ndarray            # (n_steps+1, d, d)
    dt: float

    @property
    def final(self):
        return self.U[-1]

    def unitarity_defect(self):
        d = self.U.shape[1]
        eye = np.eye(d)
        return max(np.linalg.norm(u.conj().T @ u - eye) for u in self.U)


@dataclass
class SuperPropagator:
    """Vectorized-channel propagators at every grid point, d=4 (16x16)."""
    G: np.ndarray            # (n_steps+1, d*d, d*d)
    dt: float

    @property
    def final(self):
        return self.G[-1]

    def trace_defect(self):
        """Worst deviation of Tr[G(rho)] from Tr[rho] over a test set."""
        d = int(round(np.sqrt(self.G.shape[1])))
        rng = np.random.default_rng(7)
        worst = 0.0
        for _ in range(4):
            a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
            rho = a @ a.conj().T
            rho /= np.trace(rho).real
            out = (self.G[-1] @ rho.reshape(-1)).reshape(d, d)
            worst = max(worst, abs(np.trace(out).real - 1.0)
                        + abs(np.trace(out).imag))
        return worst


@dataclass
class DecoherenceRates:
    """Per-qubit relaxation and pure dephasing rates in 1/ns."""
    gamma1: np.ndarray
    gamma_phi: np.ndarray
    T1_us: float = None
    T2_us: float = None

    def __post_init__(self):
        self.gamma1 = np.atleast_1d(np.asarray(self.gamma1, dtype=float))
        self.gamma_phi = np.atleast_1d(np.asarray(self.gamma_phi, dtype=float))
        if len(self.gamma1) == 1:
            self.gamma1 = np.repeat(self.gamma1, 2)
        if len(self.gamma_phi) == 1:
            self.gamma_phi = np.repeat(self.gamma_phi, 2)
        if np.any(self.gamma1 < 0) or np.any(self.gamma_phi < 0):
            raise ValueError("rates must be non-negative")

    @property
    def gamma2(self):
        return self.gamma1 / 2.0 + self.gamma_phi

    @staticmethod
    def zero():
        return DecoherenceRates(gamma1=np.zeros(2), gamma_phi=np.zeros(2))


def decoherence_rates_from_T1_T2(T1_us: float, T2_us: float) -> DecoherenceRates:
    """Gamma_1 = 1/T1 and Gamma_phi = 1/T2 - 1/(2 T1), in 1/ns."""
    if T1_us <= 0 or T2_us <= 0:
        raise ValueError("T1 and T2 must be positive")
    if T2_us > 2.0 * T1_us:
        raise ValueError("T2 > 2 T1 implies a negative dephasing rate")
    t1_ns = T1_us * 1e3
    t2_ns = T2_us * 1e3
    g1 = 1.0 / t1_ns
    gphi = 1.0 / t2_ns - 0.5 / t1_ns
    return DecoherenceRates(gamma1=np.full(2, g1), gamma_phi=np.full(2, gphi),
                            T1_us=T1_us, T2_us=T2_us)


def step_unitary(H: np.ndarray, dt: float) -> np.ndarray:
    """exp(-i H dt) through the Hermitian eigendecomposition."""
    defect = np.linalg.norm(H - H.conj().T)
    if defect > 1e-8 * max(np.linalg.norm(H), 1.0):
        raise ValueError("Hamiltonian not Hermitian (defect %.3e)" % defect)
    w, v = np.linalg.eigh(H)
    return (v * np.exp(-1j * w * dt)) @ v.conj().T


def _hamiltonian_samples(model: Union[ReducedModel, MultiLevelModel],
                         pulses: PulseSequence):
    """Yield H(t_j) for each step; multi-level includes the flux rate."""
    if isinstance(model, MultiLevelModel):
        fd1, fd2 = pulse_time_derivative(pulses)
        for j in range(pulses.n_steps):
            yield model.hamiltonian(pulses.fc1[j], pulses.fc2[j],
                                    fd1[j], fd2[j])
    else:
        for j in range(pulses.n_steps):
            yield model.hamiltonian(pulses.fc1[j], pulses.fc2[j])


def propagate_unitary(model: Union[ReducedModel, MultiLevelModel],
                      pulses: PulseSequence) -> UnitaryTrajectory:
    """U[j+1] = exp(-i H(t_j) dt) U[j] with U[0] = I."""
    d = model.dimension
    n = pulses.n_steps
    U = np.empty((n + 1, d, d), dtype=complex)
    U[0] = np.eye(d)
    for j, H in enumerate(_hamiltonian_samples(model, pulses)):
        U[j + 1] = step_unitary(H, pulses.dt) @ U[j]
        if not np.isfinite(U[j + 1]).all():
            raise FloatingPointError("propagation lost finiteness at step %d"
                                     % (j + 1))
    return UnitaryTrajectory(U=U, dt=pulses.dt)


def _dissipator(c: np.ndarray) -> np.ndarray:
    """Lindblad dissipator of collapse operator c, vectorized row-major."""
    d = c.shape[0]
    eye = np.eye(d)
    cc = c.conj().T @ c
    return (np.kron(c, c.conj())
            - 0.5 * np.kron(cc, eye)
            - 0.5 * np.kron(eye, cc.T))


def _qubit_collapse_ops(d: int) -> List[Tuple[np.ndarray, np.ndarray]]:
    """(sigma_minus, sigma_z) embedded in the two-qubit space, per qubit."""
    eye = np.eye(2)
    return [(np.kron(SIGMA_MINUS, eye), np.kron(SIGMA_Z2, eye)),
            (np.kron(eye, SIGMA_MINUS), np.kron(eye, SIGMA_Z2))]


def build_liouvillian(H: np.ndarray, rates: DecoherenceRates) -> np.ndarray:
    """Full generator: commutator part plus per-qubit dissipators.

    Dephasing enters as (Gamma_phi/2) D[sigma_z] so that coherences decay
    at Gamma_2 = Gamma_1/2 + Gamma_phi.
    """
    d = H.shape[0]
    eye = np.eye(d)
    L = -1j * (np.kron(H, eye) - np.kron(eye, H.T))
    for q, (sm, sz) in enumerate(_qubit_collapse_ops(d)):
        if rates.gamma1[q] != 0.0:
            L += rates.gamma1[q] * _dissipator(sm)
        if rates.gamma_phi[q] != 0.0:
            L += 0.5 * rates.gamma_phi[q] * _dissipator(sz)
    return L


def propagate_superoperator(model: ReducedModel, pulses: PulseSequence,
                            rates: DecoherenceRates) -> SuperPropagator:
    """G[j+1] = exp(L(t_j) dt) G[j] with G[0] = I."""
    d = model.dimension
    n = pulses.n_steps
    G = np.empty((n + 1, d * d, d * d), dtype=complex)
    G[0] = np.eye(d * d)
    for j in range(n):
        H = model.hamiltonian(pulses.fc1[j], pulses.fc2[j])
        L = build_liouvillian(H, rates)
        G[j + 1] = scipy.linalg.expm(L * pulses.dt) @ G[j]
        if not np.isfinite(G[j + 1]).all():
            raise FloatingPointError("superoperator propagation lost "
                                     "finiteness at step %d" % (j + 1))
    return SuperPropagator(G=G, dt=pulses.dt)


def evolve_populations(model: MultiLevelModel, pulses: PulseSequence,
                       initial: str):
    """Probability traces of the computational states plus leakage.

    Returns (times, traces) where traces has columns P_gg, P_ge, P_eg,
    P_ee, P_leak at every grid point including t = 0.
    """
    if initial not in COMPUTATIONAL_LABELS:
        raise ValueError("initial state must be one of %s"
                         % (COMPUTATIONAL_LABELS,))
    nl = model.n_levels
    comp_index = {"gg": 0, "ge": 1, "eg": nl, "ee": nl + 1}
    psi = np.zeros(model.dimension, dtype=complex)
    psi[comp_index[initial]] = 1.0
    fd1, fd2 = pulse_time_derivative(pulses)
    n = pulses.n_steps
    traces = np.empty((n + 1, 5))
    idx = [comp_index[k] for k in COMPUTATIONAL_LABELS]

    def record(row, v):
        p = np.abs(v[idx]) ** 2
        traces[row, :4] = p
        traces[row, 4] = max(0.0, 1.0 - p.sum())

    record(0, psi)
    for j in range(n):
        H = model.hamiltonian(pulses.fc1[j], pulses.fc2[j], fd1[j], fd2[j])
        psi = step_unitary(H, pulses.dt) @ psi
        record(j + 1, psi)
    times = np.arange(n + 1) * pulses.dt
    return times, traces
