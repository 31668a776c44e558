"""Gate targets, subspace error metrics, and the analytic reference pulse.

Computational basis ordering is |gg>, |ge>, |eg>, |ee> with the first
letter belonging to qubit 1.  The logical Z flips the sign of the excited
state, so Z = diag(1, -1) in the (g, e) basis.

Controlled-NOT targets carry a global phase exp(i pi/4).  The propagated
unitary always has unit determinant because every Hamiltonian term is
traceless, while the bare controlled-NOT matrix has determinant -1 and can
therefore never be reached exactly; the phased variant is the nearest
special-unitary representative and acts identically on density matrices.
"""
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .hamiltonian import PulseSequence, ReducedModel
from .circuit import ReducedCoefficients

_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
_I2 = np.eye(2, dtype=complex)

GATE_NAMES = ("X1", "Z1", "X2", "Z2", "CNOT12", "CNOT21")

# Gate times (ns) at which the pulse search is performed by default.
DEFAULT_GATE_TIMES = {"X1": 0.8, "Z1": 0.8, "X2": 0.9, "Z2": 0.9,
                      "CNOT12": 2.0, "CNOT21": 2.0}


def _cnot(control: int) -> np.ndarray:
    U = np.eye(4, dtype=complex)
    if control == 1:
        U[2:, 2:] = _X
    else:
        U[np.ix_([1, 3], [1, 3])] = _X
    return np.exp(1j * np.pi / 4) * U


@dataclass(frozen=True)
class GateTarget:
    name: str
    matrix: np.ndarray

    @property
    def dimension(self):
        return self.matrix.shape[0]


def make_target(name: str) -> GateTarget:
    table = {
        "X1": np.kron(_X, _I2),
        "Z1": np.kron(_Z, _I2),
        "X2": np.kron(_I2, _X),
        "Z2": np.kron(_I2, _Z),
        "CNOT12": _cnot(1),
        "CNOT21": _cnot(2),
    }
    if name not in table:
        raise KeyError("unknown gate %r; expected one of %s"
                       % (name, ", ".join(GATE_NAMES)))
    return GateTarget(name=name, matrix=table[name])


class SubspaceProjector:
    """Maps the multi-level Hilbert space onto the two-qubit subspace."""

    def __init__(self, n_levels: int = 5):
        dim = n_levels * n_levels
        P = np.zeros((4, dim))
        for row, (a, b) in enumerate([(0, 0), (0, 1), (1, 0), (1, 1)]):
            P[row, a * n_levels + b] = 1.0
        self.P = P
        self.n_levels = n_levels

    def project(self, U: np.ndarray) -> np.ndarray:
        return self.P @ U @ self.P.T


def projected_error_eta_p(U_full: np.ndarray, target: GateTarget,
                          projector: SubspaceProjector = None) -> float:
    """Leakage-sensitive error of the projected propagator.

    (1/2d) Tr[(O - PU P^T)^dag (O - PU P^T)]; population escaping the
    computational subspace shows up through the lost norm of PU.
    """
    if projector is None:
        n = int(round(np.sqrt(U_full.shape[0])))
        projector = SubspaceProjector(n_levels=n)
    PU = projector.project(U_full)
    diff = target.matrix - PU
    return float(np.trace(diff.conj().T @ diff).real / 8.0)


def dissipative_error_eta_d(G: np.ndarray, target: GateTarget) -> float:
    """Error of a process matrix against the ideal unitary channel.

    The ideal channel in vectorized form is O kron O*; the distance is
    (1/2D) Tr[(O_vec - G)^dag (O_vec - G)] with D = 16.
    """
    O_vec = np.kron(target.matrix, target.matrix.conj())
    if G.shape != O_vec.shape:
        raise ValueError("process matrix must be %s" % (O_vec.shape,))
    diff = O_vec - G
    return float(np.trace(diff.conj().T @ diff).real / (2.0 * O_vec.shape[0]))


def phase_insensitive_eta(U: np.ndarray, target: GateTarget) -> float:
    """Diagnostic error minimized over a global phase of the propagator.

    min_phi (1/2d)||O - e^{i phi} U||_F^2; the optimum aligns the phase of
    Tr(O^dag U).  Not used for acceptance, where the phase is part of the
    target.
    """
    d = target.dimension
    tr = np.trace(target.matrix.conj().T @ U)
    normsq = (np.trace(target.matrix.conj().T @ target.matrix).real
              + np.trace(U.conj().T @ U).real)
    return float((normsq - 2.0 * np.abs(tr)) / (2.0 * d))


def resonant_pi_pulse_baseline(coeffs: ReducedCoefficients, model: ReducedModel,
                               dt: float = 5e-4):
    """Plain resonant flux pulse flipping qubit 1, for comparison.

    Drives channel 1 at the qubit transition with the constant envelope
    f_c(t) = A cos(omega_1 t), A = pi / (|kappa2 slope| T); the duration
    T = 14 pi / omega_2 makes the pulse commensurate with both transitions.
    The reference target is the driven flip on top of the phases the static
    Hamiltonian accumulates anyway:

        V = exp(-i H0 T) (i X kron I)

    Returns (pulses, reference matrix, eta against the reference).
    """
    omega1 = coeffs.omega[0]
    omega2 = coeffs.omega[1]
    T = 14.0 * np.pi / omega2
    n = int(round(T / dt))
    T_grid = n * dt
    A = np.pi / (abs(coeffs.kappa2_slope[0]) * T_grid)
    t = np.arange(n) * dt
    pulses = PulseSequence(dt=dt, fc1=A * np.cos(omega1 * t),
                           fc2=np.zeros(n))
    V = expm(-1j * model.H0 * T_grid) @ (1j * np.kron(_X, _I2))
    from .propagation import propagate_unitary
    traj = propagate_unitary(model, pulses)
    diff = V - traj.final
    eta = float(np.trace(diff.conj().T @ diff).real / 8.0)
    return pulses, V, eta
