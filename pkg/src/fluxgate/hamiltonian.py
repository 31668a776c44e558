"""Time-dependent Hamiltonians of the coupled pair.

Three assemblies share one coefficient source:

* a 4x4 two-level form, affine in the two control fluxes except for one
  bilinear zz term; this is the model the pulse optimizer propagates,
* a general 4x4 form keeping every parity-suppressed coefficient, equal to
  the first at the optimal bias point,
* an exact 25x25 form (five levels per qubit) with no weak-amplitude
  expansion, used to price leakage and the neglected momentum drive.

Pulses are piecewise constant: the sample at t_j = j*dt holds over
[t_j, t_j + dt).
"""
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from .circuit import (TWO_PI, CouplingDesign, EigenSolution, OperatorElements,
                      QubitDesign, ReducedCoefficients)

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
# Ground state first, excited second, so the energy term is +omega/2 sigma_z
# with this sign convention.
SIGMA_Z = np.array([[-1.0, 0.0], [0.0, 1.0]], dtype=complex)
IDENT_2 = np.eye(2, dtype=complex)

AMPLITUDE_BOUND = 1e-3


def _kron2(a, b):
    return np.kron(a, b)


@dataclass
class PulseSequence:
    """Two sampled flux channels on a uniform grid."""
    dt: float
    fc1: np.ndarray
    fc2: np.ndarray

    def __post_init__(self):
        self.fc1 = np.asarray(self.fc1, dtype=float)
        self.fc2 = np.asarray(self.fc2, dtype=float)
        if self.fc1.shape != self.fc2.shape or self.fc1.ndim != 1:
            raise ValueError("channels must be 1-d arrays of equal length")
        if not (np.isfinite(self.fc1).all() and np.isfinite(self.fc2).all()):
            raise ValueError("non-finite pulse samples")

    @property
    def n_steps(self):
        return len(self.fc1)

    @property
    def T(self):
        return self.n_steps * self.dt

    @property
    def times(self):
        return np.arange(self.n_steps) * self.dt

    def within_amplitude_bound(self, bound: float = AMPLITUDE_BOUND) -> bool:
        return bool(np.abs(self.fc1).max(initial=0.0) <= bound
                    and np.abs(self.fc2).max(initial=0.0) <= bound)

    def copy(self):
        return PulseSequence(dt=self.dt, fc1=self.fc1.copy(),
                             fc2=self.fc2.copy())


def pulse_time_derivative(pulses: PulseSequence) -> Tuple[np.ndarray, np.ndarray]:
    """Per-channel time derivatives, central interior, one-sided ends."""
    if pulses.n_steps < 2:
        raise ValueError("need at least two samples to differentiate")
    return (np.gradient(pulses.fc1, pulses.dt),
            np.gradient(pulses.fc2, pulses.dt))


@dataclass
class ReducedModel:
    """Two levels per qubit; control enters through flux slopes only.

    mode "simplified-optimal-point" keeps the coefficients that survive the
    parity symmetry at bias 0.5; "general-two-level" keeps everything.
    The momentum (flux-rate) drive is deliberately absent here; its cost is
    measured on the multi-level model.
    """
    coeffs: ReducedCoefficients
    mode: str = "simplified-optimal-point"
    H0: np.ndarray = field(default=None, repr=False)
    D1: np.ndarray = field(default=None, repr=False)
    D2: np.ndarray = field(default=None, repr=False)
    D12: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        if self.mode not in ("simplified-optimal-point", "general-two-level"):
            raise ValueError("unknown model mode %r" % (self.mode,))
        c = self.coeffs
        bm = c.beta_M
        self.H0 = (0.5 * c.omega[0] * _kron2(SIGMA_Z, IDENT_2)
                   + 0.5 * c.omega[1] * _kron2(IDENT_2, SIGMA_Z)
                   + c.Lambda[1, 1] * _kron2(SIGMA_X, SIGMA_X))
        # Slope of H with respect to fc1: single-qubit drive plus the
        # linearized current-current coupling (z shift on qubit 1, z1 x2
        # cross term, and the partner x drive from the current offset).
        self.D1 = (c.kappa2_slope[0] * _kron2(SIGMA_X, IDENT_2)
                   - c.chi1_slope[0] * _kron2(SIGMA_Z, IDENT_2)
                   - c.Xi_slope[0][0][1] * _kron2(SIGMA_Z, SIGMA_X)
                   - TWO_PI * bm * c.drive_offset[0] * c.lambda2[1]
                   * _kron2(IDENT_2, SIGMA_X))
        self.D2 = (c.kappa2_slope[1] * _kron2(IDENT_2, SIGMA_X)
                   - c.chi1_slope[1] * _kron2(IDENT_2, SIGMA_Z)
                   - c.Xi_slope[1][0][1] * _kron2(SIGMA_X, SIGMA_Z)
                   - TWO_PI * bm * c.drive_offset[1] * c.lambda2[0]
                   * _kron2(SIGMA_X, IDENT_2))
        self.D12 = c.Theta_slope[0, 0] * _kron2(SIGMA_Z, SIGMA_Z)
        if self.mode == "general-two-level":
            self.H0 = general_two_level_hamiltonian_at(c, 0.0, 0.0)
            h1 = general_two_level_hamiltonian_at(c, 1.0, 0.0)
            h2 = general_two_level_hamiltonian_at(c, 0.0, 1.0)
            h12 = general_two_level_hamiltonian_at(c, 1.0, 1.0)
            self.D1 = h1 - self.H0
            self.D2 = h2 - self.H0
            self.D12 = h12 - self.H0 - self.D1 - self.D2

    @property
    def dimension(self):
        return 4

    def hamiltonian(self, fc1: float, fc2: float) -> np.ndarray:
        return (self.H0 + fc1 * self.D1 + fc2 * self.D2
                + (fc1 * fc2) * self.D12)


def reduced_hamiltonian_at(model: ReducedModel, fc1: float,
                           fc2: float) -> np.ndarray:
    """4x4 Hamiltonian at one pulse sample (rad/ns)."""
    return model.hamiltonian(fc1, fc2)


def _linearized_two_level_blocks(coeffs: ReducedCoefficients, qubit: int,
                                 fc: float):
    """(drive block, linearized current block) for one qubit, 2x2 each."""
    c = coeffs
    l = qubit
    drive = fc * (c.kappa2_slope[l] * SIGMA_X + c.kappa1_slope[l] * SIGMA_Z)
    cur = (c.lambda2[l] * SIGMA_X + c.lambda1[l] * SIGMA_Z
           + c.current_offset[l] * IDENT_2)
    c2a = (c.Omega1[l] * SIGMA_Z + c.Omega2[l] * SIGMA_X
           + c.drive_offset[l] * IDENT_2)
    cur_lin = cur - TWO_PI * fc * c2a
    return drive, cur_lin


def general_two_level_hamiltonian_at(coeffs: ReducedCoefficients, fc1: float,
                                     fc2: float) -> np.ndarray:
    """Full two-level expansion with every parity-suppressed term.

    The coupling is beta_M times the tensor product of the two linearized
    loop currents, so all Lambda, chi, Xi and Theta families appear with
    consistent signs by construction.
    """
    c = coeffs
    d1, cur1 = _linearized_two_level_blocks(c, 0, fc1)
    d2, cur2 = _linearized_two_level_blocks(c, 1, fc2)
    H = (0.5 * c.omega[0] * _kron2(SIGMA_Z, IDENT_2)
         + 0.5 * c.omega[1] * _kron2(IDENT_2, SIGMA_Z)
         + _kron2(d1, IDENT_2) + _kron2(IDENT_2, d2)
         + c.beta_M * _kron2(cur1, cur2))
    # The identity part of the product shifts only the global phase and is
    # removed so both modes share one energy reference.
    H = H - (np.trace(H).real / 4.0) * np.eye(4)
    return H


@dataclass
class MultiLevelModel:
    """Five levels per qubit, exact control-flux dependence."""
    elems: Tuple[OperatorElements, OperatorElements]
    energies: Tuple[np.ndarray, np.ndarray]
    coupling: CouplingDesign
    designs: Tuple[QubitDesign, QubitDesign]
    n_levels: int = 5
    H0: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        nl = self.n_levels
        ident = np.eye(nl)
        # Energies referenced to the per-qubit computational mean so the
        # two-level model and this one share the same phase reference.
        e1 = self.energies[0][:nl] - 0.5 * (self.energies[0][0]
                                            + self.energies[0][1])
        e2 = self.energies[1][:nl] - 0.5 * (self.energies[1][0]
                                            + self.energies[1][1])
        self.H0 = (np.kron(np.diag(e1), ident)
                   + np.kron(ident, np.diag(e2))).astype(complex)

    @property
    def dimension(self):
        return self.n_levels ** 2

    def _ao(self, qubit):
        d = self.designs[qubit]
        return d.alpha / (1.0 + 2.0 * d.alpha)

    def loop_current(self, qubit: int, fc: float) -> np.ndarray:
        """Normalized loop current at control flux fc (exact)."""
        ops = self.elems[qubit]
        c = np.cos(TWO_PI * fc)
        s = np.sin(TWO_PI * fc)
        return self._ao(qubit) * (ops.SYM - ops.S2 * c - ops.C2 * s)

    def drive_term(self, qubit: int, fc: float) -> np.ndarray:
        """alpha E_J [cos(2 phi_P + 2 pi f) - cos(... + 2 pi (f + fc))]."""
        ops = self.elems[qubit]
        d = self.designs[qubit]
        c = np.cos(TWO_PI * fc)
        s = np.sin(TWO_PI * fc)
        return d.alpha * d.E_J * (ops.C2 * (1.0 - c) + ops.S2 * s)

    def hamiltonian(self, fc1: float, fc2: float, fdot1: float = 0.0,
                    fdot2: float = 0.0) -> np.ndarray:
        nl = self.n_levels
        ident = np.eye(nl)
        H = self.H0.copy()
        H += np.kron(self.drive_term(0, fc1), ident)
        H += np.kron(ident, self.drive_term(1, fc2))
        H += TWO_PI * fdot1 * self._ao(0) * np.kron(self.elems[0].PP, ident)
        H += TWO_PI * fdot2 * self._ao(1) * np.kron(ident, self.elems[1].PP)
        H += self.coupling.beta_M * np.kron(self.loop_current(0, fc1),
                                            self.loop_current(1, fc2))
        return H


def multilevel_hamiltonian_at(model: MultiLevelModel, fc1: float, fc2: float,
                              fdot1: float = 0.0,
                              fdot2: float = 0.0) -> np.ndarray:
    """25x25 Hamiltonian at one sample, momentum drive included."""
    if not np.isfinite([fc1, fc2, fdot1, fdot2]).all():
        raise ValueError("non-finite control inputs")
    return model.hamiltonian(fc1, fc2, fdot1, fdot2)
