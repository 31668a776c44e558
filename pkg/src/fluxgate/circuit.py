"""Single-qubit circuit eigenproblem and two-level coefficient extraction.

A three-junction flux qubit is described in the two phase coordinates
phi_P = (phi_1 + phi_2)/2 and phi_Q = (phi_1 - phi_2)/2.  The potential

    U = 2 E_J (1 - cos phi_Q cos phi_P) + alpha E_J [1 - cos(2 phi_P + 2 pi f)]

is 2-pi periodic in the junction phases, so the eigenproblem is solved in a
plane-wave basis exp(i(m phi_P + n phi_Q)).  Periodicity in phi_1, phi_2
restricts the admissible lattice to m + n even; the full integer lattice
contains spurious half-period states and is kept only as a diagnostic option.

All energies and rates are angular frequencies in rad/ns (hbar = 1).  A
quantity quoted in GHz elsewhere is stored as 2*pi*value.
"""
from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np

TWO_PI = 2.0 * np.pi

# SI constants used once, to turn a mutual inductance in pH into a rad/ns
# coupling energy via the critical currents I0 = 2 pi E_J / Phi0.
HBAR_SI = 1.054571817e-34
PHI0_SI = 2.067833848e-15


@dataclass(frozen=True)
class QubitDesign:
    """Microscopic parameters of one three-junction loop."""
    index: int
    E_J: float              # rad/ns
    ej_over_ec: float
    alpha: float
    f_bias: float

    def __post_init__(self):
        if not np.isfinite([self.E_J, self.ej_over_ec, self.alpha,
                            self.f_bias]).all():
            raise ValueError("non-finite design parameter")
        if self.E_J <= 0 or self.alpha <= 0 or self.ej_over_ec <= 0:
            raise ValueError("E_J, alpha, ej_over_ec must be positive")
        if not 0.0 <= self.f_bias <= 1.0:
            raise ValueError("f_bias must lie in [0, 1]")

    @property
    def E_C(self):
        return self.E_J / self.ej_over_ec

    @property
    def critical_current(self):
        """I0 in ampere, from E_J = I0 * Phi0 / (2 pi)."""
        ej_si = (self.E_J / TWO_PI) * 1e9 * TWO_PI * HBAR_SI  # joule
        return ej_si * TWO_PI / PHI0_SI


@dataclass(frozen=True)
class CouplingDesign:
    """Mutual inductance between the two loops and the derived energy."""
    mutual_inductance: float    # pH
    beta_M: float               # rad/ns, M * I0_1 * I0_2 / hbar

    @staticmethod
    def from_mutual_inductance(M_pH: float, design1: "QubitDesign",
                               design2: "QubitDesign") -> "CouplingDesign":
        i1 = design1.critical_current
        i2 = design2.critical_current
        beta = (M_pH * 1e-12 * i1 * i2) / HBAR_SI * 1e-9
        return CouplingDesign(mutual_inductance=M_pH, beta_M=beta)


@dataclass(frozen=True)
class PlaneWaveBasis:
    """Plane-wave lattice exp(i(m phi_P + n phi_Q)), |m|,|n| <= n_max.

    sector "periodic" keeps m + n even (functions single-valued in the
    junction phases); "full" keeps every integer pair and exists only for
    the convergence comparison table.
    """
    n_max: int
    sector: str = "periodic"
    pairs: np.ndarray = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.n_max < 8:
            raise ValueError("n_max must be at least 8")
        if self.sector not in ("periodic", "full"):
            raise ValueError("unknown basis sector %r" % (self.sector,))
        pairs = []
        for m in range(-self.n_max, self.n_max + 1):
            for n in range(-self.n_max, self.n_max + 1):
                if self.sector == "periodic" and (m + n) % 2 != 0:
                    continue
                pairs.append((m, n))
        object.__setattr__(self, "pairs", np.array(pairs, dtype=int))

    @property
    def dimension(self):
        return len(self.pairs)

    def index_map(self) -> Dict[Tuple[int, int], int]:
        return {tuple(p): i for i, p in enumerate(self.pairs)}


@dataclass
class EigenSolution:
    """Lowest eigenpairs of one qubit in a fixed plane-wave basis."""
    energies: np.ndarray
    states: np.ndarray          # columns are eigenvectors
    n_levels: int
    basis: PlaneWaveBasis

    def splitting(self):
        return self.energies[1] - self.energies[0]


@dataclass
class OperatorElements:
    """Phase-space operators projected onto the qubit eigenbasis.

    S2 and C2 are sin/cos(2 phi_P + 2 pi f); SYM is the symmetric
    combination sin(phi_P + phi_Q) + sin(phi_P - phi_Q); PP is the momentum
    conjugate to phi_P.  CURRENT is the normalized loop current
    [alpha/(1+2 alpha)] (SYM - S2) and UPSILON = [alpha/(1+2 alpha)] C2
    + CURRENT.
    """
    S2: np.ndarray
    C2: np.ndarray
    SYM: np.ndarray
    PP: np.ndarray
    CURRENT: np.ndarray
    UPSILON: np.ndarray


def build_single_qubit_hamiltonian(design: QubitDesign,
                                   basis: PlaneWaveBasis) -> np.ndarray:
    """Assemble H_l in the plane-wave basis.

    Kinetic part is diagonal, 2 E_C (m^2/(1+2 alpha) + n^2).  The potential
    couples (m, n) to (m+-1, n+-1) through -2 E_J cos(phi_P) cos(phi_Q) and
    to (m+-2, n) through -alpha E_J cos(2 phi_P + 2 pi f), with bias phase
    factors exp(+-2 pi i f).
    """
    ej, ec, alpha, f = design.E_J, design.E_C, design.alpha, design.f_bias
    if not np.isfinite([ej, ec, alpha, f]).all():
        raise ValueError("non-finite parameters")
    index = basis.index_map()
    dim = basis.dimension
    H = np.zeros((dim, dim), dtype=complex)
    phase = np.exp(1j * TWO_PI * f)
    for i, (m, n) in enumerate(basis.pairs):
        H[i, i] = 2.0 * ec * (m * m / (1.0 + 2.0 * alpha) + n * n) \
            + 2.0 * ej + alpha * ej
        for dm in (-1, 1):
            for dn in (-1, 1):
                j = index.get((m + dm, n + dn))
                if j is not None:
                    H[j, i] += -0.5 * ej
        j = index.get((m + 2, n))
        if j is not None:
            H[j, i] += -0.5 * alpha * ej * phase
        j = index.get((m - 2, n))
        if j is not None:
            H[j, i] += -0.5 * alpha * ej * np.conj(phase)
    return H


def phase_space_operator(basis: PlaneWaveBasis, kind: str,
                         f_bias: float) -> np.ndarray:
    """Matrix of one phase-space operator in the plane-wave basis."""
    index = basis.index_map()
    dim = basis.dimension
    M = np.zeros((dim, dim), dtype=complex)
    phase = np.exp(1j * TWO_PI * f_bias)
    for i, (m, n) in enumerate(basis.pairs):
        if kind == "S2":
            j = index.get((m + 2, n))
            if j is not None:
                M[j, i] += phase / 2j
            j = index.get((m - 2, n))
            if j is not None:
                M[j, i] += -np.conj(phase) / 2j
        elif kind == "C2":
            j = index.get((m + 2, n))
            if j is not None:
                M[j, i] += phase / 2.0
            j = index.get((m - 2, n))
            if j is not None:
                M[j, i] += np.conj(phase) / 2.0
        elif kind == "SYM":
            for dm, dn, s in ((1, 1, 1), (-1, -1, -1), (1, -1, 1), (-1, 1, -1)):
                j = index.get((m + dm, n + dn))
                if j is not None:
                    M[j, i] += s / 2j
        elif kind == "PP":
            M[i, i] = m
        else:
            raise ValueError("unknown operator kind %r" % (kind,))
    return M


def solve_lowest_eigenstates(H: np.ndarray, n_levels: int,
                             basis: PlaneWaveBasis = None) -> EigenSolution:
    """Lowest n_levels eigenpairs of a Hermitian matrix, ascending."""
    if n_levels > H.shape[0]:
        raise ValueError("n_levels exceeds matrix dimension")
    herm_defect = np.linalg.norm(H - H.conj().T)
    if herm_defect > 1e-8 * max(np.linalg.norm(H), 1.0):
        raise ValueError("matrix is not Hermitian (defect %.3e)" % herm_defect)
    w, v = np.linalg.eigh(H)
    residual = np.linalg.norm(H @ v[:, :n_levels]
                              - v[:, :n_levels] * w[:n_levels], axis=0)
    if np.any(residual > 1e-10 * np.linalg.norm(H)):
        raise RuntimeError("eigensolver residuals too large: %s" % residual)
    return EigenSolution(energies=w[:n_levels].copy(),
                         states=v[:, :n_levels].copy(),
                         n_levels=n_levels, basis=basis)


def fix_eigenstate_phases(sol: EigenSolution,
                          design: QubitDesign) -> EigenSolution:
    """Deterministic eigenvector phases.

    The ground state gets its largest-magnitude coefficient real positive.
    Every excited state |k> is rotated so that <k|S2|g> is real and
    non-positive; when that element is negligible the state falls back to
    the largest-coefficient convention.  Applying the fix twice is a no-op.
    """
    S2 = phase_space_operator(sol.basis, "S2", design.f_bias)
    v = sol.states.copy()
    g = v[:, 0]
    i0 = int(np.argmax(np.abs(g)))
    g = g * np.exp(-1j * np.angle(g[i0]))
    v[:, 0] = g
    s2g = S2 @ g
    for k in range(1, v.shape[1]):
        amp = v[:, k].conj() @ s2g
        if np.abs(amp) > 1e-12:
            v[:, k] = v[:, k] * (-np.exp(1j * np.angle(amp)))
        else:
            ik = int(np.argmax(np.abs(v[:, k])))
            v[:, k] = v[:, k] * np.exp(-1j * np.angle(v[ik, k]))
    return EigenSolution(energies=sol.energies.copy(), states=v,
                         n_levels=sol.n_levels, basis=sol.basis)


def compute_operator_elements(sol: EigenSolution,
                              design: QubitDesign) -> OperatorElements:
    """Project the phase-space operators onto the retained eigenstates."""
    ao = design.alpha / (1.0 + 2.0 * design.alpha)
    mats = {kind: phase_space_operator(sol.basis, kind, design.f_bias)
            for kind in ("S2", "C2", "SYM", "PP")}
    v = sol.states

    def project(M):
        return v.conj().T @ M @ v

    s2 = project(mats["S2"])
    c2 = project(mats["C2"])
    sym = project(mats["SYM"])
    pp = project(mats["PP"])
    current = ao * (sym - s2)
    upsilon = ao * c2 + current
    return OperatorElements(S2=s2, C2=c2, SYM=sym, PP=pp,
                            CURRENT=current, UPSILON=upsilon)


@dataclass
class ReducedCoefficients:
    """Every coefficient of the two-level pair model.

    Per-qubit arrays are indexed [qubit1, qubit2].  Slopes are rad/ns per
    unit reduced control flux; Theta_slope is per unit fc1*fc2.  Xi_slope
    is indexed [driven qubit l][Omega family i][lambda family j of the
    partner]; Theta_slope[i][j] pairs Omega family i on qubit 1 with
    family j on qubit 2; Lambda[i][j] = beta_M lambda_i^(1) lambda_j^(2).
    """
    omega: np.ndarray
    kappa1_slope: np.ndarray
    kappa2_slope: np.ndarray
    lambda1: np.ndarray
    lambda2: np.ndarray
    Omega1: np.ndarray
    Omega2: np.ndarray
    Delta: np.ndarray
    current_offset: np.ndarray    # mean diagonal of CURRENT
    drive_offset: np.ndarray      # mean diagonal of [alpha/(1+2a)] C2
    momentum_slope: np.ndarray    # Im <e|PP|g> scaled, rad/ns per unit fdot
    chi1_slope: np.ndarray
    chi2_slope: np.ndarray
    Xi_slope: np.ndarray
    Theta_slope: np.ndarray
    Lambda: np.ndarray
    beta_M: float

    def to_dict(self):
        out = {}
        for name in ("omega", "kappa1_slope", "kappa2_slope", "lambda1",
                     "lambda2", "Omega1", "Omega2", "Delta", "current_offset",
                     "drive_offset", "momentum_slope", "chi1_slope",
                     "chi2_slope", "Xi_slope", "Theta_slope", "Lambda"):
            out[name] = np.asarray(getattr(self, name)).tolist()
        out["beta_M"] = self.beta_M
        return out


def derive_reduced_coefficients(elems1: OperatorElements,
                                elems2: OperatorElements,
                                sols: Tuple[EigenSolution, EigenSolution],
                                coupling: CouplingDesign,
                                designs: Tuple[QubitDesign, QubitDesign]
                                ) -> ReducedCoefficients:
    """Two-level coefficients from the projected operators.

    The drive term alpha E_J [cos(2 phi_P + 2 pi f) - cos(... + 2 pi fc)]
    linearizes to 2 pi fc alpha E_J S2, giving the kappa slopes.  The loop
    current linearizes to CURRENT - 2 pi fc [alpha/(1+2a)] C2, and the
    products of the two linearized currents give every cross coefficient.
    """
    per = {"omega": [], "kappa1_slope": [], "kappa2_slope": [], "lambda1": [],
           "lambda2": [], "Omega1": [], "Omega2": [], "Delta": [],
           "current_offset": [], "drive_offset": [], "momentum_slope": []}
    for elems, sol, design in zip((elems1, elems2), sols, designs):
        ao = design.alpha / (1.0 + 2.0 * design.alpha)
        s2 = elems.S2[:2, :2]
        cur = elems.CURRENT[:2, :2]
        c2a = ao * elems.C2[:2, :2]
        ups = elems.UPSILON[:2, :2]
        per["omega"].append(sol.energies[1] - sol.energies[0])
        per["kappa2_slope"].append(TWO_PI * design.alpha * design.E_J
                                   * s2[1, 0].real)
        per["kappa1_slope"].append(TWO_PI * design.alpha * design.E_J
                                   * 0.5 * (s2[1, 1] - s2[0, 0]).real)
        per["lambda1"].append(0.5 * (cur[1, 1] - cur[0, 0]).real)
        per["lambda2"].append(cur[1, 0].real)
        per["Omega1"].append(0.5 * (c2a[1, 1] - c2a[0, 0]).real)
        per["Omega2"].append(c2a[1, 0].real)
        per["Delta"].append(0.5 * (ups[1, 1] + ups[0, 0]).real)
        per["current_offset"].append(0.5 * (cur[1, 1] + cur[0, 0]).real)
        per["drive_offset"].append(0.5 * (c2a[1, 1] + c2a[0, 0]).real)
        per["momentum_slope"].append(TWO_PI * ao * elems.PP[1, 0].imag)
    per = {k: np.array(v) for k, v in per.items()}
    bm = coupling.beta_M

    lam = np.array([per["lambda1"], per["lambda2"]])      # [family, qubit]
    om = np.array([per["Omega1"], per["Omega2"]])
    Lambda = bm * np.outer(lam[:, 0], lam[:, 1])
    Theta = TWO_PI ** 2 * bm * np.outer(om[:, 0], om[:, 1])
    chi1 = np.array([TWO_PI * bm * per["Omega1"][l] * per["Delta"][1 - l]
                     for l in (0, 1)])
    chi2 = np.array([TWO_PI * bm * per["Omega2"][l] * per["Delta"][1 - l]
                     for l in (0, 1)])
    Xi = np.array([[[TWO_PI * bm * om[i, l] * lam[j, 1 - l]
                     for j in (0, 1)] for i in (0, 1)] for l in (0, 1)])
    return ReducedCoefficients(
        omega=per["omega"], kappa1_slope=per["kappa1_slope"],
        kappa2_slope=per["kappa2_slope"], lambda1=per["lambda1"],
        lambda2=per["lambda2"], Omega1=per["Omega1"], Omega2=per["Omega2"],
        Delta=per["Delta"], current_offset=per["current_offset"],
        drive_offset=per["drive_offset"],
        momentum_slope=per["momentum_slope"], chi1_slope=chi1,
        chi2_slope=chi2, Xi_slope=Xi, Theta_slope=Theta, Lambda=Lambda,
        beta_M=bm)


def derive_pair_coefficients(design1: QubitDesign, design2: QubitDesign,
                             coupling: CouplingDesign, n_max: int = 12,
                             n_levels: int = 5):
    """Full pipeline for one qubit pair.

    Returns (coefficients, solutions, operator elements) with phases fixed;
    the same objects feed both the two-level and the multi-level models.
    """
    basis = PlaneWaveBasis(n_max=n_max)
    sols = []
    elems = []
    for design in (design1, design2):
        H = build_single_qubit_hamiltonian(design, basis)
        sol = solve_lowest_eigenstates(H, n_levels, basis)
        sol = fix_eigenstate_phases(sol, design)
        sols.append(sol)
        elems.append(compute_operator_elements(sol, design))
    coeffs = derive_reduced_coefficients(elems[0], elems[1], tuple(sols),
                                         coupling, (design1, design2))
    return coeffs, tuple(sols), tuple(elems)
