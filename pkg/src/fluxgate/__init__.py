"""Flux-qubit coupled-pair gate synthesis.

Derives two-level model coefficients of two inductively coupled
three-junction flux qubits from their circuit design, synthesizes
magnetic-flux control pulses for single- and two-qubit gates by a
monotone iterative method, and validates the pulses against a
multi-level leakage model and a Lindblad decoherence model.
"""
from .circuit import (QubitDesign, CouplingDesign, PlaneWaveBasis,
                      ReducedCoefficients, derive_pair_coefficients)
from .hamiltonian import PulseSequence, ReducedModel, MultiLevelModel
from .propagation import (DecoherenceRates, decoherence_rates_from_T1_T2,
                          propagate_unitary, propagate_superoperator,
                          evolve_populations, build_liouvillian, step_unitary)
from .krotov import (OptimizationConfig, OptimizationRun, optimize_gate,
                     optimize_gate_dissipative, default_initial_guess,
                     gate_error_eta, cost_J)
from .gates import (GateTarget, make_target, SubspaceProjector,
                    projected_error_eta_p, dissipative_error_eta_d,
                    resonant_pi_pulse_baseline, GATE_NAMES)

__version__ = "0.1.0"

__all__ = [
    "QubitDesign", "CouplingDesign", "PlaneWaveBasis", "ReducedCoefficients",
    "derive_pair_coefficients", "PulseSequence", "ReducedModel",
    "MultiLevelModel", "DecoherenceRates", "decoherence_rates_from_T1_T2",
    "propagate_unitary", "propagate_superoperator", "evolve_populations",
    "build_liouvillian", "step_unitary", "OptimizationConfig",
    "OptimizationRun", "optimize_gate", "optimize_gate_dissipative",
    "default_initial_guess", "gate_error_eta", "cost_J", "GateTarget",
    "make_target", "SubspaceProjector", "projected_error_eta_p",
    "dissipative_error_eta_d", "resonant_pi_pulse_baseline", "GATE_NAMES",
]
