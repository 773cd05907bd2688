"""Dual-rail quantum gates on bosonic lattices.

Fock sectors (:mod:`boselat.fock`), Bose-Hubbard Hamiltonians
(:mod:`boselat.model`), control pulses (:mod:`boselat.pulses`), time
evolution (:mod:`boselat.propagator`) and gate synthesis/verification
(:mod:`boselat.gates`).
"""

from .errors import BoselatError
from .fock import FockSector, enumerate_sector, hopping_element, number_expectations
from .gates import (
    GateReport,
    LogicalUnitary,
    SynthesisResult,
    cphase_report,
    extract_logical_report,
    hadamard_sequence,
    simulate_single_qubit,
    simulate_two_qubit,
    synthesize_cphase,
    synthesize_kerr,
    synthesize_not,
    synthesize_phase,
    synthesize_rx,
)
from .model import (
    Coupling,
    HermitianOperator,
    QubitArraySpec,
    SingleQubitParams,
    build_bose_hubbard_hamiltonian,
    build_lattice_hamiltonian,
    build_single_qubit_hamiltonian,
    build_two_qubit_hamiltonian,
    degeneracy_residual,
    energy_levels,
    kerr_unitary,
)
from .propagator import (
    QuantumState,
    analytic_n1,
    analytic_n2_constant,
    check_two_level_reduction,
    logical_state,
    measure_logical,
    propagate,
)
from .pulses import ControlSchedule, Constant, Gaussian, PiecewiseLinear, Sampled, Step, average, make_area_pulse, sample

__version__ = "0.1.0"

__all__ = [
    "analytic_n1",
    "analytic_n2_constant",
    "average",
    "BoselatError",
    "build_bose_hubbard_hamiltonian",
    "build_lattice_hamiltonian",
    "build_single_qubit_hamiltonian",
    "build_two_qubit_hamiltonian",
    "check_two_level_reduction",
    "Constant",
    "ControlSchedule",
    "Coupling",
    "cphase_report",
    "degeneracy_residual",
    "energy_levels",
    "enumerate_sector",
    "extract_logical_report",
    "FockSector",
    "GateReport",
    "Gaussian",
    "hadamard_sequence",
    "HermitianOperator",
    "hopping_element",
    "kerr_unitary",
    "logical_state",
    "LogicalUnitary",
    "make_area_pulse",
    "measure_logical",
    "number_expectations",
    "PiecewiseLinear",
    "propagate",
    "QuantumState",
    "QubitArraySpec",
    "sample",
    "Sampled",
    "simulate_single_qubit",
    "simulate_two_qubit",
    "SingleQubitParams",
    "Step",
    "SynthesisResult",
    "synthesize_cphase",
    "synthesize_kerr",
    "synthesize_not",
    "synthesize_phase",
    "synthesize_rx",
]
