"""Sampling-based quantum diagonalization for molecular Hamiltonians.

The package covers the full desk-scale pipeline: FCIDUMP ingestion,
Slater-determinant algebra and projected Hamiltonians, Jordan-Wigner qubit
Hamiltonians with measurement grouping and shot allocation, a dense
statevector engine (UCCSD-style VQE included), projective sampling with
readout noise, the QSCI and SQD subspace solvers, Davidson/dense
eigensolvers, and coupon-collector shot-complexity estimators.
"""

__version__ = "0.1.0"

from .fcidump import MolecularIntegrals, parse_fcidump, read_fcidump, write_fcidump
from .determinants import (
    Determinant,
    Subspace,
    ProjectedHamiltonian,
    excitation_degree,
    slater_condon_element,
    enumerate_fci_space,
    project_hamiltonian,
)
from .paulis import (
    PauliString,
    QubitHamiltonian,
    MeasurementGroup,
    jw_ladder,
    pauli_multiply,
    build_qubit_hamiltonian,
    qubitwise_commuting_groups,
    general_commuting_groups,
    allocate_shots,
)
from .statevector import (
    StateVector,
    Ansatz,
    prepare_basis_state,
    apply_pauli_rotation,
    expectation,
    fci_ground_state,
    uccsd_excitations,
    vqe_optimize,
    estimate_energy_by_sampling,
)
from .sampling import (
    NoiseModel,
    EmpiricalDistribution,
    sample_bitstrings,
    symmetry_filter,
    spin_pools,
)
from .qsci import QsciResult, qsci_subspace, qsci_energy, raw_qsci_subspace
from .sqd import (
    SqdConfig,
    SqdResult,
    sqd_subspace,
    average_occupations,
    recover_configurations,
    sqd_run,
)
from .eigensolvers import (
    SymmetricOperator,
    dense_lowest_eigenpair,
    davidson_lowest_eigenpair,
)
from . import coupon
