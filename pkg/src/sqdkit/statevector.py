"""Dense statevector simulation and the measurement/VQE machinery on top.

Basis-state index convention: bit q of the index is qubit q (qubit 0 is the
least-significant bit), so a determinant maps to the index
``alpha_mask | (beta_mask << n_orbitals)`` under the blocked Jordan-Wigner
layout.  The Pauli rotation convention is exp(-i * theta * P).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import sampling
from .determinants import Determinant, Subspace, enumerate_fci_space, project_hamiltonian
from .eigensolvers import lowest_eigenpair
from .fcidump import MolecularIntegrals
from .paulis import MeasurementGroup, PauliString, QubitHamiltonian, jw_ladder, pauli_multiply

NORM_TOL = 1e-10
FCI_DIM_LIMIT = 10 ** 6

_H_GATE = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)
# inverse of the local rotator S.H for Y-basis measurement
_HSDAG_GATE = _H_GATE @ np.diag([1, -1j]).astype(np.complex128)


@dataclass
class StateVector:
    """Normalized complex amplitudes over the 2^n computational basis."""

    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.amplitudes.shape != (1 << self.n_qubits,):
            raise ValueError("amplitude array has wrong length")
        norm = float(np.sum(np.abs(self.amplitudes) ** 2))
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state not normalized: |psi|^2 = {norm}")

    def copy(self) -> "StateVector":
        return StateVector(self.n_qubits, self.amplitudes.copy())

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


def prepare_basis_state(bits: int, n: int) -> StateVector:
    """Computational basis state |bits> on n qubits."""
    if not 0 <= bits < (1 << n):
        raise ValueError(f"basis index {bits} outside [0, 2^{n})")
    amps = np.zeros(1 << n, dtype=np.complex128)
    amps[bits] = 1.0
    return StateVector(n, amps)


# per-string permutation/sign tables; keyed by (n_qubits, x_mask, z_mask)
_OP_CACHE: dict = {}
_OP_CACHE_LIMIT = 8192


def _pauli_tables(n_qubits: int, x_mask: int, z_mask: int):
    key = (n_qubits, x_mask, z_mask)
    hit = _OP_CACHE.get(key)
    if hit is None:
        if len(_OP_CACHE) >= _OP_CACHE_LIMIT:
            _OP_CACHE.clear()
        basis = np.arange(1 << n_qubits)
        signs = (1.0 - 2.0 * (np.bitwise_count(basis & z_mask) & 1)).astype(
            np.complex128)
        signs *= 1j ** ((x_mask & z_mask).bit_count())
        perm = basis ^ x_mask if x_mask else None
        hit = (perm, signs)
        _OP_CACHE[key] = hit
    return hit


def _apply_pauli_amps(amps: np.ndarray, p: PauliString) -> np.ndarray:
    perm, signs = _pauli_tables(p.n_qubits, p.x_mask, p.z_mask)
    out = signs * amps
    return out[perm] if perm is not None else out


def apply_pauli(s: StateVector, p: PauliString) -> StateVector:
    """P|s> for a Pauli string P (unitary and Hermitian)."""
    if p.n_qubits != s.n_qubits:
        raise ValueError("qubit-count mismatch")
    return StateVector(s.n_qubits, _apply_pauli_amps(s.amplitudes, p))


def _rotation_amps(amps: np.ndarray, p: PauliString, theta: float) -> np.ndarray:
    return (math.cos(theta) * amps
            - 1j * math.sin(theta) * _apply_pauli_amps(amps, p))


def apply_pauli_rotation(s: StateVector, p: PauliString, theta: float) -> StateVector:
    """exp(-i theta P)|s> = cos(theta)|s> - i sin(theta) P|s>."""
    if p.n_qubits != s.n_qubits:
        raise ValueError("qubit-count mismatch")
    return StateVector(s.n_qubits, _rotation_amps(s.amplitudes, p, theta))


def _apply_1q_gate(amps: np.ndarray, q: int, gate: np.ndarray) -> np.ndarray:
    idx = np.arange(amps.size)
    low = idx[(idx >> q) & 1 == 0]
    high = low | (1 << q)
    out = np.empty_like(amps)
    out[low] = gate[0, 0] * amps[low] + gate[0, 1] * amps[high]
    out[high] = gate[1, 0] * amps[low] + gate[1, 1] * amps[high]
    return out


def rotate_to_measurement_basis(s: StateVector, basis) -> StateVector:
    """Apply the inverse local rotator so Z-basis sampling measures `basis`.

    ``basis`` is a per-qubit sequence of 'X', 'Y', 'Z' or None; X applies a
    Hadamard, Y applies H.Sdag, Z and free qubits are untouched.
    """
    amps = s.amplitudes
    for q, letter in enumerate(basis):
        if letter == "X":
            amps = _apply_1q_gate(amps, q, _H_GATE)
        elif letter == "Y":
            amps = _apply_1q_gate(amps, q, _HSDAG_GATE)
    return StateVector(s.n_qubits, amps)


def _expectation_amps(amps: np.ndarray, h: QubitHamiltonian) -> float:
    total = 0j
    for w, p in h:
        total += w * np.vdot(amps, _apply_pauli_amps(amps, p))
    if abs(total.imag) > 1e-9:
        raise ValueError(f"non-real expectation residue {total.imag:.3e}")
    return float(total.real)


def expectation(s: StateVector, h: QubitHamiltonian) -> float:
    """Exact energy sum_i w_i <s|P_i|s>; imaginary residue is discarded."""
    if h.n_qubits != s.n_qubits:
        raise ValueError("qubit-count mismatch")
    return _expectation_amps(s.amplitudes, h)


@dataclass
class FciResult:
    energy: float
    coefficients: np.ndarray
    subspace: Subspace
    state: StateVector


def fci_ground_state(ints: MolecularIntegrals,
                     dim_limit: int = FCI_DIM_LIMIT) -> FciResult:
    """Exact lowest eigenstate over the full determinant space of the sector.

    Coefficients are normalized with the Hartree-Fock coefficient made
    non-negative (falling back to the largest component when it vanishes);
    the returned statevector embeds them at the determinants' qubit indices.
    """
    space = enumerate_fci_space(ints.n_orbitals, ints.n_alpha, ints.n_beta)
    if len(space) > dim_limit:
        raise ValueError(f"FCI dimension {len(space)} over limit {dim_limit}")
    ham = project_hamiltonian(space, ints)
    value, vec = lowest_eigenpair(ham.as_dense() if ham.is_dense else ham)
    hf = Determinant.hartree_fock(ints.n_alpha, ints.n_beta)
    anchor = vec[space.index(hf)]
    if anchor == 0.0:
        anchor = vec[int(np.argmax(np.abs(vec)))]
    if anchor < 0:
        vec = -vec
    vec = vec / np.linalg.norm(vec)
    amps = np.zeros(1 << (2 * ints.n_orbitals), dtype=np.complex128)
    amps[space.qubit_indices(ints.n_orbitals)] = vec
    return FciResult(energy=float(value) + ints.core_energy,
                     coefficients=vec, subspace=space,
                     state=StateVector(2 * ints.n_orbitals, amps))


@dataclass
class Ansatz:
    """Ordered excitation generators with one rotation angle per generator.

    Each generator is the anti-Hermitian combination i(T - T^dag) of a
    spin-preserving excitation T, pre-mapped to a real-weighted Pauli-string
    sum.  ``trotterized`` flags generators whose strings failed the pairwise
    commutation check and are applied as a first-order product in canonical
    order (standard JW excitations never trigger it).
    """

    n_qubits: int
    generators: tuple
    labels: tuple
    parameters: np.ndarray = field(default=None)
    trotterized: bool = False

    def __post_init__(self):
        if self.parameters is None:
            self.parameters = np.zeros(len(self.generators))
        if len(self.parameters) != len(self.generators):
            raise ValueError("parameter count differs from generator count")

    def __len__(self):
        return len(self.generators)


def _excitation_generator(n, creation_modes, annihilation_modes):
    """Pauli decomposition of i(T - T^dag) for T = prod a^dag prod a."""
    term = {(0, 0): 1 + 0j}
    ops = ([(m, "create") for m in creation_modes]
           + [(m, "annihilate") for m in annihilation_modes])
    for mode, kind in ops:
        new = {}
        for (x1, z1), c1 in term.items():
            for c2, s2 in jw_ladder(mode, n, kind):
                ph, prod = pauli_multiply(PauliString(n, x1, z1), s2)
                key = (prod.x_mask, prod.z_mask)
                new[key] = new.get(key, 0) + c1 * c2 * ph
        term = new
    # i(T - T^dag) = sum_k (-2 Im c_k) P_k for T = sum_k c_k P_k
    gen = []
    for (x, z), c in sorted(term.items()):
        w = -2.0 * c.imag
        if abs(w) > 1e-14:
            gen.append((w, PauliString(n, x, z)))
    return tuple(gen)


def uccsd_excitations(n_orb: int, n_alpha: int, n_beta: int) -> Ansatz:
    """UCCSD-style ansatz: one generator per spin-preserving excitation.

    Singles come before doubles, each block in ascending index order:
    within-alpha and within-beta singles and doubles from occupied to
    virtual orbitals of the Hartree-Fock reference, plus all mixed
    alpha-beta doubles.  Parameters start at zero (identity circuit).
    """
    n = 2 * n_orb
    occ = {0: list(range(n_alpha)), 1: list(range(n_beta))}
    virt = {0: list(range(n_alpha, n_orb)), 1: list(range(n_beta, n_orb))}
    mode = lambda spin, p: spin * n_orb + p

    generators = []
    labels = []
    for spin in (0, 1):
        for i in occ[spin]:
            for a in virt[spin]:
                generators.append(_excitation_generator(
                    n, [mode(spin, a)], [mode(spin, i)]))
                labels.append(("single", spin, i, a))
    for spin in (0, 1):
        for i, j in combinations(occ[spin], 2):
            for a, b in combinations(virt[spin], 2):
                generators.append(_excitation_generator(
                    n, [mode(spin, a), mode(spin, b)],
                    [mode(spin, j), mode(spin, i)]))
                labels.append(("double", spin, i, j, a, b))
    for i in occ[0]:
        for a in virt[0]:
            for j in occ[1]:
                for b in virt[1]:
                    generators.append(_excitation_generator(
                        n, [mode(0, a), mode(1, b)], [mode(1, j), mode(0, i)]))
                    labels.append(("double_ab", i, a, j, b))

    trotterized = False
    for gen in generators:
        strings = [s for _, s in gen]
        for s1, s2 in combinations(strings, 2):
            if not s1.commutes(s2):
                trotterized = True
    return Ansatz(n_qubits=n, generators=tuple(g for g in generators if g),
                  labels=tuple(labels), trotterized=trotterized)


def _generator_amps(amps: np.ndarray, generator, theta: float) -> np.ndarray:
    for w, p in generator:
        amps = _rotation_amps(amps, p, theta * w)
    return amps


def apply_generator(s: StateVector, generator, theta: float) -> StateVector:
    """exp(-i theta G) for G given as a real-weighted Pauli sum.

    Exact when the strings commute (the UCCSD case); otherwise this is the
    first-order product in canonical order.
    """
    return StateVector(s.n_qubits, _generator_amps(s.amplitudes, generator,
                                                   theta))


def apply_ansatz(reference: StateVector, ansatz: Ansatz, thetas=None) -> StateVector:
    thetas = ansatz.parameters if thetas is None else thetas
    amps = reference.amplitudes
    for gen, theta in zip(ansatz.generators, thetas):
        if theta != 0.0:
            amps = _generator_amps(amps, gen, float(theta))
    return StateVector(reference.n_qubits, amps)


@dataclass
class VqeResult:
    parameters: np.ndarray
    energy: float
    trace: list
    converged: bool


_FIT_OFFSETS = np.array([0.0, 2 * np.pi / 5, 4 * np.pi / 5,
                         -4 * np.pi / 5, -2 * np.pi / 5])
_FIT_DESIGN = np.column_stack([
    np.ones(5), np.cos(_FIT_OFFSETS), np.sin(_FIT_OFFSETS),
    np.cos(2 * _FIT_OFFSETS), np.sin(2 * _FIT_OFFSETS)])
_FIT_SOLVE = np.linalg.inv(_FIT_DESIGN)


def _trig_minimize(energies):
    """Exact minimizer of a0+a1 cos+b1 sin+a2 cos2+b2 sin2 through 5 points."""
    c = _FIT_SOLVE @ np.asarray(energies)
    grid = np.linspace(-np.pi, np.pi, 720, endpoint=False)

    def model(t):
        return (c[0] + c[1] * np.cos(t) + c[2] * np.sin(t)
                + c[3] * np.cos(2 * t) + c[4] * np.sin(2 * t))

    t = grid[int(np.argmin(model(grid)))]
    for _ in range(4):
        d1 = (-c[1] * np.sin(t) + c[2] * np.cos(t)
              - 2 * c[3] * np.sin(2 * t) + 2 * c[4] * np.cos(2 * t))
        d2 = (-c[1] * np.cos(t) - c[2] * np.sin(t)
              - 4 * c[3] * np.cos(2 * t) - 4 * c[4] * np.sin(2 * t))
        if d2 <= 0:
            break
        t = t - d1 / d2
    return float(t)


def vqe_optimize(h: QubitHamiltonian, ansatz: Ansatz, reference: StateVector,
                 sweeps: int = 3, tol: float = 2e-4) -> VqeResult:
    """Sequential exact one-parameter minimization over the ansatz angles.

    For each parameter the energy restricted to that angle is the exact
    five-coefficient trigonometric polynomial of a Givens-type generator
    (harmonics up to 2*theta); five phase-point evaluations determine it and
    the parameter jumps to its analytic minimizer, guarded so the energy
    never increases.  Sweeps stop early once a full pass improves the
    energy by less than ``tol``.
    """
    if sweeps < 1:
        raise ValueError("sweeps must be >= 1")
    thetas = ansatz.parameters.astype(float).copy()
    k_gen = len(ansatz)

    def suffix_energy(prefix, k, theta_k):
        s = apply_generator(prefix, ansatz.generators[k], theta_k)
        for kk in range(k + 1, k_gen):
            if thetas[kk] != 0.0:
                s = apply_generator(s, ansatz.generators[kk], thetas[kk])
        return expectation(s, h)

    current = expectation(apply_ansatz(reference, ansatz, thetas), h)
    trace = [current]
    converged = False
    for _ in range(sweeps):
        prefix = reference
        for k in range(k_gen):
            base = thetas[k]
            energies = [suffix_energy(prefix, k, base + d) for d in _FIT_OFFSETS]
            candidate = base + _trig_minimize(energies)
            e_candidate = suffix_energy(prefix, k, candidate)
            if e_candidate <= energies[0]:
                thetas[k] = candidate
            prefix = apply_generator(prefix, ansatz.generators[k], thetas[k])
        sweep_energy = expectation(prefix, h)
        trace.append(sweep_energy)
        if current - sweep_energy < tol:
            current = min(current, sweep_energy)
            converged = True
            break
        current = sweep_energy
    return VqeResult(parameters=thetas, energy=current, trace=trace,
                     converged=converged)


def estimate_energy_by_sampling(s: StateVector, h: QubitHamiltonian,
                                groups, shots_per_group: int,
                                noise=None, seed: int = 0):
    """Shot-based grouped energy estimate, returning (energy, stderr).

    Each group's basis map is applied as local rotations, the rotated state
    is sampled ``shots_per_group`` times (through the readout channel when
    ``noise`` is given) and every member string is estimated as the mean of
    products of (-1)^bit over its support.  The standard error combines the
    per-term sample variances as sqrt(sum w_i^2 s_i^2 / N).
    """
    nonidentity = set(h.nonidentity_indices())
    covered = set()
    for g in groups:
        covered.update(g.members)
    if nonidentity - covered:
        raise ValueError("groups do not cover every non-identity term")

    energy = h.identity_coefficient
    variance = 0.0
    for g_index, group in enumerate(groups):
        rotated = rotate_to_measurement_basis(s, group.basis)
        dist = sampling.sample_bitstrings(rotated, shots_per_group, noise=noise,
                                          seed=seed, stream=g_index)
        indices = np.fromiter(dist.counts.keys(), dtype=np.int64,
                              count=len(dist.counts))
        counts = np.fromiter(dist.counts.values(), dtype=np.float64,
                             count=len(dist.counts))
        n_s = float(dist.total)
        for m in group.members:
            p = h.strings[m]
            support = p.x_mask | p.z_mask
            outcomes = 1.0 - 2.0 * (np.bitwise_count(indices & support) & 1)
            mean = float(outcomes @ counts) / n_s
            energy += h.coefficients[m] * mean
            if n_s > 1:
                sample_var = (1.0 - mean ** 2) * n_s / (n_s - 1.0)
            else:
                sample_var = 0.0
            variance += h.coefficients[m] ** 2 * sample_var / n_s
    return float(energy), float(np.sqrt(variance))
