"""Pauli-string algebra, Jordan-Wigner mapping, grouping and shot allocation.

Pauli strings are stored as (x_mask, z_mask) bit pairs: qubit q carries X
when only its x-bit is set, Z when only its z-bit is set, Y when both are.
Text labels list qubits left to right starting from qubit 0, so "XZI" puts
X on qubit 0 and Z on qubit 1.

The fermion-to-qubit mapping is Jordan-Wigner with blocked spin-orbital
order: qubits 0..n-1 are the alpha orbitals, qubits n..2n-1 the beta
orbitals, matching the determinant convention.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .fcidump import MolecularIntegrals

_LETTER = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}
_MASKS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
# phase of sigma_a * sigma_b relative to the product string, per qubit
_PHASE = {("X", "Y"): 1j, ("Y", "X"): -1j, ("Y", "Z"): 1j,
          ("Z", "Y"): -1j, ("Z", "X"): 1j, ("X", "Z"): -1j}

DEFAULT_CUTOFF = 1e-12
IMAG_TOL = 1e-10


@dataclass(frozen=True, order=True)
class PauliString:
    """Tensor product of single-qubit Pauli operators."""

    n_qubits: int
    x_mask: int
    z_mask: int

    def __post_init__(self):
        limit = 1 << self.n_qubits
        if self.x_mask >= limit or self.z_mask >= limit:
            raise ValueError("mask bits outside n_qubits")

    @property
    def weight(self) -> int:
        return (self.x_mask | self.z_mask).bit_count()

    @property
    def is_identity(self) -> bool:
        return self.x_mask == 0 and self.z_mask == 0

    def letter(self, q: int) -> str:
        return _LETTER[((self.x_mask >> q) & 1, (self.z_mask >> q) & 1)]

    def to_label(self) -> str:
        return "".join(self.letter(q) for q in range(self.n_qubits))

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        x = z = 0
        for q, ch in enumerate(label):
            try:
                xb, zb = _MASKS[ch]
            except KeyError:
                raise ValueError(f"invalid Pauli letter {ch!r}") from None
            x |= xb << q
            z |= zb << q
        return cls(len(label), x, z)

    def commutes_qubitwise(self, other: "PauliString") -> bool:
        """True when on every qubit the letters agree or one is identity."""
        common = (self.x_mask | self.z_mask) & (other.x_mask | other.z_mask)
        return ((self.x_mask ^ other.x_mask) & common == 0
                and (self.z_mask ^ other.z_mask) & common == 0)

    def commutes(self, other: "PauliString") -> bool:
        """Full (symplectic) commutation test."""
        a = (self.x_mask & other.z_mask).bit_count()
        b = (self.z_mask & other.x_mask).bit_count()
        return (a & 1) == (b & 1)


def pauli_multiply(a: PauliString, b: PauliString):
    """Product of two Pauli strings as (phase, string), phase in {1,i,-1,-i}."""
    if a.n_qubits != b.n_qubits:
        raise ValueError("qubit-count mismatch")
    phase = 1 + 0j
    common = (a.x_mask | a.z_mask) & (b.x_mask | b.z_mask)
    q = common
    while q:
        low = q & -q
        q ^= low
        bit = low.bit_length() - 1
        ph = _PHASE.get((a.letter(bit), b.letter(bit)))
        if ph is not None:
            phase *= ph
    return phase, PauliString(a.n_qubits, a.x_mask ^ b.x_mask,
                              a.z_mask ^ b.z_mask)


def jw_ladder(p: int, n: int, kind: str):
    """Jordan-Wigner image of a ladder operator on mode p of n.

    ``annihilate`` maps to (X_p + iY_p)/2 with a Z string on qubits 0..p-1;
    ``create`` to (X_p - iY_p)/2 with the same string.  Returns the two
    weighted Pauli strings.
    """
    if not 0 <= p < n:
        raise ValueError(f"mode {p} outside [0, {n})")
    if kind not in ("create", "annihilate"):
        raise ValueError("kind must be 'create' or 'annihilate'")
    zs = (1 << p) - 1
    x_term = (0.5 + 0j, PauliString(n, 1 << p, zs))
    y_sign = -0.5j if kind == "create" else 0.5j
    y_term = (y_sign, PauliString(n, 1 << p, zs | (1 << p)))
    return [x_term, y_term]


class QubitHamiltonian:
    """Real-weighted, duplicate-free sum of Pauli strings.

    The identity string carries the scalar part (core energy) and is kept
    as an ordinary term; measurement groups exclude it.
    """

    def __init__(self, n_qubits: int, terms):
        self.n_qubits = n_qubits
        items = sorted(terms.items()) if isinstance(terms, dict) else sorted(terms)
        self.strings = tuple(PauliString(n_qubits, x, z) for (x, z), _ in items)
        self.coefficients = np.array([w for _, w in items], dtype=np.float64)
        if len({(s.x_mask, s.z_mask) for s in self.strings}) != len(self.strings):
            raise ValueError("duplicate Pauli strings")

    def __len__(self):
        return len(self.strings)

    def __iter__(self):
        return iter(zip(self.coefficients, self.strings))

    @property
    def identity_coefficient(self) -> float:
        for w, s in self:
            if s.is_identity:
                return float(w)
        return 0.0

    def nonidentity_indices(self) -> list[int]:
        return [i for i, s in enumerate(self.strings) if not s.is_identity]

    def to_json(self) -> str:
        return json.dumps([{"coeff": float(w), "string": s.to_label()}
                           for w, s in self])

    @classmethod
    def from_json(cls, text: str) -> "QubitHamiltonian":
        entries = json.loads(text)
        n = len(entries[0]["string"])
        terms = {}
        for e in entries:
            s = PauliString.from_label(e["string"])
            terms[(s.x_mask, s.z_mask)] = float(e["coeff"])
        return cls(n, terms)

    def dense_matrix(self) -> np.ndarray:
        """Full 2^n x 2^n matrix; brute-force oracle for small systems."""
        dim = 1 << self.n_qubits
        if dim > 1 << 14:
            raise ValueError("dense matrix limited to 14 qubits")
        mat = np.zeros((dim, dim), dtype=np.complex128)
        basis = np.arange(dim)
        for w, s in self:
            cols = basis
            rows = basis ^ s.x_mask
            n_y = (s.x_mask & s.z_mask).bit_count()
            signs = 1.0 - 2.0 * (np.bitwise_count(basis & s.z_mask) & 1)
            mat[rows, cols] += w * (1j ** n_y) * signs
        return mat


def build_qubit_hamiltonian(ints: MolecularIntegrals,
                            cutoff: float = DEFAULT_CUTOFF) -> QubitHamiltonian:
    """Map active-space integrals to a qubit Hamiltonian via Jordan-Wigner.

    Spin-orbital order is blocked (alpha block, then beta), the core energy
    becomes the identity coefficient, and terms below ``cutoff`` in absolute
    weight are dropped.  Raises when any accumulated coefficient keeps an
    imaginary residue above 1e-10, which signals integral-symmetry damage.
    """
    n_orb = ints.n_orbitals
    n = 2 * n_orb
    h = ints.one_body
    g = ints.two_body

    @lru_cache(maxsize=None)
    def ladder_product(p_create, q_ann):
        acc = {}
        for cp, sp in jw_ladder(p_create, n, "create"):
            for cq, sq in jw_ladder(q_ann, n, "annihilate"):
                ph, prod = pauli_multiply(sp, sq)
                key = (prod.x_mask, prod.z_mask)
                acc[key] = acc.get(key, 0) + cp * cq * ph
        return acc

    def multiply_dicts(t1, t2):
        out = {}
        for (x1, z1), c1 in t1.items():
            for (x2, z2), c2 in t2.items():
                ph, prod = pauli_multiply(PauliString(n, x1, z1),
                                          PauliString(n, x2, z2))
                key = (prod.x_mask, prod.z_mask)
                out[key] = out.get(key, 0) + c1 * c2 * ph
        return out

    acc: dict[tuple, complex] = {(0, 0): complex(ints.core_energy)}

    def add(tdict, w):
        for key, c in tdict.items():
            acc[key] = acc.get(key, 0) + w * c

    spin_orbs = [(s * n_orb + p, p) for s in (0, 1) for p in range(n_orb)]
    for P, p in spin_orbs:
        for Q, q in spin_orbs:
            if P // n_orb != Q // n_orb:
                continue
            w = h[p, q]
            if w != 0.0:
                add(ladder_product(P, Q), w)
    # 1/2 sum_{PQRS} (PQ|RS) a_P+ a_R+ a_S a_Q  (chemist-notation two-body)
    for P, p in spin_orbs:
        for Q, q in spin_orbs:
            if P // n_orb != Q // n_orb:
                continue
            for R, r in spin_orbs:
                for S, s in spin_orbs:
                    if R // n_orb != S // n_orb:
                        continue
                    w = 0.5 * g[p, q, r, s]
                    if w == 0.0:
                        continue
                    cc = {}
                    for c1, s1 in jw_ladder(P, n, "create"):
                        for c2, s2 in jw_ladder(R, n, "create"):
                            ph, prod = pauli_multiply(s1, s2)
                            key = (prod.x_mask, prod.z_mask)
                            cc[key] = cc.get(key, 0) + c1 * c2 * ph
                    aa = {}
                    for c1, s1 in jw_ladder(S, n, "annihilate"):
                        for c2, s2 in jw_ladder(Q, n, "annihilate"):
                            ph, prod = pauli_multiply(s1, s2)
                            key = (prod.x_mask, prod.z_mask)
                            aa[key] = aa.get(key, 0) + c1 * c2 * ph
                    add(multiply_dicts(cc, aa), w)

    terms = {}
    for key, c in acc.items():
        if abs(c.imag) > IMAG_TOL:
            raise ValueError(
                f"imaginary residue {c.imag:.3e} on term {key}; "
                "integrals violate the required symmetries")
        if abs(c.real) >= cutoff:
            terms[key] = c.real
    return QubitHamiltonian(n, terms)


@dataclass(frozen=True)
class MeasurementGroup:
    """Qubit-wise commuting terms measurable in one shared local basis.

    ``basis`` holds one letter per qubit: 'X', 'Y' or 'Z' where some member
    acts, None where every member is the identity (free qubit).
    """

    members: tuple[int, ...]
    basis: tuple


def _greedy_groups(h: QubitHamiltonian, compatible):
    order = sorted(h.nonidentity_indices(),
                   key=lambda i: (-abs(h.coefficients[i]),
                                  h.strings[i].x_mask, h.strings[i].z_mask))
    groups: list[list[int]] = []
    for idx in order:
        s = h.strings[idx]
        for g in groups:
            if all(compatible(s, h.strings[m]) for m in g):
                g.append(idx)
                break
        else:
            groups.append([idx])
    return groups


def qubitwise_commuting_groups(h: QubitHamiltonian) -> list[MeasurementGroup]:
    """Greedy first-fit partition into qubit-wise commuting groups.

    Terms are visited in descending |coefficient| order with ties broken by
    canonical string order; the identity term is excluded.
    """
    if len(h) == 0:
        raise ValueError("empty Hamiltonian")
    groups = []
    for members in _greedy_groups(h, PauliString.commutes_qubitwise):
        basis = [None] * h.n_qubits
        for m in members:
            s = h.strings[m]
            for q in range(h.n_qubits):
                letter = s.letter(q)
                if letter != "I":
                    basis[q] = letter
        groups.append(MeasurementGroup(tuple(members), tuple(basis)))
    return groups


def general_commuting_groups(h: QubitHamiltonian) -> list[list[int]]:
    """Greedy first-fit partition under full (symplectic) commutativity.

    Reproduces the measurement-group census of fully-commuting packings;
    members of one group generally need an entangling change of basis, so
    the sampling pipeline keeps using the qubit-wise partition.
    """
    if len(h) == 0:
        raise ValueError("empty Hamiltonian")
    return _greedy_groups(h, PauliString.commutes)


def allocate_shots(h: QubitHamiltonian, total: int, mode: str = "weight",
                   variances=None):
    """Distribute a shot budget over the non-identity Hamiltonian terms.

    Modes: ``uniform`` (equal), ``weight`` (proportional to |w_i|) and
    ``weight_sqrt_variance`` (proportional to |w_i| sqrt(V_i), the
    variance-optimal rule).  Counts are integers that sum to ``total``
    exactly via largest-remainder rounding, with at least one shot per
    term.  Returns (counts, predicted_mse) where the predicted mean-squared
    error sums w_i^2 V_i / N_i with V_i = 1 when no variances are supplied.
    """
    idx = h.nonidentity_indices()
    k = len(idx)
    if total < k:
        raise ValueError(f"total={total} cannot give {k} terms one shot each")
    if mode == "weight_sqrt_variance":
        if variances is None:
            raise ValueError("variances required for weight_sqrt_variance")
        v = np.asarray(variances, dtype=float)
        shares = np.abs(h.coefficients[idx]) * np.sqrt(v[idx])
    elif mode == "weight":
        shares = np.abs(h.coefficients[idx])
    elif mode == "uniform":
        shares = np.ones(k)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if shares.sum() == 0:
        shares = np.ones(k)

    # largest-remainder rounding of (total - k) extra shots on top of the
    # guaranteed one per term
    quota = (total - k) * shares / shares.sum()
    base = np.floor(quota).astype(np.int64)
    remainder = int(total - k - base.sum())
    # largest remainder first; ties to the larger share, then term order
    order = np.lexsort((np.arange(k), -shares, -(quota - base)))
    base[order[:remainder]] += 1
    counts = np.zeros(len(h), dtype=np.int64)
    counts[idx] = base + 1

    var = np.ones(len(h)) if variances is None else np.asarray(variances, float)
    mse = float(np.sum(h.coefficients[idx] ** 2 * var[idx] / counts[idx]))
    return counts, mse
