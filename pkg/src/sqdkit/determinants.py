"""Bitmask Slater determinants, excitation analysis and projected Hamiltonians.

A determinant is a pair of occupation bitmasks over spatial orbitals, one
per spin sector, with spin-orbitals in blocked order (alpha orbitals 0..n-1
first, then beta).  The display convention writes a determinant as a string
of length 2n whose characters 0..n-1 show alpha occupations of orbitals
0..n-1 left to right, followed by the beta occupations; e.g. for two
orbitals ``1001`` puts the alpha electron in orbital 0 and the beta
electron in orbital 1.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np
import scipy.sparse

from . import _kernels
from .fcidump import MolecularIntegrals

DENSE_THRESHOLD = 512


@dataclass(frozen=True, order=True)
class Determinant:
    """Occupation bitmasks (alpha_mask, beta_mask) over spatial orbitals."""

    alpha_mask: int
    beta_mask: int

    def n_alpha(self) -> int:
        return self.alpha_mask.bit_count()

    def n_beta(self) -> int:
        return self.beta_mask.bit_count()

    def is_valid(self, n_orbitals: int, n_alpha: int, n_beta: int) -> bool:
        """True when both masks fit below n_orbitals with the sector counts."""
        limit = 1 << n_orbitals
        return (self.alpha_mask < limit and self.beta_mask < limit
                and self.n_alpha() == n_alpha and self.n_beta() == n_beta)

    def to_qubit_index(self, n_orbitals: int) -> int:
        """Basis-state index under blocked Jordan-Wigner qubit ordering."""
        return self.alpha_mask | (self.beta_mask << n_orbitals)

    @classmethod
    def from_qubit_index(cls, index: int, n_orbitals: int) -> "Determinant":
        mask = (1 << n_orbitals) - 1
        return cls(index & mask, index >> n_orbitals)

    def to_string(self, n_orbitals: int) -> str:
        bits = self.to_qubit_index(n_orbitals)
        return "".join("1" if (bits >> q) & 1 else "0" for q in range(2 * n_orbitals))

    @classmethod
    def from_string(cls, s: str) -> "Determinant":
        if len(s) % 2:
            raise ValueError("determinant string must have even length")
        n = len(s) // 2
        bits = 0
        for q, ch in enumerate(s):
            if ch == "1":
                bits |= 1 << q
            elif ch != "0":
                raise ValueError(f"invalid character {ch!r} in determinant string")
        return cls.from_qubit_index(bits, n)

    @classmethod
    def hartree_fock(cls, n_alpha: int, n_beta: int) -> "Determinant":
        return cls((1 << n_alpha) - 1, (1 << n_beta) - 1)


class Subspace:
    """Ordered, duplicate-free list of determinants from one sector.

    Construction sorts lexicographically on (alpha_mask, beta_mask),
    removes duplicates and rejects mixed particle-number sectors.
    """

    def __init__(self, determinants):
        dets = sorted(set(determinants))
        if not dets:
            raise ValueError("empty subspace")
        na, nb = dets[0].n_alpha(), dets[0].n_beta()
        for d in dets:
            if d.n_alpha() != na or d.n_beta() != nb:
                raise ValueError("subspace mixes particle-number sectors")
        self._dets = tuple(dets)
        self.n_alpha = na
        self.n_beta = nb

    def __len__(self):
        return len(self._dets)

    def __iter__(self):
        return iter(self._dets)

    def __getitem__(self, i):
        return self._dets[i]

    def __contains__(self, d):
        return d in set(self._dets)

    def __eq__(self, other):
        return isinstance(other, Subspace) and self._dets == other._dets

    def index(self, d: Determinant) -> int:
        lo, hi = 0, len(self._dets)
        while lo < hi:
            mid = (lo + hi) // 2
            if self._dets[mid] < d:
                lo = mid + 1
            else:
                hi = mid
        if lo < len(self._dets) and self._dets[lo] == d:
            return lo
        raise ValueError(f"{d} not in subspace")

    def masks(self):
        """(alpha, beta) uint64 mask arrays in subspace order."""
        a = np.fromiter((d.alpha_mask for d in self._dets), dtype=np.uint64,
                        count=len(self._dets))
        b = np.fromiter((d.beta_mask for d in self._dets), dtype=np.uint64,
                        count=len(self._dets))
        return a, b

    def qubit_indices(self, n_orbitals: int) -> np.ndarray:
        return np.array([d.to_qubit_index(n_orbitals) for d in self._dets],
                        dtype=np.int64)


def excitation_degree(d1: Determinant, d2: Determinant) -> tuple[int, int]:
    """Excitation degree per spin sector between two determinants."""
    return ((d1.alpha_mask ^ d2.alpha_mask).bit_count() // 2,
            (d1.beta_mask ^ d2.beta_mask).bit_count() // 2)


def slater_condon_element(d1: Determinant, d2: Determinant,
                          ints: MolecularIntegrals) -> float:
    """Electronic matrix element <d1|H|d2>, excluding the core energy.

    Uses the standard Slater-Condon rules; zero whenever the total
    excitation degree exceeds two.  Parity signs count occupied orbitals
    strictly between the differing pair within the affected spin sector.
    """
    if d1.n_alpha() != d2.n_alpha() or d1.n_beta() != d2.n_beta():
        raise ValueError("determinants belong to different sectors")
    from ._kernels import _slater_py

    return _slater_py.element(d1.alpha_mask, d1.beta_mask,
                              d2.alpha_mask, d2.beta_mask,
                              ints.one_body, ints.two_body)


def enumerate_fci_space(n_orb: int, n_alpha: int, n_beta: int) -> Subspace:
    """All C(n_orb, n_alpha) * C(n_orb, n_beta) determinants of a sector."""
    if n_alpha > n_orb or n_beta > n_orb:
        raise ValueError("sector larger than orbital count")
    alphas = [sum(1 << p for p in occ) for occ in combinations(range(n_orb), n_alpha)]
    betas = [sum(1 << p for p in occ) for occ in combinations(range(n_orb), n_beta)]
    return Subspace(Determinant(a, b) for a in alphas for b in betas)


class ProjectedHamiltonian:
    """Symmetric projection of the electronic Hamiltonian onto a subspace.

    Stored dense below ``DENSE_THRESHOLD`` rows and as a coordinate-sparse
    matrix above, with entries computed only where the excitation degree is
    at most two.  Entries exclude the core energy.
    """

    def __init__(self, dim, dense=None, sparse=None):
        self.dim = dim
        self._dense = dense
        self._sparse = sparse

    @property
    def is_dense(self):
        return self._dense is not None

    def as_dense(self) -> np.ndarray:
        if self._dense is not None:
            return self._dense
        return self._sparse.toarray()

    def diagonal(self) -> np.ndarray:
        if self._dense is not None:
            return np.diagonal(self._dense).copy()
        return self._sparse.diagonal()

    def matvec(self, v: np.ndarray) -> np.ndarray:
        if self._dense is not None:
            return self._dense @ v
        return self._sparse @ v


def project_hamiltonian(s: Subspace, ints: MolecularIntegrals,
                        dense_threshold: int = DENSE_THRESHOLD) -> ProjectedHamiltonian:
    """Build <x_i|H|x_j> over a subspace via the selected kernel backend."""
    if s.n_alpha > ints.n_orbitals or s.n_beta > ints.n_orbitals:
        raise ValueError("subspace sector exceeds orbital count")
    am, bm = s.masks()
    if len(s) <= dense_threshold:
        mat = _kernels.build_dense_matrix(am, bm, ints.one_body, ints.two_body)
        return ProjectedHamiltonian(len(s), dense=mat)
    rows, cols, vals = _kernels.build_coo_entries(am, bm, ints.one_body,
                                                  ints.two_body)
    off = rows != cols
    coo = scipy.sparse.coo_matrix(
        (np.concatenate([vals, vals[off]]),
         (np.concatenate([rows, cols[off]]), np.concatenate([cols, rows[off]]))),
        shape=(len(s), len(s)))
    return ProjectedHamiltonian(len(s), sparse=coo.tocsr())
