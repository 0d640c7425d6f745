"""Quantum-Selected Configuration Interaction over spin-resolved pools.

The subspace is the cross product of the unique alpha and beta spin strings
collected from valid samples, which conserves particle number and S_z by
construction.  A raw mode keeping the R most frequent valid bitstrings is
available for comparison with the unoptimized selection rule.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .determinants import Determinant, Subspace, project_hamiltonian
from .eigensolvers import SymmetricOperator, davidson_lowest_eigenpair, dense_lowest_eigenpair
from .fcidump import MolecularIntegrals
from .sampling import EmpiricalDistribution, valid_determinants

COEFFICIENT_EXPORT_LIMIT = 1024


@dataclass
class QsciResult:
    """Variational subspace energy and wavefunction from one QSCI solve."""

    energy: float
    subspace_size: int
    coefficients: np.ndarray
    pool_alpha_size: int
    pool_beta_size: int

    def to_json_dict(self, include_coefficients: bool | None = None) -> dict:
        if include_coefficients is None:
            include_coefficients = self.subspace_size <= COEFFICIENT_EXPORT_LIMIT
        out = {
            "energy": self.energy,
            "subspace_size": self.subspace_size,
            "pool_sizes": [self.pool_alpha_size, self.pool_beta_size],
        }
        if include_coefficients:
            out["coefficients"] = [float(c) for c in self.coefficients]
        return out

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_json_dict(**kw))


def qsci_subspace(u_alpha, u_beta) -> Subspace:
    """Cross product of the spin pools: all |alpha_i beta_j> pairs."""
    if not u_alpha or not u_beta:
        raise ValueError("empty spin pool")
    for pool in (u_alpha, u_beta):
        counts = {m.bit_count() for m in pool}
        if len(counts) > 1:
            raise ValueError("pool mixes electron counts")
    return Subspace(Determinant(a, b) for a in u_alpha for b in u_beta)


def raw_qsci_subspace(d: EmpiricalDistribution, r: int, n_orb: int,
                      n_alpha: int, n_beta: int) -> Subspace:
    """Unoptimized selection: the R most frequent valid bitstrings."""
    dets = valid_determinants(d, n_orb, n_alpha, n_beta)
    if not dets:
        raise ValueError("no valid bitstrings to select from")
    ranked = sorted(dets.items(), key=lambda kv: (-kv[1], kv[0]))
    return Subspace(det for det, _ in ranked[:r])


def lowest_in_subspace(s: Subspace, ints: MolecularIntegrals):
    """Lowest eigenpair of the projected Hamiltonian (dense or Davidson)."""
    ham = project_hamiltonian(s, ints)
    if ham.is_dense:
        value, vec = dense_lowest_eigenpair(ham.as_dense(), dense_limit=ham.dim)
    else:
        hf_like = int(np.argmin(ham.diagonal()))
        guess = np.zeros(ham.dim)
        guess[hf_like] = 1.0
        res = davidson_lowest_eigenpair(SymmetricOperator.from_projected(ham),
                                        guess=guess, tol=1e-9)
        value, vec = res.value, res.vector
    # deterministic global sign: non-negative coefficient on the
    # lexicographically smallest determinant carrying weight
    for i in range(len(vec)):
        if abs(vec[i]) > 1e-12:
            if vec[i] < 0:
                vec = -vec
            break
    return value, vec


def qsci_energy(s: Subspace, ints: MolecularIntegrals,
                pool_sizes=None) -> QsciResult:
    """Diagonalize the projected Hamiltonian and return the QSCI estimate."""
    value, vec = lowest_in_subspace(s, ints)
    if pool_sizes is None:
        pool_sizes = (len({d.alpha_mask for d in s}),
                      len({d.beta_mask for d in s}))
    return QsciResult(energy=float(value) + ints.core_energy,
                      subspace_size=len(s),
                      coefficients=vec,
                      pool_alpha_size=pool_sizes[0],
                      pool_beta_size=pool_sizes[1])
