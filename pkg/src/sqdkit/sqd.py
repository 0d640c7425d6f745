"""Sample-Based Quantum Diagonalization with self-consistent recovery.

SQD extends QSCI three ways: the spin pools are merged into one set of
unique spin strings whose self cross product spans open-shell partner
determinants, the diagonalization runs over K weighted batches per
iteration, and symmetry-violating samples are recovered probabilistically
from the average orbital occupations of the best batch, growing the
determinant pool until the batch-energy spread falls below tolerance.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field

import numpy as np

from .determinants import Determinant, Subspace
from .fcidump import MolecularIntegrals
from .qsci import lowest_in_subspace
from .sampling import EmpiricalDistribution, _philox, split_halves, valid_determinants

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SqdConfig:
    """Loop parameters: K batches of size d, stop on spread < tolerance."""

    n_batches: int = 3
    batch_size: int = 300
    max_iterations: int = 5
    tolerance: float = 1e-6
    seed: int = 0

    def __post_init__(self):
        if self.n_batches < 1 or self.batch_size < 1:
            raise ValueError("n_batches and batch_size must be >= 1")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")


@dataclass
class IterationRecord:
    batch_energies: list
    subspace_sizes: list
    n_recovered: int


@dataclass
class SqdResult:
    """Minimum batch energy plus the loop history."""

    energy: float
    iterations: list
    occupations: np.ndarray
    subspace_size: int
    coefficients: np.ndarray = field(repr=False, default=None)
    subspace: Subspace = field(repr=False, default=None)

    def to_json_dict(self) -> dict:
        return {
            "energy": self.energy,
            "subspace_size": self.subspace_size,
            "iterations": [
                {"batch_energies": it.batch_energies,
                 "subspace_sizes": it.subspace_sizes,
                 "n_recovered": it.n_recovered}
                for it in self.iterations
            ],
            "occupations": [[float(x) for x in row] for row in self.occupations],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())


def sqd_subspace(u_alpha, u_beta, n_alpha: int, n_beta: int) -> Subspace:
    """Cross product of the merged spin pool with itself.

    The union U_alpha | U_beta is restricted per slot to strings with the
    slot's electron count; for a closed shell both slots see the whole
    merged pool, which adds the open-shell partners QSCI misses.
    """
    merged = set(u_alpha) | set(u_beta)
    if not merged:
        raise ValueError("empty merged pool")
    alpha_slot = sorted(m for m in merged if m.bit_count() == n_alpha)
    beta_slot = sorted(m for m in merged if m.bit_count() == n_beta)
    if not alpha_slot or not beta_slot:
        raise ValueError("merged pool has no strings with the target counts")
    return Subspace(Determinant(a, b) for a in alpha_slot for b in beta_slot)


def average_occupations(coefficients, s: Subspace, n_orb: int) -> np.ndarray:
    """Per-spin-orbital occupations of a normalized subspace state.

    Returns a (2, n_orb) array: row 0 alpha, row 1 beta, each entry
    sum_i c_i^2 [orbital occupied in determinant i].
    """
    c2 = np.asarray(coefficients, dtype=float) ** 2
    if len(c2) != len(s):
        raise ValueError("coefficient length differs from subspace size")
    am, bm = s.masks()
    orbitals = np.arange(n_orb, dtype=np.uint64)
    abits = (am[:, None] >> orbitals) & np.uint64(1)
    bbits = (bm[:, None] >> orbitals) & np.uint64(1)
    return np.vstack([c2 @ abits, c2 @ bbits])


def _repair_sector(mask: int, target: int, occ_row: np.ndarray, n_orb: int,
                   rng) -> tuple[int, bool]:
    """Flip bits until the sector popcount matches the target."""
    fell_back = False
    while mask.bit_count() > target:
        occupied = [p for p in range(n_orb) if (mask >> p) & 1]
        weights = np.clip([1.0 - occ_row[p] for p in occupied], 0.0, None)
        if weights.sum() <= 0:
            weights = np.ones(len(occupied))
            fell_back = True
        p = occupied[rng.choice(len(occupied), p=weights / weights.sum())]
        mask ^= 1 << p
    while mask.bit_count() < target:
        empty = [p for p in range(n_orb) if not (mask >> p) & 1]
        weights = np.clip([occ_row[p] for p in empty], 0.0, None)
        if weights.sum() <= 0:
            weights = np.ones(len(empty))
            fell_back = True
        p = empty[rng.choice(len(empty), p=weights / weights.sum())]
        mask |= 1 << p
    return mask, fell_back


def recover_configurations(invalid, occ: np.ndarray, n_alpha: int,
                           n_beta: int, seed: int = 0):
    """Probabilistic bit-flip correction of symmetry-violating bitstrings.

    Per string and sector: occupied bits are cleared with probability
    proportional to (1 - occupation) while the popcount exceeds the target,
    and empty bits are set proportionally to the occupation while it falls
    short.  All-zero selection weights fall back to a uniform choice and
    are logged.  Deterministic under a fixed seed.
    """
    occ = np.asarray(occ, dtype=float)
    n_orb = occ.shape[1]
    rng = _philox(seed, 0, 1)
    out = []
    n_fallbacks = 0
    for idx in invalid:
        a, b = split_halves(int(idx), n_orb)
        a, fb1 = _repair_sector(a, n_alpha, occ[0], n_orb, rng)
        b, fb2 = _repair_sector(b, n_beta, occ[1], n_orb, rng)
        n_fallbacks += fb1 or fb2
        out.append(Determinant(a, b))
    if n_fallbacks:
        log.warning("recovery fell back to uniform choices for %d strings",
                    n_fallbacks)
    return out


def _batch_pools(batch):
    return (tuple(sorted({d.alpha_mask for d in batch})),
            tuple(sorted({d.beta_mask for d in batch})))


def sqd_run(d: EmpiricalDistribution, ints: MolecularIntegrals,
            cfg: SqdConfig) -> SqdResult:
    """Full SQD loop: batching, diagonalization, configuration recovery.

    Iteration 0 seeds the determinant pool from the valid samples (with a
    sector-uniform-occupation recovery pass when none are valid).  Each
    iteration draws ``n_batches`` batches of at most ``batch_size`` unique
    determinants with probability proportional to observed frequency,
    diagonalizes each batch's merged-pool subspace, recovers the invalid
    samples using the occupations of the best batch and grows the pool with
    the corrected determinants.  Stops when the batch-energy spread drops
    below tolerance or after ``max_iterations``; the reported energy is the
    minimum over every batch of every iteration.
    """
    if d.total == 0:
        raise ValueError("empty distribution")
    n_orb = ints.n_orbitals
    na, nb = ints.n_alpha, ints.n_beta
    pool = dict(valid_determinants(d, n_orb, na, nb))
    invalid_samples = []
    for idx, c in sorted(d.counts.items()):
        det = Determinant(*split_halves(idx, n_orb))
        if not (det.n_alpha() == na and det.n_beta() == nb):
            invalid_samples.extend([idx] * c)

    if not pool:
        if not invalid_samples:
            raise ValueError("no valid and no recoverable configurations")
        uniform = np.vstack([np.full(n_orb, na / n_orb),
                             np.full(n_orb, nb / n_orb)])
        for det in recover_configurations(invalid_samples, uniform, na, nb,
                                          seed=cfg.seed):
            pool[det] = pool.get(det, 0) + 1

    best_energy = np.inf
    best_vec = None
    best_sub = None
    iterations = []
    for it in range(1, cfg.max_iterations + 1):
        dets = sorted(pool)
        weights = np.array([pool[det] for det in dets], dtype=float)
        weights /= weights.sum()
        rng = _philox(cfg.seed, it, 0)
        size = min(cfg.batch_size, len(dets))

        batch_energies = []
        subspace_sizes = []
        iter_best = (np.inf, None, None)
        for _ in range(cfg.n_batches):
            chosen = rng.choice(len(dets), size=size, replace=False, p=weights)
            batch = [dets[i] for i in sorted(chosen)]
            sub = sqd_subspace(*_batch_pools(batch), na, nb)
            value, vec = lowest_in_subspace(sub, ints)
            energy = float(value) + ints.core_energy
            batch_energies.append(energy)
            subspace_sizes.append(len(sub))
            if energy < iter_best[0]:
                iter_best = (energy, vec, sub)
            if energy < best_energy:
                best_energy, best_vec, best_sub = energy, vec, sub

        occ = average_occupations(iter_best[1], iter_best[2], n_orb)
        n_new = 0
        if invalid_samples:
            recovered = recover_configurations(invalid_samples, occ, na, nb,
                                               seed=cfg.seed + it)
            for det in recovered:
                if det not in pool:
                    n_new += 1
                pool[det] = pool.get(det, 0) + 1
        iterations.append(IterationRecord(batch_energies, subspace_sizes,
                                          n_new))
        # converged only once the batch energies agree AND recovery stopped
        # feeding the pool; otherwise the grown pool deserves another pass
        if max(batch_energies) - min(batch_energies) < cfg.tolerance and n_new == 0:
            break

    return SqdResult(energy=best_energy, iterations=iterations,
                     occupations=average_occupations(best_vec, best_sub, n_orb),
                     subspace_size=len(best_sub),
                     coefficients=best_vec, subspace=best_sub)
