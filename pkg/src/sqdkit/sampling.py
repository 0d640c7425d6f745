"""Projective sampling, readout noise, empirical distributions and spin pools.

Sampling draws i.i.d. bitstrings from |amplitude|^2 with a counter-based
Philox generator, so results are bit-reproducible and prefix-stable: the
first k shots of an n-shot run equal a k-shot run with the same seed.
Readout noise flips each measured bit independently through an asymmetric
binary channel.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .determinants import Determinant


@dataclass(frozen=True)
class NoiseModel:
    """Independent per-qubit readout flips: P(read 1|true 0), P(read 0|true 1)."""

    p01: float
    p10: float

    def __post_init__(self):
        for name, p in (("p01", self.p01), ("p10", self.p10)):
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name}={p} outside [0, 1]")


DEFAULT_READOUT = NoiseModel(p01=0.01, p10=0.01)


@dataclass
class EmpiricalDistribution:
    """Multiset of sampled bitstrings: integer index -> count."""

    counts: dict
    total: int
    n_qubits: int

    def __post_init__(self):
        if sum(self.counts.values()) != self.total:
            raise ValueError("counts do not sum to total")

    @classmethod
    def from_indices(cls, indices, n_qubits: int) -> "EmpiricalDistribution":
        values, counts = np.unique(np.asarray(indices, dtype=np.int64),
                                   return_counts=True)
        return cls({int(v): int(c) for v, c in zip(values, counts)},
                   int(counts.sum()), n_qubits)

    def n_unique(self) -> int:
        return len(self.counts)

    def display(self, index: int) -> str:
        return "".join("1" if (index >> q) & 1 else "0"
                       for q in range(self.n_qubits))

    def to_json_dict(self) -> dict:
        return {
            "n_qubits": self.n_qubits,
            "total": self.total,
            "counts": {self.display(i): c for i, c in sorted(self.counts.items())},
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "EmpiricalDistribution":
        counts = {}
        for key, c in data["counts"].items():
            idx = 0
            for q, ch in enumerate(key):
                if ch == "1":
                    idx |= 1 << q
            counts[idx] = int(c)
        return cls(counts, int(data["total"]), int(data["n_qubits"]))


def _philox(seed: int, stream: int, substream: int) -> np.random.Generator:
    key = np.array([np.uint64(seed & (2 ** 64 - 1)),
                    np.uint64((stream << 1 | substream) & (2 ** 64 - 1))],
                   dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def sample_bitstrings(state, n_shots: int, noise: NoiseModel | None = None,
                      seed: int = 0, stream: int = 0) -> EmpiricalDistribution:
    """Sample computational-basis bitstrings from a statevector.

    Inverse-CDF draws over the cumulative |amplitude|^2 array; with a noise
    model, each bit of each shot is flipped through the readout channel
    using an independent Philox substream, keeping the noiseless and noisy
    draws prefix-stable under a fixed seed.
    """
    if n_shots < 1:
        raise ValueError("n_shots must be >= 1")
    probs = np.abs(np.asarray(state.amplitudes)) ** 2
    cdf = np.cumsum(probs)
    cdf[-1] = 1.0
    u = _philox(seed, stream, 0).random(n_shots)
    indices = np.searchsorted(cdf, u, side="right").astype(np.int64)
    n_qubits = state.n_qubits
    if noise is not None and (noise.p01 > 0 or noise.p10 > 0):
        flips = _philox(seed, stream, 1).random((n_shots, n_qubits))
        bits = (indices[:, None] >> np.arange(n_qubits)) & 1
        flip = np.where(bits == 0, flips < noise.p01, flips < noise.p10)
        bits = bits ^ flip
        indices = (bits << np.arange(n_qubits)).sum(axis=1).astype(np.int64)
    return EmpiricalDistribution.from_indices(indices, n_qubits)


def split_halves(index: int, n_orb: int) -> tuple[int, int]:
    """(alpha, beta) halves of a bitstring under blocked ordering."""
    return index & ((1 << n_orb) - 1), index >> n_orb


def symmetry_filter(d: EmpiricalDistribution, n_orb: int, n_alpha: int,
                    n_beta: int):
    """Post-select bitstrings with the correct per-sector electron counts.

    Returns (valid_distribution, n_invalid); the valid part keeps strings
    whose alpha half has popcount n_alpha and beta half popcount n_beta.
    """
    if d.n_qubits != 2 * n_orb:
        raise ValueError(f"distribution is over {d.n_qubits} qubits, "
                         f"expected {2 * n_orb}")
    valid = {}
    kept = 0
    for idx, c in d.counts.items():
        a, b = split_halves(idx, n_orb)
        if a.bit_count() == n_alpha and b.bit_count() == n_beta:
            valid[idx] = c
            kept += c
    if kept == 0:
        empty = EmpiricalDistribution({}, 0, d.n_qubits)
        return empty, d.total
    return EmpiricalDistribution(valid, kept, d.n_qubits), d.total - kept


def spin_pools(d: EmpiricalDistribution, n_orb: int, n_alpha: int,
               n_beta: int):
    """Unique spin-string pools (U_alpha, U_beta) from the valid samples.

    Every valid bitstring is split into its alpha and beta halves; the
    pools collect the distinct halves in sorted order.  Bitstrings with a
    wrong electron count in either sector contribute to neither pool.
    """
    valid, _ = symmetry_filter(d, n_orb, n_alpha, n_beta)
    alphas = set()
    betas = set()
    for idx in valid.counts:
        a, b = split_halves(idx, n_orb)
        alphas.add(a)
        betas.add(b)
    return tuple(sorted(alphas)), tuple(sorted(betas))


def valid_determinants(d: EmpiricalDistribution, n_orb: int, n_alpha: int,
                       n_beta: int):
    """Valid samples as {Determinant: count}."""
    valid, _ = symmetry_filter(d, n_orb, n_alpha, n_beta)
    out = {}
    for idx, c in valid.counts.items():
        a, b = split_halves(idx, n_orb)
        out[Determinant(a, b)] = c
    return out
