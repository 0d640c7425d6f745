"""FCIDUMP parsing and writing (Molpro convention, chemist notation).

The FCIDUMP text format is the sole entry point for chemistry data: a
header ``&FCI NORB=<n>,NELEC=<n>,MS2=<n>`` terminated by ``&END`` or ``/``,
followed by whitespace-separated records ``value i j k l`` with 1-based
indices.  Records with ``i j 0 0`` are one-body integrals h_pq, the record
``0 0 0 0`` is the core energy, and four-index records are two-electron
integrals (ij|kl) in chemist notation.  Files must already describe the
active space; no frozen-core folding happens here.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

SYMMETRY_TOL = 1e-10


class FcidumpError(ValueError):
    """Malformed or inconsistent FCIDUMP content."""


@dataclass(frozen=True)
class MolecularIntegrals:
    """Active-space molecular integrals plus the scalar core energy.

    Attributes
    ----------
    n_orbitals : int
        Number of spatial orbitals in the active space.
    n_alpha, n_beta : int
        Electrons per spin sector.
    core_energy : float
        Nuclear repulsion plus any frozen-core shift, in Hartree.
    one_body : (n, n) ndarray
        Symmetric h_pq matrix, Hartree.
    two_body : (n, n, n, n) ndarray
        Chemist-notation (pq|rs) tensor with 8-fold permutational symmetry.
    """

    n_orbitals: int
    n_alpha: int
    n_beta: int
    core_energy: float
    one_body: np.ndarray = field(repr=False)
    two_body: np.ndarray = field(repr=False)

    def __post_init__(self):
        n = self.n_orbitals
        if self.one_body.shape != (n, n) or self.two_body.shape != (n, n, n, n):
            raise FcidumpError("integral arrays inconsistent with n_orbitals")
        if not (0 <= self.n_alpha <= n and 0 <= self.n_beta <= n):
            raise FcidumpError(
                f"electron counts ({self.n_alpha}, {self.n_beta}) outside [0, {n}]")
        h, g = self.one_body, self.two_body
        if np.max(np.abs(h - h.T)) >= SYMMETRY_TOL:
            raise FcidumpError("one-body integrals not symmetric")
        for perm in ((1, 0, 2, 3), (0, 1, 3, 2), (2, 3, 0, 1)):
            if np.max(np.abs(g - g.transpose(perm))) >= SYMMETRY_TOL:
                raise FcidumpError("two-body integrals violate 8-fold symmetry")
        self.one_body.flags.writeable = False
        self.two_body.flags.writeable = False


def _canonical_two_body(i, j, k, l):
    ij = (i, j) if i >= j else (j, i)
    kl = (k, l) if k >= l else (l, k)
    return ij + kl if ij >= kl else kl + ij


_HEADER_INT = {
    "NORB": re.compile(r"NORB\s*=\s*(\d+)", re.I),
    "NELEC": re.compile(r"NELEC\s*=\s*(\d+)", re.I),
    "MS2": re.compile(r"MS2\s*=\s*(-?\d+)", re.I),
}


def parse_fcidump(text: str) -> MolecularIntegrals:
    """Parse FCIDUMP text into :class:`MolecularIntegrals`.

    All eight permutational images of every two-body record are filled in.
    Duplicate records are tolerated when they agree within 1e-10 and
    rejected otherwise.  Record order is irrelevant.

    Raises
    ------
    FcidumpError
        On a malformed header or record, an index outside [1, NORB], an odd
        NELEC without MS2, or conflicting duplicate records.
    """
    upper = text.upper()
    m = re.search(r"&END|^\s*/\s*$|\n\s*/", upper, re.M)
    if "&FCI" not in upper or m is None:
        raise FcidumpError("missing &FCI header or &END terminator")
    header = text[: m.start()]
    body = text[m.end():]

    norb_m = _HEADER_INT["NORB"].search(header)
    nelec_m = _HEADER_INT["NELEC"].search(header)
    if norb_m is None or nelec_m is None:
        raise FcidumpError("header must define NORB and NELEC")
    n_orb = int(norb_m.group(1))
    n_elec = int(nelec_m.group(1))
    ms2_m = _HEADER_INT["MS2"].search(header)
    if ms2_m is not None:
        ms2 = int(ms2_m.group(1))
    elif n_elec % 2 == 0:
        ms2 = 0
    else:
        raise FcidumpError("odd NELEC requires an explicit MS2")
    if (n_elec + ms2) % 2 != 0:
        raise FcidumpError(f"NELEC={n_elec} and MS2={ms2} have different parity")
    n_alpha = (n_elec + ms2) // 2
    n_beta = (n_elec - ms2) // 2

    one = np.zeros((n_orb, n_orb))
    two = np.zeros((n_orb, n_orb, n_orb, n_orb))
    core = 0.0
    seen: dict[tuple, float] = {}

    tokens = body.split()
    if len(tokens) % 5 != 0:
        raise FcidumpError("record section is not a whole number of 5-token records")
    for off in range(0, len(tokens), 5):
        try:
            value = float(tokens[off].replace("D", "E").replace("d", "e"))
            i, j, k, l = (int(t) for t in tokens[off + 1: off + 5])
        except ValueError as exc:
            raise FcidumpError(
                f"malformed record: {' '.join(tokens[off:off + 5])!r}") from exc
        for idx in (i, j, k, l):
            if idx < 0 or idx > n_orb:
                raise FcidumpError(f"orbital index {idx} outside [1, {n_orb}]")
        if i == j == k == l == 0:
            key = ("core",)
        elif k == 0 and l == 0:
            if i == 0 or j == 0:
                raise FcidumpError(f"bad one-body record indices ({i}, {j}, 0, 0)")
            key = ("one",) + ((i, j) if i >= j else (j, i))
        elif 0 in (i, j, k, l):
            raise FcidumpError(f"bad record indices ({i}, {j}, {k}, {l})")
        else:
            key = ("two",) + _canonical_two_body(i, j, k, l)
        if key in seen and abs(seen[key] - value) > 1e-10:
            raise FcidumpError(f"conflicting duplicate record for {key}")
        seen[key] = value

        if key[0] == "core":
            core = value
        elif key[0] == "one":
            one[i - 1, j - 1] = one[j - 1, i - 1] = value
        else:
            p, q, r, s = i - 1, j - 1, k - 1, l - 1
            for a, b in ((p, q), (q, p)):
                for c, d in ((r, s), (s, r)):
                    two[a, b, c, d] = value
                    two[c, d, a, b] = value

    return MolecularIntegrals(
        n_orbitals=n_orb, n_alpha=n_alpha, n_beta=n_beta,
        core_energy=core, one_body=one, two_body=two)


def read_fcidump(path) -> MolecularIntegrals:
    """Parse an FCIDUMP file from disk."""
    return parse_fcidump(Path(path).read_text())


def write_fcidump(ints: MolecularIntegrals, tol: float = 0.0) -> str:
    """Serialize integrals back to FCIDUMP text (15 significant digits).

    Only canonically-unique records are written; entries with
    ``|value| <= tol`` are skipped (zero by default keeps exact round-trips).
    """
    n = ints.n_orbitals
    ms2 = ints.n_alpha - ints.n_beta
    lines = [f" &FCI NORB={n},NELEC={ints.n_alpha + ints.n_beta},MS2={ms2},", " &END"]
    emitted = set()
    for p in range(n):
        for q in range(p + 1):
            for r in range(n):
                for s in range(r + 1):
                    key = _canonical_two_body(p, q, r, s)
                    if key in emitted:
                        continue
                    emitted.add(key)
                    v = ints.two_body[p, q, r, s]
                    if abs(v) > tol:
                        lines.append(f" {v:.15e} {p + 1} {q + 1} {r + 1} {s + 1}")
    for p in range(n):
        for q in range(p + 1):
            v = ints.one_body[p, q]
            if abs(v) > tol:
                lines.append(f" {v:.15e} {p + 1} {q + 1} 0 0")
    lines.append(f" {ints.core_energy:.15e} 0 0 0 0")
    return "\n".join(lines) + "\n"
