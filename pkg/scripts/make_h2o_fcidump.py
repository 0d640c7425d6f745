#!/usr/bin/env python3
"""Generate the H2O STO-3G active-space FCIDUMP fixture.

Self-contained (numpy + scipy only): computes STO-3G integrals for water at
its gas-phase equilibrium geometry via McMurchie-Davidson recursions, runs a
restricted Hartree-Fock calculation, freezes the oxygen 1s core orbital and
writes active-space integrals (8 electrons in 6 spatial orbitals) in Molpro
FCIDUMP convention (chemist notation) to data/h2o_sto3g_8e6o.fcidump.

Reference values reproduced by the emitted file:
    RHF total energy      -74.961902 Ha
    frozen-core FCI       -75.012596 Ha   (225 determinants)
    FCI HF-determinant weight   0.9721

Run:  python scripts/make_h2o_fcidump.py [out_path]
"""
import sys
from pathlib import Path

import numpy as np
from scipy.special import hyp1f1

ANG2BOHR = 1.0 / 0.52917721092

# H2O gas-phase equilibrium geometry, Angstrom (r_OH = 0.9729 A, 109.35 deg)
GEOMETRY = [
    (8, np.array([0.0000, 0.0000, 0.1125])),
    (1, np.array([0.0000, 0.7938, -0.4500])),
    (1, np.array([0.0000, -0.7938, -0.4500])),
]

# STO-3G primitive exponents / contraction coefficients
H_1S = [(3.425250914, 0.1543289673),
        (0.6239137298, 0.5353281423),
        (0.1688554040, 0.4446345422)]
O_1S = [(130.7093200, 0.1543289673),
        (23.80886050, 0.5353281423),
        (6.443608313, 0.4446345422)]
O_SP_EXP = (5.033151319, 1.169596125, 0.3803889600)
O_2S_C = (-0.09996722919, 0.3995128261, 0.7001154689)
O_2P_C = (0.1559162750, 0.6076837186, 0.3919573931)


def boys(n, x):
    return hyp1f1(n + 0.5, n + 1.5, -x) / (2.0 * n + 1.0)


def hermite_coef(i, j, t, qx, a, b):
    """Hermite expansion coefficient E_t^{ij} for a Gaussian product."""
    p = a + b
    mu = a * b / p
    if t < 0 or t > i + j:
        return 0.0
    if i == j == t == 0:
        return np.exp(-mu * qx * qx)
    if j == 0:
        return (hermite_coef(i - 1, j, t - 1, qx, a, b) / (2 * p)
                - (mu * qx / a) * hermite_coef(i - 1, j, t, qx, a, b)
                + (t + 1) * hermite_coef(i - 1, j, t + 1, qx, a, b))
    return (hermite_coef(i, j - 1, t - 1, qx, a, b) / (2 * p)
            + (mu * qx / b) * hermite_coef(i, j - 1, t, qx, a, b)
            + (t + 1) * hermite_coef(i, j - 1, t + 1, qx, a, b))


def hermite_coulomb(t, u, v, n, p, pc):
    """Auxiliary Hermite Coulomb integral R^n_{tuv}."""
    if t < 0 or u < 0 or v < 0:
        return 0.0
    if t == u == v == 0:
        return (-2.0 * p) ** n * boys(n, p * float(pc @ pc))
    if t > 0:
        return ((t - 1) * hermite_coulomb(t - 2, u, v, n + 1, p, pc)
                + pc[0] * hermite_coulomb(t - 1, u, v, n + 1, p, pc))
    if u > 0:
        return ((u - 1) * hermite_coulomb(t, u - 2, v, n + 1, p, pc)
                + pc[1] * hermite_coulomb(t, u - 1, v, n + 1, p, pc))
    return ((v - 1) * hermite_coulomb(t, u, v - 2, n + 1, p, pc)
            + pc[2] * hermite_coulomb(t, u, v - 1, n + 1, p, pc))


def overlap_prim(a, la, A, b, lb, B):
    p = a + b
    s = (np.pi / p) ** 1.5
    for x in range(3):
        s *= hermite_coef(la[x], lb[x], 0, A[x] - B[x], a, b)
    return s


def kinetic_prim(a, la, A, b, lb, B):
    l, m, n = lb
    term = b * (2 * (l + m + n) + 3) * overlap_prim(a, la, A, b, lb, B)
    term -= 2 * b * b * (overlap_prim(a, la, A, b, (l + 2, m, n), B)
                         + overlap_prim(a, la, A, b, (l, m + 2, n), B)
                         + overlap_prim(a, la, A, b, (l, m, n + 2), B))
    term -= 0.5 * (l * (l - 1) * overlap_prim(a, la, A, b, (l - 2, m, n), B)
                   + m * (m - 1) * overlap_prim(a, la, A, b, (l, m - 2, n), B)
                   + n * (n - 1) * overlap_prim(a, la, A, b, (l, m, n - 2), B))
    return term


def nuclear_prim(a, la, A, b, lb, B, C):
    p = a + b
    P = (a * A + b * B) / p
    pc = P - C
    val = 0.0
    for t in range(la[0] + lb[0] + 1):
        for u in range(la[1] + lb[1] + 1):
            for v in range(la[2] + lb[2] + 1):
                val += (hermite_coef(la[0], lb[0], t, A[0] - B[0], a, b)
                        * hermite_coef(la[1], lb[1], u, A[1] - B[1], a, b)
                        * hermite_coef(la[2], lb[2], v, A[2] - B[2], a, b)
                        * hermite_coulomb(t, u, v, 0, p, pc))
    return 2 * np.pi / p * val


def eri_prim(a, la, A, b, lb, B, c, lc, C, d, ld, D):
    p = a + b
    q = c + d
    alpha = p * q / (p + q)
    P = (a * A + b * B) / p
    Q = (c * C + d * D) / q
    pq = P - Q
    val = 0.0
    for t in range(la[0] + lb[0] + 1):
        for u in range(la[1] + lb[1] + 1):
            for v in range(la[2] + lb[2] + 1):
                e1 = (hermite_coef(la[0], lb[0], t, A[0] - B[0], a, b)
                      * hermite_coef(la[1], lb[1], u, A[1] - B[1], a, b)
                      * hermite_coef(la[2], lb[2], v, A[2] - B[2], a, b))
                if e1 == 0.0:
                    continue
                for tt in range(lc[0] + ld[0] + 1):
                    for uu in range(lc[1] + ld[1] + 1):
                        for vv in range(lc[2] + ld[2] + 1):
                            e2 = (hermite_coef(lc[0], ld[0], tt, C[0] - D[0], c, d)
                                  * hermite_coef(lc[1], ld[1], uu, C[1] - D[1], c, d)
                                  * hermite_coef(lc[2], ld[2], vv, C[2] - D[2], c, d))
                            if e2 == 0.0:
                                continue
                            val += e1 * e2 * (-1) ** (tt + uu + vv) * hermite_coulomb(
                                t + tt, u + uu, v + vv, 0, alpha, pq)
    return val * 2 * np.pi ** 2.5 / (p * q * np.sqrt(p + q))


def dfact(k):
    r = 1
    while k > 1:
        r *= k
        k -= 2
    return r


def prim_norm(a, lmn):
    l, m, n = lmn
    return ((2 * a / np.pi) ** 0.75 * (4 * a) ** ((l + m + n) / 2.0)
            / np.sqrt(dfact(2 * l - 1) * dfact(2 * m - 1) * dfact(2 * n - 1)))


class Contracted:
    def __init__(self, center, lmn, prims):
        self.center = np.asarray(center, dtype=float)
        self.lmn = lmn
        self.exps = [e for e, _ in prims]
        self.coefs = [c * prim_norm(e, lmn) for e, c in prims]
        norm2 = 0.0
        for ci, ai in zip(self.coefs, self.exps):
            for cj, aj in zip(self.coefs, self.exps):
                norm2 += ci * cj * overlap_prim(ai, lmn, self.center, aj, lmn, self.center)
        self.coefs = [c / np.sqrt(norm2) for c in self.coefs]


def build_basis(atoms):
    basis = []
    for z, xyz in atoms:
        if z == 1:
            basis.append(Contracted(xyz, (0, 0, 0), H_1S))
        elif z == 8:
            basis.append(Contracted(xyz, (0, 0, 0), O_1S))
            basis.append(Contracted(xyz, (0, 0, 0), list(zip(O_SP_EXP, O_2S_C))))
            for lmn in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
                basis.append(Contracted(xyz, lmn, list(zip(O_SP_EXP, O_2P_C))))
        else:
            raise ValueError(f"no STO-3G data wired in for Z={z}")
    return basis


def contract_pair(kernel, f1, f2, *extra):
    val = 0.0
    for c1, a1 in zip(f1.coefs, f1.exps):
        for c2, a2 in zip(f2.coefs, f2.exps):
            val += c1 * c2 * kernel(a1, f1.lmn, f1.center, a2, f2.lmn, f2.center, *extra)
    return val


def integrals(atoms, basis):
    n = len(basis)
    S = np.empty((n, n))
    T = np.empty((n, n))
    V = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            S[i, j] = contract_pair(overlap_prim, basis[i], basis[j])
            T[i, j] = contract_pair(kinetic_prim, basis[i], basis[j])
            for z, xyz in atoms:
                V[i, j] -= z * contract_pair(nuclear_prim, basis[i], basis[j], xyz)
    eri = np.zeros((n, n, n, n))
    for i in range(n):
        for j in range(i + 1):
            ij = i * (i + 1) // 2 + j
            for k in range(n):
                for l in range(k + 1):
                    if ij < k * (k + 1) // 2 + l:
                        continue
                    fi, fj, fk, fl = basis[i], basis[j], basis[k], basis[l]
                    val = 0.0
                    for c1, a1 in zip(fi.coefs, fi.exps):
                        for c2, a2 in zip(fj.coefs, fj.exps):
                            for c3, a3 in zip(fk.coefs, fk.exps):
                                for c4, a4 in zip(fl.coefs, fl.exps):
                                    val += c1 * c2 * c3 * c4 * eri_prim(
                                        a1, fi.lmn, fi.center, a2, fj.lmn, fj.center,
                                        a3, fk.lmn, fk.center, a4, fl.lmn, fl.center)
                    for p, q, r, s in {(i, j, k, l), (j, i, k, l), (i, j, l, k),
                                       (j, i, l, k), (k, l, i, j), (l, k, i, j),
                                       (k, l, j, i), (l, k, j, i)}:
                        eri[p, q, r, s] = val
    e_nuc = 0.0
    for a in range(len(atoms)):
        for b in range(a):
            za, ra = atoms[a]
            zb, rb = atoms[b]
            e_nuc += za * zb / np.linalg.norm(ra - rb)
    return S, T, V, eri, e_nuc


def rhf(S, hcore, eri, n_occ, max_iter=200, tol=1e-12):
    w, U = np.linalg.eigh(S)
    X = U @ np.diag(w ** -0.5) @ U.T
    D = np.zeros_like(S)
    e_old = 0.0
    for _ in range(max_iter):
        J = np.einsum("pqrs,rs->pq", eri, D)
        K = np.einsum("prqs,rs->pq", eri, D)
        F = hcore + 2 * J - K
        _, Cp = np.linalg.eigh(X @ F @ X)
        C = X @ Cp
        D = C[:, :n_occ] @ C[:, :n_occ].T
        e = np.einsum("pq,pq->", D, hcore + F)
        if abs(e - e_old) < tol:
            break
        e_old = e
    return e, C


def freeze_core(C, hcore, eri, e_nuc, n_core):
    """Fold frozen core orbitals into an effective active-space Hamiltonian."""
    h_mo = C.T @ hcore @ C
    eri_mo = np.einsum("pi,qj,rk,sl,pqrs->ijkl", C, C, C, C, eri, optimize=True)
    core = range(n_core)
    act = range(n_core, C.shape[1])
    e_frozen = sum(2 * h_mo[c, c] for c in core)
    for c1 in core:
        for c2 in core:
            e_frozen += 2 * eri_mo[c1, c1, c2, c2] - eri_mo[c1, c2, c2, c1]
    h_act = np.array([[h_mo[p, q] + sum(2 * eri_mo[p, q, c, c] - eri_mo[p, c, c, q]
                                        for c in core)
                       for q in act] for p in act])
    eri_act = eri_mo[np.ix_(act, act, act, act)]
    return e_nuc + e_frozen, h_act, eri_act


def write_fcidump(path, n_orb, n_elec, ms2, core_energy, h, eri, tol=1e-12):
    lines = [f" &FCI NORB={n_orb},NELEC={n_elec},MS2={ms2},", " &END"]
    seen = set()
    for p in range(n_orb):
        for q in range(p + 1):
            for r in range(n_orb):
                for s in range(r + 1):
                    key = tuple(sorted([(p, q), (r, s)]))
                    if key in seen:
                        continue
                    seen.add(key)
                    v = eri[p, q, r, s]
                    if abs(v) > tol:
                        lines.append(f" {v:.15e} {p + 1} {q + 1} {r + 1} {s + 1}")
    for p in range(n_orb):
        for q in range(p + 1):
            if abs(h[p, q]) > tol:
                lines.append(f" {h[p, q]:.15e} {p + 1} {q + 1} 0 0")
    lines.append(f" {core_energy:.15e} 0 0 0 0")
    Path(path).write_text("\n".join(lines) + "\n")


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else str(
        Path(__file__).resolve().parent.parent / "data" / "h2o_sto3g_8e6o.fcidump")
    atoms = [(z, xyz * ANG2BOHR) for z, xyz in GEOMETRY]
    basis = build_basis(atoms)
    S, T, V, eri, e_nuc = integrals(atoms, basis)
    e_elec, C = rhf(S, T + V, eri, n_occ=5)
    print(f"RHF total energy: {e_elec + e_nuc:.6f} Ha (expected -74.961902)")
    core_energy, h_act, eri_act = freeze_core(C, T + V, eri, e_nuc, n_core=1)
    Path(out).parent.mkdir(parents=True, exist_ok=True)
    write_fcidump(out, n_orb=6, n_elec=8, ms2=0, core_energy=core_energy,
                  h=h_act, eri=eri_act)
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
