"""Pure-Python Slater-Condon kernels (fallback backend).

Determinants are pairs of occupation bitmasks over spatial orbitals in
blocked spin-orbital order (all alpha below all beta), so parity signs
count occupied orbitals strictly between the differing pair within the
affected spin sector.  Matrix elements exclude the scalar core energy.
"""
import numpy as np


def _bits(mask):
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _between(mask, i, a):
    lo, hi = (i, a) if i < a else (a, i)
    return mask & ((1 << hi) - 1) & ~((1 << (lo + 1)) - 1)


def _single_sign(mask, i, a):
    return -1.0 if _between(mask, i, a).bit_count() & 1 else 1.0


def _diagonal(am, bm, h, g):
    occ_a = _bits(am)
    occ_b = _bits(bm)
    e = 0.0
    for p in occ_a:
        e += h[p, p]
    for p in occ_b:
        e += h[p, p]
    for occ in (occ_a, occ_b):
        for p in occ:
            for q in occ:
                e += 0.5 * (g[p, p, q, q] - g[p, q, q, p])
    for p in occ_a:
        for q in occ_b:
            e += g[p, p, q, q]
    return e


def _single(mask1, mask2, other_occ, h, g):
    # one excitation within this sector; `other_occ` are the spectator
    # orbitals of the opposite spin
    diff = mask1 ^ mask2
    i = (mask1 & diff).bit_length() - 1
    a = (mask2 & diff).bit_length() - 1
    val = h[i, a]
    for p in _bits(mask1 & mask2):
        val += g[i, a, p, p] - g[i, p, p, a]
    for p in other_occ:
        val += g[i, a, p, p]
    return _single_sign(mask1, i, a) * val


def _double_same(mask1, mask2, g):
    diff = mask1 ^ mask2
    i, j = _bits(mask1 & diff)
    a, b = _bits(mask2 & diff)
    sign = _single_sign(mask1, i, a)
    moved = (mask1 ^ (1 << i)) | (1 << a)
    sign *= _single_sign(moved, j, b)
    return sign * (g[i, a, j, b] - g[i, b, j, a])


def _double_mixed(am1, am2, bm1, bm2, g):
    adiff = am1 ^ am2
    i = (am1 & adiff).bit_length() - 1
    a = (am2 & adiff).bit_length() - 1
    bdiff = bm1 ^ bm2
    j = (bm1 & bdiff).bit_length() - 1
    b = (bm2 & bdiff).bit_length() - 1
    return _single_sign(am1, i, a) * _single_sign(bm1, j, b) * g[i, a, j, b]


def element(am1, bm1, am2, bm2, h, g):
    """Electronic matrix element between two determinants."""
    ka = (am1 ^ am2).bit_count()
    kb = (bm1 ^ bm2).bit_count()
    if ka + kb > 4:
        return 0.0
    if ka == 0 and kb == 0:
        return _diagonal(am1, bm1, h, g)
    if ka == 2 and kb == 0:
        return _single(am1, am2, _bits(bm1), h, g)
    if ka == 0 and kb == 2:
        return _single(bm1, bm2, _bits(am1), h, g)
    if ka == 4 and kb == 0:
        return _double_same(am1, am2, g)
    if ka == 0 and kb == 4:
        return _double_same(bm1, bm2, g)
    return _double_mixed(am1, am2, bm1, bm2, g)


def _degrees(amasks, bmasks):
    a = np.asarray(amasks, dtype=np.uint64)
    b = np.asarray(bmasks, dtype=np.uint64)
    ka = np.bitwise_count(a[:, None] ^ a[None, :])
    kb = np.bitwise_count(b[:, None] ^ b[None, :])
    return ka + kb


def build_dense_matrix(amasks, bmasks, h, g):
    """Dense symmetric projected Hamiltonian over a determinant list."""
    d = len(amasks)
    am = [int(x) for x in amasks]
    bm = [int(x) for x in bmasks]
    deg = _degrees(amasks, bmasks)
    mat = np.zeros((d, d))
    for i in range(d):
        mat[i, i] = _diagonal(am[i], bm[i], h, g)
        for j in np.nonzero(deg[i, i + 1:] <= 4)[0]:
            j = int(j) + i + 1
            v = element(am[i], bm[i], am[j], bm[j], h, g)
            mat[i, j] = mat[j, i] = v
    return mat


def build_coo_entries(amasks, bmasks, h, g):
    """Upper-triangle (row, col, value) entries with excitation degree <= 2."""
    d = len(amasks)
    am = [int(x) for x in amasks]
    bm = [int(x) for x in bmasks]
    deg = _degrees(amasks, bmasks)
    rows, cols, vals = [], [], []
    for i in range(d):
        rows.append(i)
        cols.append(i)
        vals.append(_diagonal(am[i], bm[i], h, g))
        for j in np.nonzero(deg[i, i + 1:] <= 4)[0]:
            j = int(j) + i + 1
            rows.append(i)
            cols.append(j)
            vals.append(element(am[i], bm[i], am[j], bm[j], h, g))
    return (np.asarray(rows, dtype=np.int64),
            np.asarray(cols, dtype=np.int64),
            np.asarray(vals, dtype=np.float64))
