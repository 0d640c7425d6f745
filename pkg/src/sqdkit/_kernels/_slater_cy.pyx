# Compiled Slater-Condon kernels; semantics mirror _slater_py exactly.
import numpy as np

cimport numpy as cnp

cnp.import_array()

ctypedef unsigned long long u64

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil


cdef inline int _popcount(u64 x) nogil:
    return __builtin_popcountll(x)


cdef inline u64 _between(u64 mask, int i, int a) nogil:
    cdef int lo = i if i < a else a
    cdef int hi = a if i < a else i
    return mask & (((<u64>1) << hi) - 1) & ~(((<u64>1) << (lo + 1)) - 1)


cdef inline double _single_sign(u64 mask, int i, int a) nogil:
    return -1.0 if _popcount(_between(mask, i, a)) & 1 else 1.0


cdef inline int _lowest(u64 mask) nogil:
    cdef int p = 0
    while not (mask & 1):
        mask >>= 1
        p += 1
    return p


# accumulation order matches _slater_py exactly so both backends produce
# bit-identical matrices
cdef double _diagonal(u64 am, u64 bm, const double[:, ::1] h,
                      const double[:, :, :, ::1] g, int n) nogil:
    cdef double e = 0.0
    cdef int p, q
    for p in range(n):
        if (am >> p) & 1:
            e += h[p, p]
    for p in range(n):
        if (bm >> p) & 1:
            e += h[p, p]
    for p in range(n):
        if not (am >> p) & 1:
            continue
        for q in range(n):
            if (am >> q) & 1:
                e += 0.5 * (g[p, p, q, q] - g[p, q, q, p])
    for p in range(n):
        if not (bm >> p) & 1:
            continue
        for q in range(n):
            if (bm >> q) & 1:
                e += 0.5 * (g[p, p, q, q] - g[p, q, q, p])
    for p in range(n):
        if not (am >> p) & 1:
            continue
        for q in range(n):
            if (bm >> q) & 1:
                e += g[p, p, q, q]
    return e


cdef double _single(u64 mask1, u64 mask2, u64 other, const double[:, ::1] h,
                    const double[:, :, :, ::1] g, int n) nogil:
    cdef u64 diff = mask1 ^ mask2
    cdef int i = _lowest(mask1 & diff)
    cdef int a = _lowest(mask2 & diff)
    cdef u64 common = mask1 & mask2
    cdef double val = h[i, a]
    cdef int p
    for p in range(n):
        if (common >> p) & 1:
            val += g[i, a, p, p] - g[i, p, p, a]
    for p in range(n):
        if (other >> p) & 1:
            val += g[i, a, p, p]
    return _single_sign(mask1, i, a) * val


cdef double _double_same(u64 mask1, u64 mask2, const double[:, :, :, ::1] g) nogil:
    cdef u64 diff = mask1 ^ mask2
    cdef u64 holes = mask1 & diff
    cdef u64 parts = mask2 & diff
    cdef int i = _lowest(holes)
    cdef int j = _lowest(holes ^ ((<u64>1) << i))
    cdef int a = _lowest(parts)
    cdef int b = _lowest(parts ^ ((<u64>1) << a))
    cdef double sign = _single_sign(mask1, i, a)
    cdef u64 moved = (mask1 ^ ((<u64>1) << i)) | ((<u64>1) << a)
    sign *= _single_sign(moved, j, b)
    return sign * (g[i, a, j, b] - g[i, b, j, a])


cdef double _double_mixed(u64 am1, u64 am2, u64 bm1, u64 bm2,
                          const double[:, :, :, ::1] g) nogil:
    cdef u64 adiff = am1 ^ am2
    cdef u64 bdiff = bm1 ^ bm2
    cdef int i = _lowest(am1 & adiff)
    cdef int a = _lowest(am2 & adiff)
    cdef int j = _lowest(bm1 & bdiff)
    cdef int b = _lowest(bm2 & bdiff)
    return _single_sign(am1, i, a) * _single_sign(bm1, j, b) * g[i, a, j, b]


cdef double _element(u64 am1, u64 bm1, u64 am2, u64 bm2, const double[:, ::1] h,
                     const double[:, :, :, ::1] g, int n) nogil:
    cdef int ka = _popcount(am1 ^ am2)
    cdef int kb = _popcount(bm1 ^ bm2)
    if ka + kb > 4:
        return 0.0
    if ka == 0 and kb == 0:
        return _diagonal(am1, bm1, h, g, n)
    if ka == 2 and kb == 0:
        return _single(am1, am2, bm1, h, g, n)
    if ka == 0 and kb == 2:
        return _single(bm1, bm2, am1, h, g, n)
    if ka == 4 and kb == 0:
        return _double_same(am1, am2, g)
    if ka == 0 and kb == 4:
        return _double_same(bm1, bm2, g)
    return _double_mixed(am1, am2, bm1, bm2, g)


def element(am1, bm1, am2, bm2, h, g):
    cdef const double[:, ::1] hv = np.ascontiguousarray(h, dtype=np.float64)
    cdef const double[:, :, :, ::1] gv = np.ascontiguousarray(g, dtype=np.float64)
    return _element(<u64>am1, <u64>bm1, <u64>am2, <u64>bm2, hv, gv, h.shape[0])


def build_dense_matrix(amasks, bmasks, h, g):
    """Dense symmetric projected Hamiltonian over a determinant list."""
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] am = np.ascontiguousarray(amasks, dtype=np.uint64)
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] bm = np.ascontiguousarray(bmasks, dtype=np.uint64)
    cdef const double[:, ::1] hv = np.ascontiguousarray(h, dtype=np.float64)
    cdef const double[:, :, :, ::1] gv = np.ascontiguousarray(g, dtype=np.float64)
    cdef int d = am.shape[0]
    cdef int n = h.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] mat = np.zeros((d, d))
    cdef double[:, ::1] mv = mat
    cdef int i, j
    cdef double v
    with nogil:
        for i in range(d):
            mv[i, i] = _diagonal(am[i], bm[i], hv, gv, n)
            for j in range(i + 1, d):
                if _popcount(am[i] ^ am[j]) + _popcount(bm[i] ^ bm[j]) > 4:
                    continue
                v = _element(am[i], bm[i], am[j], bm[j], hv, gv, n)
                mv[i, j] = v
                mv[j, i] = v
    return mat


def build_coo_entries(amasks, bmasks, h, g):
    """Upper-triangle (row, col, value) entries with excitation degree <= 2."""
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] am = np.ascontiguousarray(amasks, dtype=np.uint64)
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] bm = np.ascontiguousarray(bmasks, dtype=np.uint64)
    cdef const double[:, ::1] hv = np.ascontiguousarray(h, dtype=np.float64)
    cdef const double[:, :, :, ::1] gv = np.ascontiguousarray(g, dtype=np.float64)
    cdef int d = am.shape[0]
    cdef int n = h.shape[0]
    rows_l = []
    cols_l = []
    vals_l = []
    cdef int i, j
    for i in range(d):
        rows_l.append(i)
        cols_l.append(i)
        vals_l.append(_diagonal(am[i], bm[i], hv, gv, n))
        for j in range(i + 1, d):
            if _popcount(am[i] ^ am[j]) + _popcount(bm[i] ^ bm[j]) > 4:
                continue
            rows_l.append(i)
            cols_l.append(j)
            vals_l.append(_element(am[i], bm[i], am[j], bm[j], hv, gv, n))
    return (np.asarray(rows_l, dtype=np.int64),
            np.asarray(cols_l, dtype=np.int64),
            np.asarray(vals_l, dtype=np.float64))
