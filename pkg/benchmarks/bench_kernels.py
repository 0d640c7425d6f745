#!/usr/bin/env python3
"""Benchmark the compiled Slater-Condon kernel against the pure-Python one.

Builds projected Hamiltonians over the full H2O determinant space and over
random determinant sets of growing size, timing both backends on identical
inputs.  Run after `pip install -e .`:

    python benchmarks/bench_kernels.py
"""
import time
from itertools import combinations
from pathlib import Path

import numpy as np

from sqdkit import enumerate_fci_space, read_fcidump
from sqdkit._kernels import _slater_py

try:
    from sqdkit._kernels import _slater_cy
except ImportError:
    _slater_cy = None

DATA = Path(__file__).resolve().parent.parent / "data" / "h2o_sto3g_8e6o.fcidump"


def timeit(fn, *args, repeats=3):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def random_masks(n_orb, n_alpha, n_beta, size, seed):
    rng = np.random.default_rng(seed)
    alphas = [sum(1 << p for p in occ) for occ in combinations(range(n_orb), n_alpha)]
    betas = [sum(1 << p for p in occ) for occ in combinations(range(n_orb), n_beta)]
    pairs = [(a, b) for a in alphas for b in betas]
    pick = rng.choice(len(pairs), size=min(size, len(pairs)), replace=False)
    chosen = sorted(pairs[i] for i in pick)
    am = np.array([a for a, _ in chosen], dtype=np.uint64)
    bm = np.array([b for _, b in chosen], dtype=np.uint64)
    return am, bm


def main():
    ints = read_fcidump(DATA)
    h, g = ints.one_body, ints.two_body

    print(f"{'case':<28} {'python':>10} {'cython':>10} {'speedup':>8}")
    cases = []

    space = enumerate_fci_space(6, 4, 4)
    cases.append(("h2o full space (225)", space.masks()))
    for n_orb, na, nb, size in ((8, 4, 4, 800), (10, 5, 5, 2000)):
        big = random_masks(n_orb, na, nb, size, seed=1)
        rng = np.random.default_rng(n_orb)
        hb = rng.normal(size=(n_orb, n_orb))
        hb = 0.5 * (hb + hb.T)
        gb = rng.normal(size=(n_orb,) * 4)
        gb = gb + gb.transpose(1, 0, 2, 3)
        gb = gb + gb.transpose(0, 1, 3, 2)
        gb = 0.25 * (gb + gb.transpose(2, 3, 0, 1))
        cases.append((f"random {n_orb}o d={len(big[0])}", (big, hb, gb)))

    for label, payload in cases:
        if len(payload) == 2:
            am, bm = payload
            hh, gg = h, g
        else:
            (am, bm), hh, gg = payload
        t_py, mat_py = timeit(_slater_py.build_dense_matrix, am, bm, hh, gg)
        if _slater_cy is None:
            print(f"{label:<28} {t_py:>9.3f}s {'n/a':>10} {'':>8}")
            continue
        t_cy, mat_cy = timeit(_slater_cy.build_dense_matrix, am, bm, hh, gg)
        assert np.array_equal(mat_py, mat_cy), "backends disagree"
        print(f"{label:<28} {t_py:>9.3f}s {t_cy:>9.3f}s {t_py / t_cy:>7.1f}x")


if __name__ == "__main__":
    main()
