"""Compiled and pure-Python kernel backends must agree bit-for-bit."""
import numpy as np
import pytest

from sqdkit import _kernels, enumerate_fci_space
from sqdkit._kernels import _slater_py

from conftest import random_integrals

cython_backend = pytest.importorskip("sqdkit._kernels._slater_cy")


@pytest.mark.parametrize("n_orb,na,nb,seed", [
    (2, 1, 1, 0), (4, 2, 2, 1), (5, 3, 2, 2), (6, 4, 4, 3),
])
def test_dense_matrix_parity(n_orb, na, nb, seed):
    ints = random_integrals(n_orb, seed, n_alpha=na, n_beta=nb)
    space = enumerate_fci_space(n_orb, na, nb)
    am, bm = space.masks()
    a = _slater_py.build_dense_matrix(am, bm, ints.one_body, ints.two_body)
    b = cython_backend.build_dense_matrix(am, bm, ints.one_body, ints.two_body)
    assert np.array_equal(a, b)


def test_coo_parity(h2o_ints):
    space = enumerate_fci_space(6, 4, 4)
    am, bm = space.masks()
    ra, ca, va = _slater_py.build_coo_entries(am, bm, h2o_ints.one_body,
                                              h2o_ints.two_body)
    rb, cb, vb = cython_backend.build_coo_entries(am, bm, h2o_ints.one_body,
                                                  h2o_ints.two_body)
    assert np.array_equal(ra, rb)
    assert np.array_equal(ca, cb)
    assert np.array_equal(va, vb)


def test_scalar_element_parity():
    ints = random_integrals(5, 9, n_alpha=3, n_beta=2)
    space = enumerate_fci_space(5, 3, 2)
    rng = np.random.default_rng(0)
    for _ in range(200):
        i, j = rng.integers(0, len(space), size=2)
        d1, d2 = space[i], space[j]
        a = _slater_py.element(d1.alpha_mask, d1.beta_mask,
                               d2.alpha_mask, d2.beta_mask,
                               ints.one_body, ints.two_body)
        b = cython_backend.element(d1.alpha_mask, d1.beta_mask,
                                   d2.alpha_mask, d2.beta_mask,
                                   ints.one_body, ints.two_body)
        assert a == b


def test_backend_selected():
    assert _kernels.BACKEND in ("cython", "python")
    assert hasattr(_kernels, "build_dense_matrix")
