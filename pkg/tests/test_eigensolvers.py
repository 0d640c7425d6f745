import numpy as np
import pytest

from sqdkit import enumerate_fci_space, project_hamiltonian
from sqdkit.eigensolvers import (
    SymmetricOperator,
    davidson_lowest_eigenpair,
    dense_lowest_eigenpair,
)


def test_dense_diag():
    value, vec = dense_lowest_eigenpair(np.diag([3.0, 1.0, 2.0]))
    assert value == 1.0
    assert np.allclose(np.abs(vec), [0, 1, 0])


def test_dense_2x2_analytic():
    value, vec = dense_lowest_eigenpair(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert value == pytest.approx(-1.0, abs=1e-14)
    assert np.allclose(np.abs(vec), np.full(2, 1 / np.sqrt(2)), atol=1e-12)


def test_dense_matches_full_spectrum():
    rng = np.random.default_rng(0)
    a = rng.normal(size=(50, 50))
    a = 0.5 * (a + a.T)
    value, vec = dense_lowest_eigenpair(a)
    assert value == pytest.approx(np.linalg.eigvalsh(a)[0], abs=1e-10)
    residual = np.linalg.norm(a @ vec - value * vec)
    assert residual < 1e-9 * max(1.0, abs(value))


def test_dense_limit():
    with pytest.raises(ValueError):
        dense_lowest_eigenpair(np.eye(600))


def test_dense_sign_convention():
    rng = np.random.default_rng(3)
    a = rng.normal(size=(20, 20))
    a = 0.5 * (a + a.T)
    _, vec = dense_lowest_eigenpair(a)
    assert vec[int(np.argmax(np.abs(vec)))] > 0


def test_davidson_diagonal_one_iteration():
    diag = np.diag([5.0, -3.0, 2.0, 0.5])
    guess = np.array([0.0, 1.0, 0.0, 0.0])
    res = davidson_lowest_eigenpair(SymmetricOperator.from_dense(diag),
                                    guess=guess, tol=1e-10)
    assert res.converged and res.n_iterations == 1
    assert res.value == pytest.approx(-3.0, abs=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_davidson_random_sparse(seed):
    rng = np.random.default_rng(seed)
    d = 500
    a = np.diag(np.sort(rng.normal(size=d)) * 4)
    mask = rng.random((d, d)) < 0.02
    noise = rng.normal(size=(d, d)) * 0.1 * mask
    a = a + noise + noise.T
    dense_value = np.linalg.eigvalsh(a)[0]
    res = davidson_lowest_eigenpair(SymmetricOperator.from_dense(a), tol=1e-10)
    assert res.converged
    assert res.value == pytest.approx(dense_value, abs=1e-8)
    assert res.residual_norm < 1e-10 * max(1.0, abs(res.value)) * 100 or res.residual_norm < 1e-9


def test_davidson_matrix_free():
    rng = np.random.default_rng(9)
    d = 200
    a = np.diag(np.arange(1.0, d + 1.0))
    noise = rng.normal(size=(d, d)) * 0.05
    a = a + 0.5 * (noise + noise.T)
    op = SymmetricOperator(d, matvec=lambda v: a @ v, diagonal=np.diagonal(a))
    res = davidson_lowest_eigenpair(op, tol=1e-9)
    assert res.converged
    assert res.value == pytest.approx(np.linalg.eigvalsh(a)[0], abs=1e-8)


def test_davidson_ritz_upper_bound():
    rng = np.random.default_rng(11)
    a = rng.normal(size=(80, 80))
    a = 0.5 * (a + a.T)
    exact = np.linalg.eigvalsh(a)[0]
    res = davidson_lowest_eigenpair(SymmetricOperator.from_dense(a),
                                    tol=1e-12, max_iter=7)
    assert res.value >= exact - 1e-8


def test_davidson_non_convergence_flagged():
    rng = np.random.default_rng(13)
    a = rng.normal(size=(120, 120))
    a = 0.5 * (a + a.T)
    res = davidson_lowest_eigenpair(SymmetricOperator.from_dense(a),
                                    tol=1e-14, max_iter=2)
    assert not res.converged
    assert np.isfinite(res.value)


def test_davidson_h2o_full_space(h2o_ints):
    space = enumerate_fci_space(6, 4, 4)
    ham = project_hamiltonian(space, h2o_ints)
    guess = np.zeros(len(space))
    diag = ham.diagonal()
    guess[int(np.argmin(diag))] = 1.0
    res = davidson_lowest_eigenpair(SymmetricOperator.from_projected(ham),
                                    guess=guess, tol=1e-9, max_iter=50)
    assert res.converged and res.n_iterations < 50
    assert res.value + h2o_ints.core_energy == pytest.approx(-75.01259, abs=1e-3)


def test_symmetry_probe_rejects_asymmetric():
    a = np.arange(16.0).reshape(4, 4)
    op = SymmetricOperator(4, matvec=lambda v: a @ v, diagonal=np.diagonal(a))
    with pytest.raises(ValueError, match="not symmetric"):
        op.check_symmetry()


def test_eigenvector_sign_fixed_davidson():
    rng = np.random.default_rng(17)
    a = rng.normal(size=(60, 60))
    a = 0.5 * (a + a.T)
    res = davidson_lowest_eigenpair(SymmetricOperator.from_dense(a), tol=1e-10)
    assert res.vector[int(np.argmax(np.abs(res.vector)))] > 0
