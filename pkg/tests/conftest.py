from pathlib import Path

import numpy as np
import pytest

from sqdkit import build_qubit_hamiltonian, fci_ground_state, read_fcidump
from sqdkit.fcidump import MolecularIntegrals

DATA = Path(__file__).resolve().parent.parent / "data"

TOY_1ORB = """\
 &FCI NORB=1,NELEC=2,MS2=0,
 &END
 0.675 1 1 1 1
 -1.25 1 1 0 0
 0.71 0 0 0 0
"""


def random_integrals(n_orb, seed, n_alpha=None, n_beta=None) -> MolecularIntegrals:
    """Random integrals with the full 8-fold / hermitian symmetries."""
    rng = np.random.default_rng(seed)
    h = rng.normal(size=(n_orb, n_orb))
    h = 0.5 * (h + h.T)
    g = rng.normal(size=(n_orb,) * 4)
    g = g + g.transpose(1, 0, 2, 3)
    g = g + g.transpose(0, 1, 3, 2)
    g = g + g.transpose(2, 3, 0, 1)
    g *= 0.25
    if n_alpha is None:
        n_alpha = (n_orb + 1) // 2
    if n_beta is None:
        n_beta = n_orb // 2
    return MolecularIntegrals(
        n_orbitals=n_orb, n_alpha=n_alpha, n_beta=n_beta,
        core_energy=float(rng.normal()), one_body=h, two_body=g)


@pytest.fixture(scope="session")
def h2o_ints():
    return read_fcidump(DATA / "h2o_sto3g_8e6o.fcidump")


@pytest.fixture(scope="session")
def h2o_fci(h2o_ints):
    return fci_ground_state(h2o_ints)


@pytest.fixture(scope="session")
def h2o_ham(h2o_ints):
    return build_qubit_hamiltonian(h2o_ints)


@pytest.fixture(scope="session")
def toy_1orb_ints():
    from sqdkit import parse_fcidump

    return parse_fcidump(TOY_1ORB)
