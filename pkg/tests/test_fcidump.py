import numpy as np
import pytest

from sqdkit import parse_fcidump, write_fcidump
from sqdkit.fcidump import FcidumpError

from conftest import TOY_1ORB, random_integrals


def test_toy_header_and_fields(toy_1orb_ints):
    ints = toy_1orb_ints
    assert ints.n_orbitals == 1
    assert (ints.n_alpha, ints.n_beta) == (1, 1)
    assert ints.one_body[0, 0] == -1.25
    assert ints.two_body[0, 0, 0, 0] == 0.675
    assert ints.core_energy == 0.71


def test_symmetry_expansion():
    text = " &FCI NORB=2,NELEC=2,MS2=0,\n &END\n 0.5 1 2 1 2\n"
    ints = parse_fcidump(text)
    g = ints.two_body
    for p, q, r, s in [(0, 1, 0, 1), (1, 0, 0, 1), (0, 1, 1, 0), (1, 0, 1, 0)]:
        assert g[p, q, r, s] == 0.5
        assert g[r, s, p, q] == 0.5


def test_h2o_fixture_dimensions(h2o_ints):
    assert h2o_ints.n_orbitals == 6
    assert (h2o_ints.n_alpha, h2o_ints.n_beta) == (4, 4)


def test_order_insensitive():
    lines = TOY_1ORB.strip().splitlines()
    shuffled = "\n".join(lines[:2] + [lines[4], lines[2], lines[3]])
    a = parse_fcidump(TOY_1ORB)
    b = parse_fcidump(shuffled)
    assert np.array_equal(a.one_body, b.one_body)
    assert np.array_equal(a.two_body, b.two_body)
    assert a.core_energy == b.core_energy


@pytest.mark.parametrize("n_orb,seed", [(2, 0), (3, 1), (4, 2)])
def test_round_trip(n_orb, seed):
    ints = random_integrals(n_orb, seed)
    again = parse_fcidump(write_fcidump(ints))
    assert np.max(np.abs(again.one_body - ints.one_body)) < 1e-14
    assert np.max(np.abs(again.two_body - ints.two_body)) < 1e-14
    assert abs(again.core_energy - ints.core_energy) < 1e-14
    assert (again.n_alpha, again.n_beta) == (ints.n_alpha, ints.n_beta)


def test_ms2_open_shell():
    ints = parse_fcidump(" &FCI NORB=2,NELEC=3,MS2=1,\n &END\n 1.0 1 1 0 0\n 0.0 0 0 0 0\n")
    assert (ints.n_alpha, ints.n_beta) == (2, 1)


def test_orbsym_parsed_and_ignored():
    text = (" &FCI NORB=1,NELEC=2,MS2=0,\n  ORBSYM=1,\n  ISYM=1,\n &END\n"
            " -1.0 1 1 0 0\n 0.5 0 0 0 0\n")
    ints = parse_fcidump(text)
    assert ints.one_body[0, 0] == -1.0


def test_slash_terminator():
    ints = parse_fcidump(" &FCI NORB=1,NELEC=2\n /\n -1.0 1 1 0 0\n")
    assert ints.one_body[0, 0] == -1.0


@pytest.mark.parametrize("text,match", [
    (" &FCI NORB=1,NELEC=2,\n &END\n nonsense 1 1 0 0\n", "malformed"),
    (" &FCI NORB=1,NELEC=2,\n &END\n 1.0 1 2 0 0\n", "outside"),
    (" &FCI NORB=1,NELEC=3,\n &END\n 1.0 1 1 0 0\n", "MS2"),
    (" &FCI NORB=2,NELEC=2,\n &END\n 1.0 1 2 1 2\n 2.0 2 1 1 2\n", "conflicting"),
    (" &FCI NELEC=2,\n &END\n", "NORB"),
    ("no header at all", "header"),
    (" &FCI NORB=1,NELEC=2,\n &END\n 1.0 1 1 0\n", "5-token"),
])
def test_errors(text, match):
    with pytest.raises(FcidumpError, match=match):
        parse_fcidump(text)


def test_duplicate_consistent_records_accepted():
    text = " &FCI NORB=2,NELEC=2,\n &END\n 1.0 1 2 1 2\n 1.0 2 1 1 2\n"
    assert parse_fcidump(text).two_body[0, 1, 0, 1] == 1.0


def test_immutable_arrays(toy_1orb_ints):
    with pytest.raises(ValueError):
        toy_1orb_ints.one_body[0, 0] = 0.0
