import math

import numpy as np
import pytest

from evochain import InputError
from evochain.chains import rotation
from evochain.rotation2d import (
    BasisChange2,
    RotAlgebra,
    change_basis_2d,
    density_search,
    iso_rotation,
)

FLIP = BasisChange2(0.0, -1.0, -1.0, 0.0)


def _m(a, sign="+"):
    return RotAlgebra(a, sign).matrix


def test_rot_algebra_matrix():
    m = _m(0.5)
    q = math.sqrt(0.75)
    assert np.allclose(m, [[0.5, q], [-q, 0.5]], atol=1e-15)
    m = _m(0.5, "-")
    assert np.allclose(m, [[0.5, -q], [q, 0.5]], atol=1e-15)


def test_validation():
    with pytest.raises(InputError):
        RotAlgebra(1.5, "+")
    with pytest.raises(InputError):
        RotAlgebra(0.5, "x")
    with pytest.raises(InputError):
        BasisChange2(1.0, 2.0, 2.0, 4.0)  # singular


def test_identity_change_is_noop():
    phi = BasisChange2(1.0, 0.0, 0.0, 1.0)
    for a in (-0.9, 0.0, 0.4):
        assert np.allclose(change_basis_2d(RotAlgebra(a, "+"), phi), _m(a), atol=1e-15)


@pytest.mark.parametrize("a", [-0.9, -0.5, 0.0, 0.5, 0.9])
def test_flip_negates_a(a):
    out = change_basis_2d(RotAlgebra(a, "+"), FLIP)
    assert np.max(np.abs(out - _m(-a))) <= 1e-12


@pytest.mark.parametrize("a", [-0.7, 0.3, 0.8])
def test_flip_round_trip(a):
    once = change_basis_2d(RotAlgebra(a, "+"), FLIP)
    # the matrix after one flip is M(-a); flipping that algebra returns M(a)
    twice = change_basis_2d(RotAlgebra(-a, "+"), FLIP)
    assert np.max(np.abs(twice - _m(a))) <= 1e-12
    assert np.linalg.det(once) == pytest.approx(1.0, abs=1e-12)


def test_scaling_does_not_reach_other_parameters():
    a, b = 0.5, 0.7
    phi = BasisChange2(b / a, 0.0, 0.0, b / a)
    out = change_basis_2d(RotAlgebra(a, "+"), phi)
    assert np.max(np.abs(out - _m(b))) > 1e-3


def test_minus_sign_variant():
    out = change_basis_2d(RotAlgebra(0.4, "-"), BasisChange2(1.0, 0.0, 0.0, 1.0))
    assert np.allclose(out, _m(0.4, "-"), atol=1e-15)


def test_iso_rotation_truth_table():
    values = [-1.0, -0.5, 0.0, 0.5, 1.0]
    for a in values:
        for b in values:
            assert iso_rotation(a, b) == (b == a or b == -a)
    assert iso_rotation(0.5, -0.5, "-")
    with pytest.raises(InputError):
        iso_rotation(2.0, 0.5)


def test_iso_rotation_tolerance():
    assert iso_rotation(0.5, 0.5 + 1e-13)
    assert not iso_rotation(0.5, 0.5 + 1e-9)


def test_density_trivial_bound():
    assert density_search(0.123, 2.0, 10) == (1, "+")


def test_density_known_values():
    assert density_search(1.0, 5e-4, 100) == (44, "+")
    found = density_search(0.5, 1e-2, 10**4)
    assert found is not None
    n, sign = found
    assert abs(math.cos(n) - 0.5) <= 1e-2
    assert sign == ("+" if math.sin(n) >= 0 else "-")


def test_density_can_fail_at_small_nmax():
    assert density_search(0.99999, 1e-9, 10) is None


def test_chain_snapshot_matches_rotation_algebra():
    fam = rotation()
    for a in (-0.8, 0.1, 0.9):
        t = math.acos(a)
        m = fam.matrix(0.0, t)
        assert np.max(np.abs(m - _m(a))) <= 1e-15
