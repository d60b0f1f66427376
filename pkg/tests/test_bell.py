import math

import numpy as np
import pytest

from gbt.bell import BellIndex, all_indices, bell_basis, bell_matrix, bell_state, product_in_bell_basis
from gbt.linalg import TOL_MAT, omega, partial_trace
from gbt.reference import bell_amps, inversion_coeffs
from gbt.weyl import weyl_x, weyl_z

W = omega(3)
R2, R3 = math.sqrt(2), math.sqrt(3)


def test_flat_numbering_roundtrip():
    for d in (2, 3, 5):
        for k in range(1, d * d + 1):
            assert BellIndex.from_flat(k, d).flat == k
    assert BellIndex(1, 1, 3).flat == 5
    assert BellIndex(1, 1, 2).label() == "phi4"


@pytest.mark.parametrize("args", [(2, 0, 2), (0, -1, 2), (0, 0, 1)])
def test_bell_index_range(args):
    with pytest.raises(ValueError):
        BellIndex(*args)


def test_bell_state_examples():
    assert np.allclose(bell_state(BellIndex(0, 0, 2)).amps, [1 / R2, 0, 0, 1 / R2], atol=1e-15)
    assert np.allclose(bell_state(BellIndex(1, 1, 2)).amps, [0, 1 / R2, -1 / R2, 0], atol=1e-15)
    psi5 = np.zeros(9, dtype=complex)
    psi5[[1, 5, 6]] = [1, W, W**2]
    assert np.allclose(bell_state(BellIndex(1, 1, 3)).amps, psi5 / R3, atol=1e-15)
    psi9 = np.zeros(9, dtype=complex)
    psi9[[2, 3, 7]] = [1, W**2, W]
    assert np.allclose(bell_state(BellIndex(2, 2, 3)).amps, psi9 / R3, atol=1e-15)


@pytest.mark.parametrize("d", [2, 3])
def test_matches_written_tables(d):
    for k, s in enumerate(bell_basis(d), 1):
        assert np.allclose(s.amps, bell_amps(d, k), atol=TOL_MAT)


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_orthonormal(d):
    b = bell_matrix(d)
    assert np.allclose(b.conj().T @ b, np.eye(d * d), atol=TOL_MAT)
    assert len(bell_basis(d)) == d * d


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_weyl_generation(d):
    seed = bell_state(BellIndex(0, 0, d)).amps
    x, z = weyl_x(d), weyl_z(d)
    for idx in all_indices(d):
        op = np.kron(np.linalg.matrix_power(z, idx.n), np.linalg.matrix_power(x, idx.m))
        assert np.allclose(bell_state(idx).amps, op @ seed, atol=TOL_MAT)


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_maximally_entangled(d):
    for s in bell_basis(d):
        rho = s.density()
        for keep in (0, 1):
            assert np.allclose(partial_trace(rho, (d, d), keep), np.eye(d) / d, atol=TOL_MAT)


def test_product_in_bell_basis_examples():
    assert np.allclose(product_in_bell_basis(0, 0, 2), [1 / R2, 1 / R2, 0, 0], atol=1e-15)
    c = product_in_bell_basis(1, 0, 3)
    assert np.allclose(c, np.array([0, 0, 0, 0, 0, 0, 1, W**2, W]) / R3, atol=1e-15)
    c = product_in_bell_basis(2, 1, 3)
    assert np.allclose(c, np.array([0, 0, 0, 0, 0, 0, 1, W, W**2]) / R3, atol=1e-15)


@pytest.mark.parametrize("d", [2, 3])
def test_product_matches_written_inversion(d):
    for i in range(d):
        for j in range(d):
            assert np.allclose(product_in_bell_basis(i, j, d), inversion_coeffs(d, i, j), atol=1e-12)


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_product_round_trip(d):
    b = bell_matrix(d)
    for i in range(d):
        for j in range(d):
            c = product_in_bell_basis(i, j, d)
            assert np.count_nonzero(np.abs(c) > 1e-12) == d
            assert np.allclose(np.abs(c[np.abs(c) > 1e-12]), 1 / math.sqrt(d))
            target = np.zeros(d * d)
            target[i * d + j] = 1
            assert np.allclose(b @ c, target, atol=TOL_MAT)


def test_product_out_of_range():
    with pytest.raises(ValueError):
        product_in_bell_basis(2, 0, 2)
