import numpy as np
import pytest

from gbt.bell import bell_matrix, bell_state, all_indices
from gbt.linalg import TOL_MAT, eig_hermitian, is_unitary, omega
from gbt.weyl import (
    QUBIT_KETBRA,
    QUTRIT_KETBRA,
    ObservableSpec,
    WeylWord,
    build_observable,
    identity,
    ketbra_decomposition_general,
    ketbra_decomposition_qubit,
    ketbra_decomposition_qutrit,
    materialize,
    parse_word,
    pauli,
    pauli_form_matrix,
    pauli_form_qubit,
    weyl_expansion,
    weyl_reassemble,
    weyl_x,
    weyl_z,
    word_matrix,
)

S1, S2, S3 = pauli(1), pauli(2), pauli(3)
W = omega(3)


def test_pauli_basics():
    assert np.array_equal(S1 @ [1, 0], [0, 1])
    assert np.array_equal(S3, np.diag([1, -1]))
    assert np.allclose(S1 @ S2 - S2 @ S1, 2j * S3)
    with pytest.raises(ValueError):
        pauli(4)
    assert np.array_equal(identity(3), np.eye(3))


def test_weyl_qubit_is_pauli():
    assert np.array_equal(weyl_x(2), S1)
    assert np.array_equal(weyl_z(2), S3)


def test_weyl_qutrit():
    x, z = weyl_x(3), weyl_z(3)
    assert np.allclose(np.linalg.matrix_power(x, 3), np.eye(3))
    assert np.allclose(np.linalg.matrix_power(z, 3), np.eye(3))
    assert np.allclose(z @ x, W * x @ z)
    # X|j> = |j+1>, Z|j> = w^j |j>
    assert np.array_equal(x[:, 2], [1, 0, 0])
    assert np.allclose(np.diag(z), [1, W, W**2])


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_weyl_relations(d):
    x, z = weyl_x(d), weyl_z(d)
    assert np.allclose(z @ x, omega(d) * x @ z, atol=TOL_MAT)
    assert np.allclose(np.linalg.matrix_power(x, d), np.eye(d), atol=TOL_MAT)
    assert np.allclose(np.linalg.matrix_power(z, d), np.eye(d), atol=TOL_MAT)


@pytest.mark.parametrize("ij", sorted(QUBIT_KETBRA))
def test_qubit_ketbra_identities(ij):
    lhs, rhs, err = ketbra_decomposition_qubit(*ij)
    assert err < 1e-12
    assert lhs[ij] == 1


@pytest.mark.parametrize("ij", sorted(QUTRIT_KETBRA))
def test_qutrit_ketbra_identities(ij):
    lhs, rhs, err = ketbra_decomposition_qutrit(*ij)
    assert err < 1e-12


@pytest.mark.parametrize("d", [2, 4, 5])
def test_general_ketbra(d):
    for i in range(d):
        for j in range(d):
            assert ketbra_decomposition_general(i, j, d)[2] < 1e-12


def test_ketbra_bad_index():
    with pytest.raises(ValueError):
        ketbra_decomposition_qubit(0, 2)
    with pytest.raises(ValueError):
        ketbra_decomposition_qutrit(3, 0)


def test_good_qubit_observable():
    q = build_observable(ObservableSpec(2, (3, 1, -1, -3)))
    assert np.allclose(q, np.kron(S1, S1) + 2 * np.kron(S3, S3), atol=TOL_MAT)
    assert pauli_form_qubit(ObservableSpec(2, (3, 1, -1, -3))) == (0, 1, 0, 2)


def test_pauli_form_examples():
    assert pauli_form_qubit(ObservableSpec(2, (1, 1, 1, 1))) == (1, 0, 0, 0)
    assert pauli_form_qubit(ObservableSpec(2, (2, 0, 0, -2))) == (0, 1, 0, 1)
    q13 = build_observable(ObservableSpec(2, (2, 0, 0, -2)))
    assert np.allclose(q13, np.kron(S1, S1) + np.kron(S3, S3), atol=TOL_MAT)
    with pytest.raises(ValueError):
        pauli_form_qubit(ObservableSpec.default(3))


def test_pauli_form_random(rng):
    for _ in range(50):
        spec = ObservableSpec(2, tuple(rng.normal(size=4)))
        assert np.allclose(pauli_form_matrix(pauli_form_qubit(spec)), build_observable(spec), atol=TOL_MAT)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_observable_eigensystem(d, rng):
    spec = ObservableSpec(d, tuple(rng.permutation(d * d).astype(float)))
    q = build_observable(spec)
    for idx, col in zip(all_indices(d), bell_matrix(d).T):
        assert np.allclose(q @ col, spec.eigenvalues[idx.flat - 1] * col, atol=TOL_MAT)


def test_qutrit_default_observable():
    spec = ObservableSpec.default(3)
    assert spec.eigenvalues == tuple(float(9 - j) for j in range(1, 10))
    sf = eig_hermitian(build_observable(spec))
    assert sf.eigenvalues == pytest.approx(tuple(range(8, -1, -1)), abs=1e-10)
    assert sf.multiplicities == (1,) * 9
    for lam, p in zip(sf.eigenvalues, sf.projectors):
        psi = bell_state(all_indices(3)[8 - round(lam)]).amps
        assert np.allclose(p, np.outer(psi, psi.conj()), atol=TOL_MAT)


def test_observable_spec_validation():
    with pytest.raises(ValueError):
        ObservableSpec(2, (1, 2, 3))
    spec = ObservableSpec(2, (2, 0, 0, -2))
    assert not spec.non_degenerate
    assert spec.clusters() == [[1], [2, 3], [4]]
    assert ObservableSpec(2, (3, 1, -1, -3)).non_degenerate


def test_weyl_expansion_qutrit_reassembles():
    q = build_observable(ObservableSpec.default(3))
    c = weyl_expansion(q, 3)
    assert np.allclose(weyl_reassemble(c, 3), q, atol=TOL_MAT)
    # Bell-diagonal: only X^a Z^b (x) X^a Z^-b terms survive
    for a, b, a2, b2 in zip(*np.nonzero(np.abs(c) > 1e-12)):
        assert a == a2 and (b + b2) % 3 == 0


def test_weyl_expansion_qubit_matches_pauli_form(rng):
    spec = ObservableSpec(2, tuple(rng.normal(size=4)))
    c = weyl_expansion(build_observable(spec), 2)
    c0, c1, c2, c3 = pauli_form_qubit(spec)
    # s2 (x) s2 = -(XZ (x) XZ)
    assert c[0, 0, 0, 0] == pytest.approx(c0)
    assert c[1, 0, 1, 0] == pytest.approx(c1)
    assert c[1, 1, 1, 1] == pytest.approx(-c2)
    assert c[0, 1, 0, 1] == pytest.approx(c3)


def test_word_normalization():
    # Z^2 X^2 = w^4 X^2 Z^2 = w X^2 Z^2
    assert parse_word(3, "Z^2 X^2") == WeylWord(3, 2, 2, 1)
    assert parse_word(3, "w^2 Z X") == WeylWord(3, 1, 1, 0)
    assert parse_word(3, "w 1") == WeylWord(3, 0, 0, 1)
    assert parse_word(2, "i s2") == WeylWord(2, 1, 1, 2)
    assert parse_word(2, "-s3") == WeylWord(2, 0, 1, 2)


@pytest.mark.parametrize(
    "d,text",
    [(2, "i s2"), (2, "s1 s2 s3"), (2, "-1"), (3, "Z^2 X^2"), (3, "w^2 Z^2 X"), (3, "X^2 Z^2 X^2"), (5, "Z^3 X^4 w Z")],
)
def test_materialize_matches_written_product(d, text):
    assert np.allclose(materialize(parse_word(d, text)), word_matrix(d, text), atol=TOL_MAT)


def test_word_phase_limits():
    with pytest.raises(ValueError):
        parse_word(3, "-X")
    with pytest.raises(ValueError):
        parse_word(3, "i X")
    with pytest.raises(ValueError):
        parse_word(3, "s1")
    with pytest.raises(ValueError):
        parse_word(3, "Y")


def test_sigma2_is_a_qubit_word():
    assert np.allclose(WeylWord(2, 1, 1, 1).matrix(), S2)
    assert np.allclose(WeylWord(2, 1, 1, 2).matrix(), 1j * S2)
    assert np.allclose(WeylWord(3, 0, 0, 1).matrix(), W * np.eye(3))


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_words_unitary_and_product(d, rng):
    for _ in range(10):
        a, b = (WeylWord(d, *rng.integers(0, 8, size=3)) for _ in range(2))
        assert is_unitary(a.matrix())
        assert np.allclose((a @ b).matrix(), a.matrix() @ b.matrix(), atol=TOL_MAT)


def test_word_labels_and_dict():
    w = WeylWord(3, 1, 2, 1)
    assert w.label() == "w X Z^2"
    assert WeylWord.from_dict(w.to_dict()) == w
    assert WeylWord(2, 1, 1, 2).label() == "-X Z"
    assert WeylWord(2, 0, 0).label() == "1"
