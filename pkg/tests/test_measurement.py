import math

import numpy as np
import pytest

from gbt.bell import BellIndex, bell_state
from gbt.linalg import TOL_MAT, TOL_NORM, StateVec, eig_hermitian, kron, purity
from gbt.measurement import apply_local, bob_marginal, measure, outcome_distribution
from gbt.reference import bell_amps, branch_amps
from gbt.teleport import make_config, three_particle_state
from gbt.weyl import ObservableSpec, build_observable, pauli

S1, S3 = pauli(1), pauli(3)
OP13 = np.kron(S1, S1) + np.kron(S3, S3)
GOOD = build_observable(ObservableSpec(2, (3, 1, -1, -3)))


def formula_one_state(alpha, beta):
    return three_particle_state(make_config(None, [alpha, beta], preset="paper-d2"))


def test_measure_sigma3_on_zero():
    out = measure(StateVec.basis(0, (2,)), eig_hermitian(S3), rng_seed=5)
    assert out.eigenvalue == pytest.approx(1)
    assert out.probability == pytest.approx(1)
    assert np.allclose(out.post_state.amps, [1, 0])
    assert not out.degenerate
    assert outcome_distribution(StateVec.basis(0, (2,)), eig_hermitian(S3)) == [(1.0, 1.0), (-1.0, 0.0)]


def test_formula_one_under_good_observable():
    alpha, beta = 0.6, 0.8
    psi = formula_one_state(alpha, beta)
    sf = eig_hermitian(GOOD)
    dist = outcome_distribution(psi, sf, (0, 1))
    assert [p for _, p in dist] == pytest.approx([0.25] * 4, abs=1e-12)
    for seed in range(40):
        out = measure(psi, sf, (0, 1), rng_seed=seed)
        k = {3: 1, 1: 2, -1: 3, -3: 4}[round(out.eigenvalue)]
        expected = np.kron(bell_amps(2, k), branch_amps(2, k, (alpha, beta)))
        # post state = |phi_k> (x) branch_k, up to phase
        assert abs(abs(np.vdot(expected, out.post_state.amps)) - 1) < TOL_MAT


def test_degenerate_outcome_keeps_superposition():
    a, b = 0.6, 0.8j
    state = StateVec((2, 2), a * bell_amps(2, 2) + b * bell_amps(2, 3))
    sf = eig_hermitian(OP13)
    for seed in range(10):
        out = measure(state, sf, rng_seed=seed)
        assert out.eigenvalue == pytest.approx(0, abs=1e-12)
        assert out.probability == pytest.approx(1)
        assert out.degenerate
        assert np.allclose(out.post_state.amps, state.amps, atol=TOL_MAT)


def test_formula_one_under_degenerate_observable():
    psi = formula_one_state(1 / math.sqrt(2), 1 / math.sqrt(2))
    dist = outcome_distribution(psi, eig_hermitian(OP13), (0, 1))
    assert [lam for lam, _ in dist] == pytest.approx([2, 0, -2], abs=1e-12)
    assert [p for _, p in dist] == pytest.approx([0.25, 0.5, 0.25], abs=1e-12)


def test_formula_two_uniform():
    cfg = make_config(None, [0.3, 0.5j, math.sqrt(1 - 0.34)], preset="paper-d3")
    dist = outcome_distribution(three_particle_state(cfg), eig_hermitian(build_observable(cfg.observable)), (0, 1))
    assert [p for _, p in dist] == pytest.approx([1 / 9] * 9, abs=1e-12)


def test_probabilities_sum_to_one(rng):
    for d in (2, 3):
        for _ in range(5):
            v = rng.normal(size=d**3) + 1j * rng.normal(size=d**3)
            psi = StateVec((d, d, d), v / np.linalg.norm(v))
            spec = ObservableSpec(d, tuple(rng.integers(0, 3, size=d * d).astype(float)))
            sf = eig_hermitian(build_observable(spec))
            for subs in ((0, 1), (1, 2), (0, 2)):
                assert sum(p for _, p in outcome_distribution(psi, sf, subs)) == pytest.approx(1, abs=TOL_NORM)


def test_seed_reproducible():
    psi = formula_one_state(0.6, 0.8)
    sf = eig_hermitian(GOOD)
    a = measure(psi, sf, (0, 1), rng_seed=2**63 + 17)
    b = measure(psi, sf, (0, 1), rng_seed=2**63 + 17)
    assert a.index == b.index
    assert a.post_state.amps.tobytes() == b.post_state.amps.tobytes()


def test_empirical_frequencies():
    psi = formula_one_state(0.6, 0.8)
    sf = eig_hermitian(OP13)
    dist = outcome_distribution(psi, sf, (0, 1))
    n = 10_000
    counts = np.zeros(len(dist))
    for seed in range(n):
        counts[measure(psi, sf, (0, 1), rng_seed=seed).index] += 1
    for (_, p), c in zip(dist, counts):
        sigma = math.sqrt(n * p * (1 - p))
        assert abs(c - n * p) < 4 * sigma


def test_post_state_is_eigenvector():
    psi = formula_one_state(0.6, 0.8)
    sf = eig_hermitian(GOOD)
    big = np.kron(GOOD, np.eye(2))
    for seed in range(20):
        out = measure(psi, sf, (0, 1), rng_seed=seed)
        v = out.post_state.amps
        assert np.linalg.norm(big @ v - out.eigenvalue * v) < TOL_MAT


def test_zero_probability_outcomes_never_sampled():
    sf = eig_hermitian(S3)
    for seed in range(200):
        assert measure(StateVec.basis(1, (2,)), sf, rng_seed=seed).eigenvalue == pytest.approx(-1)


def test_measure_errors():
    sf = eig_hermitian(S3)
    with pytest.raises(ValueError):
        measure(formula_one_state(1, 0), sf, (0, 1))
    with pytest.raises(ValueError):
        measure(StateVec.basis(0, (2,)), sf, (3,))
    with pytest.raises(ValueError):
        measure(StateVec.basis(0, (2,)), sf, rng_seed=-1)


def test_apply_local_on_middle_factor(rng):
    v = rng.normal(size=12) + 0j
    psi = StateVec((2, 3, 2), v / np.linalg.norm(v))
    op = rng.normal(size=(3, 3))
    assert np.allclose(apply_local(psi, op, 1), np.kron(np.kron(np.eye(2), op), np.eye(2)) @ psi.amps)
    # subsystems (2, 0): factor 2 is the major index of the 4x4 operator
    op2 = rng.normal(size=(4, 4))
    expected = np.einsum("xyuv,vmu->ymx", op2.reshape(2, 2, 2, 2), psi.tensor()).reshape(-1)
    assert np.allclose(apply_local(psi, op2, (2, 0)), expected)


def test_bob_marginal_non_degenerate_is_branch():
    alpha, beta = 0.6, 0.8
    psi = formula_one_state(alpha, beta)
    sf = eig_hermitian(GOOD)
    for seed in range(20):
        out = measure(psi, sf, (0, 1), rng_seed=seed)
        k = out.index + 1  # eigenvalues 3,1,-1,-3 <-> phi_1..phi_4
        c = branch_amps(2, k, (alpha, beta))
        assert np.allclose(bob_marginal(out.post_state), np.outer(c, c.conj()), atol=TOL_MAT)


def test_bob_marginal_after_degenerate_outcome():
    alpha, beta = 0.6, 0.8
    psi = formula_one_state(alpha, beta)
    sf = eig_hermitian(OP13)
    out = next(o for o in (measure(psi, sf, (0, 1), rng_seed=s) for s in range(50)) if o.degenerate)
    # oracle: equal mixture of the phi_2 and phi_3 branches
    c2, c3 = branch_amps(2, 2, (alpha, beta)), branch_amps(2, 3, (alpha, beta))
    rho = (np.outer(c2, c2.conj()) + np.outer(c3, c3.conj())) / 2
    got = bob_marginal(out.post_state)
    assert np.allclose(got, rho, atol=TOL_MAT)
    assert purity(got) < 1 - 1e-3
    assert purity(got) == pytest.approx(0.5)


def test_product_input_non_degenerate_outcome_is_pure():
    psi = kron(kron(StateVec.basis(0, (2,)), StateVec.basis(1, (2,))), StateVec.basis(0, (2,)))
    sf = eig_hermitian(GOOD)
    for seed in range(10):
        out = measure(psi, sf, (0, 1), rng_seed=seed)
        assert purity(bob_marginal(out.post_state)) == pytest.approx(1, abs=TOL_MAT)


def test_bob_marginal_bad_index():
    with pytest.raises(ValueError):
        bob_marginal(formula_one_state(1, 0), bob_index=3)
