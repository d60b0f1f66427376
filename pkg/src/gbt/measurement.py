"""Projective measurement: Born rule sampling and Lueders state reduction.

A degenerate outcome projects onto the whole eigenspace and renormalizes;
it never picks a particular eigenvector inside that eigenspace.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .linalg import TOL_NORM, SpectralForm, StateVec, partial_trace

ZERO_PROB = 1e-14

__all__ = [
    "SpectralForm",
    "MeasurementOutcome",
    "apply_local",
    "born_probabilities",
    "outcome_distribution",
    "measure",
    "bob_marginal",
    "make_rng",
]


@dataclass(frozen=True, eq=False)
class MeasurementOutcome:
    eigenvalue: float
    probability: float
    post_state: StateVec
    degenerate: bool
    index: int  # position in the spectral form (descending eigenvalue)


def make_rng(seed) -> np.random.Generator:
    """PCG64 generator from a 64-bit seed; an existing Generator is passed through."""
    if isinstance(seed, np.random.Generator):
        return seed
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return np.random.Generator(np.random.PCG64(seed))


def _subsystems(state: StateVec, subsystems) -> tuple[int, ...]:
    if subsystems is None:
        return tuple(range(len(state.dims)))
    subs = (subsystems,) if isinstance(subsystems, (int, np.integer)) else tuple(int(s) for s in subsystems)
    if not subs or len(set(subs)) != len(subs) or any(not 0 <= s < len(state.dims) for s in subs):
        raise ValueError(f"bad subsystem selection {subsystems!r} for dims {state.dims}")
    return subs


def apply_local(state: StateVec, op: np.ndarray, subsystems: Sequence[int] | int | None = None) -> np.ndarray:
    """Amplitudes of ``(op on subsystems) (x) 1_rest`` applied to ``state`` (not renormalized)."""
    subs = _subsystems(state, subsystems)
    sel = math.prod(state.dims[s] for s in subs)
    op = np.asarray(op)
    if op.shape != (sel, sel):
        raise ValueError(f"operator of shape {op.shape} does not act on subsystems {subs} of dims {state.dims}")
    t = np.moveaxis(state.tensor(), subs, range(len(subs)))
    moved_shape = t.shape
    t = (op @ t.reshape(sel, -1)).reshape(moved_shape)
    return np.moveaxis(t, range(len(subs)), subs).reshape(-1)


def born_probabilities(state: StateVec, obs: SpectralForm, subsystems=None) -> tuple[np.ndarray, list[np.ndarray]]:
    projected = [apply_local(state, p, subsystems) for p in obs.projectors]
    probs = np.array([float(np.vdot(v, v).real) for v in projected])
    return probs, projected


def outcome_distribution(state: StateVec, obs: SpectralForm, subsystems=None) -> list[tuple[float, float]]:
    """Exact ``(eigenvalue, probability)`` pairs in descending eigenvalue order."""
    probs, _ = born_probabilities(state, obs, subsystems)
    if probs.sum() < TOL_NORM:
        raise ValueError("spectral form assigns no probability to the state")
    return [(lam, float(p)) for lam, p in zip(obs.eigenvalues, probs)]


def measure(state: StateVec, obs: SpectralForm, subsystems=None, rng_seed=0) -> MeasurementOutcome:
    """Sample one outcome and reduce the state.

    Sampling is inverse-CDF over the Born distribution, one uniform draw from
    a PCG64 generator seeded with ``rng_seed``.
    """
    probs, projected = born_probabilities(state, obs, subsystems)
    total = probs.sum()
    if total < TOL_NORM:
        raise ValueError("spectral form assigns no probability to the state")
    weights = np.where(probs < ZERO_PROB, 0.0, probs)
    cdf = np.cumsum(weights) / weights.sum()
    u = make_rng(rng_seed).random()
    k = int(np.searchsorted(cdf, u, side="right"))
    k = min(k, len(cdf) - 1)
    while weights[k] == 0.0:  # u landed on the last float of the cdf
        k -= 1
    post = StateVec(state.dims, projected[k] / math.sqrt(probs[k]))
    return MeasurementOutcome(
        eigenvalue=obs.eigenvalues[k],
        probability=float(probs[k]),
        post_state=post,
        degenerate=obs.multiplicities[k] > 1,
        index=k,
    )


def bob_marginal(post_state: StateVec, dims: Sequence[int] | None = None, bob_index: int = -1) -> np.ndarray:
    """Reduced density matrix of one factor (Bob's particle is the last by default)."""
    dims = tuple(dims) if dims is not None else post_state.dims
    if bob_index < 0:
        bob_index += len(dims)
    return partial_trace(post_state.density(), dims, bob_index)
