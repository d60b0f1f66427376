"""Teleportation of a qudit through a shared generalized Bell pair.

Particle order is (1, A, B): Alice holds the input particle 1 and A, Bob
holds B. Alice measures a Bell-diagonal observable on (1, A), sends the flat
Bell index of her outcome, and Bob applies a Weyl correction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bell import BellIndex, all_indices, bell_matrix, bell_state
from .linalg import (
    GROUP_TOL,
    TOL_MAT,
    TOL_NORM,
    StateVec,
    eig_hermitian,
    fidelity,
    global_phase_canonical,
    kron,
    omega,
    purity,
)
from .measurement import MeasurementOutcome, apply_local, bob_marginal, make_rng, measure, outcome_distribution
from .reference import CORRECTION_LABELS
from .weyl import ObservableSpec, WeylWord, build_observable, parse_word, phase_order, weyl_power

SUCCESS_FIDELITY = 1 - 1e-9


class DegenerateObservableError(ValueError):
    """Alice's observable cannot tell some Bell states apart."""


@dataclass(frozen=True)
class ProtocolConfig:
    d: int
    input_amps: tuple[complex, ...]
    resource: BellIndex
    observable: ObservableSpec
    seed: int = 0

    def __post_init__(self):
        amps = tuple(complex(a) for a in self.input_amps)
        if len(amps) != self.d:
            raise ValueError(f"input needs {self.d} amplitudes, got {len(amps)}")
        if not all(math.isfinite(a.real) and math.isfinite(a.imag) for a in amps):
            raise ValueError("input amplitudes must be finite")
        norm = math.sqrt(sum(abs(a) ** 2 for a in amps))
        if abs(norm - 1) > TOL_NORM:
            raise ValueError(f"input state is not normalized (norm = {norm!r})")
        if self.resource.d != self.d or self.observable.d != self.d:
            raise ValueError("resource and observable must have the same dimension as the input")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        object.__setattr__(self, "input_amps", amps)

    @property
    def input_state(self) -> StateVec:
        return StateVec((self.d,), np.array(self.input_amps))

    def to_dict(self) -> dict:
        return {
            "dim": self.d,
            "input": [_cpair(a) for a in self.input_amps],
            "resource": [self.resource.m, self.resource.n],
            "observable": list(self.observable.eigenvalues),
            "seed": int(self.seed),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ProtocolConfig":
        d = data["dim"]
        return cls(
            d,
            tuple(complex(re, im) for re, im in data["input"]),
            BellIndex(data["resource"][0], data["resource"][1], d),
            ObservableSpec(d, tuple(data["observable"])),
            data["seed"],
        )


PRESETS = {
    # (d, shared pair, Alice's eigenvalues)
    "paper-d2": (2, BellIndex(1, 1, 2), (3.0, 1.0, -1.0, -3.0)),
    "paper-d3": (3, BellIndex(1, 1, 3), tuple(float(9 - j) for j in range(1, 10))),
}


def make_config(d, input_amps, resource=None, observable=None, seed=0, preset=None, normalize=False) -> ProtocolConfig:
    """Assemble a config, filling defaults: shared pair (0, 0) and eigenvalues d^2-1..0."""
    if preset is not None:
        try:
            pd, pres, pobs = PRESETS[preset]
        except KeyError:
            raise ValueError(f"unknown preset {preset!r}; choose from {sorted(PRESETS)}") from None
        if d is not None and d != pd:
            raise ValueError(f"preset {preset} is for d={pd}, not d={d}")
        d = pd
        resource = resource or pres
        observable = observable or ObservableSpec(d, pobs)
    if resource is None:
        resource = BellIndex(0, 0, d)
    elif not isinstance(resource, BellIndex):
        resource = BellIndex(resource[0], resource[1], d)
    if observable is None:
        observable = ObservableSpec.default(d)
    elif not isinstance(observable, ObservableSpec):
        observable = ObservableSpec(d, tuple(observable))
    amps = np.asarray(input_amps, dtype=np.complex128)
    if normalize:
        n = np.linalg.norm(amps)
        if n == 0:
            raise ValueError("cannot normalize the zero vector")
        amps = amps / n
    return ProtocolConfig(d, tuple(amps), resource, observable, int(seed))


def random_input(d: int, rng) -> tuple[complex, ...]:
    rng = make_rng(rng)
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return tuple(v / np.linalg.norm(v))


def three_particle_state(cfg: ProtocolConfig) -> StateVec:
    """input (x) shared pair on particles (1, A, B)."""
    return kron(cfg.input_state, bell_state(cfg.resource))


@dataclass(frozen=True, eq=False)
class Branch:
    outcome: BellIndex
    weight: float  # amplitude of |bell_k>_{1A} (x) |state>_B, real positive
    state: StateVec  # Bob's conditional state, normalized


def expand_in_bell_branches(cfg: ProtocolConfig) -> list[Branch]:
    """Write the three-particle state as ``sum_k weight_k |bell_k>_{1A} (x) |state_k>_B``.

    Computed by projecting the state onto each Bell state of (1, A).
    """
    d = cfg.d
    psi = three_particle_state(cfg).amps.reshape(d * d, d)
    branches = []
    for idx, col in zip(all_indices(d), bell_matrix(d).T):
        v = col.conj() @ psi
        w = float(np.linalg.norm(v))
        branches.append(Branch(idx, w, StateVec((d,), v / w)))
    return branches


def reassemble(branches: list[Branch]) -> StateVec:
    total = sum(b.weight * np.kron(bell_state(b.outcome).amps, b.state.amps) for b in branches)
    d = branches[0].outcome.d
    return StateVec((d, d, d), total)


def conditional_map(d: int, resource: BellIndex, outcome: BellIndex) -> np.ndarray:
    """Linear map input -> (unnormalized) Bob state given Alice's outcome.

    ``M[b, i] = sum_a conj(bell_out[i, a]) * resource[a, b]``; it equals 1/d
    times a unitary.
    """
    out = bell_state(outcome).amps.reshape(d, d)
    res = bell_state(resource).amps.reshape(d, d)
    return (out.conj() @ res).T


def solve_correction(d: int, resource: BellIndex, outcome: BellIndex) -> WeylWord:
    """Weyl word ``w`` with ``w @ M = c * 1`` for real ``c > 0``, by exhaustive search."""
    m = conditional_map(d, resource, outcome)
    order = phase_order(d)
    for a in range(d):
        for b in range(d):
            prod = weyl_power(d, a, b) @ m
            c = np.trace(prod) / d
            if abs(c) < 1e-6 or np.linalg.norm(prod - c * np.eye(d)) > TOL_MAT:
                continue
            p = round(-np.angle(c) / (2 * math.pi / order)) % order
            fixed = omega(order, p) * c
            if abs(fixed.imag) > 1e-9 or fixed.real <= 0:
                continue
            return WeylWord(d, a, b, p)
    raise RuntimeError(f"no Weyl correction for outcome {outcome} with resource {resource}")


@dataclass(frozen=True)
class CorrectionTable:
    d: int
    resource: BellIndex
    entries: dict = field(hash=False)  # flat Bell index -> WeylWord
    labels: dict = field(default_factory=dict, hash=False)  # flat Bell index -> written form


def reference_correction_table(d: int) -> CorrectionTable:
    """Bob's written corrections for the shared pairs phi_4 (d=2) and psi_5 (d=3)."""
    if d not in CORRECTION_LABELS:
        raise ValueError(f"written correction tables cover d=2 and d=3 only, not d={d}")
    labels = CORRECTION_LABELS[d]
    return CorrectionTable(
        d, BellIndex(1, 1, d), {k: parse_word(d, t) for k, t in labels.items()}, dict(labels)
    )


def solved_correction_table(d: int, resource: BellIndex) -> CorrectionTable:
    entries = {idx.flat: solve_correction(d, resource, idx) for idx in all_indices(d)}
    return CorrectionTable(d, resource, entries, {k: w.label() for k, w in entries.items()})


def _cpair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _cvec(v) -> list[list[float]]:
    return [_cpair(complex(z)) for z in np.asarray(v).reshape(-1)]


def _uncvec(data) -> np.ndarray:
    return np.array([complex(re, im) for re, im in data], dtype=np.complex128)


@dataclass(frozen=True, eq=False)
class TeleportReport:
    config: ProtocolConfig
    outcome: MeasurementOutcome
    message: int  # flat Bell index sent to Bob
    correction: WeylWord
    bob_state: StateVec
    fidelity: float
    success: bool

    def to_dict(self) -> dict:
        o = self.outcome
        return {
            "config": self.config.to_dict(),
            "outcome": {
                "eigenvalue": o.eigenvalue,
                "probability": o.probability,
                "degenerate": o.degenerate,
                "index": o.index,
                "post_state": _cvec(o.post_state.amps),
            },
            "message": {"bell_flat_index": self.message, "label": BellIndex.from_flat(self.message, self.config.d).label()},
            "correction": self.correction.to_dict(),
            "bob_state": _cvec(self.bob_state.amps),
            "fidelity": self.fidelity,
            "success": self.success,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TeleportReport":
        cfg = ProtocolConfig.from_dict(data["config"])
        d = cfg.d
        o = data["outcome"]
        outcome = MeasurementOutcome(
            eigenvalue=o["eigenvalue"],
            probability=o["probability"],
            post_state=StateVec((d, d, d), _uncvec(o["post_state"])),
            degenerate=o["degenerate"],
            index=o["index"],
        )
        return cls(
            cfg,
            outcome,
            data["message"]["bell_flat_index"],
            WeylWord.from_dict(data["correction"]),
            StateVec((d,), _uncvec(data["bob_state"])),
            data["fidelity"],
            data["success"],
        )


def _require_non_degenerate(spec: ObservableSpec) -> None:
    for cluster in spec.clusters():
        if len(cluster) > 1:
            value = spec.eigenvalues[cluster[0] - 1]
            names = ", ".join(BellIndex.from_flat(k, spec.d).label() for k in cluster)
            raise DegenerateObservableError(
                f"eigenvalue {value:g} is shared by Bell states {names}; "
                "a measurement of this observable cannot tell them apart"
            )


def _bob_state(post: StateVec, outcome: BellIndex, correction: WeylWord) -> StateVec:
    d = outcome.d
    v = bell_state(outcome).amps.conj() @ post.amps.reshape(d * d, d)
    v = correction.matrix() @ v
    return global_phase_canonical(StateVec((d,), v / np.linalg.norm(v)))


def run_teleport(cfg: ProtocolConfig) -> TeleportReport:
    """One protocol run: measure (1, A), send the Bell label, correct B."""
    _require_non_degenerate(cfg.observable)
    spectrum = eig_hermitian(build_observable(cfg.observable))
    outcome = measure(three_particle_state(cfg), spectrum, subsystems=(0, 1), rng_seed=cfg.seed)
    (message,) = cfg.observable.flat_index_of(outcome.eigenvalue)
    bell = BellIndex.from_flat(message, cfg.d)
    word = solve_correction(cfg.d, cfg.resource, bell)
    u = word.matrix()
    rho_b = u @ bob_marginal(outcome.post_state) @ u.conj().T
    fid = fidelity(cfg.input_state, rho_b)
    return TeleportReport(
        config=cfg,
        outcome=outcome,
        message=message,
        correction=word,
        bob_state=_bob_state(outcome.post_state, bell, word),
        fidelity=fid,
        success=fid > SUCCESS_FIDELITY,
    )


def message_distribution(cfg: ProtocolConfig) -> dict[int, float]:
    """Exact probability of each classical message for a non-degenerate observable."""
    _require_non_degenerate(cfg.observable)
    spectrum = eig_hermitian(build_observable(cfg.observable))
    dist = outcome_distribution(three_particle_state(cfg), spectrum, subsystems=(0, 1))
    out = {}
    for lam, p in dist:
        (k,) = cfg.observable.flat_index_of(lam)
        out[k] = p
    return dict(sorted(out.items()))


@dataclass(frozen=True)
class DegenerateOutcome:
    eigenvalue: float
    probability: float
    members: tuple[int, ...]  # flat Bell indices sharing the eigenvalue
    bob_purity: float
    table_fidelity: dict  # member flat index -> fidelity using that member's correction
    best_word: WeylWord
    best_fidelity: float


@dataclass(frozen=True)
class DegenerateDemoReport:
    config: ProtocolConfig
    outcomes: tuple[DegenerateOutcome, ...]
    average_fidelity_table: float  # first member's correction in every cluster
    average_fidelity_best: float  # best Weyl word per outcome
    sampled_index: int
    sampled_fidelity: float

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "outcomes": [
                {
                    "eigenvalue": o.eigenvalue,
                    "probability": o.probability,
                    "members": list(o.members),
                    "degenerate": len(o.members) > 1,
                    "bob_purity": o.bob_purity,
                    "table_fidelity": {str(k): v for k, v in o.table_fidelity.items()},
                    "best_correction": o.best_word.to_dict(),
                    "best_fidelity": o.best_fidelity,
                }
                for o in self.outcomes
            ],
            "average_fidelity_table": self.average_fidelity_table,
            "average_fidelity_best": self.average_fidelity_best,
            "sampled_outcome": self.sampled_index,
            "sampled_fidelity": self.sampled_fidelity,
        }


def run_degenerate_demo(cfg: ProtocolConfig) -> DegenerateDemoReport:
    """Run the protocol with a possibly degenerate observable and score Bob's best effort.

    For every outcome, Bob's reduced state after Lueders reduction is scored
    against the input with (a) the correction of each Bell state in the
    outcome's cluster and (b) the best of all d^2 Weyl corrections.
    """
    d = cfg.d
    psi = three_particle_state(cfg)
    spectrum = eig_hermitian(build_observable(cfg.observable))
    words = [WeylWord(d, a, b) for a in range(d) for b in range(d)]
    target = cfg.input_state

    results = []
    for k, (lam, proj) in enumerate(zip(spectrum.eigenvalues, spectrum.projectors)):
        members = tuple(cfg.observable.flat_index_of(lam, tol=GROUP_TOL))
        v = apply_local(psi, proj, (0, 1))
        p = float(np.vdot(v, v).real)
        if p < 1e-14:
            results.append(DegenerateOutcome(lam, 0.0, members, 1.0, {}, words[0], 1.0))
            continue
        post = StateVec(psi.dims, v / math.sqrt(p))
        rho = bob_marginal(post)

        def score(w: WeylWord) -> float:
            u = w.matrix()
            return fidelity(target, u @ rho @ u.conj().T)

        table = {m: score(solve_correction(d, cfg.resource, BellIndex.from_flat(m, d))) for m in members}
        scored = [(score(w), w) for w in words]
        best_f = max(f for f, _ in scored)
        best_w = next(w for f, w in scored if f == best_f)
        results.append(DegenerateOutcome(lam, p, members, purity(rho), table, best_w, best_f))

    avg_table = sum(o.probability * o.table_fidelity[o.members[0]] for o in results if o.table_fidelity)
    avg_best = sum(o.probability * o.best_fidelity for o in results)
    sampled = measure(psi, spectrum, subsystems=(0, 1), rng_seed=cfg.seed)
    picked = results[sampled.index]
    return DegenerateDemoReport(
        cfg, tuple(results), avg_table, avg_best, sampled.index, picked.table_fidelity[picked.members[0]]
    )
