"""Pauli and Weyl (shift/clock) operators, and Alice's Bell-basis observable.

Conventions: ``X|j> = |j+1 mod d>``, ``Z|j> = w^j |j>``, hence ``Z X = w X Z``.
Every word in X and Z is normalized to ``phase * X^a Z^b``.
"""
from __future__ import annotations

import functools
import re
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bell import bell_matrix
from .linalg import GROUP_TOL, omega

_SIGMA = {
    1: np.array([[0, 1], [1, 0]], dtype=np.complex128),
    2: np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    3: np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


def pauli(k: int) -> np.ndarray:
    """sigma_1, sigma_2 or sigma_3."""
    try:
        return _SIGMA[k].copy()
    except KeyError:
        raise ValueError(f"Pauli index must be 1, 2 or 3, got {k!r}") from None


def identity(d: int) -> np.ndarray:
    return np.eye(d, dtype=np.complex128)


@functools.lru_cache(maxsize=None)
def _shift(d: int) -> np.ndarray:
    x = np.zeros((d, d), dtype=np.complex128)
    for j in range(d):
        x[(j + 1) % d, j] = 1.0
    x.setflags(write=False)
    return x


@functools.lru_cache(maxsize=None)
def _clock(d: int) -> np.ndarray:
    z = np.diag([omega(d, j) for j in range(d)]).astype(np.complex128)
    z.setflags(write=False)
    return z


def weyl_x(d: int) -> np.ndarray:
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    return _shift(d).copy()


def weyl_z(d: int) -> np.ndarray:
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    return _clock(d).copy()


def weyl_power(d: int, a: int, b: int) -> np.ndarray:
    """X^a Z^b."""
    return np.linalg.matrix_power(_shift(d), a % d) @ np.linalg.matrix_power(_clock(d), b % d)


def phase_order(d: int) -> int:
    """Order of the phase group used by :class:`WeylWord`.

    Qubits get quarter turns {1, i, -1, -i} so that sigma_2 = i X Z is a word;
    for d >= 3 the phases are the powers of w.
    """
    return 4 if d == 2 else d


@dataclass(frozen=True)
class WeylWord:
    """The unitary ``u^phase_pow X^a Z^b`` with ``u = exp(2 pi i / phase_order(d))``."""

    d: int
    a: int
    b: int
    phase_pow: int = 0

    def __post_init__(self):
        if self.d < 2:
            raise ValueError(f"d must be >= 2, got {self.d}")
        object.__setattr__(self, "a", self.a % self.d)
        object.__setattr__(self, "b", self.b % self.d)
        object.__setattr__(self, "phase_pow", self.phase_pow % phase_order(self.d))

    @property
    def phase(self) -> complex:
        return omega(phase_order(self.d), self.phase_pow)

    def matrix(self) -> np.ndarray:
        return self.phase * weyl_power(self.d, self.a, self.b)

    def same_operator_class(self, other: "WeylWord") -> bool:
        """Equal up to a global phase."""
        return (self.d, self.a, self.b) == (other.d, other.a, other.b)

    def __matmul__(self, other: "WeylWord") -> "WeylWord":
        if self.d != other.d:
            raise ValueError("cannot multiply words of different dimension")
        # Z^b X^a' = w^(b a') X^a' Z^b
        step = phase_order(self.d) // self.d
        p = self.phase_pow + other.phase_pow + step * self.b * other.a
        return WeylWord(self.d, self.a + other.a, self.b + other.b, p)

    def label(self) -> str:
        if self.d == 2:
            prefix = ("", "i ", "-", "-i ")[self.phase_pow]
        else:
            prefix = "" if self.phase_pow == 0 else ("w " if self.phase_pow == 1 else f"w^{self.phase_pow} ")
        body = " ".join(
            f"{name}^{k}" if k > 1 else name for name, k in (("X", self.a), ("Z", self.b)) if k
        ) or "1"
        return prefix + body

    def to_dict(self) -> dict:
        return {"d": self.d, "a": self.a, "b": self.b, "phase_pow": self.phase_pow, "label": self.label()}

    @classmethod
    def from_dict(cls, data: dict) -> "WeylWord":
        return cls(data["d"], data["a"], data["b"], data["phase_pow"])


def materialize(w: WeylWord) -> np.ndarray:
    return w.matrix()


_TOKEN = re.compile(r"\s*(-|i|w(?:\^\d+)?|[XZ](?:\^\d+)?|s[123]|1(?:_\d)?)")


def _tokens(text: str) -> list[str]:
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"cannot parse operator word {text!r} at {text[pos:]!r}")
        out.append(m.group(1))
        pos = m.end()
    return out


def _power(tok: str) -> int:
    return int(tok.split("^")[1]) if "^" in tok else 1


def parse_word(d: int, text: str) -> WeylWord:
    """Normalize a written operator product such as ``"w^2 Z^2 X"`` or ``"i s2"``.

    Tokens: ``-``, ``i``, ``w``/``w^k``, ``X``/``X^k``, ``Z``/``Z^k``, the
    qubit Paulis ``s1 s2 s3`` and the identity ``1``.
    """
    order = phase_order(d)
    step = order // d
    word = WeylWord(d, 0, 0, 0)
    for tok in _tokens(text):
        if tok == "-":
            if order % 2:
                raise ValueError(f"-1 is not a phase of the d={d} Weyl group")
            factor = WeylWord(d, 0, 0, order // 2)
        elif tok == "i":
            if order % 4:
                raise ValueError(f"i is not a phase of the d={d} Weyl group")
            factor = WeylWord(d, 0, 0, order // 4)
        elif tok.startswith("w"):
            factor = WeylWord(d, 0, 0, step * _power(tok))
        elif tok.startswith("X"):
            factor = WeylWord(d, _power(tok), 0)
        elif tok.startswith("Z"):
            factor = WeylWord(d, 0, _power(tok))
        elif tok.startswith("s"):
            if d != 2:
                raise ValueError("Pauli tokens s1, s2, s3 need d=2")
            factor = {"s1": WeylWord(2, 1, 0), "s2": WeylWord(2, 1, 1, 1), "s3": WeylWord(2, 0, 1)}[tok]
        else:
            factor = WeylWord(d, 0, 0)
        word = word @ factor
    return word


def word_matrix(d: int, text: str) -> np.ndarray:
    """Evaluate a written operator product by plain matrix multiplication, left to right."""
    x, z = _shift(d), _clock(d)
    out = identity(d)
    for tok in _tokens(text):
        if tok == "-":
            out = -out
        elif tok == "i":
            out = 1j * out
        elif tok.startswith("w"):
            out = omega(d, _power(tok)) * out
        elif tok.startswith("X"):
            out = out @ np.linalg.matrix_power(x, _power(tok))
        elif tok.startswith("Z"):
            out = out @ np.linalg.matrix_power(z, _power(tok))
        elif tok.startswith("s"):
            if d != 2:
                raise ValueError("Pauli tokens s1, s2, s3 need d=2")
            out = out @ _SIGMA[int(tok[1])]
    return out


# |i><j| as sums of Pauli products: (coefficient, word)
QUBIT_KETBRA = {
    (0, 0): [(0.5, "1"), (0.5, "s3")],
    (1, 1): [(0.5, "1"), (-0.5, "s3")],
    (0, 1): [(0.5, "s1"), (0.5j, "s2")],
    (1, 0): [(0.5, "s1"), (-0.5j, "s2")],
}

# |i><j| = (1/3)(sum of three words) for qutrits
QUTRIT_KETBRA = {
    (0, 0): ("1", "Z", "Z^2"),
    (1, 1): ("1", "X Z X^2", "X Z^2 X^2"),
    (2, 2): ("1", "X^2 Z X", "X^2 Z^2 X"),
    (0, 1): ("X^2", "Z X^2", "Z^2 X^2"),
    (1, 0): ("X", "X Z", "X Z^2"),
    (0, 2): ("X", "Z X", "Z^2 X"),
    (2, 0): ("X^2", "X^2 Z", "X^2 Z^2"),
    (1, 2): ("X^2", "X Z X", "X Z^2 X"),
    (2, 1): ("X", "X^2 Z X^2", "X^2 Z^2 X^2"),
}


def ketbra(i: int, j: int, d: int) -> np.ndarray:
    out = np.zeros((d, d), dtype=np.complex128)
    out[i, j] = 1.0
    return out


def ketbra_decomposition_qubit(i: int, j: int) -> tuple[np.ndarray, np.ndarray, float]:
    """``(|i><j|, Pauli expansion, ||difference||)`` for a qubit."""
    if (i, j) not in QUBIT_KETBRA:
        raise ValueError(f"qubit indices must be 0 or 1, got ({i}, {j})")
    lhs = ketbra(i, j, 2)
    rhs = sum(c * word_matrix(2, w) for c, w in QUBIT_KETBRA[(i, j)])
    return lhs, rhs, float(np.linalg.norm(lhs - rhs))


def ketbra_decomposition_qutrit(i: int, j: int) -> tuple[np.ndarray, np.ndarray, float]:
    """``(|i><j|, Weyl expansion, ||difference||)`` for a qutrit."""
    if (i, j) not in QUTRIT_KETBRA:
        raise ValueError(f"qutrit indices must be in 0..2, got ({i}, {j})")
    lhs = ketbra(i, j, 3)
    rhs = sum(word_matrix(3, w) for w in QUTRIT_KETBRA[(i, j)]) / 3
    return lhs, rhs, float(np.linalg.norm(lhs - rhs))


def ketbra_decomposition_general(i: int, j: int, d: int) -> tuple[np.ndarray, np.ndarray, float]:
    """``|i><j| = (1/d) sum_b w^(-j b) X^(i-j) Z^b``, any d."""
    lhs = ketbra(i, j, d)
    rhs = sum(omega(d, -j * b) * weyl_power(d, i - j, b) for b in range(d)) / d
    return lhs, rhs, float(np.linalg.norm(lhs - rhs))


@dataclass(frozen=True)
class ObservableSpec:
    """Eigenvalue assigned to each Bell state, flat order."""

    d: int
    eigenvalues: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(float(v) for v in self.eigenvalues)
        if len(vals) != self.d * self.d:
            raise ValueError(f"need {self.d * self.d} eigenvalues for d={self.d}, got {len(vals)}")
        if not all(np.isfinite(vals)):
            raise ValueError("eigenvalues must be finite")
        object.__setattr__(self, "eigenvalues", vals)

    @classmethod
    def default(cls, d: int) -> "ObservableSpec":
        """Distinct values d^2-1, ..., 0 (the d=3 case is a_j = 9 - j)."""
        return cls(d, tuple(float(d * d - k) for k in range(1, d * d + 1)))

    def clusters(self, tol: float = GROUP_TOL) -> list[list[int]]:
        """Flat Bell indices grouped by (numerically) equal eigenvalue."""
        order = sorted(range(len(self.eigenvalues)), key=lambda k: -self.eigenvalues[k])
        groups = [[order[0]]]
        for k in order[1:]:
            if self.eigenvalues[groups[-1][-1]] - self.eigenvalues[k] < tol:
                groups[-1].append(k)
            else:
                groups.append([k])
        return [[k + 1 for k in g] for g in groups]

    @property
    def non_degenerate(self) -> bool:
        return all(len(g) == 1 for g in self.clusters())

    def flat_index_of(self, value: float, tol: float = GROUP_TOL) -> list[int]:
        return [k + 1 for k, a in enumerate(self.eigenvalues) if abs(a - value) < tol]


def build_observable(spec: ObservableSpec) -> np.ndarray:
    """sum_k a_k |bell_k><bell_k|."""
    b = bell_matrix(spec.d)
    q = (b * np.asarray(spec.eigenvalues)) @ b.conj().T
    return (q + q.conj().T) / 2


def pauli_form_qubit(spec: ObservableSpec) -> tuple[float, float, float, float]:
    """Coefficients of 1(x)1, s1(x)s1, s2(x)s2, s3(x)s3 for a d=2 observable."""
    if spec.d != 2:
        raise ValueError("pauli_form_qubit needs d=2")
    a, b, c, d = spec.eigenvalues
    return (
        (a + b + c + d) / 4,
        (a - b + c - d) / 4,
        (-a + b + c - d) / 4,
        (a + b - c - d) / 4,
    )


def pauli_form_matrix(coeffs: Sequence[float]) -> np.ndarray:
    c0, c1, c2, c3 = coeffs
    return (
        c0 * np.eye(4, dtype=np.complex128)
        + c1 * np.kron(_SIGMA[1], _SIGMA[1])
        + c2 * np.kron(_SIGMA[2], _SIGMA[2])
        + c3 * np.kron(_SIGMA[3], _SIGMA[3])
    )


def weyl_expansion(q: np.ndarray, d: int) -> np.ndarray:
    """Coefficients ``c[a, b, a', b']`` of ``q`` over ``X^a Z^b (x) X^a' Z^b'``.

    The d^4 two-qudit Weyl operators are orthogonal under the trace inner
    product with norm d^2, so ``c = tr(W^dagger q) / d^2``.
    """
    q = np.asarray(q, dtype=np.complex128)
    coeffs = np.zeros((d, d, d, d), dtype=np.complex128)
    singles = {(a, b): weyl_power(d, a, b) for a in range(d) for b in range(d)}
    for (a, b), w1 in singles.items():
        for (a2, b2), w2 in singles.items():
            coeffs[a, b, a2, b2] = np.vdot(np.kron(w1, w2), q) / (d * d)
    return coeffs


def weyl_reassemble(coeffs: np.ndarray, d: int) -> np.ndarray:
    out = np.zeros((d * d, d * d), dtype=np.complex128)
    for idx in np.ndindex(*coeffs.shape):
        if coeffs[idx] != 0:
            a, b, a2, b2 = idx
            out += coeffs[idx] * np.kron(weyl_power(d, a, b), weyl_power(d, a2, b2))
    return out
