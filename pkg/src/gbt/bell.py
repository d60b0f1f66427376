"""Generalized Bell basis of C^d (x) C^d.

``bell_state(BellIndex(m, n, d))`` is ``(1/sqrt d) sum_j w^(j n) |j> (x) |j+m>``
with ``w = exp(2 pi i / d)``. The flat label ``k = d*m + n + 1`` runs over
1..d^2 and reproduces the usual numbering: phi_1..phi_4 at d=2 and
psi_1..psi_9 at d=3.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .linalg import StateVec, omega


@dataclass(frozen=True, order=True)
class BellIndex:
    m: int  # shift
    n: int  # phase
    d: int

    def __post_init__(self):
        if self.d < 2:
            raise ValueError(f"Bell states need d >= 2, got d={self.d}")
        if not (0 <= self.m < self.d and 0 <= self.n < self.d):
            raise ValueError(f"Bell index ({self.m}, {self.n}) out of range for d={self.d}")

    @property
    def flat(self) -> int:
        return self.d * self.m + self.n + 1

    @classmethod
    def from_flat(cls, k: int, d: int) -> "BellIndex":
        if not 1 <= k <= d * d:
            raise ValueError(f"flat Bell index {k} outside 1..{d * d}")
        m, n = divmod(k - 1, d)
        return cls(m, n, d)

    def label(self) -> str:
        return f"{'phi' if self.d == 2 else 'psi'}{self.flat}"


def all_indices(d: int) -> list[BellIndex]:
    return [BellIndex.from_flat(k, d) for k in range(1, d * d + 1)]


@functools.lru_cache(maxsize=None)
def _bell_amps(m: int, n: int, d: int) -> np.ndarray:
    amps = np.zeros(d * d, dtype=np.complex128)
    for j in range(d):
        amps[j * d + (j + m) % d] = omega(d, j * n)
    amps /= math.sqrt(d)
    amps.setflags(write=False)
    return amps


def bell_state(idx: BellIndex) -> StateVec:
    return StateVec((idx.d, idx.d), _bell_amps(idx.m, idx.n, idx.d))


def bell_basis(d: int) -> list[StateVec]:
    """All d^2 Bell states in flat-index order."""
    if d < 2:
        raise ValueError(f"Bell basis needs d >= 2, got d={d}")
    return [bell_state(idx) for idx in all_indices(d)]


def bell_matrix(d: int) -> np.ndarray:
    """Columns are the Bell states in flat order (a unitary change of basis)."""
    return np.column_stack([_bell_amps(i.m, i.n, d) for i in all_indices(d)])


def product_in_bell_basis(i: int, j: int, d: int) -> np.ndarray:
    """Coefficients c_k with ``|i>(x)|j> = sum_k c_k |bell_k>``, flat order.

    Only the d states with shift ``m = j - i (mod d)`` contribute, each with
    coefficient ``w^(-i n) / sqrt d``.
    """
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    if not (0 <= i < d and 0 <= j < d):
        raise ValueError(f"basis ket indices ({i}, {j}) out of range for d={d}")
    coeffs = np.zeros(d * d, dtype=np.complex128)
    m = (j - i) % d
    for n in range(d):
        coeffs[BellIndex(m, n, d).flat - 1] = omega(d, -i * n) / math.sqrt(d)
    return coeffs
