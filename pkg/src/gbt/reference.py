"""Hand-transcribed qubit and qutrit tables used as independent references.

Phases are stored as integer powers of w = exp(2 pi i / d) (at d=2, w = -1),
so every entry is exact. Nothing here is derived from the general-d
constructions in :mod:`gbt.bell` and :mod:`gbt.teleport`.
"""
from __future__ import annotations

import math

import numpy as np

from .linalg import omega

# Bell states: flat index -> [(phase power, (i, j)), ...] for |i>(x)|j>
BELL_TERMS = {
    2: {
        1: [(0, (0, 0)), (0, (1, 1))],
        2: [(0, (0, 0)), (1, (1, 1))],
        3: [(0, (0, 1)), (0, (1, 0))],
        4: [(0, (0, 1)), (1, (1, 0))],
    },
    3: {
        1: [(0, (0, 0)), (0, (1, 1)), (0, (2, 2))],
        2: [(0, (0, 0)), (1, (1, 1)), (2, (2, 2))],
        3: [(0, (0, 0)), (2, (1, 1)), (1, (2, 2))],
        4: [(0, (0, 1)), (0, (1, 2)), (0, (2, 0))],
        5: [(0, (0, 1)), (1, (1, 2)), (2, (2, 0))],
        6: [(0, (0, 1)), (2, (1, 2)), (1, (2, 0))],
        7: [(0, (0, 2)), (0, (1, 0)), (0, (2, 1))],
        8: [(0, (0, 2)), (1, (1, 0)), (2, (2, 1))],
        9: [(0, (0, 2)), (2, (1, 0)), (1, (2, 1))],
    },
}

# Product kets in the Bell basis: (i, j) -> [(phase power, flat index), ...]
INVERSION_TERMS = {
    2: {
        (0, 0): [(0, 1), (0, 2)],
        (1, 1): [(0, 1), (1, 2)],
        (0, 1): [(0, 3), (0, 4)],
        (1, 0): [(0, 3), (1, 4)],
    },
    3: {
        (0, 0): [(0, 1), (0, 2), (0, 3)],
        (1, 1): [(0, 1), (2, 2), (1, 3)],
        (2, 2): [(0, 1), (1, 2), (2, 3)],
        (0, 1): [(0, 4), (0, 5), (0, 6)],
        (1, 2): [(0, 4), (2, 5), (1, 6)],
        (2, 0): [(0, 4), (1, 5), (2, 6)],
        (0, 2): [(0, 7), (0, 8), (0, 9)],
        (1, 0): [(0, 7), (2, 8), (1, 9)],
        (2, 1): [(0, 7), (1, 8), (2, 9)],
    },
}

# Bob's conditional states, shared pair (1, 1): flat index ->
# [(input amplitude index, phase power, Bob ket), ...]
BRANCH_TERMS = {
    2: {
        1: [(0, 0, 1), (1, 1, 0)],
        2: [(0, 0, 1), (1, 0, 0)],
        3: [(0, 1, 0), (1, 0, 1)],
        4: [(0, 1, 0), (1, 1, 1)],
    },
    3: {
        1: [(0, 0, 1), (1, 1, 2), (2, 2, 0)],
        2: [(0, 0, 1), (1, 0, 2), (2, 0, 0)],
        3: [(0, 0, 1), (1, 2, 2), (2, 1, 0)],
        4: [(0, 1, 2), (1, 2, 0), (2, 0, 1)],
        5: [(0, 1, 2), (1, 1, 0), (2, 1, 1)],
        6: [(0, 1, 2), (1, 0, 0), (2, 2, 1)],
        # as printed in the qutrit expansion; the kets of rows 7-9 are permuted
        7: [(0, 2, 2), (1, 0, 0), (2, 1, 1)],
        8: [(0, 2, 2), (1, 2, 0), (2, 2, 1)],
        9: [(0, 2, 2), (1, 1, 0), (2, 0, 1)],
    },
}

# Rows 7-9 as restated next to the qutrit correction operators; these are
# the ones consistent with the expansion.
BRANCH_TERMS_RESTATED = {
    3: {
        7: [(0, 2, 0), (1, 0, 1), (2, 1, 2)],
        8: [(0, 2, 0), (1, 2, 1), (2, 2, 2)],
        9: [(0, 2, 0), (1, 1, 1), (2, 0, 2)],
    }
}
MISPRINTED_BRANCHES = {2: (), 3: (7, 8, 9)}

# Bob's corrections for the shared pair (1, 1), as written
CORRECTION_LABELS = {
    2: {1: "i s2", 2: "s1", 3: "-s3", 4: "-1"},
    3: {
        1: "Z^2 X^2",
        2: "X^2",
        3: "Z X^2",
        4: "w^2 Z^2 X",
        5: "w^2 X",
        6: "w^2 Z X",
        7: "w Z^2",
        8: "w 1",
        9: "w Z",
    },
}

# Alice's observable in the qubit case
GOOD_D2_EIGENVALUES = (3.0, 1.0, -1.0, -3.0)


def _check_d(d: int) -> None:
    if d not in BELL_TERMS:
        raise ValueError(f"reference tables exist for d=2 and d=3 only, not d={d}")


def bell_amps(d: int, k: int) -> np.ndarray:
    _check_d(d)
    v = np.zeros(d * d, dtype=np.complex128)
    for p, (i, j) in BELL_TERMS[d][k]:
        v[i * d + j] += omega(d, p)
    return v / math.sqrt(d)


def inversion_coeffs(d: int, i: int, j: int) -> np.ndarray:
    """Bell-basis coefficients of |i>(x)|j>, flat order."""
    _check_d(d)
    c = np.zeros(d * d, dtype=np.complex128)
    for p, k in INVERSION_TERMS[d][(i, j)]:
        c[k - 1] += omega(d, p)
    return c / math.sqrt(d)


def branch_amps(d: int, k: int, input_amps, restated: bool = False) -> np.ndarray:
    """Bob's conditional state after outcome ``k``, shared pair (1, 1)."""
    _check_d(d)
    table = BRANCH_TERMS[d]
    if restated and k in BRANCH_TERMS_RESTATED.get(d, {}):
        table = BRANCH_TERMS_RESTATED[d]
    v = np.zeros(d, dtype=np.complex128)
    for src, p, ket in table[k]:
        v[ket] += input_amps[src] * omega(d, p)
    return v
