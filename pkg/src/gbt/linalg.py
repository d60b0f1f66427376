"""Dense complex linear algebra on small tensor-product spaces.

Operators and density matrices are plain ``complex128`` numpy arrays; state
vectors carry their local dimensions in :class:`StateVec`. Tensor products
use the big-endian convention: in ``kron(a, b)`` the composite index of
``(j, k)`` is ``j * dim(b) + k``.
"""
from __future__ import annotations

import cmath
import functools
import math
import os
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import _jacobi_py

TOL_NORM = 1e-12
TOL_MAT = 1e-10
GROUP_TOL = 1e-8
PHASE_TOL = 1e-9

JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100

_BACKENDS = {"python": _jacobi_py.jacobi_hermitian}
try:
    from . import _jacobi_ext
except ImportError:  # pragma: no cover - depends on the build
    pass
else:
    _BACKENDS["compiled"] = _jacobi_ext.jacobi_hermitian

if os.environ.get("GBT_PURE_PYTHON") or "compiled" not in _BACKENDS:
    BACKEND = "python"
else:
    BACKEND = "compiled"


def available_backends() -> list[str]:
    return sorted(_BACKENDS)


@functools.lru_cache(maxsize=None)
def _omega_table(d: int) -> tuple[complex, ...]:
    vals = []
    for k in range(d):
        if (4 * k) % d == 0:
            # exact quarter turns, so d=2 reproduces the Pauli matrices bit for bit
            vals.append((1, 1j, -1, -1j)[(4 * k) // d])
        else:
            vals.append(cmath.exp(2j * math.pi * k / d))
    return tuple(complex(v) for v in vals)


def omega(d: int, power: int = 1) -> complex:
    """``exp(2*pi*i*power/d)``, the primitive d-th root of unity raised to ``power``."""
    if d < 1:
        raise ValueError(f"dimension must be positive, got {d}")
    return _omega_table(d)[power % d]


def _check_root_of_unity_d3() -> None:
    w = omega(3)
    if abs(1 + w + w * w) > 1e-15 or abs(w.conjugate() - omega(3, 2)) > 1e-15:
        raise RuntimeError("cube root of unity failed 1 + w + w^2 = 0 / conj(w) = w^2")


_check_root_of_unity_d3()


@dataclass(frozen=True, eq=False)
class StateVec:
    """Normalized pure state on a tensor product of spaces with local ``dims``."""

    dims: tuple[int, ...]
    amps: np.ndarray

    def __post_init__(self):
        dims = tuple(int(x) for x in self.dims)
        if not dims or any(x < 1 for x in dims):
            raise ValueError(f"invalid local dimensions {self.dims!r}")
        amps = np.array(self.amps, dtype=np.complex128).reshape(-1)
        if amps.size != math.prod(dims):
            raise ValueError(f"{amps.size} amplitudes do not fit dims {dims}")
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > TOL_NORM:
            raise ValueError(f"state is not normalized (norm = {norm!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amps", amps)

    @classmethod
    def from_amps(cls, amps, dims: Sequence[int] | None = None, normalize: bool = False) -> "StateVec":
        amps = np.asarray(amps, dtype=np.complex128).reshape(-1)
        if normalize:
            norm = np.linalg.norm(amps)
            if norm == 0:
                raise ValueError("cannot normalize the zero vector")
            amps = amps / norm
        return cls(tuple(dims) if dims is not None else (amps.size,), amps)

    @classmethod
    def basis(cls, index: int | Sequence[int], dims: Sequence[int]) -> "StateVec":
        """Computational basis ket; ``index`` is flat or one digit per factor."""
        dims = tuple(dims)
        if not isinstance(index, (int, np.integer)):
            index = int(np.ravel_multi_index(tuple(index), dims))
        amps = np.zeros(math.prod(dims), dtype=np.complex128)
        amps[index] = 1.0
        return cls(dims, amps)

    @property
    def dim(self) -> int:
        return self.amps.size

    def tensor(self) -> np.ndarray:
        return self.amps.reshape(self.dims)

    def density(self) -> np.ndarray:
        return np.outer(self.amps, self.amps.conj())

    def evolve(self, op: np.ndarray) -> "StateVec":
        return StateVec(self.dims, np.asarray(op) @ self.amps)

    def __repr__(self) -> str:
        return f"StateVec(dims={self.dims}, amps={np.array2string(self.amps, precision=6)})"


def kron(a, b):
    """Tensor product of two states or two operators (left factor most significant)."""
    if isinstance(a, StateVec) and isinstance(b, StateVec):
        return StateVec(a.dims + b.dims, np.kron(a.amps, b.amps))
    if isinstance(a, StateVec) or isinstance(b, StateVec):
        raise TypeError("kron operands must both be states or both be operators")
    return np.kron(np.asarray(a, dtype=np.complex128), np.asarray(b, dtype=np.complex128))


def kron_all(factors: Iterable):
    return functools.reduce(kron, factors)


def dagger(m: np.ndarray) -> np.ndarray:
    return np.asarray(m).conj().T


def inner(a: StateVec, b: StateVec) -> complex:
    """<a|b>, conjugate-linear in ``a``."""
    if a.dims != b.dims:
        raise ValueError(f"dimension mismatch: {a.dims} vs {b.dims}")
    return complex(np.vdot(a.amps, b.amps))


def is_hermitian(m: np.ndarray, tol: float = TOL_MAT) -> bool:
    m = np.asarray(m)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and float(np.max(np.abs(m - m.conj().T), initial=0.0)) <= tol


def is_unitary(m: np.ndarray, tol: float = TOL_MAT) -> bool:
    m = np.asarray(m)
    return float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0])))) <= tol


@dataclass(frozen=True, eq=False)
class SpectralForm:
    """Eigenvalues (descending, distinct) with their eigenspace projectors."""

    eigenvalues: tuple[float, ...]
    projectors: tuple[np.ndarray, ...]
    multiplicities: tuple[int, ...]

    def __post_init__(self):
        if not (len(self.eigenvalues) == len(self.projectors) == len(self.multiplicities)):
            raise ValueError("eigenvalues, projectors and multiplicities must align")
        for p in self.projectors:
            p.setflags(write=False)

    @property
    def dim(self) -> int:
        return int(sum(self.multiplicities))

    @property
    def degenerate(self) -> bool:
        return any(m > 1 for m in self.multiplicities)

    def reconstruct(self) -> np.ndarray:
        return sum(lam * p for lam, p in zip(self.eigenvalues, self.projectors))

    def index_of(self, value: float, tol: float = GROUP_TOL) -> int:
        for k, lam in enumerate(self.eigenvalues):
            if abs(lam - value) < tol:
                return k
        raise KeyError(value)


def jacobi_eig(h: np.ndarray, backend: str | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Raw Jacobi eigenpairs, unsorted. ``backend`` is ``"compiled"`` or ``"python"``."""
    try:
        kernel = _BACKENDS[backend or BACKEND]
    except KeyError:
        raise ValueError(f"unknown or unavailable backend {backend!r}; have {available_backends()}") from None
    w, v, _ = kernel(np.ascontiguousarray(h, dtype=np.complex128), JACOBI_TOL, JACOBI_MAX_SWEEPS)
    return w, v


def eig_hermitian(h: np.ndarray, backend: str | None = None) -> SpectralForm:
    """Spectral decomposition of a Hermitian matrix with explicit degeneracy.

    Eigenvalues closer than ``GROUP_TOL`` are merged into one eigenspace.
    """
    h = np.asarray(h, dtype=np.complex128)
    if not is_hermitian(h):
        raise ValueError("eig_hermitian requires a Hermitian matrix")
    w, v = jacobi_eig(h, backend)
    order = np.argsort(-w, kind="stable")
    w, v = w[order], v[:, order]

    groups: list[list[int]] = [[0]]
    for k in range(1, len(w)):
        if w[groups[-1][-1]] - w[k] < GROUP_TOL:
            groups[-1].append(k)
        else:
            groups.append([k])

    values, projectors, mult = [], [], []
    for g in groups:
        vecs = v[:, g]
        p = vecs @ vecs.conj().T
        values.append(float(np.mean(w[g])))
        projectors.append((p + p.conj().T) / 2)
        mult.append(len(g))
    return SpectralForm(tuple(values), tuple(projectors), tuple(mult))


def partial_trace(rho: np.ndarray, dims: Sequence[int], keep: int | Sequence[int]) -> np.ndarray:
    """Reduced density matrix on the subsystems listed in ``keep``."""
    dims = tuple(int(x) for x in dims)
    keep = (keep,) if isinstance(keep, (int, np.integer)) else tuple(keep)
    n = len(dims)
    if not keep or any(not 0 <= k < n for k in keep) or len(set(keep)) != len(keep):
        raise ValueError(f"bad subsystem index {keep!r} for {n} subsystems")
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.shape != (math.prod(dims),) * 2:
        raise ValueError(f"density matrix shape {rho.shape} does not match dims {dims}")
    t = rho.reshape(dims + dims)
    for ax in sorted(set(range(n)) - set(keep), reverse=True):
        t = np.trace(t, axis1=ax, axis2=ax + t.ndim // 2)
    kept = sorted(keep)
    size = math.prod(dims[k] for k in kept)
    out = t.reshape(size, size)
    if list(keep) != kept:
        # caller asked for a permuted order
        sub = [dims[k] for k in kept]
        perm = [kept.index(k) for k in keep]
        t = out.reshape(sub + sub)
        out = t.transpose(perm + [p + len(sub) for p in perm]).reshape(size, size)
    return out


def purity(rho: np.ndarray) -> float:
    rho = np.asarray(rho)
    return float(np.real(np.trace(rho @ rho)))


def fidelity(pure, rho: np.ndarray) -> float:
    """<pure|rho|pure>, clamped to [0, 1]."""
    v = pure.amps if isinstance(pure, StateVec) else np.asarray(pure, dtype=np.complex128)
    rho = np.asarray(rho)
    if rho.shape != (v.size, v.size):
        raise ValueError(f"dimension mismatch: state {v.size}, density matrix {rho.shape}")
    f = np.vdot(v, rho @ v)
    return float(min(1.0, max(0.0, f.real)))


def global_phase_canonical(s: StateVec) -> StateVec:
    """Rotate the global phase so the first non-negligible amplitude is real positive."""
    big = np.flatnonzero(np.abs(s.amps) > PHASE_TOL)
    if big.size == 0:
        raise ValueError("cannot canonicalize the phase of a zero vector")
    a = s.amps[big[0]]
    return StateVec(s.dims, s.amps * (abs(a) / a))


def equal_up_to_phase(a, b, tol: float = TOL_MAT) -> bool:
    va = a.amps if isinstance(a, StateVec) else np.asarray(a)
    vb = b.amps if isinstance(b, StateVec) else np.asarray(b)
    return abs(abs(np.vdot(va, vb)) - np.linalg.norm(va) * np.linalg.norm(vb)) <= tol
