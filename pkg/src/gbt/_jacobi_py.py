"""Cyclic complex Jacobi eigensolver, numpy fallback.

Mirrors ``_jacobi_ext.pyx`` rotation for rotation; used when the compiled
extension is unavailable or ``GBT_PURE_PYTHON`` is set.
"""
import math

import numpy as np


def jacobi_hermitian(h, tol=1e-13, max_sweeps=100):
    """Diagonalize a Hermitian matrix by cyclic complex Jacobi rotations.

    Returns ``(eigenvalues, vectors, sweeps)`` with eigenvectors in the
    columns of ``vectors`` (unsorted). Convergence is declared once the
    off-diagonal Frobenius norm drops below ``tol * max(1, ||h||_F)``.
    """
    a = np.array(h, dtype=np.complex128, copy=True)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    scale = max(1.0, float(np.linalg.norm(a)))
    threshold = tol * scale
    offdiag = ~np.eye(n, dtype=bool)
    sweeps = 0
    for sweeps in range(max_sweeps + 1):
        off = float(np.linalg.norm(a[offdiag]))
        if off < threshold or sweeps == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r < 1e-300:
                    continue
                e = apq / r
                tau = (a[q, q].real - a[p, p].real) / (2.0 * r)
                t = (1.0 if tau >= 0.0 else -1.0) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                se = s * e
                sec = se.conjugate()
                # A <- A U
                col_p = a[:, p].copy()
                col_q = a[:, q]
                a[:, p] = c * col_p - sec * col_q
                a[:, q] = se * col_p + c * col_q
                # A <- U^H A
                row_p = a[p, :].copy()
                row_q = a[q, :]
                a[p, :] = c * row_p - se * row_q
                a[q, :] = sec * row_p + c * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                col_p = v[:, p].copy()
                col_q = v[:, q]
                v[:, p] = c * col_p - sec * col_q
                v[:, q] = se * col_p + c * col_q
    return np.real(np.diag(a)).copy(), v, sweeps
