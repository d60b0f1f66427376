"""Cyclic complex Jacobi eigensolver, compiled kernel."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, hypot

cnp.import_array()


cdef double _offdiag_sq(double complex[:, ::1] a, Py_ssize_t n) nogil:
    cdef Py_ssize_t i, j
    cdef double acc = 0.0
    for i in range(n):
        for j in range(n):
            if i != j:
                acc += a[i, j].real * a[i, j].real + a[i, j].imag * a[i, j].imag
    return acc


def jacobi_hermitian(h, double tol=1e-13, int max_sweeps=100):
    """Same contract as ``gbt._jacobi_py.jacobi_hermitian``."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] arr = np.array(h, dtype=np.complex128, order="C", copy=True)
    cdef Py_ssize_t n = arr.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] varr = np.eye(n, dtype=np.complex128)
    cdef double complex[:, ::1] a = arr
    cdef double complex[:, ::1] v = varr
    cdef double threshold = tol * max(1.0, float(np.linalg.norm(arr)))
    cdef Py_ssize_t p, q, k
    cdef int sweeps = 0
    cdef double r, tau, t, c, s, off
    cdef double complex e, se, sec, xp, xq
    with nogil:
        while True:
            off = sqrt(_offdiag_sq(a, n))
            if off < threshold or sweeps == max_sweeps:
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    r = hypot(a[p, q].real, a[p, q].imag)
                    if r < 1e-300:
                        continue
                    # real divisions: limited-range complex division underflows for tiny r
                    e.real = a[p, q].real / r
                    e.imag = a[p, q].imag / r
                    tau = (a[q, q].real - a[p, p].real) / (2.0 * r)
                    if tau >= 0.0:
                        t = 1.0 / (fabs(tau) + hypot(1.0, tau))
                    else:
                        t = -1.0 / (fabs(tau) + hypot(1.0, tau))
                    c = 1.0 / sqrt(1.0 + t * t)
                    s = t * c
                    se = s * e
                    sec = se.conjugate()
                    for k in range(n):
                        xp = a[k, p]
                        xq = a[k, q]
                        a[k, p] = c * xp - sec * xq
                        a[k, q] = se * xp + c * xq
                    for k in range(n):
                        xp = a[p, k]
                        xq = a[q, k]
                        a[p, k] = c * xp - se * xq
                        a[q, k] = sec * xp + c * xq
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    a[p, p] = a[p, p].real
                    a[q, q] = a[q, q].real
                    for k in range(n):
                        xp = v[k, p]
                        xq = v[k, q]
                        v[k, p] = c * xp - sec * xq
                        v[k, q] = se * xp + c * xq
            sweeps += 1
    return np.real(np.diag(arr)).copy(), varr, sweeps
