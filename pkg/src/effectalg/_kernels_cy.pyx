# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled dense-matrix kernels.

Same surface as ``effectalg._kernels_py``.  The matrices here are tiny
(dimension capped at 64, typically 2..6), so per-call overhead dominates:
the eigensolver talks to LAPACK ``zheevd`` directly and everything else is
plain C loops, which beats dispatching BLAS for these sizes.
"""

import numpy as np

cimport numpy as cnp
from scipy.linalg.cython_lapack cimport zheevd

cnp.import_array()

NAME = "cython"


def eigh_clustered(object a_in, double cluster_tol):
    """Eigendecompose a Hermitian matrix into clustered spectral projectors.

    Mirrors the numpy backend: ascending eigenvalues chained into clusters
    wherever the gap stays below ``cluster_tol``; returns the cluster means
    and the orthogonal projectors onto the cluster eigenspaces.
    """
    cdef cnp.ndarray a = np.array(a_in, dtype=np.complex128, order="F", copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expected a square matrix")
    cdef int n = a.shape[0]
    cdef cnp.ndarray w_arr = np.empty(n, dtype=np.float64)
    cdef int lwork = 2 * n + n * n
    cdef int lrwork = 1 + 5 * n + 2 * n * n
    cdef int liwork = 3 + 5 * n
    cdef cnp.ndarray work = np.empty(lwork, dtype=np.complex128)
    cdef cnp.ndarray rwork = np.empty(lrwork, dtype=np.float64)
    cdef cnp.ndarray iwork = np.empty(liwork, dtype=np.intc)
    cdef char jobz = b"V"
    cdef char uplo = b"L"
    cdef int info = 0

    zheevd(&jobz, &uplo, &n,
           <double complex*> cnp.PyArray_DATA(a), &n,
           <double*> cnp.PyArray_DATA(w_arr),
           <double complex*> cnp.PyArray_DATA(work), &lwork,
           <double*> cnp.PyArray_DATA(rwork), &lrwork,
           <int*> cnp.PyArray_DATA(iwork), &liwork, &info)
    if info != 0:
        raise np.linalg.LinAlgError(f"zheevd failed to converge (info={info})")

    cdef double[::1] w = w_arr
    cdef double complex[::1, :] v = a  # eigenvectors in columns

    cdef cnp.ndarray starts_arr = np.empty(n + 1, dtype=np.intp)
    cdef cnp.intp_t[::1] starts = starts_arr
    cdef Py_ssize_t k = 0, i
    starts[0] = 0
    for i in range(1, n):
        if w[i] - w[i - 1] >= cluster_tol:
            k += 1
            starts[k] = i
    starts[k + 1] = n
    cdef Py_ssize_t nclusters = k + 1

    cdef cnp.ndarray vals_arr = np.empty(nclusters, dtype=np.float64)
    cdef cnp.ndarray projs_arr = np.zeros((nclusters, n, n), dtype=np.complex128)
    cdef double[::1] vals = vals_arr
    cdef double complex[:, :, ::1] projs = projs_arr
    cdef Py_ssize_t c, lo, hi, r, col
    cdef double acc
    cdef double complex vr
    for c in range(nclusters):
        lo = starts[c]
        hi = starts[c + 1]
        acc = 0.0
        for i in range(lo, hi):
            acc += w[i]
        vals[c] = acc / (hi - lo)
        for i in range(lo, hi):
            for r in range(n):
                vr = v[r, i]
                for col in range(n):
                    projs[c, r, col] += vr * v[col, i].conjugate()
    return vals_arr, projs_arr


def assemble(object coeffs_in, object projs_in):
    """Return ``sum_k coeffs[k] * projs[k]``."""
    cdef double complex[::1] coeffs = np.ascontiguousarray(coeffs_in, dtype=np.complex128)
    cdef double complex[:, :, :] projs = np.asarray(projs_in, dtype=np.complex128)
    cdef Py_ssize_t k = projs.shape[0], n = projs.shape[1]
    cdef cnp.ndarray out_arr = np.zeros((n, n), dtype=np.complex128)
    cdef double complex[:, ::1] out = out_arr
    cdef Py_ssize_t c, i, j
    cdef double complex coef
    for c in range(k):
        coef = coeffs[c]
        for i in range(n):
            for j in range(n):
                out[i, j] += coef * projs[c, i, j]
    return out_arr


def sandwich(object f_in, object b_in):
    """Return ``f @ b @ f.conj().T``."""
    cdef double complex[:, :] f = np.asarray(f_in, dtype=np.complex128)
    cdef double complex[:, :] b = np.asarray(b_in, dtype=np.complex128)
    cdef Py_ssize_t n = f.shape[0]
    cdef cnp.ndarray tmp_arr = np.zeros((n, n), dtype=np.complex128)
    cdef cnp.ndarray out_arr = np.empty((n, n), dtype=np.complex128)
    cdef double complex[:, ::1] tmp = tmp_arr
    cdef double complex[:, ::1] out = out_arr
    cdef Py_ssize_t i, j, k
    cdef double complex fik, s
    for i in range(n):
        for k in range(n):
            fik = f[i, k]
            for j in range(n):
                tmp[i, j] += fik * b[k, j]
    for i in range(n):
        for j in range(n):
            s = 0
            for k in range(n):
                s += tmp[i, k] * f[j, k].conjugate()
            out[i, j] = s
    return out_arr


def frob_norm(object m_in):
    cdef double complex[:, :] m = np.asarray(m_in, dtype=np.complex128)
    cdef Py_ssize_t n0 = m.shape[0], n1 = m.shape[1]
    cdef double acc = 0.0
    cdef Py_ssize_t i, j
    cdef double complex z
    for i in range(n0):
        for j in range(n1):
            z = m[i, j]
            acc += z.real * z.real + z.imag * z.imag
    return acc ** 0.5


def frob_dist(object m_in, object n_in):
    cdef double complex[:, :] m = np.asarray(m_in, dtype=np.complex128)
    cdef double complex[:, :] w = np.asarray(n_in, dtype=np.complex128)
    cdef Py_ssize_t n0 = m.shape[0], n1 = m.shape[1]
    cdef double acc = 0.0
    cdef Py_ssize_t i, j
    cdef double complex z
    for i in range(n0):
        for j in range(n1):
            z = m[i, j] - w[i, j]
            acc += z.real * z.real + z.imag * z.imag
    return acc ** 0.5


def commutator_frob(object a_in, object b_in):
    """Frobenius norm of ``AB - BA`` without forming temporaries."""
    cdef double complex[:, :] a = np.asarray(a_in, dtype=np.complex128)
    cdef double complex[:, :] b = np.asarray(b_in, dtype=np.complex128)
    cdef Py_ssize_t n = a.shape[0]
    cdef double acc = 0.0
    cdef Py_ssize_t i, j, k
    cdef double complex z
    for i in range(n):
        for j in range(n):
            z = 0
            for k in range(n):
                z += a[i, k] * b[k, j] - b[i, k] * a[k, j]
            acc += z.real * z.real + z.imag * z.imag
    return acc ** 0.5


def trace_dot(object a_in, object b_in):
    """Return ``trace(a @ b)`` without forming the product."""
    cdef double complex[:, :] a = np.asarray(a_in, dtype=np.complex128)
    cdef double complex[:, :] b = np.asarray(b_in, dtype=np.complex128)
    cdef Py_ssize_t n = a.shape[0]
    cdef double complex acc = 0
    cdef Py_ssize_t i, j
    for i in range(n):
        for j in range(n):
            acc += a[i, j] * b[j, i]
    return complex(acc)
