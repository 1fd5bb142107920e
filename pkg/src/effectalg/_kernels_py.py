"""Pure-numpy implementations of the hot dense-matrix kernels.

Mirror of the compiled module ``effectalg._kernels_cy``; both expose the
same functions so the rest of the package can dispatch to either at import
time (see ``effectalg._backend``).
"""

from __future__ import annotations

import numpy as np

NAME = "python"


def eigh_clustered(a: np.ndarray, cluster_tol: float) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecompose a Hermitian matrix into clustered spectral projectors.

    ``a`` is assumed Hermitian (callers symmetrize first).  Raw ascending
    eigenvalues closer than ``cluster_tol`` are chained into one cluster;
    each cluster contributes the mean eigenvalue and the orthogonal
    projector onto the span of its eigenvectors.

    Returns ``(values, projectors)`` with shapes ``(k,)`` and ``(k, d, d)``.
    """
    w, v = np.linalg.eigh(a)
    d = w.shape[0]
    # cluster boundaries: start a new cluster where the gap reaches cluster_tol
    starts = [0]
    for i in range(1, d):
        if w[i] - w[i - 1] >= cluster_tol:
            starts.append(i)
    starts.append(d)
    k = len(starts) - 1
    vals = np.empty(k, dtype=np.float64)
    projs = np.empty((k, d, d), dtype=np.complex128)
    for c in range(k):
        lo, hi = starts[c], starts[c + 1]
        vals[c] = w[lo:hi].mean()
        block = v[:, lo:hi]
        projs[c] = block @ block.conj().T
    return vals, projs


def assemble(coeffs: np.ndarray, projs: np.ndarray) -> np.ndarray:
    """Return ``sum_k coeffs[k] * projs[k]``."""
    return np.tensordot(np.asarray(coeffs, dtype=np.complex128), projs, axes=1)


def sandwich(f: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Return ``f @ b @ f.conj().T``."""
    return f @ b @ f.conj().T


def frob_norm(m: np.ndarray) -> float:
    return float(np.linalg.norm(m))


def frob_dist(m: np.ndarray, n: np.ndarray) -> float:
    return float(np.linalg.norm(m - n))


def commutator_frob(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.linalg.norm(a @ b - b @ a))


def trace_dot(a: np.ndarray, b: np.ndarray) -> complex:
    """Return ``trace(a @ b)`` without forming the product."""
    return complex(np.einsum("ij,ji->", a, b))
