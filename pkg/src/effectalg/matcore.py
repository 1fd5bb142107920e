"""Dense complex matrix core: Hermitian eigendecomposition with eigenvalue
clustering, Borel functional calculus, and the metric used by every
operator-equality check in the package.

All operators live on finite-dimensional complex Hilbert spaces and are
carried as square ``complex128`` ndarrays.  Dimensions are capped at
``DIM_CAP`` so the dense O(d^3) kernels stay interactive.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ._backend import kernels

DIM_CAP = 64


@dataclass(frozen=True)
class Tolerances:
    """Numeric thresholds shared across the package.

    ``eig_cluster``
        Absolute gap under which adjacent raw eigenvalues merge into one
        spectral cluster.  Absolute (not relative) because every spectrum
        handled here is [0, 1]-bounded.
    ``mat_eq``
        Base tolerance for matrix equality; scaled by dimension and by the
        larger operand norm (see :func:`matrix_tolerance`).  Kept a decade
        above ``eig_cluster`` so clustering decisions sit strictly inside
        the equality tolerance.
    ``psd_slack``
        Slack allowed below 0 / above 1 when validating effect and density
        spectra; eigenvalues inside the slack are clamped into [0, 1].
    """

    eig_cluster: float = 1e-10
    mat_eq: float = 1e-9
    psd_slack: float = 1e-10

    def __post_init__(self) -> None:
        for name in ("eig_cluster", "mat_eq", "psd_slack"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be strictly positive")


DEFAULT_TOL = Tolerances()


@dataclass(frozen=True)
class SpectralDecomposition:
    """Clustered spectral form ``M = sum_k eigenvalues[k] * projectors[k]``.

    ``eigenvalues`` is ascending and pairwise distinct after clustering;
    ``projectors`` is the matching stack of pairwise-orthogonal projectors
    summing to the identity.
    """

    eigenvalues: np.ndarray  # (k,) float64, ascending
    projectors: np.ndarray   # (k, d, d) complex128

    @property
    def dim(self) -> int:
        return self.projectors.shape[-1]

    def matrix(self) -> np.ndarray:
        """Reconstruct ``sum_k lambda_k E_k``."""
        return kernels.assemble(self.eigenvalues.astype(np.complex128), self.projectors)


def as_operator(m, dim: int | None = None) -> np.ndarray:
    """Coerce to a validated square complex128 array.

    Raises ``ValueError`` on non-square shape, non-finite entries, or
    dimension outside [1, DIM_CAP].
    """
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    d = a.shape[0]
    if d < 1 or d > DIM_CAP:
        raise ValueError(f"dimension {d} outside supported range [1, {DIM_CAP}]")
    if dim is not None and d != dim:
        raise ValueError(f"dimension mismatch: expected {dim}, got {d}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix contains non-finite entries")
    return a


def identity(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=np.complex128)


def adjoint(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return m.conj().T


def symmetrize(m: np.ndarray) -> np.ndarray:
    """Hermitian part ``(M + M*)/2``; absorbs roundoff from upstream products."""
    return 0.5 * (m + m.conj().T)


def frobenius_distance(m: np.ndarray, n: np.ndarray) -> float:
    """Frobenius distance ``sqrt(sum |M_ij - N_ij|^2)``."""
    if m.shape != n.shape:
        raise ValueError(f"shape mismatch: {m.shape} vs {n.shape}")
    return kernels.frob_dist(m, n)


def matrix_tolerance(tol: Tolerances, *mats: np.ndarray) -> float:
    """Absolute equality threshold for the given operands.

    ``tol.mat_eq`` scaled by the dimension and the largest operand
    Frobenius norm: residuals grow with both.
    """
    dim = mats[0].shape[0]
    scale = 1.0
    for m in mats:
        scale = max(scale, kernels.frob_norm(m))
    return tol.mat_eq * dim * scale


def matrices_equal(m: np.ndarray, n: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> bool:
    return frobenius_distance(m, n) <= matrix_tolerance(tol, m, n)


def is_hermitian(m: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> bool:
    return kernels.frob_dist(m, m.conj().T) <= matrix_tolerance(tol, m)


def is_normal(m: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> bool:
    left = m @ m.conj().T
    right = m.conj().T @ m
    return kernels.frob_dist(left, right) <= matrix_tolerance(tol, left, right)


def is_effect(m: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True iff ``m`` is Hermitian with spectrum inside [0, 1] up to slack."""
    if not is_hermitian(m, tol):
        return False
    w = np.linalg.eigvalsh(symmetrize(m))
    return bool(w[0] >= -tol.psd_slack and w[-1] <= 1.0 + tol.psd_slack)


def commutator_norm(a: np.ndarray, b: np.ndarray) -> float:
    """Frobenius norm of ``AB - BA``."""
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return kernels.commutator_frob(a, b)


def hermitian_eigendecomposition(
    m: np.ndarray, tol: Tolerances = DEFAULT_TOL
) -> SpectralDecomposition:
    """Clustered spectral decomposition of a Hermitian matrix.

    The input is symmetrized before the solve.  Raw eigenvalues closer than
    ``tol.eig_cluster`` are chained into one cluster whose projector is the
    sum of the member rank-1 projectors, so degenerate spectra produce
    stable, well-conditioned projectors.
    """
    a = as_operator(m)
    if not is_hermitian(a, tol):
        raise ValueError("matrix is not Hermitian within tolerance")
    vals, projs = kernels.eigh_clustered(symmetrize(a), tol.eig_cluster)
    return SpectralDecomposition(vals, projs)


def apply_borel_function(
    decomposition: SpectralDecomposition, f: Callable[[float], complex]
) -> np.ndarray:
    """Evaluate ``sum_k f(lambda_k) E_k`` on a clustered decomposition."""
    fvals = np.array([f(float(lam)) for lam in decomposition.eigenvalues],
                     dtype=np.complex128)
    if not np.all(np.isfinite(fvals)):
        bad = decomposition.eigenvalues[~np.isfinite(fvals)]
        raise ValueError(f"function undefined at eigenvalue(s) {bad}")
    return kernels.assemble(fvals, decomposition.projectors)


def trace_product(a: np.ndarray, b: np.ndarray) -> complex:
    """``trace(A @ B)`` without forming the product."""
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return kernels.trace_dot(a, b)
