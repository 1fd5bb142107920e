"""Validated quantum objects (effects, states, POVMs) and the seeded
generators that feed every randomized suite in the package.

Randomness contract: every generator takes an explicit ``seed`` which may
be an int or a tuple of ints; tuples let callers derive independent,
individually replayable streams, e.g. ``random_effect(4, (base, i))`` for
instance ``i`` of a sweep.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import matcore
from ._backend import kernels
from .matcore import DEFAULT_TOL, SpectralDecomposition, Tolerances

SeedLike = "int | tuple[int, ...] | np.random.Generator"


@dataclass(frozen=True)
class EffectOperator:
    """Hermitian operator with spectrum in [0, 1], with its clustered
    spectral decomposition cached for the functional calculus."""

    matrix: np.ndarray
    spectral: SpectralDecomposition

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class DensityOperator:
    """Positive unit-trace operator representing a state."""

    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class Povm:
    """Finite family of effects summing to the identity."""

    elements: tuple[EffectOperator, ...]
    label: str = ""

    @property
    def dim(self) -> int:
        return self.elements[0].dim

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, k: int) -> EffectOperator:
        return self.elements[k]


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _clamp_clusters(
    vals: np.ndarray, projs: np.ndarray, slack: float
) -> tuple[np.ndarray, np.ndarray]:
    """Snap cluster eigenvalues within ``slack`` of 0 or 1 exactly onto the
    endpoint and clip the rest into [0, 1], re-merging any clusters that
    collide so eigenvalues stay pairwise distinct.

    Exact endpoints matter downstream: the phase profile must annihilate
    the kernel exactly (|f(t)| = sqrt(t) turns a 1e-16 eigenvalue residue
    into a 1e-8 operator error otherwise)."""
    clipped = vals.copy()
    clipped[np.abs(clipped) <= slack] = 0.0
    clipped[np.abs(clipped - 1.0) <= slack] = 1.0
    np.clip(clipped, 0.0, 1.0, out=clipped)
    if clipped.size > 1 and np.any(np.diff(clipped) <= 0.0):
        merged_vals: list[float] = [float(clipped[0])]
        merged_projs: list[np.ndarray] = [projs[0]]
        for v, p in zip(clipped[1:], projs[1:]):
            if v <= merged_vals[-1]:
                merged_projs[-1] = merged_projs[-1] + p
            else:
                merged_vals.append(float(v))
                merged_projs.append(p)
        return np.asarray(merged_vals), np.stack(merged_projs)
    return clipped, projs


def validate_effect(m, tol: Tolerances = DEFAULT_TOL) -> EffectOperator:
    """Wrap a matrix as an effect or raise ``ValueError``.

    The stored matrix is the Hermitian part of the input; eigenvalues
    within ``tol.psd_slack`` of the [0, 1] boundary are clamped onto it so
    downstream functions like sqrt and log stay well-defined.
    """
    a = matcore.as_operator(m)
    if not matcore.is_hermitian(a, tol):
        raise ValueError("effect must be Hermitian within tolerance")
    h = matcore.symmetrize(a)
    vals, projs = kernels.eigh_clustered(h, tol.eig_cluster)
    if vals[0] < -tol.psd_slack or vals[-1] > 1.0 + tol.psd_slack:
        raise ValueError(
            f"spectrum [{vals[0]:.3e}, {vals[-1]:.3e}] outside [0, 1] beyond slack"
        )
    vals, projs = _clamp_clusters(vals, projs, tol.psd_slack)
    return EffectOperator(h, SpectralDecomposition(vals, projs))


def validate_density(m, tol: Tolerances = DEFAULT_TOL) -> DensityOperator:
    """Wrap a matrix as a density operator or raise ``ValueError``."""
    a = matcore.as_operator(m)
    if not matcore.is_hermitian(a, tol):
        raise ValueError("density operator must be Hermitian within tolerance")
    h = matcore.symmetrize(a)
    w = np.linalg.eigvalsh(h)
    if w[0] < -tol.psd_slack:
        raise ValueError(f"negative eigenvalue {w[0]:.3e} beyond slack")
    tr = float(np.trace(h).real)
    if abs(tr - 1.0) > tol.mat_eq * h.shape[0]:
        raise ValueError(f"trace {tr} differs from 1 beyond tolerance")
    return DensityOperator(h)


def validate_povm(mats, tol: Tolerances = DEFAULT_TOL, label: str = "") -> Povm:
    """Validate a non-empty family of effects that sums to the identity."""
    if not mats:
        raise ValueError("POVM needs at least one element")
    elements = tuple(validate_effect(m, tol) for m in mats)
    dim = elements[0].dim
    for e in elements[1:]:
        if e.dim != dim:
            raise ValueError("POVM elements must share one dimension")
    total = np.sum([e.matrix for e in elements], axis=0)
    eye = matcore.identity(dim)
    if not matcore.matrices_equal(total, eye, tol):
        raise ValueError(
            f"elements sum to distance {matcore.frobenius_distance(total, eye):.3e} from identity"
        )
    return Povm(elements, label)


def is_sharp(a: EffectOperator, tol: Tolerances = DEFAULT_TOL,
             atol: float | None = None) -> bool:
    """True iff every clustered eigenvalue sits within ``atol`` of {0, 1}."""
    if atol is None:
        atol = tol.mat_eq
    vals = a.spectral.eigenvalues
    return bool(np.all(np.minimum(np.abs(vals), np.abs(vals - 1.0)) <= atol))


def commutes(a: EffectOperator, b: EffectOperator,
             tol: Tolerances = DEFAULT_TOL, atol: float | None = None) -> bool:
    """True iff the commutator norm is below the (scaled or explicit) tolerance."""
    if atol is None:
        atol = matcore.matrix_tolerance(tol, a.matrix, b.matrix)
    return matcore.commutator_norm(a.matrix, b.matrix) <= atol


def povms_compatible(x: Povm, y: Povm, tol: Tolerances = DEFAULT_TOL,
                     atol: float | None = None) -> bool:
    """True iff every element of ``x`` commutes with every element of ``y``."""
    if x.dim != y.dim:
        raise ValueError("POVMs must share one dimension")
    return all(commutes(a, b, tol, atol) for a in x for b in y)


def max_commutator(x: Povm, y: Povm) -> float:
    """Largest pairwise commutator norm; 0 means exactly compatible."""
    return max(matcore.commutator_norm(a.matrix, b.matrix) for a in x for b in y)


def effect_in_basis(u: np.ndarray, values, tol: Tolerances = DEFAULT_TOL) -> EffectOperator:
    """Effect ``U diag(values) U*`` for a unitary ``u`` and values in [0, 1]."""
    v = np.asarray(values, dtype=np.float64)
    return validate_effect(matcore.symmetrize((u * v) @ u.conj().T), tol)


def complement(e: EffectOperator, tol: Tolerances = DEFAULT_TOL) -> EffectOperator:
    """The complementary effect ``I - e``."""
    return validate_effect(matcore.identity(e.dim) - e.matrix, tol)


# ---------------------------------------------------------------------------
# seeded generators
# ---------------------------------------------------------------------------

def _gaussian_complex(rng: np.random.Generator, dim: int) -> np.ndarray:
    return rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))


def random_unitary(dim: int, seed) -> np.ndarray:
    """Haar-ish unitary: QR of a Gaussian matrix with phase-fixed diagonal."""
    rng = _rng(seed)
    q, r = np.linalg.qr(_gaussian_complex(rng, dim))
    diag = np.diagonal(r).copy()
    diag[np.abs(diag) < 1e-300] = 1.0
    return q * (diag / np.abs(diag))


def random_effect(dim: int, seed, tol: Tolerances = DEFAULT_TOL) -> EffectOperator:
    """Random effect with spectrum stretched onto the full [0, 1] range.

    A Gaussian Hermitian draw is shifted and scaled so its extreme
    eigenvalues land exactly on 0 and 1, exercising the boundary where the
    phase calculus is most delicate.  Degenerate draws (constant spectrum,
    e.g. every dim-1 draw) fall back to the identity.
    """
    rng = _rng(seed)
    h = matcore.symmetrize(_gaussian_complex(rng, dim))
    w = np.linalg.eigvalsh(h)
    spread = float(w[-1] - w[0])
    if spread < 1e-12:
        return validate_effect(matcore.identity(dim), tol)
    a = (h - w[0] * matcore.identity(dim)) / spread
    return validate_effect(a, tol)


def random_density(dim: int, seed, tol: Tolerances = DEFAULT_TOL) -> DensityOperator:
    """Random density operator ``M M* / tr(M M*)`` with M complex Gaussian."""
    rng = _rng(seed)
    while True:
        m = _gaussian_complex(rng, dim)
        g = m @ m.conj().T
        tr = float(np.trace(g).real)
        if tr > 1e-12:
            return validate_density(g / tr, tol)
        # degenerate draw: continue on the same counted stream


def random_povm(dim: int, m: int, seed, tol: Tolerances = DEFAULT_TOL,
                label: str = "") -> Povm:
    """Random m-outcome POVM via symmetric normalization.

    Positive draws ``G_k = M_k M_k*`` are whitened by ``S^{-1/2}`` with
    ``S = sum_k G_k``, which sums to the identity by construction.
    """
    if m < 1:
        raise ValueError("POVM needs at least one outcome")
    rng = _rng(seed)
    while True:
        gs = [(lambda z: z @ z.conj().T)(_gaussian_complex(rng, dim)) for _ in range(m)]
        s = np.sum(gs, axis=0)
        w, v = np.linalg.eigh(s)
        if w[0] > 1e-10 * w[-1]:
            break
        # near-singular total: redraw on the same stream
    inv_sqrt = (v / np.sqrt(w)) @ v.conj().T
    mats = [matcore.symmetrize(inv_sqrt @ g @ inv_sqrt) for g in gs]
    return validate_povm(mats, tol, label)


def random_pvm(dim: int, parts: int, seed, tol: Tolerances = DEFAULT_TOL,
               label: str = "") -> Povm:
    """Random sharp POVM: basis vectors of a random unitary grouped into
    ``parts`` non-empty projectors."""
    if not 1 <= parts <= dim:
        raise ValueError(f"parts must lie in [1, {dim}]")
    rng = _rng(seed)
    u = random_unitary(dim, rng)
    order = rng.permutation(dim)
    assignment = np.empty(dim, dtype=np.intp)
    assignment[order[:parts]] = np.arange(parts)  # every group non-empty
    assignment[order[parts:]] = rng.integers(0, parts, size=dim - parts)
    mats = []
    for g in range(parts):
        block = u[:, assignment == g]
        mats.append(block @ block.conj().T)
    return validate_povm(mats, tol, label)


def _simplex_rows(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    """Rows drawn uniformly from the (cols-1)-simplex via normalized
    exponential draws."""
    e = rng.standard_exponential((rows, cols))
    return e / e.sum(axis=1, keepdims=True)


def random_commuting_povm_pair(
    dim: int, m: int, n: int, seed, tol: Tolerances = DEFAULT_TOL
) -> tuple[Povm, Povm]:
    """Pair of POVMs diagonal in one shared random eigenbasis, hence exactly
    compatible."""
    if m < 1 or n < 1:
        raise ValueError("both POVMs need at least one outcome")
    rng = _rng(seed)
    u = random_unitary(dim, rng)
    p = _simplex_rows(rng, dim, m)
    q = _simplex_rows(rng, dim, n)
    x_mats = [matcore.symmetrize((u * p[:, k]) @ u.conj().T) for k in range(m)]
    y_mats = [matcore.symmetrize((u * q[:, j]) @ u.conj().T) for j in range(n)]
    return (validate_povm(x_mats, tol, "X"), validate_povm(y_mats, tol, "Y"))


def random_commuting_povm_sharp_pair(
    dim: int, m: int, parts: int, seed, tol: Tolerances = DEFAULT_TOL
) -> tuple[Povm, Povm]:
    """Compatible pair where the second measurement is sharp: an unsharp
    POVM and a PVM built on the same random eigenbasis."""
    if not 1 <= parts <= dim:
        raise ValueError(f"parts must lie in [1, {dim}]")
    rng = _rng(seed)
    u = random_unitary(dim, rng)
    p = _simplex_rows(rng, dim, m)
    x_mats = [matcore.symmetrize((u * p[:, k]) @ u.conj().T) for k in range(m)]
    order = rng.permutation(dim)
    assignment = np.empty(dim, dtype=np.intp)
    assignment[order[:parts]] = np.arange(parts)
    assignment[order[parts:]] = rng.integers(0, parts, size=dim - parts)
    y_mats = []
    for g in range(parts):
        block = u[:, assignment == g]
        y_mats.append(block @ block.conj().T)
    return (validate_povm(x_mats, tol, "X"), validate_povm(y_mats, tol, "Y"))
