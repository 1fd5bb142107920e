"""Sequential products on the standard effect algebra.

The product implemented here is ``A ? B = f(A) B f(A)*`` where ``f`` ranges
over a two-parameter family of scalar phase profiles

    f(t) = xi0 * t**(1/2 + i*c),   f(0) = 0,   t in [0, 1],

so ``|f(t)| = sqrt(t)`` everywhere and ``f(s) f(t) = xi0 * f(s t)``.  The
choice ``c = 0, xi0 = 1`` recovers the instantaneous square-root product
``A^(1/2) B A^(1/2)``; nonzero ``c`` models a phase accumulated during the
delay between the two measurements.  Alongside the product live the
matching state-update channel, outcome probabilities, conditionals, a
Monte Carlo sampler, and randomized suites checking the algebraic laws the
product must satisfy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import matcore, quantum
from ._backend import kernels
from .matcore import DEFAULT_TOL, Tolerances
from .quantum import DensityOperator, EffectOperator, Povm

ZERO_PROBABILITY_THRESHOLD = 1e-12


class ZeroProbabilityError(ValueError):
    """The conditioning event has (numerically) zero probability."""


@dataclass(frozen=True)
class PhaseFamily:
    """Scalar phase profile ``f(t) = xi0 * t**(1/2 + i*c)`` with ``f(0)=0``.

    ``c`` is the phase exponent; ``xi0`` a global unimodular prefactor.
    The default (0, 1) is the plain square-root profile.
    """

    c: float = 0.0
    xi0: complex = 1.0 + 0.0j

    def __post_init__(self) -> None:
        if abs(abs(self.xi0) - 1.0) > 1e-12:
            raise ValueError(f"|xi0| must be 1, got {abs(self.xi0)!r}")

    @classmethod
    def from_phase(cls, c: float = 0.0, xi0_arg: float = 0.0) -> "PhaseFamily":
        """Build with the prefactor given by its phase angle in radians."""
        return cls(float(c), complex(np.exp(1j * xi0_arg)))

    def scalar(self, t: float) -> complex:
        """Evaluate the profile at one point of [0, 1]."""
        if t <= 0.0:
            return 0.0 + 0.0j
        return self.xi0 * np.exp((0.5 + 1j * self.c) * np.log(t))

    def values(self, t: np.ndarray) -> np.ndarray:
        """Vectorized profile over an eigenvalue array (entries in [0, 1])."""
        t = np.asarray(t, dtype=np.float64)
        out = np.zeros(t.shape, dtype=np.complex128)
        pos = t > 0.0
        out[pos] = self.xi0 * np.exp((0.5 + 1j * self.c) * np.log(t[pos]))
        return out


def phase_apply(fam: PhaseFamily, a: EffectOperator) -> np.ndarray:
    """Evaluate ``f(A) = sum_k f(lambda_k) E_k`` on the cached spectral form.

    The result ``F`` is normal and satisfies ``F F* = F* F = A``; its
    adjoint equals the conjugate profile applied to ``A``.
    """
    s = a.spectral
    return kernels.assemble(fam.values(s.eigenvalues), s.projectors)


def sequential_product(
    fam: PhaseFamily, a: EffectOperator, b: EffectOperator,
    tol: Tolerances = DEFAULT_TOL,
) -> EffectOperator:
    """The effect "a then b": ``f(A) B f(A)*``, validated as an effect.

    Validation failure beyond slack signals corrupted inputs upstream.
    """
    if a.dim != b.dim:
        raise ValueError("effects must share one dimension")
    f = phase_apply(fam, a)
    return quantum.validate_effect(kernels.sandwich(f, b.matrix), tol)


def luders_channel_state(
    fam: PhaseFamily, a: EffectOperator, w: DensityOperator
) -> np.ndarray:
    """Unnormalized post-measurement state ``f(A)* W f(A)``.

    Its trace equals ``tr(A W)``, the outcome probability.
    """
    if a.dim != w.dim:
        raise ValueError("operator dimensions must match")
    f = phase_apply(fam, a)
    return kernels.sandwich(f.conj().T, w.matrix)


def probability(fam: PhaseFamily, w: DensityOperator, a: EffectOperator) -> float:
    """Outcome probability ``tr(A W)``; independent of the phase profile."""
    if a.dim != w.dim:
        raise ValueError("operator dimensions must match")
    p = kernels.trace_dot(a.matrix, w.matrix).real
    return float(min(1.0, max(0.0, p)))


def post_state(
    fam: PhaseFamily, w: DensityOperator, a: EffectOperator,
    tol: Tolerances = DEFAULT_TOL,
) -> DensityOperator:
    """Normalized state after observing ``a``; raises ``ZeroProbabilityError``
    when the outcome probability vanishes."""
    t = luders_channel_state(fam, a, w)
    p = float(np.trace(t).real)
    if p <= ZERO_PROBABILITY_THRESHOLD:
        raise ZeroProbabilityError(f"outcome probability {p:.3e} below threshold")
    return quantum.validate_density(t / p, tol)


def conditional_probability(
    fam: PhaseFamily, w: DensityOperator, b: EffectOperator, a: EffectOperator
) -> float:
    """Probability of ``b`` given that ``a`` was observed:
    ``tr((a ? b) W) / tr(a W)``."""
    if not (a.dim == b.dim == w.dim):
        raise ValueError("operator dimensions must match")
    denom = kernels.trace_dot(a.matrix, w.matrix).real
    if denom <= ZERO_PROBABILITY_THRESHOLD:
        raise ZeroProbabilityError(f"conditioning probability {denom:.3e} below threshold")
    f = phase_apply(fam, a)
    numer = kernels.trace_dot(kernels.sandwich(f, b.matrix), w.matrix).real
    return float(min(1.0, max(0.0, numer / denom)))


def two_step_conditional(
    fam: PhaseFamily, w: DensityOperator, c: EffectOperator,
    a: EffectOperator, b: EffectOperator,
) -> float:
    """Probability of ``c`` given the two-step sequence "a then b".

    Evaluated from the chained channels directly,
    ``tr(C f(B)* f(A)* W f(A) f(B)) / tr(B f(A)* W f(A))``,
    rather than by nesting normalized post-states, so normalization error
    does not compound; the nested route is used as a cross-check in tests.
    """
    if not (a.dim == b.dim == c.dim == w.dim):
        raise ValueError("operator dimensions must match")
    t1 = luders_channel_state(fam, a, w)
    denom = kernels.trace_dot(b.matrix, t1).real
    if denom <= ZERO_PROBABILITY_THRESHOLD:
        raise ZeroProbabilityError(f"two-step conditioning probability {denom:.3e} below threshold")
    fb = phase_apply(fam, b)
    t2 = kernels.sandwich(fb.conj().T, t1)
    numer = kernels.trace_dot(c.matrix, t2).real
    return float(min(1.0, max(0.0, numer / denom)))


def heisenberg_image(
    fam: PhaseFamily, x: Povm, b: EffectOperator, tol: Tolerances = DEFAULT_TOL
) -> EffectOperator:
    """The effect ``sum_k (A_k ? b)`` seen after a non-selective run of ``x``."""
    if x.dim != b.dim:
        raise ValueError("operator dimensions must match")
    total = np.zeros((x.dim, x.dim), dtype=np.complex128)
    for a in x:
        total += kernels.sandwich(phase_apply(fam, a), b.matrix)
    return quantum.validate_effect(total, tol)


# ---------------------------------------------------------------------------
# Monte Carlo sampling of two-step outcome statistics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MeasurementOutcomeTable:
    """Joint outcome table for "x then y": exact probabilities and sampled
    counts on the m x n outcome grid."""

    counts: np.ndarray  # (m, n) int64
    exact: np.ndarray   # (m, n) float64
    total: int

    def __post_init__(self) -> None:
        if self.counts.shape != self.exact.shape:
            raise ValueError("counts and exact grids must have one shape")
        if int(self.counts.sum()) != self.total:
            raise ValueError("counts must sum to total")

    def frequencies(self) -> np.ndarray:
        if self.total == 0:
            return np.zeros_like(self.exact)
        return self.counts / self.total


def exact_joint_grid(fam: PhaseFamily, w: DensityOperator, x: Povm, y: Povm) -> np.ndarray:
    """Exact joint probabilities ``p(k, j) = tr((A_k ? B_j) W)``; rows sum to
    the first-measurement marginals and the grid sums to 1."""
    if not (x.dim == y.dim == w.dim):
        raise ValueError("operator dimensions must match")
    grid = np.empty((len(x), len(y)), dtype=np.float64)
    for k, a in enumerate(x):
        f = phase_apply(fam, a)
        for j, b in enumerate(y):
            grid[k, j] = kernels.trace_dot(kernels.sandwich(f, b.matrix), w.matrix).real
    return np.clip(grid, 0.0, None)


def sample_sequential(
    fam: PhaseFamily, w: DensityOperator, x: Povm, y: Povm, trials: int, seed
) -> MeasurementOutcomeTable:
    """Draw ``trials`` i.i.d. two-step outcomes from the exact joint grid."""
    if trials < 0:
        raise ValueError("trials must be non-negative")
    grid = exact_joint_grid(fam, w, x, y)
    flat = grid.ravel()
    flat = flat / flat.sum()
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(trials, flat).reshape(grid.shape)
    return MeasurementOutcomeTable(counts=counts, exact=grid, total=trials)


# ---------------------------------------------------------------------------
# randomized law suites
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PropertyReport:
    name: str
    trials: int
    max_residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tolerance


@dataclass(frozen=True)
class SuiteReport:
    suite: str
    dim: int
    seed: int
    properties: tuple[PropertyReport, ...]

    @property
    def passed(self) -> bool:
        return all(p.passed for p in self.properties)

    def residuals(self) -> dict[str, float]:
        return {p.name: p.max_residual for p in self.properties}

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "dim": self.dim,
            "seed": self.seed,
            "passed": self.passed,
            "properties": [
                {
                    "name": p.name,
                    "trials": p.trials,
                    "max_residual": p.max_residual,
                    "tolerance": p.tolerance,
                    "passed": p.passed,
                }
                for p in self.properties
            ],
        }


def _bound_excess(m: np.ndarray, lo: float = 0.0, hi: float = 1.0) -> float:
    w = np.linalg.eigvalsh(matcore.symmetrize(m))
    return float(max(0.0, lo - w[0], w[-1] - hi))


def _sqrt_complement(b: EffectOperator) -> np.ndarray:
    """``(I - B)^(1/2)`` reusing B's spectral cache."""
    s = b.spectral
    return kernels.assemble(np.sqrt(1.0 - s.eigenvalues).astype(np.complex128),
                            s.projectors)


def verify_axioms(
    fam: PhaseFamily, dim: int, trials: int, seed: int,
    tol: Tolerances = DEFAULT_TOL, tolerance: float = 1e-9,
) -> SuiteReport:
    """Randomized residual suite for the five sequential-product laws.

    Each law is exercised on instances generated to satisfy its hypotheses
    (orthogonal supports, commuting families, bounded sums): generic draws
    would satisfy those hypotheses with probability zero.
    """
    if trials <= 0:
        return SuiteReport("axioms", dim, seed, ())

    eye = quantum.validate_effect(matcore.identity(dim), tol)
    res = {
        "additivity_in_second_argument": 0.0,
        "identity_is_neutral": 0.0,
        "vanishing_products_symmetric": 0.0,
        "complement_stays_commuting": 0.0,
        "product_associates_when_commuting": 0.0,
        "commutant_closed_under_product": 0.0,
        "commutant_closed_under_sum": 0.0,
    }

    for i in range(trials):
        # additivity of B -> A ? B, with C built so that B + C <= I
        a = quantum.random_effect(dim, (seed, 1, i, 0), tol)
        b = quantum.random_effect(dim, (seed, 1, i, 1), tol)
        c0 = quantum.random_effect(dim, (seed, 1, i, 2), tol)
        r = _sqrt_complement(b)
        c = matcore.symmetrize(r @ c0.matrix @ r)
        fa = phase_apply(fam, a)
        lhs = kernels.sandwich(fa, b.matrix) + kernels.sandwich(fa, c)
        rhs = kernels.sandwich(fa, b.matrix + c)
        res["additivity_in_second_argument"] = max(
            res["additivity_in_second_argument"],
            kernels.frob_dist(lhs, rhs), _bound_excess(lhs, lo=-1.0),
        )

        # the identity acts trivially on the left
        a2 = quantum.random_effect(dim, (seed, 2, i), tol)
        res["identity_is_neutral"] = max(
            res["identity_is_neutral"],
            kernels.frob_dist(kernels.sandwich(phase_apply(fam, eye), a2.matrix),
                              a2.matrix),
        )

        # orthogonal supports: both products vanish together
        if dim >= 2:
            rng = np.random.default_rng((seed, 3, i))
            u = quantum.random_unitary(dim, rng)
            split = int(rng.integers(1, dim))
            avals = np.zeros(dim)
            bvals = np.zeros(dim)
            avals[:split] = rng.uniform(0.0, 1.0, split)
            bvals[split:] = rng.uniform(0.0, 1.0, dim - split)
            ax = quantum.effect_in_basis(u, avals, tol)
            bx = quantum.effect_in_basis(u, bvals, tol)
            res["vanishing_products_symmetric"] = max(
                res["vanishing_products_symmetric"],
                kernels.frob_norm(kernels.sandwich(phase_apply(fam, ax), bx.matrix)),
                kernels.frob_norm(kernels.sandwich(phase_apply(fam, bx), ax.matrix)),
            )

        # commuting pair: complement commutes, product associates
        rng = np.random.default_rng((seed, 4, i))
        u = quantum.random_unitary(dim, rng)
        ac = quantum.effect_in_basis(u, rng.uniform(0.0, 1.0, dim), tol)
        bc = quantum.effect_in_basis(u, rng.uniform(0.0, 1.0, dim), tol)
        cc = quantum.random_effect(dim, (seed, 4, i, 1), tol)
        nb = quantum.complement(bc, tol)
        f_ac = phase_apply(fam, ac)
        res["complement_stays_commuting"] = max(
            res["complement_stays_commuting"],
            kernels.frob_dist(kernels.sandwich(f_ac, nb.matrix),
                              kernels.sandwich(phase_apply(fam, nb), ac.matrix)),
        )
        bc_cc = quantum.validate_effect(
            kernels.sandwich(phase_apply(fam, bc), cc.matrix), tol)
        ac_bc = quantum.validate_effect(
            kernels.sandwich(f_ac, bc.matrix), tol)
        res["product_associates_when_commuting"] = max(
            res["product_associates_when_commuting"],
            kernels.frob_dist(kernels.sandwich(f_ac, bc_cc.matrix),
                              kernels.sandwich(phase_apply(fam, ac_bc), cc.matrix)),
        )

        # common-basis triple with A + B <= I: the commutant is closed
        rng = np.random.default_rng((seed, 5, i))
        u = quantum.random_unitary(dim, rng)
        av = rng.uniform(0.0, 1.0, dim)
        bv = rng.uniform(0.0, 1.0, dim) * (1.0 - av)
        cv = rng.uniform(0.0, 1.0, dim)
        a5 = quantum.effect_in_basis(u, av, tol)
        b5 = quantum.effect_in_basis(u, bv, tol)
        c5 = quantum.effect_in_basis(u, cv, tol)
        f_c5 = phase_apply(fam, c5)
        prod = quantum.validate_effect(
            kernels.sandwich(phase_apply(fam, a5), b5.matrix), tol)
        res["commutant_closed_under_product"] = max(
            res["commutant_closed_under_product"],
            kernels.frob_dist(kernels.sandwich(f_c5, prod.matrix),
                              kernels.sandwich(phase_apply(fam, prod), c5.matrix)),
        )
        s5 = quantum.validate_effect(a5.matrix + b5.matrix, tol)
        res["commutant_closed_under_sum"] = max(
            res["commutant_closed_under_sum"],
            kernels.frob_dist(kernels.sandwich(f_c5, s5.matrix),
                              kernels.sandwich(phase_apply(fam, s5), c5.matrix)),
        )

    props = tuple(PropertyReport(name, trials, r, tolerance)
                  for name, r in res.items())
    return SuiteReport("axioms", dim, seed, props)


def verify_functional_calculus(
    fam: PhaseFamily, dim: int, trials: int, seed: int,
    tol: Tolerances = DEFAULT_TOL, tolerance: float = 1e-9,
    kernel_tolerance: float = 1e-10,
) -> SuiteReport:
    """Randomized residual suite for the phase calculus itself: polar
    factorization, kernel preservation, agreement with direct polynomial
    evaluation, projection scaling, and closedness of the product."""
    if trials <= 0:
        return SuiteReport("functional_calculus", dim, seed, ())

    res = {
        "polar_factorization": 0.0,
        "kernel_annihilation": 0.0,
        "polynomial_consistency": 0.0,
        "projection_phase_scaling": 0.0,
        "sequential_product_is_effect": 0.0,
    }

    eye = matcore.identity(dim)
    for i in range(trials):
        a = quantum.random_effect(dim, (seed, 11, i), tol)
        f = phase_apply(fam, a)
        res["polar_factorization"] = max(
            res["polar_factorization"],
            kernels.frob_dist(f @ f.conj().T, a.matrix),
            kernels.frob_dist(f.conj().T @ f, a.matrix),
        )

        if dim >= 2:
            rng = np.random.default_rng((seed, 12, i))
            u = quantum.random_unitary(dim, rng)
            vals = rng.uniform(0.1, 1.0, dim)
            vals[: int(rng.integers(1, dim))] = 0.0
            ad = quantum.effect_in_basis(u, vals, tol)
            if ad.spectral.eigenvalues[0] <= tol.eig_cluster:
                kernel_proj = ad.spectral.projectors[0]
                res["kernel_annihilation"] = max(
                    res["kernel_annihilation"],
                    kernels.frob_norm(phase_apply(fam, ad) @ kernel_proj),
                )

        rng = np.random.default_rng((seed, 13, i))
        coeffs = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        direct = np.zeros((dim, dim), dtype=np.complex128)
        for ck in coeffs[::-1]:
            direct = direct @ a.matrix + ck * eye
        spectral = matcore.apply_borel_function(
            a.spectral, lambda t: complex(np.polyval(coeffs[::-1], t)))
        res["polynomial_consistency"] = max(
            res["polynomial_consistency"], kernels.frob_dist(direct, spectral))

        rng = np.random.default_rng((seed, 14, i))
        u = quantum.random_unitary(dim, rng)
        rank = int(rng.integers(1, dim + 1))
        block = u[:, :rank]
        proj = quantum.validate_effect(block @ block.conj().T, tol)
        res["projection_phase_scaling"] = max(
            res["projection_phase_scaling"],
            kernels.frob_dist(phase_apply(fam, proj), fam.xi0 * proj.matrix),
        )

        b = quantum.random_effect(dim, (seed, 15, i), tol)
        m = kernels.sandwich(f, b.matrix)
        res["sequential_product_is_effect"] = max(
            res["sequential_product_is_effect"],
            kernels.frob_dist(m, m.conj().T),
            _bound_excess(m),
        )

    props = []
    for name, r in res.items():
        t = kernel_tolerance if name == "kernel_annihilation" else tolerance
        props.append(PropertyReport(name, trials, r, t))
    return SuiteReport("functional_calculus", dim, seed, tuple(props))
