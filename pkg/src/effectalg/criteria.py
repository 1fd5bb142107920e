"""Operator-level checkers for the three non-disturbance criteria between
two POVMs X = {A_k} and Y = {B_j}, plus the classification oracles and
randomized searches built on them.

The criteria quantify over every state W.  Because density operators span
the full operator space, each "for all W" statement collapses to a finite
operator identity, which is what these checkers evaluate:

  (I)   an established Y value survives a later X value:
        B_j ? (A_k ? B_j) = B_j ? A_k          for all k, j
        -- holds iff X, Y commute pairwise and every B_j is a projection;
  (II)  Y statistics are unchanged by a prior non-selective X run:
        sum_k (A_k ? B_j) = B_j                for all j
        -- implied by compatibility; the converse fails (see the gap
        search below and :func:`criterion2_fixed_state`);
  (III) "p then q" and "q then p" are equally likely:
        A_k ? B_j = B_j ? A_k                  for all k, j
        -- holds iff X and Y commute pairwise.

Verdicts computed against a residual tolerance deliberately tighter than
the tolerance used to classify compatibility/sharpness, so borderline
numerics cannot push an instance to opposite sides of an equivalence.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import matcore, quantum, seqprod
from ._backend import kernels
from .matcore import DEFAULT_TOL, Tolerances
from .quantum import DensityOperator, EffectOperator, Povm
from .seqprod import PhaseFamily, phase_apply

# verdict/classification hysteresis used by the equivalence suites
VERDICT_ATOL = 1e-8
CLASSIFY_ATOL = 1e-6

_TRACK_WITNESS = 101
_TRACK_SAMPLE = 102
_TRACK_STATE = 103


def _default_atol(tol: Tolerances, dim: int) -> float:
    return tol.mat_eq * dim


@dataclass(frozen=True)
class CriterionReport:
    """Residual grid and verdict for one criterion on one POVM pair."""

    criterion: str            # "I" | "II" | "III"
    verdict: bool
    max_residual: float
    tolerance: float
    per_pair: np.ndarray      # (m, n) indexed (k, j), or (n,) indexed j
    compatible: bool
    y_sharp: bool
    witnesses: tuple[tuple, ...] = ()
    fixed_state: bool = False
    vacuous: tuple[tuple[int, int], ...] = ()

    def to_dict(self) -> dict:
        return {
            "criterion": self.criterion,
            "fixed_state": self.fixed_state,
            "verdict": self.verdict,
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "per_pair": self.per_pair.tolist(),
            "compatible": self.compatible,
            "y_sharp": self.y_sharp,
            "witnesses": [list(w) for w in self.witnesses],
            "vacuous": [list(v) for v in self.vacuous],
        }


def _finish(criterion: str, grid: np.ndarray, atol: float, compatible: bool,
            y_sharp: bool, fixed_state: bool = False,
            vacuous: tuple[tuple[int, int], ...] = ()) -> CriterionReport:
    max_residual = float(grid.max())
    if grid.ndim == 2:
        witnesses = tuple(
            (int(k), int(j), float(grid[k, j]))
            for k, j in zip(*np.nonzero(grid > atol))
        )
    else:
        witnesses = tuple((int(j), float(grid[j])) for j in np.nonzero(grid > atol)[0])
    return CriterionReport(
        criterion=criterion,
        verdict=max_residual <= atol,
        max_residual=max_residual,
        tolerance=atol,
        per_pair=grid,
        compatible=compatible,
        y_sharp=y_sharp,
        witnesses=witnesses,
        fixed_state=fixed_state,
        vacuous=vacuous,
    )


def _require_same_dim(x: Povm, y: Povm) -> int:
    if x.dim != y.dim:
        raise ValueError("POVMs must share one dimension")
    return x.dim


def criterion1_check(fam: PhaseFamily, x: Povm, y: Povm,
                     tol: Tolerances = DEFAULT_TOL,
                     atol: float | None = None) -> CriterionReport:
    """Criterion (I) as the operator identity
    ``B_j ? (A_k ? B_j) = B_j ? A_k`` per (k, j).

    Pairs with ``B_j ? A_k = 0`` are conditioning on a zero-probability
    event for every state; they are flagged as vacuous (their residual
    vanishes with the product, so they never flip the verdict).
    """
    dim = _require_same_dim(x, y)
    if atol is None:
        atol = _default_atol(tol, dim)
    fx = [phase_apply(fam, a) for a in x]
    fy = [phase_apply(fam, b) for b in y]
    grid = np.empty((len(x), len(y)), dtype=np.float64)
    vacuous: list[tuple[int, int]] = []
    for j, b in enumerate(y):
        for k, a in enumerate(x):
            inner = kernels.sandwich(fx[k], b.matrix)           # A_k ? B_j
            lhs = kernels.sandwich(fy[j], inner)                # B_j ? (A_k ? B_j)
            rhs = kernels.sandwich(fy[j], a.matrix)             # B_j ? A_k
            grid[k, j] = kernels.frob_dist(lhs, rhs)
            if kernels.frob_norm(rhs) <= atol:
                vacuous.append((k, j))
    compatible = quantum.povms_compatible(x, y, tol)
    y_sharp = all(quantum.is_sharp(b, tol) for b in y)
    return _finish("I", grid, atol, compatible, y_sharp, vacuous=tuple(vacuous))


def criterion1_oracle(x: Povm, y: Povm, tol: Tolerances = DEFAULT_TOL,
                      atol: float | None = None) -> bool:
    """The phase-free characterization of criterion (I): the POVMs commute
    pairwise and every element of ``y`` is a projection."""
    _require_same_dim(x, y)
    return (quantum.povms_compatible(x, y, tol, atol)
            and all(quantum.is_sharp(b, tol, atol) for b in y))


def criterion2_check(fam: PhaseFamily, x: Povm, y: Povm,
                     tol: Tolerances = DEFAULT_TOL,
                     atol: float | None = None) -> CriterionReport:
    """Criterion (II) as the operator identity
    ``sum_k (A_k ? B_j) = B_j`` per j."""
    dim = _require_same_dim(x, y)
    if atol is None:
        atol = _default_atol(tol, dim)
    fx = [phase_apply(fam, a) for a in x]
    grid = np.empty(len(y), dtype=np.float64)
    for j, b in enumerate(y):
        image = np.zeros((dim, dim), dtype=np.complex128)
        for f in fx:
            image += kernels.sandwich(f, b.matrix)
        grid[j] = kernels.frob_dist(image, b.matrix)
    compatible = quantum.povms_compatible(x, y, tol)
    y_sharp = all(quantum.is_sharp(b, tol) for b in y)
    return _finish("II", grid, atol, compatible, y_sharp)


def criterion2_fixed_state(fam: PhaseFamily, x: Povm, y: Povm, w: DensityOperator,
                           tol: Tolerances = DEFAULT_TOL,
                           atol: float | None = None) -> CriterionReport:
    """Criterion (II) at one state only:
    ``tr(B_j W) = sum_k tr((A_k ? B_j) W)`` per j.

    At ``W = I/d`` this holds for every POVM pair and every phase profile
    (trace cyclicity), which is exactly why a single state cannot witness
    incompatibility.
    """
    dim = _require_same_dim(x, y)
    if w.dim != dim:
        raise ValueError("state dimension must match the POVMs")
    if atol is None:
        atol = _default_atol(tol, dim)
    fx = [phase_apply(fam, a) for a in x]
    grid = np.empty(len(y), dtype=np.float64)
    for j, b in enumerate(y):
        direct = kernels.trace_dot(b.matrix, w.matrix).real
        routed = 0.0
        for f in fx:
            routed += kernels.trace_dot(kernels.sandwich(f, b.matrix), w.matrix).real
        grid[j] = abs(direct - routed)
    compatible = quantum.povms_compatible(x, y, tol)
    y_sharp = all(quantum.is_sharp(b, tol) for b in y)
    return _finish("II", grid, atol, compatible, y_sharp, fixed_state=True)


def criterion3_check(fam: PhaseFamily, x: Povm, y: Povm,
                     tol: Tolerances = DEFAULT_TOL,
                     atol: float | None = None) -> CriterionReport:
    """Criterion (III) as the operator identity
    ``A_k ? B_j = B_j ? A_k`` per (k, j); equivalent to pairwise
    commutation of the two POVMs."""
    dim = _require_same_dim(x, y)
    if atol is None:
        atol = _default_atol(tol, dim)
    fx = [phase_apply(fam, a) for a in x]
    fy = [phase_apply(fam, b) for b in y]
    grid = np.empty((len(x), len(y)), dtype=np.float64)
    for k, a in enumerate(x):
        for j, b in enumerate(y):
            grid[k, j] = kernels.frob_dist(
                kernels.sandwich(fx[k], b.matrix),
                kernels.sandwich(fy[j], a.matrix),
            )
    compatible = quantum.povms_compatible(x, y, tol)
    y_sharp = all(quantum.is_sharp(b, tol) for b in y)
    return _finish("III", grid, atol, compatible, y_sharp)


# ---------------------------------------------------------------------------
# pairwise classification oracles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CommutationProfile:
    """Residuals of the four product relations tied to commutation.

    For any effects A, B: commutation implies all of
    ``A ? B = B ? A``, ``A ? B = A B`` and ``A ? B = f(B)* A f(B)``;
    conversely either the symmetry or the reversed sandwich forces
    commutation.
    """

    commutator: float
    seq_symmetry: float
    seq_vs_plain_product: float
    seq_vs_reversed_sandwich: float
    strict_atol: float
    loose_atol: float

    def predicates(self) -> dict[str, bool]:
        return {
            "commute": self.commutator <= self.strict_atol,
            "seq_symmetric": self.seq_symmetry <= self.strict_atol,
            "seq_is_product": self.seq_vs_plain_product <= self.strict_atol,
            "seq_is_reversed_sandwich": self.seq_vs_reversed_sandwich <= self.strict_atol,
        }

    def implications_hold(self) -> bool:
        """Check the forward and reverse implications with hysteresis:
        hypotheses at the strict tolerance, conclusions at the loose one."""
        commute_loose = self.commutator <= self.loose_atol
        if self.commutator <= self.strict_atol:
            if not (self.seq_symmetry <= self.loose_atol
                    and self.seq_vs_plain_product <= self.loose_atol
                    and self.seq_vs_reversed_sandwich <= self.loose_atol):
                return False
        if self.seq_symmetry <= self.strict_atol and not commute_loose:
            return False
        if self.seq_vs_reversed_sandwich <= self.strict_atol and not commute_loose:
            return False
        return True


def commutation_classification(
    fam: PhaseFamily, a: EffectOperator, b: EffectOperator,
    tol: Tolerances = DEFAULT_TOL,
    strict_atol: float = VERDICT_ATOL, loose_atol: float = CLASSIFY_ATOL,
) -> CommutationProfile:
    """Evaluate the four commutation-linked predicates for one effect pair."""
    if a.dim != b.dim:
        raise ValueError("effects must share one dimension")
    fa = phase_apply(fam, a)
    fb = phase_apply(fam, b)
    ab = kernels.sandwich(fa, b.matrix)
    ba = kernels.sandwich(fb, a.matrix)
    reversed_sandwich = kernels.sandwich(fb.conj().T, a.matrix)
    return CommutationProfile(
        commutator=matcore.commutator_norm(a.matrix, b.matrix),
        seq_symmetry=kernels.frob_dist(ab, ba),
        seq_vs_plain_product=kernels.frob_dist(ab, a.matrix @ b.matrix),
        seq_vs_reversed_sandwich=kernels.frob_dist(ab, reversed_sandwich),
        strict_atol=strict_atol,
        loose_atol=loose_atol,
    )


@dataclass(frozen=True)
class AbsorptionWitness:
    """One evaluation of the absorption implication for a normal operator A
    and an effect B: if ``A B = B A B`` then ``A B = B A``."""

    hypothesis_residual: float   # ||AB - BAB||
    conclusion_residual: float   # ||AB - BA||
    strict_atol: float
    loose_atol: float

    @property
    def hypothesis(self) -> bool:
        return self.hypothesis_residual <= self.strict_atol

    @property
    def conclusion(self) -> bool:
        return self.conclusion_residual <= self.loose_atol

    @property
    def violation(self) -> bool:
        return self.hypothesis and not self.conclusion


def normal_absorption_check(
    a: np.ndarray, b: EffectOperator, tol: Tolerances = DEFAULT_TOL,
    strict_atol: float = VERDICT_ATOL, loose_atol: float = CLASSIFY_ATOL,
) -> AbsorptionWitness:
    """Evaluate the absorption implication; ``a`` must be normal."""
    a = matcore.as_operator(a, b.dim)
    if not matcore.is_normal(a, tol):
        raise ValueError("absorption check requires a normal operator")
    ab = a @ b.matrix
    return AbsorptionWitness(
        hypothesis_residual=kernels.frob_dist(ab, b.matrix @ ab),
        conclusion_residual=kernels.frob_dist(ab, b.matrix @ a),
        strict_atol=strict_atol,
        loose_atol=loose_atol,
    )


# ---------------------------------------------------------------------------
# absorption falsification search
# ---------------------------------------------------------------------------

def _effect_projection(m: np.ndarray) -> np.ndarray:
    """Nearest-effect heuristic: Hermitian part with spectrum clipped to [0, 1]."""
    w, v = np.linalg.eigh(matcore.symmetrize(m))
    return (v * np.clip(w, 0.0, 1.0)) @ v.conj().T


def _descend_absorption(a: np.ndarray, b: np.ndarray, steps: int) -> np.ndarray:
    """Drive B toward the surface ``AB = BAB`` by projected gradient descent
    on ``||AB - BAB||^2`` over the effect set."""
    ah = a.conj().T
    norm_a = kernels.frob_norm(a)
    eta = 0.25 / max(1.0, norm_a * norm_a)

    def residual(bm: np.ndarray) -> tuple[np.ndarray, float]:
        r = a @ bm - bm @ (a @ bm)
        return r, kernels.frob_norm(r)

    r, g = residual(b)
    for _ in range(steps):
        grad = ah @ r - r @ b @ ah - ah @ b @ r
        step = eta
        for _ in range(4):
            cand = _effect_projection(b - step * grad)
            rc, gc = residual(cand)
            if gc < g:
                b, r, g = cand, rc, gc
                break
            step *= 0.25
        else:
            break
    return b


def absorption_attempt(
    dim: int, seed: int, index: int, descent_steps: int = 4,
    tol: Tolerances = DEFAULT_TOL,
) -> tuple[np.ndarray, EffectOperator]:
    """Deterministically build attempt ``index``: a normal operator and an
    effect, optionally descended toward the ``AB = BAB`` surface.

    Four interleaved strategies: exact absorbing pairs built in a common
    eigenbasis, the same with a tiny perturbation, and two descent tracks
    from generic random starts.
    """
    rng = np.random.default_rng((seed, index))
    strategy = index % 4
    if strategy in (0, 1):
        # per basis vector force a*b*(1-b) = 0: either b in {0, 1} or a = 0
        u = quantum.random_unitary(dim, rng)
        mode = rng.integers(0, 3, size=dim)
        alpha = (rng.uniform(0.0, 1.0, dim)
                 * np.exp(2j * np.pi * rng.uniform(0.0, 1.0, dim)))
        beta = rng.uniform(0.0, 1.0, dim)
        beta[mode == 0] = 0.0
        beta[mode == 1] = 1.0
        alpha[mode == 2] = 0.0
        a = (u * alpha) @ u.conj().T
        b = matcore.symmetrize((u * beta) @ u.conj().T)
        if strategy == 1:
            noise = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
            b = _effect_projection(b + 1e-10 * matcore.symmetrize(noise))
    else:
        u = quantum.random_unitary(dim, rng)
        alpha = (rng.uniform(0.0, 1.0, dim)
                 * np.exp(2j * np.pi * rng.uniform(0.0, 1.0, dim)))
        a = (u * alpha) @ u.conj().T
        b = quantum.random_effect(dim, rng, tol).matrix
        b = _descend_absorption(a, b, descent_steps)
    return a, quantum.validate_effect(b, tol)


@dataclass(frozen=True)
class AbsorptionSearchResult:
    dim: int
    attempts: int
    seed: int
    strict_atol: float
    loose_atol: float
    hypothesis_hits: int
    violations: tuple[dict, ...]          # expected empty
    max_conclusion_residual_at_hit: float
    min_hypothesis_residual: float

    @property
    def falsified(self) -> bool:
        return len(self.violations) > 0

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "attempts": self.attempts,
            "seed": self.seed,
            "strict_atol": self.strict_atol,
            "loose_atol": self.loose_atol,
            "hypothesis_hits": self.hypothesis_hits,
            "violations": list(self.violations),
            "max_conclusion_residual_at_hit": self.max_conclusion_residual_at_hit,
            "min_hypothesis_residual": self.min_hypothesis_residual,
        }


def search_absorption_counterexample(
    dim: int, attempts: int, seed: int,
    strict_atol: float = VERDICT_ATOL, loose_atol: float = CLASSIFY_ATOL,
    descent_steps: int = 4, tol: Tolerances = DEFAULT_TOL,
) -> AbsorptionSearchResult:
    """Falsification search: try to realize ``AB = BAB`` without ``AB = BA``.

    The absorption law says no such pair exists; every attempt that lands
    on the hypothesis surface must also satisfy the conclusion.  Each
    attempt is independently replayable via :func:`absorption_attempt`.
    """
    hits = 0
    worst_conclusion = 0.0
    closest = np.inf
    violations: list[dict] = []
    for i in range(attempts):
        a, b = absorption_attempt(dim, seed, i, descent_steps, tol)
        ab = a @ b.matrix
        hyp = kernels.frob_dist(ab, b.matrix @ ab)
        closest = min(closest, hyp)
        if hyp <= strict_atol:
            hits += 1
            concl = kernels.frob_dist(ab, b.matrix @ a)
            worst_conclusion = max(worst_conclusion, concl)
            if concl > loose_atol:
                violations.append({
                    "index": i,
                    "hypothesis_residual": float(hyp),
                    "conclusion_residual": float(concl),
                })
    return AbsorptionSearchResult(
        dim=dim,
        attempts=attempts,
        seed=seed,
        strict_atol=strict_atol,
        loose_atol=loose_atol,
        hypothesis_hits=hits,
        violations=tuple(violations),
        max_conclusion_residual_at_hit=float(worst_conclusion),
        min_hypothesis_residual=float(closest) if attempts else float("nan"),
    )


# ---------------------------------------------------------------------------
# criterion (II) converse gap search
# ---------------------------------------------------------------------------

def gap_trial_pair(dim: int, m: int, n: int, seed: int, index: int,
                   track: int = _TRACK_SAMPLE,
                   tol: Tolerances = DEFAULT_TOL) -> tuple[Povm, Povm]:
    """Replay the POVM pair used by gap-search trial ``index``."""
    x = quantum.random_povm(dim, m, (seed, track, index, 0), tol, "X")
    y = quantum.random_povm(dim, n, (seed, track, index, 1), tol, "Y")
    return x, y


@dataclass(frozen=True)
class GapSearchResult:
    """Evidence about the gap between criterion (II) and compatibility."""

    dim: int
    m: int
    n: int
    trials: int
    seed: int
    incompat_margin: float
    state_atol: float
    fixed_state_witness: dict       # always present: the I/d witness
    witness_pair: tuple[Povm, Povm]
    best: dict | None               # all-state track: minimal residual found
    best_pair: tuple[Povm, Povm] | None
    trajectory: tuple[tuple[int, float], ...]  # (index, running best residual)
    random_state_hits: tuple[dict, ...]
    skipped_compatible: int

    def to_dict(self, matrix_encoder=None) -> dict:
        def encode_pair(pair):
            if matrix_encoder is None or pair is None:
                return None
            x, y = pair
            return {
                "X": [matrix_encoder(e.matrix) for e in x],
                "Y": [matrix_encoder(e.matrix) for e in y],
            }

        return {
            "dim": self.dim,
            "m": self.m,
            "n": self.n,
            "trials": self.trials,
            "seed": self.seed,
            "incompat_margin": self.incompat_margin,
            "state_atol": self.state_atol,
            "fixed_state_witness": dict(self.fixed_state_witness,
                                        matrices=encode_pair(self.witness_pair)),
            "best": (None if self.best is None
                     else dict(self.best, matrices=encode_pair(self.best_pair))),
            "trajectory": [list(t) for t in self.trajectory],
            "random_state_hits": [dict(h) for h in self.random_state_hits],
            "skipped_compatible": self.skipped_compatible,
        }


def search_criterion2_gap(
    fam: PhaseFamily, dim: int, trials: int, seed: int,
    m: int = 2, n: int = 2,
    incompat_margin: float = 1e-3, state_atol: float = 1e-10,
    tol: Tolerances = DEFAULT_TOL,
) -> GapSearchResult:
    """Probe whether criterion (II) can hold without compatibility.

    Fixed-state track: the maximally mixed state is a guaranteed witness
    (criterion (II) holds at ``W = I/d`` for any pair, compatible or not);
    sampled random states are also tested and any further hits recorded.
    All-state track: records the smallest operator-level criterion (II)
    residual over incompatible sampled pairs.  No outcome is asserted for
    the all-state track; the result is evidence, replayable by seed.
    """
    # deterministic incompatible witness pair
    witness_pair = None
    witness_index = 0
    for i in range(max(trials, 1) + 16):
        x, y = gap_trial_pair(dim, m, n, seed, i, _TRACK_WITNESS, tol)
        if quantum.max_commutator(x, y) >= incompat_margin:
            witness_pair, witness_index = (x, y), i
            break
    if witness_pair is None:
        raise RuntimeError("could not sample an incompatible pair; widen the margin")

    w_mixed = quantum.validate_density(matcore.identity(dim) / dim, tol)
    fs = criterion2_fixed_state(fam, *witness_pair, w_mixed, tol, atol=state_atol)
    witness = {
        "index": witness_index,
        "state": "maximally_mixed",
        "incompatibility": quantum.max_commutator(*witness_pair),
        "residual": fs.max_residual,
        "verdict": fs.verdict,
        "compatible": fs.compatible,
    }

    best = None
    best_pair = None
    trajectory: list[tuple[int, float]] = []
    hits: list[dict] = []
    skipped = 0
    for i in range(trials):
        x, y = gap_trial_pair(dim, m, n, seed, i, _TRACK_SAMPLE, tol)
        gap = quantum.max_commutator(x, y)
        if gap < incompat_margin:
            skipped += 1
            continue
        r2 = criterion2_check(fam, x, y, tol).max_residual
        if best is None or r2 < best["residual"]:
            best = {"index": i, "residual": r2, "incompatibility": gap}
            best_pair = (x, y)
            trajectory.append((i, r2))
        w = quantum.random_density(dim, (seed, _TRACK_STATE, i), tol)
        fs_i = criterion2_fixed_state(fam, x, y, w, tol, atol=state_atol)
        if fs_i.verdict:
            hits.append({
                "index": i,
                "residual": fs_i.max_residual,
                "incompatibility": gap,
            })

    return GapSearchResult(
        dim=dim, m=m, n=n, trials=trials, seed=seed,
        incompat_margin=incompat_margin, state_atol=state_atol,
        fixed_state_witness=witness, witness_pair=witness_pair,
        best=best, best_pair=best_pair,
        trajectory=tuple(trajectory), random_state_hits=tuple(hits),
        skipped_compatible=skipped,
    )


# ---------------------------------------------------------------------------
# randomized equivalence suite
# ---------------------------------------------------------------------------

def lattice_trial_pair(dim: int, m: int, n: int, seed: int, index: int,
                       tol: Tolerances = DEFAULT_TOL) -> tuple[Povm, Povm]:
    """Instance ``index`` of the lattice suite, rotating through four classes:
    compatible/unsharp, compatible/sharp-Y, generic/unsharp, generic/sharp-Y."""
    cls = index % 4
    parts = min(n, dim)
    if cls == 0:
        return quantum.random_commuting_povm_pair(dim, m, n, (seed, 21, index), tol)
    if cls == 1:
        return quantum.random_commuting_povm_sharp_pair(dim, m, parts, (seed, 21, index), tol)
    x = quantum.random_povm(dim, m, (seed, 21, index, 0), tol, "X")
    if cls == 2:
        y = quantum.random_povm(dim, n, (seed, 21, index, 1), tol, "Y")
    else:
        y = quantum.random_pvm(dim, parts, (seed, 21, index, 1), tol, "Y")
    return x, y


def verify_criteria_lattice(
    fam: PhaseFamily, dim: int, trials: int, seed: int,
    tol: Tolerances = DEFAULT_TOL,
    check_atol: float = VERDICT_ATOL, classify_atol: float = CLASSIFY_ATOL,
    state_atol: float = 1e-10, residual_tolerance: float = 1e-9,
    m: int = 2, n: int = 2,
) -> seqprod.SuiteReport:
    """Randomized suite for the criterion/compatibility equivalences.

    Counts verdict mismatches for the two iff-characterizations, failures
    of the forward implication for criterion (II) on compatible pairs, and
    failures of the always-true criterion (II) identity at the maximally
    mixed state.  Mismatch counts are reported as residuals with tolerance
    zero; the two operator-residual properties use ``residual_tolerance``
    and ``state_atol``.
    """
    if trials <= 0:
        return seqprod.SuiteReport("criteria_lattice", dim, seed, ())

    mixed = quantum.validate_density(matcore.identity(dim) / dim, tol)
    mismatch3 = 0
    mismatch1 = 0
    c2_failures = 0
    c2_compatible_trials = 0
    c2_residual = 0.0
    fs_failures = 0
    fs_residual = 0.0
    for i in range(trials):
        x, y = lattice_trial_pair(dim, m, n, seed, i, tol)
        compatible = quantum.povms_compatible(x, y, tol, atol=classify_atol)
        y_sharp = all(quantum.is_sharp(b, tol, atol=classify_atol) for b in y)
        if criterion3_check(fam, x, y, tol, atol=check_atol).verdict != compatible:
            mismatch3 += 1
        if criterion1_check(fam, x, y, tol, atol=check_atol).verdict != (compatible and y_sharp):
            mismatch1 += 1
        if compatible:
            c2_compatible_trials += 1
            c2 = criterion2_check(fam, x, y, tol, atol=check_atol)
            c2_residual = max(c2_residual, c2.max_residual)
            if not c2.verdict:
                c2_failures += 1
        fs = criterion2_fixed_state(fam, x, y, mixed, tol, atol=state_atol)
        fs_residual = max(fs_residual, fs.max_residual)
        if not fs.verdict:
            fs_failures += 1

    props = (
        seqprod.PropertyReport("criterion3_iff_compatible_mismatches",
                               trials, float(mismatch3), 0.0),
        seqprod.PropertyReport("criterion1_iff_oracle_mismatches",
                               trials, float(mismatch1), 0.0),
        seqprod.PropertyReport("compatible_implies_criterion2_failures",
                               c2_compatible_trials, float(c2_failures), 0.0),
        seqprod.PropertyReport("compatible_criterion2_max_residual",
                               c2_compatible_trials, c2_residual, residual_tolerance),
        seqprod.PropertyReport("mixed_state_criterion2_failures",
                               trials, float(fs_failures), 0.0),
        seqprod.PropertyReport("mixed_state_criterion2_max_residual",
                               trials, fs_residual, state_atol),
    )
    return seqprod.SuiteReport("criteria_lattice", dim, seed, props)


# ---------------------------------------------------------------------------
# combined report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CrossReport:
    """All three criteria on one pair, with the implication lattice among
    verdicts, compatibility and sharpness.

    Asserted implications (violations mean a numerical or logical bug):
    criterion (III) iff compatible; criterion (I) iff compatible with a
    sharp second measurement; compatible implies criterion (II).  The
    fixed-state report at the supplied state is recorded as data only.
    """

    criterion1: CriterionReport
    criterion2: CriterionReport
    criterion3: CriterionReport
    fixed_state: CriterionReport
    compatible: bool
    y_sharp: bool
    check_atol: float
    classify_atol: float
    implications: dict = field(default_factory=dict)

    @property
    def consistent(self) -> bool:
        return all(self.implications.values())

    def to_dict(self) -> dict:
        return {
            "compatible": self.compatible,
            "y_sharp": self.y_sharp,
            "check_atol": self.check_atol,
            "classify_atol": self.classify_atol,
            "criteria": {
                "I": self.criterion1.to_dict(),
                "II": self.criterion2.to_dict(),
                "III": self.criterion3.to_dict(),
                "II_at_state": self.fixed_state.to_dict(),
            },
            "implications": dict(self.implications),
            "consistent": self.consistent,
        }


def cross_validate(fam: PhaseFamily, x: Povm, y: Povm, w: DensityOperator,
                   tol: Tolerances = DEFAULT_TOL,
                   check_atol: float = VERDICT_ATOL,
                   classify_atol: float = CLASSIFY_ATOL) -> CrossReport:
    """Run all criteria on one pair and check the implication lattice."""
    c1 = criterion1_check(fam, x, y, tol, atol=check_atol)
    c2 = criterion2_check(fam, x, y, tol, atol=check_atol)
    c3 = criterion3_check(fam, x, y, tol, atol=check_atol)
    fs = criterion2_fixed_state(fam, x, y, w, tol, atol=check_atol)
    compatible = quantum.povms_compatible(x, y, tol, atol=classify_atol)
    y_sharp = all(quantum.is_sharp(b, tol, atol=classify_atol) for b in y)
    implications = {
        "criterion3_iff_compatible": c3.verdict == compatible,
        "criterion1_iff_compatible_and_y_sharp": c1.verdict == (compatible and y_sharp),
        "compatible_implies_criterion2": (not compatible) or c2.verdict,
    }
    return CrossReport(
        criterion1=c1, criterion2=c2, criterion3=c3, fixed_state=fs,
        compatible=compatible, y_sharp=y_sharp,
        check_atol=check_atol, classify_atol=classify_atol,
        implications=implications,
    )
