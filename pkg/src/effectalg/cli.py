"""Command-line surface and JSON persistence.

Subcommands: ``gen`` (instance generation), ``check`` (criteria on a POVM
pair), ``verify`` (randomized law suites), ``simulate`` (Monte Carlo
two-step sampling), ``search`` (criterion-II gap evidence).

All structured output is JSON on stdout; diagnostics go to stderr.  Exit
codes: 0 success, 1 property/assertion failure, 2 invalid input, 3 I/O
failure (writing results).

Instance files carry matrices as row-major lists of ``[re, im]`` pairs so
round-trips are bit-exact for finite doubles and fixtures stay diffable.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from . import criteria, matcore, quantum, seqprod
from .matcore import Tolerances
from .quantum import DensityOperator, EffectOperator, Povm
from .seqprod import PhaseFamily

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INVALID_INPUT = 2
EXIT_IO_FAILURE = 3

INSTANCE_VERSION = 1


# ---------------------------------------------------------------------------
# matrix / instance-file codec
# ---------------------------------------------------------------------------

def encode_matrix(m: np.ndarray) -> list:
    """Row-major nested lists with explicit [re, im] entries."""
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def decode_matrix(data) -> np.ndarray:
    arr = np.asarray(data, dtype=np.float64)
    if arr.ndim != 3 or arr.shape[0] != arr.shape[1] or arr.shape[2] != 2:
        raise ValueError("matrix encoding must be a d x d grid of [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def instance_document(dim: int, effects: dict | None = None,
                      states: dict | None = None,
                      povms: dict | None = None) -> dict:
    doc: dict = {"version": INSTANCE_VERSION, "dim": int(dim)}
    if effects:
        doc["effects"] = {name: encode_matrix(e.matrix) for name, e in effects.items()}
    if states:
        doc["states"] = {name: encode_matrix(s.matrix) for name, s in states.items()}
    if povms:
        doc["povms"] = {
            name: [encode_matrix(e.matrix) for e in p] for name, p in povms.items()
        }
    return doc


@dataclass(frozen=True)
class InstanceSet:
    """Decoded, validated contents of one instance file."""

    dim: int
    effects: dict[str, EffectOperator]
    states: dict[str, DensityOperator]
    povms: dict[str, Povm]


def parse_instance_document(doc: dict, tol: Tolerances) -> InstanceSet:
    if not isinstance(doc, dict):
        raise ValueError("instance file must contain a JSON object")
    if doc.get("version") != INSTANCE_VERSION:
        raise ValueError(f"unsupported instance file version {doc.get('version')!r}")
    dim = doc.get("dim")
    if not isinstance(dim, int) or dim < 1:
        raise ValueError("instance file needs a positive integer 'dim'")
    effects = {
        name: quantum.validate_effect(decode_matrix(m), tol)
        for name, m in doc.get("effects", {}).items()
    }
    states = {
        name: quantum.validate_density(decode_matrix(m), tol)
        for name, m in doc.get("states", {}).items()
    }
    povms = {
        name: quantum.validate_povm([decode_matrix(m) for m in mats], tol, name)
        for name, mats in doc.get("povms", {}).items()
    }
    for group in (effects, states, povms):
        for name, obj in group.items():
            if obj.dim != dim:
                raise ValueError(f"entry {name!r} has dimension {obj.dim}, file says {dim}")
    return InstanceSet(dim=dim, effects=effects, states=states, povms=povms)


def load_instances(path: str, tol: Tolerances) -> InstanceSet:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ValueError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path} is not valid JSON: {exc}") from exc
    return parse_instance_document(doc, tol)


def _select_povm(instances: InstanceSet, path: str, preferred: str,
                 name: str | None) -> Povm:
    if name is not None:
        if name not in instances.povms:
            raise ValueError(f"{path} has no POVM named {name!r}")
        return instances.povms[name]
    if preferred in instances.povms:
        return instances.povms[preferred]
    if len(instances.povms) == 1:
        return next(iter(instances.povms.values()))
    raise ValueError(
        f"{path} holds POVMs {sorted(instances.povms)}; pick one with --x-name/--y-name"
    )


def _select_state(instances: InstanceSet, path: str) -> DensityOperator:
    if len(instances.states) == 1:
        return next(iter(instances.states.values()))
    if "W" in instances.states:
        return instances.states["W"]
    raise ValueError(f"{path} must hold exactly one state (or one named 'W')")


# ---------------------------------------------------------------------------
# run configuration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RunConfig:
    c: float = 0.0
    xi0_arg: float = 0.0
    seed: int = 0
    trials: int = 1000
    dim: int = 2
    tol: Tolerances = matcore.DEFAULT_TOL

    @property
    def fam(self) -> PhaseFamily:
        return PhaseFamily.from_phase(self.c, self.xi0_arg)

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        tol = Tolerances(
            eig_cluster=getattr(args, "tol_eig_cluster", None) or matcore.DEFAULT_TOL.eig_cluster,
            mat_eq=getattr(args, "tol_mat_eq", None) or matcore.DEFAULT_TOL.mat_eq,
            psd_slack=getattr(args, "tol_psd_slack", None) or matcore.DEFAULT_TOL.psd_slack,
        )
        return cls(
            c=getattr(args, "c", 0.0),
            xi0_arg=getattr(args, "xi0_arg", 0.0),
            seed=getattr(args, "seed", 0),
            trials=getattr(args, "trials", 1000),
            dim=getattr(args, "dim", 2),
            tol=tol,
        )

    def header(self) -> dict:
        return {
            "c": self.c,
            "xi0_arg": self.xi0_arg,
            "seed": self.seed,
            "trials": self.trials,
            "dim": self.dim,
            "tolerances": {
                "eig_cluster": self.tol.eig_cluster,
                "mat_eq": self.tol.mat_eq,
                "psd_slack": self.tol.psd_slack,
            },
        }


# ---------------------------------------------------------------------------
# output plumbing
# ---------------------------------------------------------------------------

def _render(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _emit(doc: dict, out: str | None, quiet_when_file: bool = False) -> int:
    text = _render(doc)
    if out:
        try:
            with open(out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"error: cannot write {out}: {exc}", file=sys.stderr)
            return EXIT_IO_FAILURE
        if quiet_when_file:
            return EXIT_OK
    sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_gen(args: argparse.Namespace) -> int:
    cfg = RunConfig.from_args(args)
    dim, seed, tol = cfg.dim, cfg.seed, cfg.tol
    kind = args.kind
    try:
        if kind == "effect":
            doc = instance_document(dim, effects={"A": quantum.random_effect(dim, seed, tol)})
        elif kind == "density":
            doc = instance_document(dim, states={"W": quantum.random_density(dim, seed, tol)})
        elif kind == "povm":
            doc = instance_document(dim, povms={"X": quantum.random_povm(dim, args.m, seed, tol)})
        elif kind == "pvm":
            doc = instance_document(dim, povms={"X": quantum.random_pvm(dim, args.parts, seed, tol)})
        elif kind == "commuting-pair":
            x, y = quantum.random_commuting_povm_pair(dim, args.m, args.n, seed, tol)
            doc = instance_document(dim, povms={"X": x, "Y": y})
        else:  # pragma: no cover - argparse restricts choices
            raise ValueError(f"unknown kind {kind!r}")
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    return _emit(doc, args.out, quiet_when_file=True)


def cmd_check(args: argparse.Namespace) -> int:
    cfg = RunConfig.from_args(args)
    try:
        xs = load_instances(args.x, cfg.tol)
        ys = load_instances(args.y, cfg.tol)
        x = _select_povm(xs, args.x, "X", args.x_name)
        y = _select_povm(ys, args.y, "Y", args.y_name)
        if x.dim != y.dim:
            raise ValueError(f"dimension mismatch: X is {x.dim}, Y is {y.dim}")
        if args.state:
            w = _select_state(load_instances(args.state, cfg.tol), args.state)
            if w.dim != x.dim:
                raise ValueError(f"state dimension {w.dim} does not match POVMs ({x.dim})")
            state_label = args.state
        else:
            w = quantum.validate_density(matcore.identity(x.dim) / x.dim, cfg.tol)
            state_label = "maximally_mixed"
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_INPUT

    report = criteria.cross_validate(cfg.fam, x, y, w, cfg.tol)
    doc = {
        "header": {"x": args.x, "y": args.y, "state": state_label, "config": cfg.header()},
        **report.to_dict(),
    }
    rc = _emit(doc, args.out)
    if rc != EXIT_OK:
        return rc
    return EXIT_OK if report.consistent else EXIT_FAILURE


def cmd_verify(args: argparse.Namespace) -> int:
    cfg = RunConfig.from_args(args)
    fam = cfg.fam
    suites = [
        seqprod.verify_axioms(fam, cfg.dim, cfg.trials, cfg.seed, cfg.tol),
        seqprod.verify_functional_calculus(fam, cfg.dim, cfg.trials, cfg.seed, cfg.tol),
        criteria.verify_criteria_lattice(fam, cfg.dim, cfg.trials, cfg.seed, cfg.tol),
    ]
    passed = all(s.passed for s in suites)
    doc = {
        "header": {"config": cfg.header()},
        "suites": [s.to_dict() for s in suites],
        "passed": passed,
    }
    rc = _emit(doc, args.out)
    if rc != EXIT_OK:
        return rc
    return EXIT_OK if passed else EXIT_FAILURE


def _z_scores(table: seqprod.MeasurementOutcomeTable) -> np.ndarray:
    p = table.exact
    total = table.total
    spread = total * p * (1.0 - p)
    expected = total * p
    z = np.zeros_like(p)
    live = spread > 0.0
    z[live] = (table.counts[live] - expected[live]) / np.sqrt(spread[live])
    degenerate = ~live
    z[degenerate] = np.where(
        np.abs(table.counts[degenerate] - expected[degenerate]) <= 0.5, 0.0, np.inf
    )
    return z


def cmd_simulate(args: argparse.Namespace) -> int:
    cfg = RunConfig.from_args(args)
    try:
        xs = load_instances(args.x, cfg.tol)
        ys = load_instances(args.y, cfg.tol)
        ws = load_instances(args.state, cfg.tol)
        x = _select_povm(xs, args.x, "X", args.x_name)
        y = _select_povm(ys, args.y, "Y", args.y_name)
        w = _select_state(ws, args.state)
        if not (x.dim == y.dim == w.dim):
            raise ValueError("X, Y and the state must share one dimension")
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_INPUT

    table = seqprod.sample_sequential(cfg.fam, w, x, y, cfg.trials, cfg.seed)
    z = _z_scores(table)
    max_abs_z = float(np.max(np.abs(z))) if z.size else 0.0
    statistically_sound = bool(max_abs_z <= 5.0)
    doc = {
        "header": {"x": args.x, "y": args.y, "state": args.state, "config": cfg.header()},
        "total": table.total,
        "counts": table.counts.tolist(),
        "exact": table.exact.tolist(),
        "z_scores": z.tolist(),
        "max_abs_z": max_abs_z,
        "statistically_sound": statistically_sound,
    }
    rc = _emit(doc, args.out)
    if rc != EXIT_OK:
        return rc
    return EXIT_OK if statistically_sound else EXIT_FAILURE


def cmd_search(args: argparse.Namespace) -> int:
    cfg = RunConfig.from_args(args)
    result = criteria.search_criterion2_gap(
        cfg.fam, cfg.dim, cfg.trials, cfg.seed, m=args.m, n=args.n, tol=cfg.tol,
    )
    doc = {
        "header": {"config": cfg.header()},
        **result.to_dict(matrix_encoder=encode_matrix),
    }
    return _emit(doc, args.out)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser, trials_default: int = 1000) -> None:
    p.add_argument("--dim", type=int, default=2, help="Hilbert space dimension")
    p.add_argument("--seed", type=int, default=0, help="64-bit seed for all randomness")
    p.add_argument("--trials", type=int, default=trials_default, help="number of randomized trials")
    p.add_argument("--c", type=float, default=0.0, help="phase exponent of the profile family")
    p.add_argument("--xi0-arg", dest="xi0_arg", type=float, default=0.0,
                   help="phase angle (radians) of the unimodular prefactor")
    p.add_argument("--tol-mat-eq", dest="tol_mat_eq", type=float, default=None,
                   help="override the matrix-equality tolerance")
    p.add_argument("--tol-eig-cluster", dest="tol_eig_cluster", type=float, default=None,
                   help="override the eigenvalue clustering tolerance")
    p.add_argument("--tol-psd-slack", dest="tol_psd_slack", type=float, default=None,
                   help="override the PSD slack tolerance")
    p.add_argument("--out", default=None, help="also write the JSON output to this path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="effectalg",
        description="Sequential products and non-disturbance criteria on the standard effect algebra.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a validated random instance file")
    p.add_argument("kind", choices=["effect", "density", "povm", "pvm", "commuting-pair"])
    p.add_argument("--m", type=int, default=2, help="outcomes of the first POVM")
    p.add_argument("--n", type=int, default=2, help="outcomes of the second POVM")
    p.add_argument("--parts", type=int, default=2, help="projectors in a sharp POVM")
    _add_common(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("check", help="run the non-disturbance criteria on a POVM pair")
    p.add_argument("x", help="instance file holding the first POVM")
    p.add_argument("y", help="instance file holding the second POVM")
    p.add_argument("--state", default=None, help="instance file holding the probe state "
                                                 "(default: maximally mixed)")
    p.add_argument("--x-name", dest="x_name", default=None)
    p.add_argument("--y-name", dest="y_name", default=None)
    _add_common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("verify", help="run the randomized law suites")
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="Monte Carlo two-step measurement sampling")
    p.add_argument("x", help="instance file holding the first POVM")
    p.add_argument("y", help="instance file holding the second POVM")
    p.add_argument("state", help="instance file holding the state")
    p.add_argument("--x-name", dest="x_name", default=None)
    p.add_argument("--y-name", dest="y_name", default=None)
    _add_common(p, trials_default=100000)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("search", help="gather evidence on the criterion-II converse gap")
    p.add_argument("--m", type=int, default=2, help="outcomes of the first POVM")
    p.add_argument("--n", type=int, default=2, help="outcomes of the second POVM")
    _add_common(p)
    p.set_defaults(func=cmd_search)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
