#!/usr/bin/env python3
"""Compare the compiled kernels against the numpy fallback.

Kernel micro-benchmarks import both backend modules side by side; the
composite workloads (where the kernels sit behind the package API) are
timed in subprocesses with ``EFFECTALG_BACKEND`` forced, since the backend
is fixed at import time.

Usage:  python benchmarks/bench_backends.py [--dim 4] [--repeats 20000]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import timeit

import numpy as np


def _random_inputs(dim: int):
    rng = np.random.default_rng(12345)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    h = 0.5 * (g + g.conj().T)
    b = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    f = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return h, b, f


def bench_kernels(dim: int, repeats: int) -> None:
    from effectalg import _kernels_py as kpy

    try:
        from effectalg import _kernels_cy as kcy
    except ImportError:
        print("compiled kernels not built; run pip install -e . first", file=sys.stderr)
        raise SystemExit(1)

    h, b, f = _random_inputs(dim)
    vals, projs = kpy.eigh_clustered(h, 1e-10)
    coeffs = np.sqrt(np.abs(vals)).astype(complex)

    cases = [
        ("eigh_clustered", lambda k: k.eigh_clustered(h, 1e-10)),
        ("assemble", lambda k: k.assemble(coeffs, projs)),
        ("sandwich", lambda k: k.sandwich(f, b)),
        ("frob_dist", lambda k: k.frob_dist(h, b)),
        ("commutator_frob", lambda k: k.commutator_frob(h, b)),
        ("trace_dot", lambda k: k.trace_dot(h, b)),
    ]
    print(f"\nkernel micro-benchmarks  (dim={dim}, {repeats} calls each)")
    print(f"  {'op':<18}{'python':>12}{'cython':>12}{'speedup':>10}")
    for name, call in cases:
        tp = timeit.timeit(lambda: call(kpy), number=repeats) / repeats * 1e6
        tc = timeit.timeit(lambda: call(kcy), number=repeats) / repeats * 1e6
        print(f"  {name:<18}{tp:>10.2f}us{tc:>10.2f}us{tp / tc:>9.1f}x")


def run_composites(dim: int) -> dict[str, float]:
    """Timed package-level workloads; executed with one backend active."""
    import effectalg as ea
    from effectalg.criteria import criterion3_check, search_absorption_counterexample

    results: dict[str, float] = {}

    rng = np.random.default_rng(999)
    mats = []
    for _ in range(2000):
        g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        h = 0.5 * (g + g.conj().T)
        w = np.linalg.eigvalsh(h)
        mats.append((h - w[0] * np.eye(dim)) / (w[-1] - w[0]))
    t0 = timeit.default_timer()
    for m in mats:
        ea.validate_effect(m)
    results["validate_effect x2000"] = timeit.default_timer() - t0

    pairs = [ea.criteria.lattice_trial_pair(dim, 2, 2, 31337, i) for i in range(500)]
    fam = ea.PhaseFamily.from_phase(0.7, 0.6283)
    t0 = timeit.default_timer()
    for x, y in pairs:
        criterion3_check(fam, x, y)
    results["criterion3_check x500"] = timeit.default_timer() - t0

    t0 = timeit.default_timer()
    ea.verify_axioms(fam, dim, trials=300, seed=2)
    results["verify_axioms x300"] = timeit.default_timer() - t0

    t0 = timeit.default_timer()
    search_absorption_counterexample(dim, attempts=3000, seed=3)
    results["absorption_search x3000"] = timeit.default_timer() - t0

    return results


def bench_composites(dim: int) -> None:
    rows: dict[str, dict[str, float]] = {}
    for backend in ("python", "cython"):
        env = dict(os.environ, EFFECTALG_BACKEND=backend)
        proc = subprocess.run(
            [sys.executable, os.path.abspath(__file__), "--composite-json",
             "--dim", str(dim)],
            capture_output=True, text=True, env=env,
        )
        if proc.returncode != 0:
            print(f"{backend} composite run failed:\n{proc.stderr}", file=sys.stderr)
            raise SystemExit(1)
        rows[backend] = json.loads(proc.stdout)

    print(f"\ncomposite workloads  (dim={dim}, backend forced per process)")
    print(f"  {'workload':<26}{'python':>12}{'cython':>12}{'speedup':>10}")
    for name in rows["python"]:
        tp, tc = rows["python"][name], rows["cython"][name]
        print(f"  {name:<26}{tp:>11.3f}s{tc:>11.3f}s{tp / tc:>9.1f}x")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dim", type=int, default=4)
    parser.add_argument("--repeats", type=int, default=20000)
    parser.add_argument("--composite-json", action="store_true",
                        help=argparse.SUPPRESS)  # internal: emit timings as JSON
    args = parser.parse_args()

    if args.composite_json:
        json.dump(run_composites(args.dim), sys.stdout)
        return

    import effectalg
    print(f"active backend for this process: {effectalg.BACKEND}")
    bench_kernels(args.dim, args.repeats)
    bench_composites(args.dim)


if __name__ == "__main__":
    main()
