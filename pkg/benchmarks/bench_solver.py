"""Benchmark the transport solver with and without the numba-compiled kernel.

The package compiles its network-simplex hot loop with numba when available;
setting OTBOUNDS_DISABLE_NUMBA=1 before import switches to the pure-Python
fallback.  This script runs the same workload in both modes (the fallback in a
subprocess so the flag is honored at import time) and prints a side-by-side
timing table.

Usage: python benchmarks/bench_solver.py [--sizes 50,100,200] [--repeats 3]
"""

import argparse
import json
import os
import subprocess
import sys
import time

SIZES_DEFAULT = "50,100,200,400"


def run_workload(sizes, repeats):
    import numpy as np

    from otbounds import DiscreteMeasure, NormKind, exact_transport_cost
    from otbounds._accel import NUMBA_ENABLED

    rng = np.random.default_rng(0)
    results = {}
    for size in sizes:
        mu = DiscreteMeasure.from_arrays(
            rng.normal(size=(size, 3)), rng.dirichlet(np.ones(size))
        )
        nu = DiscreteMeasure.from_arrays(
            rng.normal(size=(size, 3)), rng.dirichlet(np.ones(size))
        )
        # warm-up solve so jit compilation is not billed to the timing
        exact_transport_cost(mu, nu, 2.0, NormKind.EUCLIDEAN)
        best = float("inf")
        cost = None
        for _ in range(repeats):
            t0 = time.perf_counter()
            cost, _ = exact_transport_cost(mu, nu, 2.0, NormKind.EUCLIDEAN)
            best = min(best, time.perf_counter() - t0)
        results[str(size)] = {"seconds": best, "cost": cost}
    return {"numba": NUMBA_ENABLED, "results": results}


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default=SIZES_DEFAULT)
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument(
        "--emit-json", action="store_true",
        help="run only the current mode and print machine-readable results",
    )
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    here = run_workload(sizes, args.repeats)
    if args.emit_json:
        print(json.dumps(here))
        return

    env = dict(os.environ, OTBOUNDS_DISABLE_NUMBA="1" if here["numba"] else "")
    child = subprocess.run(
        [sys.executable, os.path.abspath(__file__), "--sizes", args.sizes,
         "--repeats", str(args.repeats), "--emit-json"],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    other = json.loads(child.stdout)
    jit, pure = (here, other) if here["numba"] else (other, here)

    print(f"{'size':>6}  {'numba (s)':>10}  {'pure (s)':>10}  {'speedup':>8}")
    for size in sizes:
        a = jit["results"][str(size)]
        b = pure["results"][str(size)]
        assert abs(a["cost"] - b["cost"]) <= 1e-9 * (1 + abs(a["cost"])), (
            "modes disagree on the optimal cost"
        )
        print(
            f"{size:>6}  {a['seconds']:>10.4f}  {b['seconds']:>10.4f}  "
            f"{b['seconds'] / a['seconds']:>7.1f}x"
        )


if __name__ == "__main__":
    main()
