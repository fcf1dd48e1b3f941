"""Time the extended-value agreement sweep compiled and interpreted.

    python3 benchmarks/bench_kernels.py [--points 3] [--pairs N]

The interpreted run happens in a child process with FINSPLIT_DISABLE_NUMBA=1,
since the choice of backend is fixed at import time.
"""

import argparse
import itertools
import json
import os
import subprocess
import sys
import time


def sweep(points: int, pairs: int | None) -> dict:
    from finsplit import _kernels
    from finsplit.suite import enumerate_topologies, sweep_pair

    spaces = list(enumerate_topologies(points))
    todo = list(itertools.product(spaces, repeat=2))[:pairs]
    if _kernels.ACCELERATED:
        sweep_pair(spaces[0], spaces[0])  # compile outside the timed region
    start = time.perf_counter()
    checks = mismatches = 0
    for X, Y in todo:
        c, m, *_ = sweep_pair(X, Y)
        checks += c
        mismatches += m
    return {
        "backend": "numba" if _kernels.ACCELERATED else "python",
        "pairs": len(todo),
        "checks": checks,
        "mismatches": mismatches,
        "seconds": round(time.perf_counter() - start, 3),
    }


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=3)
    ap.add_argument("--pairs", type=int, default=None, help="limit the number of space pairs")
    ap.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    a = ap.parse_args()
    if a.child:
        print(json.dumps(sweep(a.points, a.pairs)))
        return
    fast = sweep(a.points, a.pairs)
    env = dict(os.environ, FINSPLIT_DISABLE_NUMBA="1")
    cmd = [sys.executable, __file__, "--child", "--points", str(a.points)]
    if a.pairs is not None:
        cmd += ["--pairs", str(a.pairs)]
    slow = json.loads(subprocess.run(cmd, env=env, check=True, capture_output=True, text=True).stdout)
    for row in (fast, slow):
        print(f"{row['backend']:>6}: {row['pairs']} pairs, {row['checks']} checks, "
              f"{row['mismatches']} mismatches, {row['seconds']} s")
    if slow["seconds"] and fast["seconds"]:
        print(f"speedup: {slow['seconds'] / fast['seconds']:.1f}x")


if __name__ == "__main__":
    main()
