"""Compare the compiled and pure-Python double description kernels.

Run with ``python benchmarks/bench_kernel.py``.  Each workload calls both
kernels on the same cone, checks that they return the same generators and
prints the best wall time of a few repetitions.
"""
from __future__ import annotations

import argparse
import itertools
import math
import random
import time

from splitrank import _ddkernel_py

try:
    from splitrank import _ddkernel
except ImportError:
    _ddkernel = None


def tangent_cone(dim, reach, limit):
    """Homogenized tangent planes of a sphere: many rows, many extreme rays."""
    normals = [v for v in itertools.product(range(-reach, reach + 1), repeat=dim) if any(v)]
    normals = normals[:limit]
    rows = [[math.isqrt(400 * sum(x * x for x in v))] + [-x for x in v] for v in normals]
    rows.append([1] + [0] * dim)
    return dim + 1, [], rows


def random_cone(rng, dim, nrows):
    rows = [[rng.randint(20, 40)] + [rng.randint(-9, 9) for _ in range(dim)] for _ in range(nrows)]
    rows.append([1] + [0] * dim)
    return dim + 1, [], rows


def best_time(fn, args, repeat):
    best = math.inf
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - start)
    return best, out


def normalized(result):
    lin, gens = result
    return sorted(map(tuple, lin)), sorted(map(tuple, gens))


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)

    rng = random.Random(1)
    workloads = {
        "sphere 3-D, 600 rows": tangent_cone(3, 6, 600),
        "sphere 4-D, 300 rows": tangent_cone(4, 3, 300),
        "random 3-D, 200 rows": random_cone(rng, 3, 200),
        "random 4-D, 100 rows": random_cone(rng, 4, 100),
    }
    if _ddkernel is None:
        print("compiled kernel not built; timing the pure-Python kernel only")
    print(f"{'workload':<24}{'python (s)':>12}{'compiled (s)':>14}{'speedup':>10}{'rays':>7}")
    for name, cone in workloads.items():
        t_py, out_py = best_time(_ddkernel_py.dd_cone, cone, args.repeat)
        if _ddkernel is None:
            print(f"{name:<24}{t_py:>12.3f}{'-':>14}{'-':>10}{len(out_py[1]):>7}")
            continue
        t_c, out_c = best_time(_ddkernel.dd_cone, cone, args.repeat)
        if normalized(out_py) != normalized(out_c):
            raise SystemExit(f"kernels disagree on {name}")
        print(f"{name:<24}{t_py:>12.3f}{t_c:>14.3f}{t_py / t_c:>9.1f}x{len(out_py[1]):>7}")


if __name__ == "__main__":
    main()
