"""Compare the compiled simplex kernel against the pure numpy fallback.

Usage: python benchmarks/bench_simplex.py [--repeat N]

Times LP relaxations and full branch-and-bound solves of the bundled
two-plant network at growing horizons, plus a batch of small random MILPs
(the branch-and-bound workload shape). Run after `pip install -e .` so the
extension is built; the script degrades gracefully when it is not.
"""

from __future__ import annotations

import argparse
import statistics
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

import numpy as np

import rechain.milp.simplex as simplex_mod
import rechain.milp._simplex_py as lane_py
from rechain.formulation import build
from rechain.milp import SolveOptions, solve, solve_lp
from fixtures import dual_site

try:
    import rechain.milp._simplex_cy as lane_cy
except ImportError:
    lane_cy = None


def timed(fn, repeat):
    samples = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - t0)
    return min(samples), statistics.median(samples)


def with_kernel(kernel):
    simplex_mod._kernel = kernel


def random_milp(rng):
    from rechain.milp import MilpInstance

    n_cont, n_bin, m = 24, 8, 14
    a = np.round(rng.normal(size=(m, n_cont + n_bin)) * 3, 1)
    a[rng.random(size=a.shape) < 0.4] = 0.0
    inst = MilpInstance()
    for j in range(n_cont):
        inst.add_column(f"x{j}", 0.0, float(rng.integers(2, 10)), float(np.round(rng.normal() * 2, 1)))
    for j in range(n_bin):
        inst.add_column(f"b{j}", 0, 1, float(np.round(rng.normal() * 4, 1)), binary=True)
    x0 = rng.random(n_cont + n_bin)
    senses = rng.choice(["<=", ">="], size=m, p=[0.7, 0.3])
    b = a @ x0
    for i in range(m):
        coefs = [(j, a[i, j]) for j in range(n_cont + n_bin) if a[i, j] != 0.0]
        inst.add_row(f"r{i}", coefs, senses[i], float(np.round(b[i], 2)))
    return inst


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    lanes = [("pure", lane_py)]
    if lane_cy is not None:
        lanes.append(("compiled", lane_cy))
    else:
        print("note: compiled kernel not built; showing the pure lane only")

    print(f"{'case':<28} " + " ".join(f"{name + ' (s)':>14}" for name, _ in lanes) + "   speedup")
    rows = []

    for periods in (10, 20, 30):
        instance, _ = build(dual_site(periods=periods))
        rows.append((f"network LP relaxation H={periods}",
                     lambda inst=instance: solve_lp(inst)))
        rows.append((f"network MILP solve   H={periods}",
                     lambda inst=instance: solve(inst, SolveOptions(mip_gap=0.0))))

    def milp_batch():
        rng = np.random.default_rng(2024)
        for _ in range(20):
            solve(random_milp(rng), SolveOptions(mip_gap=0.0))

    rows.append(("20 random MILPs (8 binaries)", milp_batch))

    for label, fn in rows:
        times = []
        for _name, kernel in lanes:
            with_kernel(kernel)
            best, _median = timed(fn, args.repeat)
            times.append(best)
        speedup = times[0] / times[-1] if len(times) > 1 and times[-1] > 0 else 1.0
        print(f"{label:<28} " + " ".join(f"{t:>14.4f}" for t in times)
              + (f"   {speedup:>6.1f}x" if len(times) > 1 else ""))

    with_kernel(lane_cy if lane_cy is not None else lane_py)


if __name__ == "__main__":
    main()
