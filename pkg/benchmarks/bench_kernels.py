"""Compare the compiled and pure-Python trajectory kernels.

    python3 benchmarks/bench_kernels.py [--steps 12000] [--repeat 3]

Prints the best-of-N wall time of each backend per workload, the speedup and
the largest elementwise difference between the two outputs.
"""
import argparse
import time

import numpy as np

from swapcm import kernels
from swapcm.models import HALF_PI
from swapcm.qcore import named_density, tensor

PLUS = named_density("plus").matrix
ZERO = named_density("zero").matrix
PAIR = tensor(named_density("plus"), named_density("L")).matrix


def workloads(steps):
    g_se, g_ee = 0.05 * HALF_PI, 0.93 * HALF_PI
    return {
        "markovian pswap": lambda: kernels.single_trajectory(PLUS, ZERO, True, g_se, True, 0.0, steps,
                                                             kernels.MARKOVIAN),
        "product carryover pswap-cswap": lambda: kernels.single_trajectory(PLUS, ZERO, True, g_se, False, g_ee,
                                                                           steps, kernels.PRODUCT_CARRYOVER),
        "joint carryover pswap-pswap": lambda: kernels.single_trajectory(PLUS, ZERO, True, g_se, True, g_ee,
                                                                         steps, kernels.JOINT_CARRYOVER),
        "sync pswap-pswap": lambda: kernels.sync_trajectory(PAIR, ZERO, True, True, 0.03 * HALF_PI, 0.04, 0.04,
                                                            steps),
    }


def best_time(fn, repeat):
    best, out = np.inf, None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--steps", type=int, default=12000)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    if "compiled" not in kernels.BACKENDS:
        print("compiled extension not built; only the python backend is available")
    print(f"{'workload':<32}{'python s':>11}{'compiled s':>12}{'speedup':>9}{'max |diff|':>12}")
    for name, fn in workloads(args.steps).items():
        with kernels.use("python"):
            t_py, out_py = best_time(fn, args.repeat)
        if "compiled" in kernels.BACKENDS:
            with kernels.use("compiled"):
                t_c, out_c = best_time(fn, args.repeat)
            diff = float(np.max(np.abs(out_py - out_c)))
            print(f"{name:<32}{t_py:>11.4f}{t_c:>12.4f}{t_py / t_c:>9.1f}{diff:>12.2e}")
        else:
            print(f"{name:<32}{t_py:>11.4f}{'-':>12}{'-':>9}{'-':>12}")


if __name__ == "__main__":
    main()
