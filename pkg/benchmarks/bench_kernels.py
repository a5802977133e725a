"""Compare the numba and numpy kernel backends on representative workloads.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Both backends are imported directly, so the OWID_DISABLE_NUMBA flag does not
matter here. The first numba call (compilation) is timed separately.
"""

import argparse
import time

import numpy as np

from owid.kernels import _numba, _numpy
from owid.optimize import hemisphere_grid, octant_grid
from owid.states import XStateParams, x_state_matrix


def _timeit(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _random_hermitian(rng, n):
    a = rng.normal(size=(n, 4, 4)) + 1j * rng.normal(size=(n, 4, 4))
    return 0.5 * (a + np.conj(np.swapaxes(a, 1, 2)))


def workloads(rng):
    mats = _random_hermitian(rng, 20000)
    rho = x_state_matrix(XStateParams(0.3, 0.3, -0.4, 0.56))
    dirs = hemisphere_grid(90, 180)
    n = 2000
    s = rng.uniform(-0.3, 0.3, n)
    c = rng.uniform(-0.3, 0.3, (n, 3))
    grid = octant_grid(90, 180)
    return {
        "eigvalsh_batch (20000 4x4)": lambda m: m.eigvalsh_batch(mats),
        f"measured_entropies ({len(dirs)} dirs)": lambda m: m.measured_entropies(rho, dirs),
        f"reduced_grid_min ({n} states x {len(grid)} dirs)": lambda m: m.reduced_grid_min(s, c, grid),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(args.seed)

    print(f"{'workload':48s} {'numpy [s]':>10s} {'numba [s]':>10s} {'compile [s]':>12s} {'speedup':>8s}")
    for name, run in workloads(rng).items():
        t0 = time.perf_counter()
        run(_numba)
        first = time.perf_counter() - t0
        t_nb = _timeit(lambda: run(_numba), args.repeat)
        t_np = _timeit(lambda: run(_numpy), args.repeat)
        print(f"{name:48s} {t_np:10.4f} {t_nb:10.4f} {first - t_nb:12.3f} {t_np / t_nb:8.1f}")


if __name__ == "__main__":
    main()
