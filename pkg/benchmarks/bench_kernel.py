"""Compare the compiled and pure-Python return-map kernels.

    python benchmarks/bench_kernel.py [--grid 40] [--repeat 3] [--tol 1e-12]

Both kernels integrate the quadratic fixture over the same c grid; the
script reports the best wall time per backend, the speed-up, and the
largest disagreement between the two (rounding level).
"""

import argparse
import math
import time

from lienard_melnikov import fixtures
from lienard_melnikov.numeric import _kernel_py
from lienard_melnikov.numeric.harness import _vector_field

try:
    from lienard_melnikov.numeric import _kernel
except ImportError:
    _kernel = None


def sweep(kernel, F, G, cs, tol):
    return [kernel.revolve(F, G, math.sqrt(2 * c), tol, tol / 100, 10**7, 100.0, 0.01)[0] for c in cs]


def best_of(repeat, fn):
    times, out = [], None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grid", type=int, default=40)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--tol", type=float, default=1e-12)
    ap.add_argument("--eps", type=float, default=0.01)
    args = ap.parse_args()

    F, G = _vector_field(fixtures.QUADRATIC.spec, args.eps)
    cs = [0.5 + 2.5 * k / (args.grid - 1) for k in range(args.grid)]
    t_py, x_py = best_of(args.repeat, lambda: sweep(_kernel_py, F, G, cs, args.tol))
    print(f"python  {t_py * 1e3:9.2f} ms  ({args.grid} revolutions, tol {args.tol:g})")
    if _kernel is None:
        print("cython  not built (pip install -e . --no-build-isolation)")
        return
    t_cy, x_cy = best_of(args.repeat, lambda: sweep(_kernel, F, G, cs, args.tol))
    diff = max(abs(a - b) for a, b in zip(x_py, x_cy))
    print(f"cython  {t_cy * 1e3:9.2f} ms")
    print(f"speed-up {t_py / t_cy:6.1f}x   max |x1_py - x1_cy| = {diff:.3g}")


if __name__ == "__main__":
    main()
