"""Benchmark the compiled Ryser kernel against the pure-Python fallback.

Run:  python3 benchmarks/bench_permanent.py
"""

import time

import numpy as np

from photonperm import numkernel
from photonperm._ryser_py import permanent_gray as py_kernel

try:
    from photonperm._ryser import permanent_gray as native_kernel
except ImportError:
    native_kernel = None


def time_kernel(kernel, a, repeats):
    best = float("inf")
    value = None
    for _ in range(repeats):
        start = time.perf_counter()
        value = kernel(a)
        best = min(best, time.perf_counter() - start)
    return best, value


def main():
    rng = np.random.default_rng(7)
    print(f"native kernel available: {native_kernel is not None}")
    print(f"{'n':>4} {'python':>12} {'native':>12} {'speedup':>9}")
    for n in (4, 8, 12, 16, 20):
        a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        repeats = 5 if n <= 16 else 2
        t_py, v_py = time_kernel(py_kernel, a, repeats)
        if native_kernel is None:
            print(f"{n:>4} {t_py * 1e3:>10.3f}ms {'-':>12} {'-':>9}")
            continue
        t_nat, v_nat = time_kernel(native_kernel, a, repeats)
        assert abs(v_py - v_nat) <= 1e-6 * max(1.0, abs(v_nat))
        print(
            f"{n:>4} {t_py * 1e3:>10.3f}ms {t_nat * 1e3:>10.3f}ms "
            f"{t_py / t_nat:>8.1f}x"
        )
    # sanity anchor: the 6-vertex complete graph
    k6 = np.ones((6, 6)) - np.eye(6)
    assert round(numkernel.permanent_exact(k6).real) == 265


if __name__ == "__main__":
    main()
