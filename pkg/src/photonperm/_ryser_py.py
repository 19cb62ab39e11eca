"""Pure-Python Gray-code Ryser kernel.

Import-time fallback used when the compiled extension is unavailable.
Same contract and O(2^n * n) structure as the Cython version, just slower;
see benchmarks/bench_permanent.py for the gap.
"""

import numpy as np


def permanent_gray(a) -> complex:
    """Permanent of a square complex matrix via Ryser's formula."""
    mat = np.ascontiguousarray(a, dtype=np.complex128)
    n = mat.shape[0]
    if mat.shape[1] != n:
        raise ValueError("permanent requires a square matrix")
    if n == 0:
        return 1.0 + 0.0j
    if n > 30:
        raise ValueError(f"matrix order {n} exceeds the Ryser limit of 30")

    cols = [mat[:, j].tolist() for j in range(n)]
    row = [0j] * n
    total = 0j
    prev_gray = 0
    setbits = 0
    for k in range(1, 1 << n):
        gray = k ^ (k >> 1)
        diff = gray ^ prev_gray
        j = diff.bit_length() - 1
        col = cols[j]
        if gray & diff:
            setbits += 1
            for i in range(n):
                row[i] += col[i]
        else:
            setbits -= 1
            for i in range(n):
                row[i] -= col[i]
        prod = 1.0 + 0j
        for v in row:
            prod *= v
        # term sign is (-1)^(n - |S|)
        if (n - setbits) & 1:
            total -= prod
        else:
            total += prod
        prev_gray = gray
    return total
