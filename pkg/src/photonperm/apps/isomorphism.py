"""Exhaustive permanent-based isomorphism certificate for tiny graphs.

Checks Per(A restricted to permuted index multisets) against Per(B restricted
to the originals) for every size l and every pair of non-decreasing index
multisets. Exponential in n, so hard-limited to n <= 4.
"""

from __future__ import annotations

import itertools

import numpy as np

from photonperm import numkernel

GI_SIZE_LIMIT = 4


def gi_exhaustive_check(a, b, perm) -> bool:
    """True iff every submatrix-permanent pair matches under ``perm``.

    ``perm`` maps indices of B to indices of A, i.e. the candidate relation
    is b[i, j] == a[perm[i], perm[j]].
    """
    mat_a = numkernel.as_square_matrix(a)
    mat_b = numkernel.as_square_matrix(b)
    n = mat_a.shape[0]
    if mat_b.shape[0] != n:
        raise ValueError("matrices must have equal size")
    if n > GI_SIZE_LIMIT:
        raise ValueError(f"exhaustive check limited to n <= {GI_SIZE_LIMIT}")
    if sorted(perm) != list(range(n)):
        raise ValueError("perm must be a permutation of 0..n-1")
    perm = list(perm)
    for size in range(1, n + 1):
        for rows in itertools.combinations_with_replacement(range(n), size):
            for cols in itertools.combinations_with_replacement(range(n), size):
                sub_b = mat_b[np.ix_(rows, cols)]
                sub_a = mat_a[np.ix_([perm[r] for r in rows], [perm[c] for c in cols])]
                per_b = numkernel.permanent_exact(sub_b)
                per_a = numkernel.permanent_exact(sub_a)
                if abs(per_a - per_b) > 1e-9 * max(1.0, abs(per_b)):
                    return False
    return True
