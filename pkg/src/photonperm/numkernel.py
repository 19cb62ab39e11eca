"""Dense complex linear algebra and exact permanent kernels.

All operations are pure functions on value inputs; nothing here holds
mutable state, so everything is safe to call concurrently.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

try:
    from photonperm._ryser import permanent_gray as _permanent_gray

    HAVE_NATIVE_KERNEL = True
except ImportError:
    from photonperm._ryser_py import permanent_gray as _permanent_gray

    HAVE_NATIVE_KERNEL = False

HERMITIAN_TOL = 1e-10
PSD_CLAMP = 1e-10
RYSER_LIMIT = 30
NAIVE_LIMIT = 8


def as_square_matrix(a) -> np.ndarray:
    """Validate and return a square complex matrix with finite entries."""
    mat = np.asarray(a, dtype=np.complex128)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {mat.shape}")
    if not np.all(np.isfinite(mat)):
        raise ValueError("matrix entries must be finite")
    return mat


@dataclass(frozen=True)
class SvdResult:
    """Factorization A = W @ diag(singular_values) @ V^dagger."""

    w: np.ndarray
    singular_values: np.ndarray
    v: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.w * self.singular_values) @ self.v.conj().T


def svd(a) -> SvdResult:
    mat = as_square_matrix(a)
    try:
        w, sigma, vh = np.linalg.svd(mat)
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(f"SVD did not converge: {exc}") from exc
    return SvdResult(w=w, singular_values=sigma, v=vh.conj().T)


def spectral_norm(a) -> float:
    """Largest singular value of a square matrix."""
    mat = as_square_matrix(a)
    if mat.shape[0] == 0:
        return 0.0
    return float(np.linalg.svd(mat, compute_uv=False)[0])


def inf_norm(a) -> float:
    """Maximum absolute row sum."""
    mat = as_square_matrix(a)
    if mat.shape[0] == 0:
        return 0.0
    return float(np.abs(mat).sum(axis=1).max())


def psd_sqrt(m) -> np.ndarray:
    """Unique PSD square root of a Hermitian PSD matrix.

    Eigenvalues in [-PSD_CLAMP, 0) are clamped to zero before rooting;
    anything below -PSD_CLAMP is rejected.
    """
    mat = as_square_matrix(m)
    herm_defect = np.abs(mat - mat.conj().T).max() if mat.size else 0.0
    if herm_defect > HERMITIAN_TOL:
        raise ValueError(
            f"matrix is not Hermitian (max asymmetry {herm_defect:.3e})"
        )
    eigvals, eigvecs = np.linalg.eigh(mat)
    if eigvals.size and eigvals.min() < -PSD_CLAMP:
        raise ValueError(
            f"matrix is not PSD (min eigenvalue {eigvals.min():.3e})"
        )
    clamped = np.clip(eigvals, 0.0, None)
    return (eigvecs * np.sqrt(clamped)) @ eigvecs.conj().T


def permanent_exact(a) -> complex:
    """Permanent via Gray-code Ryser, O(2^n * n). Limit n <= 30."""
    mat = as_square_matrix(a)
    if mat.shape[0] > RYSER_LIMIT:
        raise ValueError(
            f"matrix order {mat.shape[0]} exceeds the Ryser limit of {RYSER_LIMIT}"
        )
    return _permanent_gray(mat)


def permanent_naive(a) -> complex:
    """Direct n! permutation expansion; test oracle only, n <= 8."""
    mat = as_square_matrix(a)
    n = mat.shape[0]
    if n > NAIVE_LIMIT:
        raise ValueError(f"naive permanent limited to n <= {NAIVE_LIMIT}, got {n}")
    if n == 0:
        return 1.0 + 0.0j
    total = 0.0 + 0.0j
    for perm in itertools.permutations(range(n)):
        prod = 1.0 + 0.0j
        for i, j in enumerate(perm):
            prod *= mat[i, j]
        total += prod
    return total


def submatrix(
    u, input_pattern: Sequence[int], outcome_pattern: Sequence[int]
) -> np.ndarray:
    """The n x n submatrix whose permanent drives the transition amplitude.

    Column i of ``u`` is taken input_pattern[i] times and row j is taken
    outcome_pattern[j] times, both in ascending mode order.
    """
    mat = np.asarray(u, dtype=np.complex128)
    m = mat.shape[0]
    if mat.ndim != 2 or mat.shape[1] != m:
        raise ValueError("unitary must be square")
    if len(input_pattern) != m or len(outcome_pattern) != m:
        raise ValueError(
            f"pattern length must equal mode count {m}, got "
            f"{len(input_pattern)} and {len(outcome_pattern)}"
        )
    if any(x < 0 for x in input_pattern) or any(x < 0 for x in outcome_pattern):
        raise ValueError("occupation numbers must be non-negative")
    n_in = sum(input_pattern)
    n_out = sum(outcome_pattern)
    if n_in != n_out:
        raise ValueError(f"photon totals differ: {n_in} != {n_out}")
    cols = [i for i, reps in enumerate(input_pattern) for _ in range(reps)]
    rows = [j for j, reps in enumerate(outcome_pattern) for _ in range(reps)]
    return mat[np.ix_(rows, cols)]


def pattern_factorial_product(pattern: Sequence[int]) -> float:
    """Product of occupation-number factorials (the probability normalizer)."""
    out = 1.0
    for occ in pattern:
        out *= math.factorial(occ)
    return out
