"""Pre-processing scans that raise the post-selection probability.

Method 1 multiplies one row by w (permanent scales linearly, the largest
singular value does not, so the probability ratio R(w) can exceed 1).
Method 2 adds epsilon on the diagonal of a non-negative matrix, which can
push the post-selection probability toward 1 at the price of a worse
sample-cost scaling when decoding the original permanent.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from photonperm import focksim, numkernel


@dataclass(frozen=True)
class BoostScanResult:
    grid: np.ndarray
    probabilities: np.ndarray
    ratios: np.ndarray | None  # None when Per(A) = 0
    sigma_max: np.ndarray
    crossing: float | None  # grid crossing of R = 1 (method 1) or cost parity (method 2)
    diagnostics: dict
    permanent: float


def _real_square(a) -> np.ndarray:
    mat = numkernel.as_square_matrix(a)
    if np.abs(mat.imag).max() > 0:
        raise ValueError("boosting scans expect a real matrix")
    return mat.real


def _down_crossing(grid: np.ndarray, ratios: np.ndarray) -> float | None:
    """Largest grid point with R > 1, refined by linear interpolation."""
    above = np.where(ratios > 1.0)[0]
    if len(above) == 0:
        return None
    last = above[-1]
    if last + 1 >= len(grid):
        return float(grid[last])
    r0, r1 = ratios[last], ratios[last + 1]
    frac = (r0 - 1.0) / (r0 - r1)
    return float(grid[last] + frac * (grid[last + 1] - grid[last]))


def boost_row_scan(a, row: int, w_grid) -> BoostScanResult:
    """Scan the row-scaling boost A -> A_w over a grid of w values.

    Per w the exact probability p_w = |w Per(A)|^2 / sigma_max(A_w)^{2n}
    and the ratio R = p_w / p_1 are reported, along with the necessary
    boosting condition sigma_max(A)/sigma_max(A_w) > w^{-1/n} and the
    cheap diagnostics (gamma, delta, trace AA^T, inf-norm) that predict it.
    """
    mat = _real_square(a)
    n = mat.shape[0]
    if not 0 <= row < n:
        raise ValueError(f"row {row} out of range for n={n}")
    grid = np.asarray(w_grid, dtype=float)
    if np.any(grid <= 0):
        raise ValueError("w values must be positive")
    per = float(numkernel.permanent_exact(mat).real)
    sigma0 = numkernel.spectral_norm(mat)
    gamma = float(np.abs(mat[row]).sum())
    delta = float((mat[row] ** 2).sum())
    trace_sq = float(np.trace(mat @ mat.T))
    inf_norm = numkernel.inf_norm(mat)

    sigmas = np.empty(len(grid))
    probs = np.empty(len(grid))
    necessary = np.empty(len(grid), dtype=bool)
    condi1 = np.empty(len(grid), dtype=bool)
    condi2_ratio = np.empty(len(grid))
    for i, w in enumerate(grid):
        scaled = mat.copy()
        scaled[row] *= w
        sigma_w = numkernel.spectral_norm(scaled)
        sigmas[i] = sigma_w
        probs[i] = (w * per) ** 2 / sigma_w ** (2 * n)
        necessary[i] = sigma0 / sigma_w > w ** (-1.0 / n)
        condi1[i] = w * gamma < inf_norm
        condi2_ratio[i] = (w**2 - 1.0) * delta / trace_sq if trace_sq else np.inf

    if per == 0.0:
        ratios = None
        crossing = None
    else:
        baseline = per**2 / sigma0 ** (2 * n)
        ratios = probs / baseline
        crossing = _down_crossing(grid, ratios)
    diagnostics = {
        "gamma": gamma,
        "delta": delta,
        "trace_aat": trace_sq,
        "inf_norm": inf_norm,
        "sigma_max_base": sigma0,
        "necessary_condition": necessary,
        "condi1": condi1,
        "condi2_ratio": condi2_ratio,
    }
    return BoostScanResult(
        grid=grid,
        probabilities=probs,
        ratios=ratios,
        sigma_max=sigmas,
        crossing=crossing,
        diagnostics=diagnostics,
        permanent=per,
    )


def boost_epsilon(a, eps_grid) -> BoostScanResult:
    """Scan the diagonal-shift boost A -> A + eps I for non-negative A.

    Reports p_eps = Per(A + eps I)^2 / sigma_max^{2n}, the ratio against
    eps = 0, the sample-cost proxy sigma_max^{4n}, and the first grid eps
    whose cost exceeds the unmodified matrix's.
    """
    mat = _real_square(a)
    if mat.size and mat.min() < 0:
        raise ValueError("diagonal-shift boosting requires non-negative entries")
    n = mat.shape[0]
    grid = np.asarray(eps_grid, dtype=float)
    if np.any(grid < 0):
        raise ValueError("eps values must be non-negative")
    per_base = float(numkernel.permanent_exact(mat).real)
    sigma0 = numkernel.spectral_norm(mat)
    base_prob = per_base**2 / sigma0 ** (2 * n) if sigma0 > 0 else 0.0
    base_cost = sigma0 ** (4 * n)

    sigmas = np.empty(len(grid))
    probs = np.empty(len(grid))
    permanents = np.empty(len(grid))
    costs = np.empty(len(grid))
    for i, eps in enumerate(grid):
        shifted = mat + eps * np.eye(n)
        per_eps = float(numkernel.permanent_exact(shifted).real)
        if per_eps < per_base - 1e-9 * max(1.0, abs(per_base)):
            raise AssertionError(
                f"permanent decreased at eps={eps}: {per_eps} < {per_base}"
            )
        sigma = numkernel.spectral_norm(shifted)
        sigmas[i] = sigma
        permanents[i] = per_eps
        probs[i] = per_eps**2 / sigma ** (2 * n)
        costs[i] = sigma ** (4 * n)

    over = np.where(costs > base_cost)[0]
    crossing = float(grid[over[0]]) if len(over) else None
    ratios = probs / base_prob if base_prob > 0 else None
    diagnostics = {
        "sigma_max_base": sigma0,
        "cost_base": base_cost,
        "costs": costs,
        "permanents": permanents,
    }
    return BoostScanResult(
        grid=grid,
        probabilities=probs,
        ratios=ratios,
        sigma_max=sigmas,
        crossing=crossing,
        diagnostics=diagnostics,
        permanent=per_base,
    )


def recover_permanent_from_epsilon(
    a,
    eps_points=None,
    backend: str = "exact",
    samples: int | None = None,
    seed: int = 0,
) -> float:
    """Recover Per(A) as the constant term of Per(A + eps I) over n+1 shifts.

    Non-negative A makes every Per(A + eps I) non-negative, so the sampled
    backend's |Per| estimates feed the Vandermonde system directly.
    """
    mat = _real_square(a)
    if mat.size and mat.min() < 0:
        raise ValueError("recovery requires non-negative entries")
    n = mat.shape[0]
    rng = np.random.default_rng(seed)
    auto = eps_points is None
    points = (
        rng.uniform(0.0, 2.0, size=n + 1)
        if auto
        else np.asarray(eps_points, dtype=float)
    )
    for _ in range(2 if auto else 1):
        if len(points) != n + 1 or len(set(points.tolist())) != n + 1:
            raise ValueError(f"need {n + 1} distinct eps values")
        if np.any(points < 0):
            raise ValueError("eps values must be non-negative")
        values = []
        for i, eps in enumerate(points):
            shifted = mat + eps * np.eye(n)
            if backend == "exact":
                values.append(float(numkernel.permanent_exact(shifted).real))
            elif backend == "sampled":
                if samples is None:
                    raise ValueError("sampled backend needs samples=")
                result = focksim.estimate_abs_permanent(
                    shifted, samples=samples, seed=seed * 7919 + i
                )
                values.append(result.abs_permanent_estimate)
            else:
                raise ValueError(f"unknown backend {backend!r}")
        vand = np.vander(points, increasing=True)
        if np.linalg.cond(vand) <= 1e12:
            coeffs = np.linalg.solve(vand, np.asarray(values))
            return float(coeffs[0])
        points = rng.uniform(0.0, 2.0, size=n + 1)
    raise np.linalg.LinAlgError("eps points remained ill conditioned")
