"""Permanental polynomials and the polynomial-based isomorphism distinguisher.

The polynomial Per(x I - M) is recovered from n+1 evaluation points by
solving the Vandermonde system. Points are drawn from [-2, -0.1]; at
negative x the adjacency-mode permanent satisfies
Per(x I - A) = (-1)^n Per(-x I + A) with the second factor non-negative,
which fixes the sign when only |Per| is measurable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from photonperm import focksim, graphlib, numkernel

POINT_RANGE = (-2.0, -0.1)
CONDITION_LIMIT = 1e12
VANDERMONDE_RESIDUAL_TOL = 1e-6


@dataclass(frozen=True)
class PolynomialResult:
    coefficients: np.ndarray  # c_0 .. c_n
    points: np.ndarray
    values: np.ndarray
    mode: str
    backend: str
    samples: int | None
    seed: int | None

    def evaluate(self, x: float) -> float:
        return float(np.polyval(self.coefficients[::-1], x))


def _draw_points(n: int, rng: np.random.Generator) -> np.ndarray:
    lo, hi = POINT_RANGE
    return rng.uniform(lo, hi, size=n + 1)


def _matrix_for(g: graphlib.Graph, mode: str) -> np.ndarray:
    if mode == "adjacency":
        return graphlib.adjacency(g)
    if mode == "laplacian":
        return graphlib.laplacian(g)
    raise ValueError(f"unknown mode {mode!r}")


def _poly_value(
    mat: np.ndarray,
    x: float,
    mode: str,
    backend: str,
    samples: int | None,
    seed: int | None,
    point_index: int,
) -> float:
    n = mat.shape[0]
    shifted = x * np.eye(n) - mat
    if backend == "exact":
        return float(numkernel.permanent_exact(shifted).real)
    if backend == "sampled":
        if samples is None:
            raise ValueError("sampled backend needs samples=")
        result = focksim.estimate_abs_permanent(
            shifted, samples=samples, seed=(seed or 0) * 7919 + point_index
        )
        magnitude = result.abs_permanent_estimate
        if mode == "adjacency":
            # sign rule at x <= 0: Per(xI - A) = (-1)^n * |Per(xI - A)|
            return float((-1) ** n * magnitude)
        # Laplacian sign is not determined by measurement; report |Per|
        return float(magnitude)
    raise ValueError(f"unknown backend {backend!r}")


def _solve_vandermonde(points: np.ndarray, values: np.ndarray) -> np.ndarray:
    vand = np.vander(points, increasing=True)
    if np.linalg.cond(vand) > CONDITION_LIMIT:
        raise np.linalg.LinAlgError("Vandermonde system is near singular")
    return np.linalg.solve(vand, values)


def permanental_polynomial(
    g: graphlib.Graph,
    mode: str = "adjacency",
    backend: str = "exact",
    points: np.ndarray | None = None,
    samples: int | None = None,
    seed: int | None = None,
) -> PolynomialResult:
    """Coefficients c_0..c_n of Per(x I - M) from n+1 evaluation points.

    A near-singular point set (condition above 1e12) is redrawn once before
    failing.
    """
    mat = _matrix_for(g, mode)
    n = g.n
    rng = np.random.default_rng(seed)
    attempts = 2 if points is None else 1
    chosen = np.asarray(points, dtype=float) if points is not None else _draw_points(n, rng)
    last_error: Exception | None = None
    for _ in range(attempts):
        if len(set(chosen.tolist())) != n + 1:
            raise ValueError(f"need {n + 1} distinct evaluation points")
        values = np.array(
            [
                _poly_value(mat, x, mode, backend, samples, seed, i)
                for i, x in enumerate(chosen)
            ]
        )
        try:
            coeffs = _solve_vandermonde(chosen, values)
        except np.linalg.LinAlgError as exc:
            last_error = exc
            chosen = _draw_points(n, rng)
            continue
        return PolynomialResult(
            coefficients=coeffs,
            points=chosen,
            values=values,
            mode=mode,
            backend=backend,
            samples=samples,
            seed=seed,
        )
    raise np.linalg.LinAlgError(f"evaluation points remained ill conditioned: {last_error}")


DISTINGUISHED = "DISTINGUISHED"
UNDISTINGUISHED = "UNDISTINGUISHED"


@dataclass(frozen=True)
class DistinguishResult:
    verdict: str
    isospectral: bool
    trial_points: np.ndarray
    values_a: np.ndarray
    values_b: np.ndarray
    mode: str
    backend: str


def poly_distinguish(
    g1: graphlib.Graph,
    g2: graphlib.Graph,
    mode: str = "laplacian",
    backend: str = "exact",
    trials: int = 5,
    samples: int | None = None,
    seed: int | None = None,
) -> DistinguishResult:
    """Compare permanental-polynomial values of two graphs at random points.

    DISTINGUISHED is sound in exact mode: permutation-related graphs always
    agree. In sampled mode absolute values are compared against the combined
    confidence band, so only DISTINGUISHED verdicts carry weight.
    """
    if g1.n != g2.n:
        raise ValueError("graphs must have equal vertex counts")
    if trials < 1:
        raise ValueError("need at least one trial point")
    rng = np.random.default_rng(seed)
    points = rng.uniform(POINT_RANGE[0], POINT_RANGE[1], size=trials)
    iso_spectral = graphlib.is_isospectral(g1, g2)
    mat1 = _matrix_for(g1, mode)
    mat2 = _matrix_for(g2, mode)
    vals1 = []
    vals2 = []
    differs = False
    for i, x in enumerate(points):
        if backend == "exact":
            v1 = float(numkernel.permanent_exact(x * np.eye(g1.n) - mat1).real)
            v2 = float(numkernel.permanent_exact(x * np.eye(g2.n) - mat2).real)
            scale = max(abs(v1), abs(v2), 1.0)
            if abs(v1 - v2) > 1e-8 * scale:
                differs = True
        elif backend == "sampled":
            if samples is None:
                raise ValueError("sampled backend needs samples=")
            r1 = focksim.estimate_abs_permanent(
                x * np.eye(g1.n) - mat1, samples=samples, seed=(seed or 0) * 7919 + i
            )
            r2 = focksim.estimate_abs_permanent(
                x * np.eye(g2.n) - mat2, samples=samples, seed=(seed or 0) * 7919 + i
            )
            v1 = r1.abs_permanent_estimate
            v2 = r2.abs_permanent_estimate
            band = (r1.confidence_interval[1] - r1.confidence_interval[0]) + (
                r2.confidence_interval[1] - r2.confidence_interval[0]
            )
            if abs(v1 - v2) > band:
                differs = True
        else:
            raise ValueError(f"unknown backend {backend!r}")
        vals1.append(v1)
        vals2.append(v2)
    return DistinguishResult(
        verdict=DISTINGUISHED if differs else UNDISTINGUISHED,
        isospectral=iso_spectral,
        trial_points=points,
        values_a=np.array(vals1),
        values_b=np.array(vals2),
        mode=mode,
        backend=backend,
    )
