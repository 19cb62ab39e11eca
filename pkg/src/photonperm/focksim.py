"""Exact Fock-space output statistics, seeded sampling, and the permanent estimator.

The backend enumerates all C(m+n-1, n) outcome patterns, evaluates each
probability as |Per(U_submatrix)|^2 over the occupation factorials, and
samples by inverse CDF. Batches draw from counter-based Philox streams keyed
by (master seed, batch index), so merged counts are reproducible regardless
of how batches are scheduled.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from photonperm import numkernel
from photonperm.encoder import EncodedCircuit

ENUMERATION_BUDGET = 10**7
DEFAULT_BATCH_SIZE = 1_000_000
DEFAULT_SHOT_CAP = 10**8


def enumerate_outcomes(m: int, n: int) -> list[tuple[int, ...]]:
    """All occupation patterns of n photons in m modes, descending lexicographic."""
    if m < 1:
        raise ValueError(f"mode count must be >= 1, got {m}")
    if n < 0:
        raise ValueError(f"photon count must be >= 0, got {n}")
    count = math.comb(m + n - 1, n)
    if count > ENUMERATION_BUDGET:
        raise ValueError(
            f"enumeration of {count} patterns exceeds budget {ENUMERATION_BUDGET}"
        )
    patterns: list[tuple[int, ...]] = []

    def fill(prefix: tuple[int, ...], remaining: int, modes_left: int) -> None:
        if modes_left == 1:
            patterns.append(prefix + (remaining,))
            return
        for occ in range(remaining, -1, -1):
            fill(prefix + (occ,), remaining - occ, modes_left - 1)

    fill((), n, m)
    return patterns


def _unitary_of(circuit) -> np.ndarray:
    if isinstance(circuit, EncodedCircuit):
        return circuit.unitary
    return np.asarray(circuit, dtype=np.complex128)


def outcome_probability(circuit, input_pattern: Sequence[int],
                        outcome: Sequence[int]) -> float:
    """|Per(U_{n_in, n})|^2 over the occupation-factorial normalizer."""
    u = _unitary_of(circuit)
    sub = numkernel.submatrix(u, input_pattern, outcome)
    norm = numkernel.pattern_factorial_product(
        input_pattern
    ) * numkernel.pattern_factorial_product(outcome)
    return abs(numkernel.permanent_exact(sub)) ** 2 / norm


@dataclass(frozen=True)
class OutputDistribution:
    patterns: list[tuple[int, ...]]
    probabilities: np.ndarray
    input_pattern: tuple[int, ...]
    mode_count: int
    photon_count: int

    def probability_of(self, pattern: Sequence[int]) -> float:
        idx = self._index().get(tuple(pattern))
        return 0.0 if idx is None else float(self.probabilities[idx])

    def _index(self) -> dict[tuple[int, ...], int]:
        cached = getattr(self, "_index_cache", None)
        if cached is None:
            cached = {p: i for i, p in enumerate(self.patterns)}
            object.__setattr__(self, "_index_cache", cached)
        return cached

    def to_csv(self, path) -> None:
        """Rows of 'occupations joined by -', probability."""
        with open(path, "w") as fh:
            fh.write("pattern,probability\n")
            for pattern, prob in zip(self.patterns, self.probabilities):
                fh.write("-".join(map(str, pattern)) + f",{float(prob)!r}\n")


def full_distribution(circuit, input_pattern: Sequence[int]) -> OutputDistribution:
    """Exact distribution over every outcome pattern; must sum to 1."""
    u = _unitary_of(circuit)
    m = u.shape[0]
    pattern = tuple(input_pattern)
    if len(pattern) != m:
        raise ValueError(f"input pattern length {len(pattern)} != mode count {m}")
    n = sum(pattern)
    patterns = enumerate_outcomes(m, n)
    probs = np.array(
        [outcome_probability(u, pattern, out) for out in patterns]
    )
    return OutputDistribution(
        patterns=patterns,
        probabilities=probs,
        input_pattern=pattern,
        mode_count=m,
        photon_count=n,
    )


def _batch_rng(seed: int, batch_index: int) -> np.random.Generator:
    """Philox stream keyed by (master seed, batch index)."""
    return np.random.Generator(
        np.random.Philox(key=np.random.SeedSequence([seed, batch_index]).generate_state(2, np.uint64))
    )


def _sample_index_counts(
    probabilities: np.ndarray, n_samples: int, seed: int, batch_size: int
) -> np.ndarray:
    """Inverse-CDF draws, returned as per-outcome counts."""
    cdf = np.cumsum(probabilities)
    cdf[-1] = max(cdf[-1], 1.0)
    counts = np.zeros(len(probabilities), dtype=np.int64)
    drawn = 0
    batch_index = 0
    while drawn < n_samples:
        size = min(batch_size, n_samples - drawn)
        rng = _batch_rng(seed, batch_index)
        u = rng.random(size)
        idx = np.searchsorted(cdf, u, side="right")
        counts += np.bincount(idx, minlength=len(probabilities))
        drawn += size
        batch_index += 1
    return counts


def sample(
    circuit,
    input_pattern: Sequence[int],
    n_samples: int,
    seed: int,
    batch_size: int = DEFAULT_BATCH_SIZE,
) -> Counter:
    """N i.i.d. draws from the exact distribution; deterministic in (seed, N, batch_size)."""
    if n_samples < 1:
        raise ValueError("sample count must be positive")
    dist = full_distribution(circuit, input_pattern)
    counts = _sample_index_counts(dist.probabilities, n_samples, seed, batch_size)
    out: Counter = Counter()
    for pattern, count in zip(dist.patterns, counts):
        if count:
            out[pattern] = int(count)
    return out


def hoeffding_interval(
    p_hat: float, n_samples: int, confidence: float = 0.95
) -> tuple[float, float]:
    """Distribution-free band: half-width sqrt(ln(2/(1-confidence)) / (2N))."""
    if not 0.0 <= p_hat <= 1.0:
        raise ValueError(f"p_hat must be in [0, 1], got {p_hat}")
    if n_samples < 1:
        raise ValueError("sample count must be positive")
    if not 0.0 < confidence < 1.0:
        raise ValueError(f"confidence must be in (0, 1), got {confidence}")
    eps = math.sqrt(math.log(2.0 / (1.0 - confidence)) / (2.0 * n_samples))
    return max(0.0, p_hat - eps), min(1.0, p_hat + eps)


@dataclass(frozen=True)
class EstimationResult:
    total_samples: int
    postselected_count: int
    abs_permanent_estimate: float
    confidence_interval: tuple[float, float]
    confidence: float
    seed: int
    scale: float
    photon_count: int
    stopping_rule: str

    def to_json(self) -> str:
        doc = {
            "total_samples": self.total_samples,
            "postselected_count": self.postselected_count,
            "abs_permanent_estimate": self.abs_permanent_estimate,
            "confidence_interval": list(self.confidence_interval),
            "confidence": self.confidence,
            "seed": self.seed,
            "scale": self.scale,
            "photon_count": self.photon_count,
            "stopping_rule": self.stopping_rule,
        }
        return json.dumps(doc)


def _estimate_from_counts(
    n_post: int,
    total: int,
    scale: float,
    n: int,
    seed: int,
    confidence: float,
    stopping_rule: str,
) -> EstimationResult:
    p_hat = n_post / total
    boost = scale**n
    lo_p, hi_p = hoeffding_interval(p_hat, total, confidence)
    return EstimationResult(
        total_samples=total,
        postselected_count=n_post,
        abs_permanent_estimate=boost * math.sqrt(p_hat),
        confidence_interval=(boost * math.sqrt(lo_p), boost * math.sqrt(hi_p)),
        confidence=confidence,
        seed=seed,
        scale=scale,
        photon_count=n,
        stopping_rule=stopping_rule,
    )


def estimate_abs_permanent(
    a,
    samples: int | None = None,
    postselected: int | None = None,
    seed: int = 0,
    confidence: float = 0.95,
    batch_size: int = DEFAULT_BATCH_SIZE,
    shot_cap: int = DEFAULT_SHOT_CAP,
) -> EstimationResult:
    """Estimate |Per(A)| as scale^n * sqrt(n_post / N) from post-selected shots.

    Exactly one stopping rule applies: ``samples`` draws a fixed number of
    shots; ``postselected`` draws until that many post-selections land (capped
    at ``shot_cap`` shots). The confidence band on p is mapped through the
    monotone transform p -> scale^n sqrt(p).
    """
    if (samples is None) == (postselected is None):
        raise ValueError("specify exactly one of samples= or postselected=")
    from photonperm.encoder import encode

    circuit = encode(a)
    if circuit.photon_count > 7:
        raise ValueError(
            f"exact-enumeration estimator limited to n <= 7, got {circuit.photon_count}"
        )
    dist = full_distribution(circuit, circuit.input_pattern)
    target_idx = dist._index()[circuit.input_pattern]
    if samples is not None:
        counts = _sample_index_counts(dist.probabilities, samples, seed, batch_size)
        return _estimate_from_counts(
            int(counts[target_idx]), samples, circuit.scale,
            circuit.photon_count, seed, confidence, f"samples={samples}",
        )
    n_post = 0
    total = 0
    batch_index = 0
    cdf = np.cumsum(dist.probabilities)
    cdf[-1] = max(cdf[-1], 1.0)
    while n_post < postselected and total < shot_cap:
        size = min(batch_size, shot_cap - total)
        rng = _batch_rng(seed, batch_index)
        u = rng.random(size)
        idx = np.searchsorted(cdf, u, side="right")
        n_post += int(np.count_nonzero(idx == target_idx))
        total += size
        batch_index += 1
    return _estimate_from_counts(
        n_post, total, circuit.scale, circuit.photon_count, seed,
        confidence, f"postselected={postselected}",
    )


def counts_to_json(counts: Counter) -> str:
    return json.dumps(
        {"-".join(map(str, pattern)): count for pattern, count in sorted(counts.items())}
    )
