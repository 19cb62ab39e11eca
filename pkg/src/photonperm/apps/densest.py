"""Hybrid densest-subgraph completion by sampling a stacked block encoding.

Candidates are all k-subsets containing the classically identified anchor
vertices. Each candidate occupies one block of the matrix K; post-selecting
on its output pattern measures a probability proportional to the squared
permanent of the induced adjacency, so denser candidates surface more often.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from photonperm import encoder, focksim, graphlib

MODE_BUDGET = 2000


@dataclass(frozen=True)
class SubgraphRanking:
    candidates: list[tuple[int, ...]]
    probabilities: list[float]
    counts: list[int] | None
    order: list[int]  # candidate indices, best first
    backend: str
    samples: int | None
    seed: int | None

    @property
    def top_candidate(self) -> tuple[int, ...]:
        return self.candidates[self.order[0]]


def dense_subgraph_complete(
    g: graphlib.Graph,
    k: int,
    anchors,
    backend: str = "exact",
    samples: int | None = None,
    seed: int = 0,
) -> SubgraphRanking:
    """Rank all anchor-containing k-subsets by post-selection probability.

    Exact mode evaluates each output probability directly; sampled mode draws
    from the full distribution of the encoded block matrix and counts
    post-selections. Ties break lexicographically on the sorted vertex tuple.
    """
    anchors = tuple(sorted(anchors))
    if len(set(anchors)) != len(anchors):
        raise ValueError("anchors contain duplicates")
    if any(v < 0 or v >= g.n for v in anchors):
        raise ValueError("anchor vertex out of range")
    if len(anchors) >= k:
        raise ValueError(f"need |anchors| < k, got {len(anchors)} >= {k}")
    rest = [v for v in range(g.n) if v not in anchors]
    candidates = [
        tuple(sorted(anchors + extra))
        for extra in itertools.combinations(rest, k - len(anchors))
    ]
    big_j = len(candidates)
    modes = 2 * k * big_j
    if modes > MODE_BUDGET:
        raise ValueError(
            f"candidate count J={big_j} needs {modes} modes, over budget {MODE_BUDGET}"
        )
    adj = graphlib.adjacency(g)
    block, input_pattern, outputs = encoder.build_subgraph_block(adj, candidates)
    circuit = encoder.encode(block)
    if backend == "exact":
        probs = [
            focksim.outcome_probability(circuit, input_pattern, out)
            for out in outputs
        ]
        counts = None
        key = lambda j: (-probs[j], candidates[j])
    elif backend == "sampled":
        if samples is None:
            raise ValueError("sampled backend needs samples=")
        drawn = focksim.sample(circuit, input_pattern, samples, seed)
        counts = [drawn.get(out, 0) for out in outputs]
        probs = [c / samples for c in counts]
        key = lambda j: (-counts[j], candidates[j])
    else:
        raise ValueError(f"unknown backend {backend!r}")
    order = sorted(range(big_j), key=key)
    return SubgraphRanking(
        candidates=candidates,
        probabilities=probs,
        counts=counts,
        order=order,
        backend=backend,
        samples=samples,
        seed=seed if backend == "sampled" else None,
    )
