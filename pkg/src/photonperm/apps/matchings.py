"""Perfect-matching counts of balanced bipartite graphs via sqrt(Per(A))."""

from __future__ import annotations

import math

import numpy as np

from photonperm import focksim, graphlib, numkernel


def perfect_matchings(
    g: graphlib.Graph,
    backend: str = "exact",
    samples: int | None = None,
    seed: int = 0,
) -> float:
    """Number of perfect matchings of a balanced bipartite graph.

    Vertices are reordered so the adjacency takes the form
    [[0, C], [C^T, 0]]; the matching count is then sqrt(Per(A)).
    """
    parts = graphlib.bipartition(g)
    if parts is None:
        raise ValueError("graph is not bipartite")
    part0, part1 = parts
    if len(part0) != len(part1):
        raise ValueError(
            f"bipartition is unbalanced: {len(part0)} vs {len(part1)} vertices"
        )
    order = part0 + part1
    adj = graphlib.adjacency(g)[np.ix_(order, order)]
    if backend == "exact":
        value = numkernel.permanent_exact(adj).real
        return math.sqrt(max(value, 0.0))
    if backend == "sampled":
        if samples is None:
            raise ValueError("sampled backend needs samples=")
        result = focksim.estimate_abs_permanent(adj, samples=samples, seed=seed)
        return math.sqrt(result.abs_permanent_estimate)
    raise ValueError(f"unknown backend {backend!r}")
