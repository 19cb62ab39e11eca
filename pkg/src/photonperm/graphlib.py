"""Graph model, generators, classical oracles, and the permanent upper bound.

Vertices are 0-indexed internally; all file formats and user-facing output
are 1-indexed.
"""

from __future__ import annotations

import heapq
import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

ISO_SIZE_LIMIT = 10
MATCHING_SIZE_LIMIT = 16
DENSEST_BUDGET = 20


def _normalize_edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices 0..n-1."""

    n: int
    edges: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) outside vertex range")
            if u > v:
                raise ValueError(f"edge ({u}, {v}) not normalized")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        return cls(n=n, edges=frozenset(_normalize_edge(u, v) for u, v in edges))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return _normalize_edge(u, v) in self.edges

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def neighbors(self, v: int) -> list[int]:
        out = []
        for a, b in self.edges:
            if a == v:
                out.append(b)
            elif b == v:
                out.append(a)
        return sorted(out)

    def induced_edge_count(self, subset: Sequence[int]) -> int:
        members = set(subset)
        return sum(1 for u, v in self.edges if u in members and v in members)


def adjacency(g: Graph) -> np.ndarray:
    out = np.zeros((g.n, g.n))
    for u, v in g.edges:
        out[u, v] = out[v, u] = 1.0
    return out


def laplacian(g: Graph) -> np.ndarray:
    adj = adjacency(g)
    return np.diag(adj.sum(axis=1)) - adj


def relabel(g: Graph, perm: Sequence[int]) -> Graph:
    """Graph whose adjacency is P A P^T for the permutation matrix of ``perm``.

    ``perm[i]`` names the original vertex placed at position i, i.e.
    adjacency(relabel(g, perm))[i, j] = adjacency(g)[perm[i], perm[j]].
    """
    if sorted(perm) != list(range(g.n)):
        raise ValueError("perm must be a permutation of 0..n-1")
    position = {v: i for i, v in enumerate(perm)}
    return Graph.from_edges(
        g.n, ((position[u], position[v]) for u, v in g.edges)
    )


def erdos_renyi(n: int, p: float, seed: int) -> Graph:
    """Each vertex pair is independently an edge with probability p."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"edge probability must be in [0, 1], got {p}")
    if n < 1:
        raise ValueError("need at least one vertex")
    rng = np.random.default_rng(seed)
    edges = [
        (u, v)
        for u in range(n)
        for v in range(u + 1, n)
        if rng.random() < p
    ]
    return Graph.from_edges(n, edges)


def random_tree(n: int, seed: int) -> Graph:
    """Uniform labeled tree via a random Prufer sequence."""
    if n < 2:
        raise ValueError("a tree needs at least two vertices")
    if n == 2:
        return Graph.from_edges(2, [(0, 1)])
    rng = np.random.default_rng(seed)
    prufer = rng.integers(0, n, size=n - 2)
    degree = [1] * n
    for v in prufer:
        degree[v] += 1
    edges = []
    leaves = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(leaves)
    for v in prufer:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, int(v)))
        degree[v] -= 1
        if degree[v] == 1:
            heapq.heappush(leaves, int(v))
    u = heapq.heappop(leaves)
    w = heapq.heappop(leaves)
    edges.append((u, w))
    return Graph.from_edges(n, edges)


def _refine_colors(adj: np.ndarray) -> tuple[int, ...]:
    """Iterated degree/neighborhood color refinement (1-WL)."""
    n = adj.shape[0]
    colors = tuple(int(adj[i].sum()) for i in range(n))
    while True:
        signatures = []
        for i in range(n):
            neigh = tuple(sorted(colors[j] for j in range(n) if adj[i, j]))
            signatures.append((colors[i], neigh))
        palette = {sig: c for c, sig in enumerate(sorted(set(signatures)))}
        refined = tuple(palette[sig] for sig in signatures)
        if len(set(refined)) == len(set(colors)):
            return refined
        colors = refined


def classical_isomorphic(
    g1: Graph, g2: Graph
) -> tuple[bool, tuple[int, ...] | None]:
    """Exact isomorphism test by color refinement plus backtracking.

    Returns (verdict, perm) where adjacency(g2)[i, j] ==
    adjacency(g1)[perm[i], perm[j]] when isomorphic.
    """
    if g1.n != g2.n:
        return False, None
    if g1.n > ISO_SIZE_LIMIT:
        raise ValueError(f"isomorphism search limited to n <= {ISO_SIZE_LIMIT}")
    if g1.edge_count != g2.edge_count:
        return False, None
    a = adjacency(g1)
    b = adjacency(g2)
    colors1 = _refine_colors(a)
    colors2 = _refine_colors(b)
    if sorted(colors1) != sorted(colors2):
        return False, None
    n = g1.n
    # map position i of g2 to a vertex of g1 with a compatible color
    candidates = [
        [v for v in range(n) if colors1[v] == colors2[i]] for i in range(n)
    ]
    order = sorted(range(n), key=lambda i: len(candidates[i]))
    assignment: list[int] = [-1] * n
    used = [False] * n

    def backtrack(depth: int) -> bool:
        if depth == n:
            return True
        i = order[depth]
        for v in candidates[i]:
            if used[v]:
                continue
            ok = True
            for d in range(depth):
                j = order[d]
                if b[i, j] != a[v, assignment[j]]:
                    ok = False
                    break
            if ok:
                assignment[i] = v
                used[v] = True
                if backtrack(depth + 1):
                    return True
                used[v] = False
                assignment[i] = -1
        return False

    if not backtrack(0):
        return False, None
    perm = tuple(assignment)
    check = a[np.ix_(perm, perm)]
    if not np.array_equal(check, b):
        raise AssertionError("backtracking produced an invalid mapping")
    return True, perm


def is_isospectral(g1: Graph, g2: Graph, tol: float = 1e-8) -> bool:
    """Equal adjacency eigenvalue multisets within tolerance."""
    if g1.n != g2.n:
        return False
    e1 = np.sort(np.linalg.eigvalsh(adjacency(g1)))
    e2 = np.sort(np.linalg.eigvalsh(adjacency(g2)))
    return bool(np.all(np.abs(e1 - e2) <= tol))


def densest_k_subgraph_bruteforce(
    g: Graph, k: int
) -> tuple[tuple[int, ...], int]:
    """Exhaustive k-subset search; ties broken lexicographically."""
    if k > g.n:
        raise ValueError(f"k={k} exceeds vertex count {g.n}")
    if g.n > DENSEST_BUDGET:
        raise ValueError(f"brute force limited to n <= {DENSEST_BUDGET}")
    best: tuple[int, ...] | None = None
    best_edges = -1
    for subset in itertools.combinations(range(g.n), k):
        count = g.induced_edge_count(subset)
        if count > best_edges:
            best, best_edges = subset, count
    assert best is not None
    return best, best_edges


def perm_upper_bound(n: int, edge_count: int) -> float:
    """Monotone edge-count bound on the adjacency permanent, even n and I only.

    Balanced-degree-sequence form: with d = 2I/n, alpha = 2I - n*floor(d)
    vertices take degree ceil(d) and the rest floor(d), and the bound is
    (floor(d)!)^((n-alpha)/floor(d)) * (ceil(d)!)^(alpha/ceil(d)).
    """
    if n < 2 or n % 2 or edge_count % 2:
        raise ValueError(
            f"bound is stated for even n >= 2 and even I, got n={n}, I={edge_count}"
        )
    if not 0 <= edge_count <= n * (n - 1) // 2:
        raise ValueError(f"edge count {edge_count} out of range for n={n}")
    if edge_count == 0:
        return 1.0
    floor_d = (2 * edge_count) // n
    ceil_d = -((-2 * edge_count) // n)
    alpha = 2 * edge_count - n * floor_d
    low = math.factorial(floor_d) ** ((n - alpha) / floor_d) if floor_d else 1.0
    high = math.factorial(ceil_d) ** (alpha / ceil_d) if alpha else 1.0
    return float(low * high)


def count_perfect_matchings_bruteforce(g: Graph) -> int:
    """Exact perfect-matching count by recursive edge inclusion."""
    if g.n % 2:
        return 0
    if g.n > MATCHING_SIZE_LIMIT:
        raise ValueError(f"matching count limited to n <= {MATCHING_SIZE_LIMIT}")
    adj = adjacency(g)

    def count(unmatched: frozenset[int]) -> int:
        if not unmatched:
            return 1
        v = min(unmatched)
        total = 0
        for w in unmatched:
            if w != v and adj[v, w]:
                total += count(unmatched - {v, w})
        return total

    return count(frozenset(range(g.n)))


def bipartition(g: Graph) -> tuple[list[int], list[int]] | None:
    """Two-coloring by BFS; None when an odd cycle exists."""
    color = [-1] * g.n
    for start in range(g.n):
        if color[start] != -1:
            continue
        color[start] = 0
        queue = [start]
        while queue:
            v = queue.pop()
            for w in g.neighbors(v):
                if color[w] == -1:
                    color[w] = 1 - color[v]
                    queue.append(w)
                elif color[w] == color[v]:
                    return None
    part0 = [v for v in range(g.n) if color[v] == 0]
    part1 = [v for v in range(g.n) if color[v] == 1]
    return part0, part1


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return True
    seen = {0}
    queue = [0]
    while queue:
        v = queue.pop()
        for w in g.neighbors(v):
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return len(seen) == g.n


def graph_to_json(g: Graph) -> str:
    """1-indexed {"n": int, "edges": [[u, v], ...]}."""
    edges = sorted([u + 1, v + 1] for u, v in g.edges)
    return json.dumps({"n": g.n, "edges": edges})


def graph_from_json(text: str) -> Graph:
    doc = json.loads(text)
    n = int(doc["n"])
    edges = []
    for u, v in doc["edges"]:
        if not (1 <= u <= n and 1 <= v <= n):
            raise ValueError(f"edge [{u}, {v}] outside 1..{n}")
        if u == v:
            raise ValueError(f"self loop at vertex {u}")
        edges.append((u - 1, v - 1))
    return Graph.from_edges(n, edges)


def graph_from_adjacency_csv(text: str) -> Graph:
    rows = [
        [int(cell) for cell in line.split(",")]
        for line in text.strip().splitlines()
        if line.strip()
    ]
    mat = np.array(rows)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"adjacency CSV must be square, got {mat.shape}")
    if not np.all((mat == 0) | (mat == 1)):
        raise ValueError("adjacency entries must be 0 or 1")
    if not np.array_equal(mat, mat.T):
        raise ValueError("adjacency matrix must be symmetric")
    if np.any(np.diag(mat) != 0):
        raise ValueError("self loops are not allowed")
    n = mat.shape[0]
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if mat[u, v]]
    return Graph.from_edges(n, edges)


def graph_from_adjacency(mat: np.ndarray) -> Graph:
    arr = np.asarray(mat)
    if not np.array_equal(arr, arr.T) or np.any(np.diag(arr) != 0):
        raise ValueError("adjacency must be symmetric with zero diagonal")
    n = arr.shape[0]
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if arr[u, v]]
    return Graph.from_edges(n, edges)
