import json

import numpy as np
import pytest

from photonperm import graphlib, numkernel


def complete_graph(n):
    return graphlib.Graph.from_edges(
        n, [(u, v) for u in range(n) for v in range(u + 1, n)]
    )


PATH3 = graphlib.Graph.from_edges(3, [(0, 1), (1, 2)])
K3 = complete_graph(3)
C4 = graphlib.Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
# classic cospectral non-isomorphic pair: C4 plus an isolated vertex vs the
# 4-leaf star
C4_PLUS_K1 = graphlib.Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (0, 3)])
STAR5 = graphlib.Graph.from_edges(5, [(0, 1), (0, 2), (0, 3), (0, 4)])


class TestGraphModel:
    def test_validation(self):
        with pytest.raises(ValueError, match="self loop"):
            graphlib.Graph.from_edges(3, [(1, 1)])
        with pytest.raises(ValueError, match="range"):
            graphlib.Graph.from_edges(3, [(0, 5)])
        with pytest.raises(ValueError, match="non-negative"):
            graphlib.Graph(n=-1)

    def test_accessors(self):
        assert K3.edge_count == 3
        assert K3.has_edge(2, 0)
        assert PATH3.degree(1) == 2
        assert PATH3.neighbors(1) == [0, 2]
        assert K3.induced_edge_count([0, 1]) == 1

    def test_adjacency_laplacian(self):
        adj = graphlib.adjacency(K3)
        assert np.array_equal(adj, np.ones((3, 3)) - np.eye(3))
        lap = graphlib.laplacian(K3)
        assert np.array_equal(lap, 3 * np.eye(3) - np.ones((3, 3)))
        assert np.all(lap.sum(axis=1) == 0)
        assert list(np.diag(graphlib.laplacian(PATH3))) == [1, 2, 1]

    def test_edgeless(self):
        g = graphlib.Graph(n=4)
        assert np.all(graphlib.adjacency(g) == 0)
        assert np.all(graphlib.laplacian(g) == 0)

    def test_relabel_transport(self, rng):
        g = graphlib.erdos_renyi(7, 0.5, 5)
        perm = list(rng.permutation(7))
        a = graphlib.adjacency(g)
        b = graphlib.adjacency(graphlib.relabel(g, perm))
        assert np.array_equal(b, a[np.ix_(perm, perm)])
        la = graphlib.laplacian(g)
        lb = graphlib.laplacian(graphlib.relabel(g, perm))
        assert np.array_equal(lb, la[np.ix_(perm, perm)])


class TestGenerators:
    def test_extreme_probabilities(self):
        assert graphlib.erdos_renyi(5, 1.0, 0).edge_count == 10
        assert graphlib.erdos_renyi(5, 0.0, 0).edge_count == 0

    def test_determinism(self):
        assert graphlib.erdos_renyi(8, 0.4, 9) == graphlib.erdos_renyi(8, 0.4, 9)
        assert graphlib.random_tree(8, 9) == graphlib.random_tree(8, 9)

    def test_tree_structure(self):
        for seed in range(10):
            t = graphlib.random_tree(6, seed)
            assert t.edge_count == 5
            assert graphlib.is_connected(t)

    def test_two_vertex_tree(self):
        assert graphlib.random_tree(2, 0).edge_count == 1

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            graphlib.erdos_renyi(3, 1.5, 0)
        with pytest.raises(ValueError):
            graphlib.random_tree(1, 0)


class TestIsomorphism:
    def test_relabeled_graph(self, rng):
        g = graphlib.erdos_renyi(7, 0.5, 3)
        perm = list(rng.permutation(7))
        h = graphlib.relabel(g, perm)
        verdict, mapping = graphlib.classical_isomorphic(g, h)
        assert verdict
        a = graphlib.adjacency(g)
        b = graphlib.adjacency(h)
        assert np.array_equal(a[np.ix_(mapping, mapping)], b)

    def test_k3_vs_path(self):
        verdict, mapping = graphlib.classical_isomorphic(K3, PATH3)
        assert not verdict and mapping is None

    def test_cospectral_non_isomorphic(self):
        assert graphlib.is_isospectral(C4_PLUS_K1, STAR5)
        verdict, _ = graphlib.classical_isomorphic(C4_PLUS_K1, STAR5)
        assert not verdict

    def test_symmetric_and_reflexive(self):
        for seed in range(5):
            g = graphlib.erdos_renyi(6, 0.5, seed)
            h = graphlib.erdos_renyi(6, 0.5, seed + 100)
            assert graphlib.classical_isomorphic(g, g)[0]
            assert (
                graphlib.classical_isomorphic(g, h)[0]
                == graphlib.classical_isomorphic(h, g)[0]
            )

    def test_size_limit(self):
        big = graphlib.Graph(n=11)
        with pytest.raises(ValueError, match="limit"):
            graphlib.classical_isomorphic(big, big)

    def test_isospectral_basics(self):
        assert graphlib.is_isospectral(K3, K3)
        assert not graphlib.is_isospectral(K3, PATH3)
        assert not graphlib.is_isospectral(K3, graphlib.Graph(n=4))


class TestDensest:
    def test_k5_tie_break(self):
        subset, count = graphlib.densest_k_subgraph_bruteforce(complete_graph(5), 3)
        assert subset == (0, 1, 2)
        assert count == 3

    def test_star(self):
        subset, count = graphlib.densest_k_subgraph_bruteforce(STAR5, 3)
        assert count == 2
        assert 0 in subset

    def test_against_recount(self):
        import itertools

        g = graphlib.erdos_renyi(8, 0.5, 13)
        subset, count = graphlib.densest_k_subgraph_bruteforce(g, 4)
        best = max(
            g.induced_edge_count(s) for s in itertools.combinations(range(8), 4)
        )
        assert count == best == g.induced_edge_count(subset)

    def test_budget(self):
        with pytest.raises(ValueError):
            graphlib.densest_k_subgraph_bruteforce(graphlib.Graph(n=21), 3)
        with pytest.raises(ValueError):
            graphlib.densest_k_subgraph_bruteforce(K3, 4)


class TestPermUpperBound:
    def test_monotone_in_edges(self):
        for n in (4, 6, 8, 10):
            values = [
                graphlib.perm_upper_bound(n, i)
                for i in range(0, n * (n - 1) // 2 + 1, 2)
            ]
            assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))

    def test_specific_comparison(self):
        assert graphlib.perm_upper_bound(6, 14) >= graphlib.perm_upper_bound(6, 12)

    def test_bound_holds(self):
        checked = 0
        seed = 0
        while checked < 200:
            seed += 1
            rng = np.random.default_rng(seed)
            n = int(rng.choice([4, 6, 8]))
            g = graphlib.erdos_renyi(n, float(rng.uniform(0.2, 1.0)), seed)
            if g.edge_count % 2:
                continue
            per = numkernel.permanent_exact(graphlib.adjacency(g)).real
            assert per <= graphlib.perm_upper_bound(n, g.edge_count) + 1e-9
            checked += 1

    def test_trivial_cases(self):
        assert graphlib.perm_upper_bound(2, 0) == 1.0
        assert graphlib.perm_upper_bound(4, 0) == 1.0

    def test_parity_rejected(self):
        with pytest.raises(ValueError, match="even"):
            graphlib.perm_upper_bound(5, 4)
        with pytest.raises(ValueError, match="even"):
            graphlib.perm_upper_bound(6, 3)
        with pytest.raises(ValueError, match="range"):
            graphlib.perm_upper_bound(4, 8)


class TestMatchings:
    def test_k33(self):
        k33 = graphlib.Graph.from_edges(
            6, [(u, v) for u in range(3) for v in range(3, 6)]
        )
        assert graphlib.count_perfect_matchings_bruteforce(k33) == 6

    def test_c4(self):
        assert graphlib.count_perfect_matchings_bruteforce(C4) == 2

    def test_odd_graph(self):
        assert graphlib.count_perfect_matchings_bruteforce(PATH3) == 0

    def test_sqrt_permanent_identity(self):
        # for balanced bipartite graphs pm(G)^2 = Per(adjacency)
        k33 = graphlib.Graph.from_edges(
            6, [(u, v) for u in range(3) for v in range(3, 6)]
        )
        per = numkernel.permanent_exact(graphlib.adjacency(k33)).real
        assert graphlib.count_perfect_matchings_bruteforce(k33) ** 2 == round(per)

    def test_size_limit(self):
        with pytest.raises(ValueError, match="limit"):
            graphlib.count_perfect_matchings_bruteforce(graphlib.Graph(n=18))


def test_mean_permanent_grows_with_density():
    means = []
    for pi, p in enumerate((0.5, 0.6, 0.7, 0.8, 0.9, 1.0)):
        values = [
            numkernel.permanent_exact(
                graphlib.adjacency(graphlib.erdos_renyi(8, p, 1000 + 31 * pi + r))
            ).real
            for r in range(15)
        ]
        means.append(np.mean(values))
    assert all(b >= a for a, b in zip(means, means[1:]))


class TestBipartition:
    def test_even_cycle(self):
        parts = graphlib.bipartition(C4)
        assert parts is not None
        assert sorted(parts[0] + parts[1]) == [0, 1, 2, 3]

    def test_odd_cycle(self):
        assert graphlib.bipartition(K3) is None


class TestSerialization:
    def test_json_roundtrip(self):
        g = graphlib.erdos_renyi(6, 0.5, 4)
        assert graphlib.graph_from_json(graphlib.graph_to_json(g)) == g

    def test_json_is_one_indexed(self):
        doc = json.loads(graphlib.graph_to_json(PATH3))
        assert doc == {"n": 3, "edges": [[1, 2], [2, 3]]}

    def test_json_validation(self):
        with pytest.raises(ValueError, match="outside"):
            graphlib.graph_from_json('{"n": 2, "edges": [[1, 3]]}')
        with pytest.raises(ValueError, match="self loop"):
            graphlib.graph_from_json('{"n": 2, "edges": [[1, 1]]}')

    def test_adjacency_csv(self):
        g = graphlib.graph_from_adjacency_csv("0,1,0\n1,0,1\n0,1,0\n")
        assert g == PATH3

    def test_csv_validation(self):
        with pytest.raises(ValueError, match="symmetric"):
            graphlib.graph_from_adjacency_csv("0,1\n0,0\n")
        with pytest.raises(ValueError, match="self loops"):
            graphlib.graph_from_adjacency_csv("1,0\n0,0\n")
        with pytest.raises(ValueError, match="0 or 1"):
            graphlib.graph_from_adjacency_csv("0,2\n2,0\n")

    def test_from_adjacency_matrix(self):
        g = graphlib.graph_from_adjacency(graphlib.adjacency(C4))
        assert g == C4
