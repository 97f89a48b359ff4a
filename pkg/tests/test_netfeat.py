"""Network metrics against dense-solver and triple-loop oracles."""

import random

import numpy as np
import pytest

from wikiquality.netfeat import local_clustering, network_features, pagerank
from wikiquality.types import LinkGraph


def graph_from_edges(edges, nodes=()):
    g = LinkGraph()
    for node in nodes:
        g.add_node(node)
    for a, b in edges:
        g.add_edge(a, b)
    return g


def random_graph(rng, n, p):
    g = LinkGraph()
    names = [f"n{i:02d}" for i in range(n)]
    for name in names:
        g.add_node(name)
    for a in names:
        for b in names:
            if a != b and rng.random() < p:
                g.add_edge(a, b)
    return g


def pagerank_dense_oracle(g, damping=0.85):
    """Solve the stationary linear system directly (dangling rows uniform)."""
    nodes = sorted(g.nodes)
    n = len(nodes)
    T = np.zeros((n, n))
    for i, a in enumerate(nodes):
        succ = sorted(g.successors(a))
        if succ:
            for b in succ:
                T[i, nodes.index(b)] = 1.0 / len(succ)
        else:
            T[i, :] = 1.0 / n
    pi = np.linalg.solve(np.eye(n) - damping * T.T, np.full(n, (1 - damping) / n))
    return dict(zip(nodes, pi))


class TestPageRank:
    def test_three_node_cycle(self):
        g = graph_from_edges([("a", "b"), ("b", "c"), ("c", "a")])
        pr = pagerank(g)
        for value in pr.values():
            assert value == pytest.approx(1 / 3, abs=1e-12)

    def test_two_node_hand_solution(self):
        # Hand-derived from the stationary equations with uniform dangling
        # redistribution and damping 0.85:
        #   pi_A = 0.075 + 0.425 * pi_B,  pi_B = 0.075 + 0.85*(pi_A + pi_B/2)
        # giving pi_A = 0.5 / 1.425.
        g = graph_from_edges([("A", "B")])
        pr = pagerank(g, damping=0.85)
        assert pr["A"] == pytest.approx(0.5 / 1.425, abs=1e-10)
        assert pr["B"] == pytest.approx(1 - 0.5 / 1.425, abs=1e-10)
        oracle = pagerank_dense_oracle(g)
        assert pr["A"] == pytest.approx(oracle["A"], abs=1e-10)

    def test_fifty_node_matches_dense_solver(self):
        rng = random.Random(13)
        g = random_graph(rng, 50, 0.08)
        pr = pagerank(g, tol=1e-14, max_iter=1000)
        oracle = pagerank_dense_oracle(g)
        for node in g.nodes:
            assert pr[node] == pytest.approx(oracle[node], abs=1e-8)

    def test_sums_to_one_and_positive(self):
        rng = random.Random(3)
        for _ in range(5):
            g = random_graph(rng, rng.randrange(2, 30), 0.15)
            pr = pagerank(g)
            assert sum(pr.values()) == pytest.approx(1.0, abs=1e-9)
            assert all(v > 0 for v in pr.values())

    def test_incoming_edge_never_decreases_rank(self):
        g1 = graph_from_edges([("a", "b"), ("c", "b")], nodes=["a", "b", "c", "d"])
        g2 = graph_from_edges([("a", "b"), ("c", "b"), ("d", "b")])
        assert pagerank(g2)["b"] >= pagerank(g1)["b"]

    def test_bad_damping_rejected(self):
        g = graph_from_edges([("a", "b")])
        with pytest.raises(ValueError):
            pagerank(g, damping=1.0)

    def test_empty_graph_rejected(self):
        with pytest.raises(ValueError):
            pagerank(LinkGraph())


class TestNetworkFeatures:
    def test_complete_digraph_symmetry(self):
        names = ["a", "b", "c", "d"]
        g = graph_from_edges([(x, y) for x in names for y in names if x != y])
        feats = network_features(g, pagerank(g))
        for node in names:
            fv = feats[node]
            assert fv["local_clustering"] == 1.0
            assert fv["reciprocity"] == 1.0
            for variant in ("in_in", "in_out", "out_in", "out_out"):
                assert fv[f"assortativity_{variant}"] == 1.0

    def test_sink_reciprocity_sentinel(self):
        g = graph_from_edges([("a", "x"), ("b", "x")])
        feats = network_features(g, pagerank(g))
        assert feats["x"]["in_degree"] == 2
        assert feats["x"]["out_degree"] == 0
        assert feats["x"]["reciprocity"] == 0.0

    def test_isolated_node_sentinels(self):
        g = graph_from_edges([("a", "b")], nodes=["z"])
        fv = network_features(g, pagerank(g))["z"]
        for name in ("assortativity_in_in", "assortativity_in_out",
                     "assortativity_out_in", "assortativity_out_out",
                     "local_clustering", "reciprocity"):
            assert fv[name] == 0.0

    def test_red_links_and_translations(self):
        g = graph_from_edges([("a", "b"), ("a", "c")])
        g.red_links["a"] = 4
        g.translations["a"] = 7
        fv = network_features(g, pagerank(g))["a"]
        assert fv["link_count"] == 6  # out-degree 2 + 4 red links
        assert fv["translation_count"] == 7

    def test_thirty_node_matches_triple_loop_oracle(self):
        rng = random.Random(30)
        g = random_graph(rng, 30, 0.12)
        feats = network_features(g, pagerank(g))
        nodes = sorted(g.nodes)
        edges = {(a, b) for a in nodes for b in g.successors(a)}

        for v in nodes:
            preds = [u for u in nodes if (u, v) in edges]
            succs = [w for w in nodes if (v, w) in edges]
            in_deg = len(preds)
            out_deg = len(succs)
            assert feats[v]["in_degree"] == in_deg
            assert feats[v]["out_degree"] == out_deg

            def avg(vals):
                return sum(vals) / len(vals) if vals else 0.0

            mean_in = avg([sum(1 for u in nodes if (u, p) in edges) for p in preds])
            mean_out = avg([sum(1 for w in nodes if (s, w) in edges) for s in succs])
            for name, num, den in (
                ("assortativity_in_in", in_deg, mean_in),
                ("assortativity_in_out", in_deg, mean_out),
                ("assortativity_out_in", out_deg, mean_in),
                ("assortativity_out_out", out_deg, mean_out),
            ):
                expected = num / den if den else 0.0
                assert feats[v][name] == pytest.approx(expected, abs=1e-12), name

            und_neigh = sorted({u for u in nodes if (u, v) in edges or (v, u) in edges} - {v})
            k = len(und_neigh)
            if k < 2:
                assert feats[v]["local_clustering"] == 0.0
            else:
                linked = 0
                for i in range(k):
                    for j in range(i + 1, k):
                        u, w = und_neigh[i], und_neigh[j]
                        if (u, w) in edges or (w, u) in edges:
                            linked += 1
                assert feats[v]["local_clustering"] == pytest.approx(
                    linked / (k * (k - 1) / 2), abs=1e-12)

            expected_recip = in_deg / out_deg if out_deg else 0.0
            assert feats[v]["reciprocity"] == pytest.approx(expected_recip, abs=1e-12)

    def test_degree_sum_invariant(self):
        rng = random.Random(8)
        g = random_graph(rng, 25, 0.1)
        feats = network_features(g, pagerank(g))
        total_in = sum(fv["in_degree"] for fv in feats.values())
        total_out = sum(fv["out_degree"] for fv in feats.values())
        assert total_in == total_out == g.edge_count()

    def test_relabeling_invariance(self):
        rng = random.Random(12)
        g = random_graph(rng, 12, 0.2)
        mapping = {f"n{i:02d}": f"z{(i * 7) % 12:02d}" for i in range(12)}
        g2 = LinkGraph()
        for node in g.nodes:
            g2.add_node(mapping[node])
        for a, b in g.edges():
            g2.add_edge(mapping[a], mapping[b])
        f1 = network_features(g, pagerank(g))
        f2 = network_features(g2, pagerank(g2))
        for node in g.nodes:
            for name in ("local_clustering", "in_degree", "out_degree", "reciprocity"):
                assert f1[node][name] == pytest.approx(f2[mapping[node]][name])

    def test_clustering_in_unit_interval(self):
        rng = random.Random(77)
        g = random_graph(rng, 20, 0.25)
        for node in g.nodes:
            assert 0.0 <= local_clustering(g, node) <= 1.0
