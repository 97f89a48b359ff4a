"""Network features over the citation graph.

PageRank uses power iteration with uniform teleport; dangling nodes spread
their mass uniformly. Assortativity follows the documented convention: the
denominator averages the Y-degree over successors when Y is the out-degree
and over predecessors when Y is the in-degree. Clustering treats the digraph
as undirected. Isolated quantities fall back to the 0.0 sentinel.
"""

from __future__ import annotations

import numpy as np

from .types import FeatureVector, LinkGraph

NETWORK_FEATURE_NAMES = [
    "pagerank", "in_degree", "out_degree",
    "assortativity_in_in", "assortativity_in_out",
    "assortativity_out_in", "assortativity_out_out",
    "local_clustering", "reciprocity", "link_count", "translation_count",
]


def _ratio(num: float, den: float) -> float:
    return num / den if den else 0.0


def pagerank(
    graph: LinkGraph,
    damping: float = 0.85,
    tol: float = 1e-10,
    max_iter: int = 200,
) -> dict[str, float]:
    """Power iteration until the L1 change drops below ``tol``."""
    if not 0.0 < damping < 1.0:
        raise ValueError("damping must lie in (0, 1)")
    nodes = sorted(graph.nodes)
    if not nodes:
        raise ValueError("pagerank needs a non-empty graph")
    index = {node: i for i, node in enumerate(nodes)}
    n = len(nodes)
    src, dst = [], []
    out_degree = np.zeros(n)
    for node in nodes:
        out_degree[index[node]] = graph.out_degree(node)
        for succ in sorted(graph.successors(node)):
            src.append(index[node])
            dst.append(index[succ])
    src = np.asarray(src, dtype=np.intp)
    dst = np.asarray(dst, dtype=np.intp)
    dangling = out_degree == 0

    rank = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        contrib = np.zeros(n)
        if len(src):
            np.add.at(contrib, dst, rank[src] / out_degree[src])
        contrib += rank[dangling].sum() / n
        new_rank = (1.0 - damping) / n + damping * contrib
        if np.abs(new_rank - rank).sum() < tol:
            rank = new_rank
            break
        rank = new_rank
    return {node: float(rank[index[node]]) for node in nodes}


def _mean_degree(graph: LinkGraph, neighbors: set[str], degree) -> float:
    if not neighbors:
        return 0.0
    return sum(degree(v) for v in neighbors) / len(neighbors)


def local_clustering(graph: LinkGraph, node: str) -> float:
    """Fraction of linked pairs among the undirected neighborhood."""
    neighbors = (graph.successors(node) | graph.predecessors(node)) - {node}
    k = len(neighbors)
    if k < 2:
        return 0.0
    linked = 0
    ordered = sorted(neighbors)
    for i, u in enumerate(ordered):
        succ_u = graph.successors(u)
        pred_u = graph.predecessors(u)
        for w in ordered[i + 1 :]:
            if w in succ_u or w in pred_u:
                linked += 1
    return linked / (k * (k - 1) / 2)


def network_features(
    graph: LinkGraph,
    pagerank_scores: dict[str, float],
) -> dict[str, FeatureVector]:
    """The 11 per-node network features, keyed by node id."""
    features: dict[str, FeatureVector] = {}
    for node in sorted(graph.nodes):
        in_deg = graph.in_degree(node)
        out_deg = graph.out_degree(node)
        succ = graph.successors(node)
        pred = graph.predecessors(node)
        # Denominator averages Y-degree over successors for *_out variants
        # and predecessors for *_in variants.
        mean_in_over_pred = _mean_degree(graph, pred, graph.in_degree)
        mean_out_over_succ = _mean_degree(graph, succ, graph.out_degree)
        features[node] = {
            "pagerank": pagerank_scores[node],
            "in_degree": float(in_deg),
            "out_degree": float(out_deg),
            "assortativity_in_in": _ratio(in_deg, mean_in_over_pred),
            "assortativity_in_out": _ratio(in_deg, mean_out_over_succ),
            "assortativity_out_in": _ratio(out_deg, mean_in_over_pred),
            "assortativity_out_out": _ratio(out_deg, mean_out_over_succ),
            "local_clustering": local_clustering(graph, node),
            "reciprocity": _ratio(in_deg, out_deg),
            "link_count": float(out_deg + graph.red_links.get(node, 0)),
            "translation_count": float(graph.translations.get(node, 0)),
        }
    return features
