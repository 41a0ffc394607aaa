"""Topological measurements: degrees, clustering, betweenness, shortest
paths, per-community averages, and the community-reduced network.

Betweenness is the unnormalized directed variant over ordered node pairs
with endpoints excluded: B_k = sum over pairs (i,j), sigma_ij > 0, of
sigma_ij(k)/sigma_ij. Clustering and path lengths use the simple
undirected projection (antiparallel citation pairs collapse to one edge).
The shortest-path kernels run as level-synchronous BFS batched over
sources with sparse matrix products.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .errors import GraphError
from .graph import CitationGraph, weak_components
from .community import Partition

_CHUNK = 128  # sources per BFS batch


def degrees(graph: CitationGraph) -> dict[str, tuple[int, int, int]]:
    """Per node: (in-degree, out-degree, undirected degree)."""
    return {u: (graph.in_degree(u), graph.out_degree(u), graph.undirected_degree(u))
            for u in graph.nodes}


def _undirected_csr(graph: CitationGraph, nodes: list[str]) -> sp.csr_matrix:
    index = {u: i for i, u in enumerate(nodes)}
    rows, cols = [], []
    for u in nodes:
        ui = index[u]
        for v in graph.undirected_neighbors(u):
            rows.append(ui)
            cols.append(index[v])
    data = np.ones(len(rows))
    return sp.csr_matrix((data, (rows, cols)), shape=(len(nodes), len(nodes)))


def _directed_csr(graph: CitationGraph, nodes: list[str]) -> sp.csr_matrix:
    index = {u: i for i, u in enumerate(nodes)}
    rows, cols = [], []
    for u in nodes:
        ui = index[u]
        for v in graph.successors(u):
            rows.append(ui)
            cols.append(index[v])
    data = np.ones(len(rows))
    return sp.csr_matrix((data, (rows, cols)), shape=(len(nodes), len(nodes)))


def clustering(graph: CitationGraph) -> dict[str, float]:
    """Clustering coefficient on the undirected projection:
    triangles at the node over connected triples centered there;
    zero when the degree is below 2."""
    nodes = list(graph.nodes)
    if not nodes:
        return {}
    adj = _undirected_csr(graph, nodes)
    triangles = np.asarray((adj @ adj).multiply(adj).sum(axis=1)).ravel() / 2.0
    deg = np.asarray(adj.sum(axis=1)).ravel()
    out: dict[str, float] = {}
    for i, u in enumerate(nodes):
        k = deg[i]
        if k < 2:
            out[u] = 0.0
        else:
            out[u] = float(triangles[i] / (k * (k - 1) / 2.0))
    return out


def betweenness(graph: CitationGraph) -> dict[str, float]:
    """Directed betweenness by shortest-path-DAG accumulation, batched
    over sources."""
    nodes = list(graph.nodes)
    n = len(nodes)
    if n == 0:
        return {}
    if graph.edge_count == 0 or n < 3:
        return {u: 0.0 for u in nodes}

    adj = _directed_csr(graph, nodes)
    adj_t = adj.T.tocsr()
    scores = np.zeros(n)

    for start in range(0, n, _CHUNK):
        sources = np.arange(start, min(start + _CHUNK, n))
        b = len(sources)
        cols = np.arange(b)
        sigma = np.zeros((n, b))
        sigma[sources, cols] = 1.0
        dist = np.full((n, b), -1, dtype=np.int32)
        dist[sources, cols] = 0

        frontier = sigma.copy()
        depth = 0
        while True:
            pushed = adj_t @ frontier
            new = (pushed > 0) & (dist < 0)
            if not new.any():
                break
            depth += 1
            sigma[new] = pushed[new]
            dist[new] = depth
            frontier = np.where(new, pushed, 0.0)

        delta = np.zeros((n, b))
        for d in range(depth, 0, -1):
            at_level = dist == d
            coeff = np.zeros((n, b))
            np.divide(1.0 + delta, sigma, out=coeff, where=at_level)
            pulled = adj @ coeff
            delta += np.where(dist == d - 1, pulled * sigma, 0.0)
        delta[sources, cols] = 0.0
        scores += delta.sum(axis=1)

    return {u: float(scores[i]) for i, u in enumerate(nodes)}


def _distance_moments(adj: sp.csr_matrix) -> tuple[int, float, float]:
    """(#ordered reachable pairs, sum of distances, sum of squared
    distances) over the graph given by ``adj``."""
    n = adj.shape[0]
    pairs = 0
    s1 = 0.0
    s2 = 0.0
    for start in range(0, n, _CHUNK):
        sources = np.arange(start, min(start + _CHUNK, n))
        b = len(sources)
        cols = np.arange(b)
        visited = np.zeros((n, b), dtype=bool)
        visited[sources, cols] = True
        frontier = np.zeros((n, b))
        frontier[sources, cols] = 1.0
        depth = 0
        while True:
            pushed = adj @ frontier
            new = (pushed > 0) & ~visited
            if not new.any():
                break
            depth += 1
            count = int(new.sum())
            pairs += count
            s1 += depth * count
            s2 += depth * depth * count
            visited |= new
            frontier = new.astype(float)
    return pairs, s1, s2


def mean_shortest_path(graph: CitationGraph) -> tuple[float, float]:
    """Mean and population standard deviation of pair distances on the
    undirected projection, restricted to the largest component."""
    if graph.node_count < 2:
        raise GraphError("no pairs")
    component = weak_components(graph)[0]
    if len(component) < 2:
        raise GraphError("no pairs")
    sub = graph.subgraph(component)
    nodes = list(sub.nodes)
    adj = _undirected_csr(sub, nodes)
    pairs, s1, s2 = _distance_moments(adj)
    mean = s1 / pairs
    variance = max(s2 / pairs - mean * mean, 0.0)
    return mean, math.sqrt(variance)


@dataclass(frozen=True)
class ReducedGraph:
    """Community-level digraph; edge weights count citations between
    distinct communities. Full weights are always retained; ``threshold``
    only governs the presentation export."""

    weights: dict[tuple[int, int], int]
    in_strength: dict[int, int]
    out_strength: dict[int, int]
    community_ids: tuple[int, ...]
    threshold: int

    def thresholded(self) -> dict[tuple[int, int], int]:
        return {edge: w for edge, w in self.weights.items() if w >= self.threshold}

    @property
    def total_weight(self) -> int:
        return sum(self.weights.values())


def reduce_by_community(graph: CitationGraph, partition: Partition,
                        threshold: int = 7) -> ReducedGraph:
    """Collapse each community to one node; weight w(ci -> cj) counts
    citations from members of ci to members of cj (i != j)."""
    if partition.nodes() != set(graph.nodes):
        raise GraphError("partition does not cover the graph's node set")
    weights: dict[tuple[int, int], int] = {}
    for u, v in graph.edges():
        cu = partition.community_of(u)
        cv = partition.community_of(v)
        if cu == cv:
            continue
        weights[(cu, cv)] = weights.get((cu, cv), 0) + 1
    ids = partition.community_ids
    in_strength = {cid: 0 for cid in ids}
    out_strength = {cid: 0 for cid in ids}
    for (cu, cv), w in weights.items():
        out_strength[cu] += w
        in_strength[cv] += w
    return ReducedGraph(weights=weights, in_strength=in_strength,
                        out_strength=out_strength, community_ids=ids,
                        threshold=threshold)


_MEASURES = ("in_degree", "out_degree", "undirected_degree",
             "clustering", "betweenness")


@dataclass
class MeasureReport:
    """Per-node and per-community measurement tables plus graph scalars."""

    in_degree: dict[str, int]
    out_degree: dict[str, int]
    undirected_degree: dict[str, int]
    clustering: dict[str, float]
    betweenness: dict[str, float]
    average_degree: float
    mean_path_length: float | None
    path_length_std: float | None
    community_averages: dict[int, dict[str, float]] = field(default_factory=dict)

    def node_measures(self, u: str) -> dict[str, float]:
        return {name: getattr(self, name)[u] for name in _MEASURES}


def community_means(report: MeasureReport,
                    partition: Partition) -> dict[int, dict[str, float]]:
    """Arithmetic mean of every node measure over each community."""
    out: dict[int, dict[str, float]] = {}
    for cid in partition.community_ids:
        members = partition.members(cid)
        size = len(members)
        out[cid] = {
            name: sum(getattr(report, name)[u] for u in members) / size
            for name in _MEASURES
        }
    return out


def compute_measures(graph: CitationGraph,
                     partition: Partition | None = None) -> MeasureReport:
    """Compute the full measurement report in one pass."""
    deg = degrees(graph)
    try:
        spl_mean, spl_std = mean_shortest_path(graph)
    except GraphError:
        spl_mean = spl_std = None
    report = MeasureReport(
        in_degree={u: d[0] for u, d in deg.items()},
        out_degree={u: d[1] for u, d in deg.items()},
        undirected_degree={u: d[2] for u, d in deg.items()},
        clustering=clustering(graph),
        betweenness=betweenness(graph),
        average_degree=graph.average_undirected_degree(),
        mean_path_length=spl_mean,
        path_length_std=spl_std,
    )
    if partition is not None:
        report.community_averages = community_means(report, partition)
    return report
