"""Force-directed node placement (spring embedder).

Pairwise repulsion k^2/d and spring attraction d^2/k along edges, with a
linearly cooling displacement cap. Positions are deterministic under the
seed and recentered on the origin.
"""

from __future__ import annotations

import numpy as np

from .graph import CitationGraph


def natural_spring_length(n: int, scale: float = 1.0) -> float:
    """Equilibrium edge length the embedder relaxes toward."""
    return scale * np.sqrt(1.0 / n)


def force_directed_layout(graph: CitationGraph, seed: int = 0,
                          iterations: int = 100, scale: float = 1.0,
                          chunk: int = 256) -> dict[str, tuple[float, float]]:
    """Compute 2D positions for every node.

    Repulsion is evaluated in row chunks to bound memory on larger graphs.
    """
    nodes = list(graph.nodes)
    n = len(nodes)
    if n == 0:
        return {}
    if n == 1:
        return {nodes[0]: (0.0, 0.0)}

    index = {u: i for i, u in enumerate(nodes)}
    rng = np.random.default_rng(seed)
    pos = rng.uniform(-scale / 2.0, scale / 2.0, size=(n, 2))

    edges = np.array([(index[u], index[v]) for u, v in graph.edges()], dtype=np.int64)
    k = natural_spring_length(n, scale)
    temp0 = 0.1 * scale

    for it in range(iterations):
        disp = np.zeros((n, 2))

        # repulsion: k^2 / d away from every other node
        for start in range(0, n, chunk):
            stop = min(start + chunk, n)
            diff = pos[start:stop, None, :] - pos[None, :, :]
            dist = np.sqrt((diff * diff).sum(axis=2))
            np.maximum(dist, 1e-9, out=dist)
            force = (k * k) / dist
            force[np.arange(stop - start), np.arange(start, stop)] = 0.0
            disp[start:stop] += (diff / dist[:, :, None] * force[:, :, None]).sum(axis=1)

        # attraction: d^2 / k along each edge
        if len(edges):
            src, dst = edges[:, 0], edges[:, 1]
            diff = pos[src] - pos[dst]
            dist = np.sqrt((diff * diff).sum(axis=1))
            np.maximum(dist, 1e-9, out=dist)
            pull = (dist / k)[:, None] * diff
            np.add.at(disp, src, -pull)
            np.add.at(disp, dst, pull)

        length = np.sqrt((disp * disp).sum(axis=1))
        np.maximum(length, 1e-9, out=length)
        temp = temp0 * (1.0 - it / iterations)
        step = np.minimum(length, temp)
        pos += disp / length[:, None] * step[:, None]

    pos -= pos.mean(axis=0)
    return {u: (float(pos[index[u], 0]), float(pos[index[u], 1])) for u in nodes}
