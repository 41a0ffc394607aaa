"""Figure rendering. Every report figure is written as a static SVG next
to its CSV counterpart. Colors group the ten largest communities; any
smaller ones are drawn in grey as "other"."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.collections import LineCollection  # noqa: E402

from .community import Partition
from .graph import CitationGraph
from .metrics import ReducedGraph
from .temporal import PathLengthPoint, PublicationSeries, Snapshot

_TOP_COMMUNITIES = 10
_OTHER_COLOR = "0.75"
# Strip volatile metadata so reruns produce stable files.
_SVG_META = {"Date": None}


def _save(fig, path: str | Path) -> None:
    fig.savefig(str(path), format="svg", metadata=_SVG_META)
    plt.close(fig)


def _community_color(cid: int):
    if cid < _TOP_COMMUNITIES:
        return plt.get_cmap("tab10")(cid % 10)
    return _OTHER_COLOR


def _community_label(cid: int) -> str:
    return f"community {cid}" if cid < _TOP_COMMUNITIES else "other"


def plot_community_measures(means: dict[int, dict[str, float]],
                            path: str | Path) -> None:
    """Bar panels of per-community measurement averages."""
    panels = [("in_degree", "in-degree"), ("out_degree", "out-degree"),
              ("betweenness", "betweenness"), ("clustering", "clustering")]
    cids = sorted(means)
    fig, axes = plt.subplots(2, 2, figsize=(10, 7))
    for ax, (key, label) in zip(axes.ravel(), panels):
        values = [means[c][key] for c in cids]
        ax.bar([str(c) for c in cids], values,
               color=[_community_color(c) for c in cids])
        ax.set_title(f"mean {label} per community")
        ax.set_xlabel("community")
        ax.grid(axis="y", alpha=0.3)
    fig.tight_layout()
    _save(fig, path)


def plot_community_citations(reduced: ReducedGraph, path: str | Path) -> None:
    """Citations each community receives from / sends to the others."""
    cids = list(reduced.community_ids)
    fig, axes = plt.subplots(1, 2, figsize=(10, 4))
    for ax, (strength, label) in zip(axes, [
            (reduced.in_strength, "citations received"),
            (reduced.out_strength, "citations sent")]):
        ax.bar([str(c) for c in cids], [strength[c] for c in cids],
               color=[_community_color(c) for c in cids])
        ax.set_title(f"{label} (between communities)")
        ax.set_xlabel("community")
        ax.grid(axis="y", alpha=0.3)
    fig.tight_layout()
    _save(fig, path)


def plot_publication_series(series: PublicationSeries, path: str | Path) -> None:
    """Yearly publication counts per community; with a split year the
    early and late periods get separate panels (their scales differ)."""
    groups = list(series.split()) if series.split_year is not None else [series.counts]
    fig, axes = plt.subplots(len(groups), 1, figsize=(10, 4 * len(groups)),
                             squeeze=False)
    for ax, counts in zip(axes.ravel(), groups):
        for cid in sorted(counts):
            data = counts[cid]
            if not data:
                continue
            years = sorted(data)
            ax.plot(years, [data[y] for y in years], marker="o", markersize=3,
                    color=_community_color(cid), label=_community_label(cid))
        ax.set_xlabel("year")
        ax.set_ylabel("documents")
        ax.grid(alpha=0.3)
        handles, labels = ax.get_legend_handles_labels()
        seen: dict[str, object] = {}
        for h, l in zip(handles, labels):
            seen.setdefault(l, h)
        if seen:
            ax.legend(seen.values(), seen.keys(), fontsize=8, ncol=2)
    fig.suptitle("publications per year by community")
    fig.tight_layout()
    _save(fig, path)


def plot_snapshot_summary(snapshots: list[Snapshot], path: str | Path) -> None:
    """Growth of the cumulative network: node count and mean degree."""
    years = [s.year for s in snapshots]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
    ax1.plot(years, [s.n for s in snapshots], marker="o")
    ax1.set_xlabel("year")
    ax1.set_ylabel("nodes")
    ax1.set_title("network size over time")
    ax1.grid(alpha=0.3)
    ax2.plot(years, [s.average_degree for s in snapshots], marker="o", color="tab:orange")
    ax2.set_xlabel("year")
    ax2.set_ylabel("mean undirected degree")
    ax2.set_title("mean degree over time")
    ax2.grid(alpha=0.3)
    fig.tight_layout()
    _save(fig, path)


def plot_path_lengths(points: list[PathLengthPoint], path: str | Path) -> None:
    """Mean shortest path per snapshot year with standard-deviation bars."""
    present = [p for p in points if p.mean is not None]
    fig, ax = plt.subplots(figsize=(8, 4.5))
    if present:
        ax.errorbar([p.year for p in present], [p.mean for p in present],
                    yerr=[p.std for p in present], marker="o", capsize=3)
    ax.set_xlabel("year")
    ax.set_ylabel("mean shortest path")
    ax.set_title("mean shortest path over time (undirected)")
    ax.grid(alpha=0.3)
    fig.tight_layout()
    _save(fig, path)


def plot_network(graph: CitationGraph, positions: dict[str, tuple[float, float]],
                 path: str | Path, partition: Partition | None = None) -> None:
    """Node-link drawing at the given positions, colored by community."""
    fig, ax = plt.subplots(figsize=(8, 8))
    segments = [(positions[u], positions[v]) for u, v in graph.edges()]
    if segments:
        ax.add_collection(LineCollection(segments, colors="0.8",
                                         linewidths=0.4, zorder=1))
    nodes = list(graph.nodes)
    xs = [positions[u][0] for u in nodes]
    ys = [positions[u][1] for u in nodes]
    if partition is not None:
        colors = [_community_color(partition.community_of(u)) for u in nodes]
    else:
        colors = ["tab:blue"] * len(nodes)
    size = max(4.0, 600.0 / max(len(nodes), 1))
    ax.scatter(xs, ys, s=size, c=colors, zorder=2, linewidths=0)
    if partition is not None:
        shown = [c for c in partition.community_ids if c < _TOP_COMMUNITIES]
        handles = [plt.Line2D([], [], marker="o", linestyle="",
                              color=_community_color(c), label=_community_label(c))
                   for c in shown]
        if partition.n_communities > _TOP_COMMUNITIES:
            handles.append(plt.Line2D([], [], marker="o", linestyle="",
                                      color=_OTHER_COLOR, label="other"))
        ax.legend(handles=handles, fontsize=8, loc="upper right")
    ax.set_aspect("equal")
    ax.set_axis_off()
    fig.tight_layout()
    _save(fig, path)
