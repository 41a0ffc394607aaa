"""Time-resolved analyses: publication series, cumulative snapshots,
window subnetworks, and shortest-path evolution.

Communities are detected once on the full network and held fixed across
time; snapshots and windows are induced subgraphs on documents whose year
satisfies the bound (both edge endpoints must qualify). Documents without
a year never enter temporal views; exclusion counts are reported.
"""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import Corpus
from .errors import GraphError
from .graph import CitationGraph
from .community import Partition
from .metrics import mean_shortest_path


@dataclass(frozen=True)
class PublicationSeries:
    """Yearly publication counts per community over the network members."""

    counts: dict[int, dict[int, int]]  # community -> year -> count
    undated: int
    split_year: int | None = None

    def years(self) -> tuple[int, ...]:
        all_years = {y for series in self.counts.values() for y in series}
        return tuple(sorted(all_years))

    def split(self) -> tuple[dict[int, dict[int, int]], dict[int, dict[int, int]]]:
        """Two aligned series groups: years <= split_year and years above."""
        if self.split_year is None:
            raise GraphError("no split year configured")
        early = {c: {y: n for y, n in series.items() if y <= self.split_year}
                 for c, series in self.counts.items()}
        late = {c: {y: n for y, n in series.items() if y > self.split_year}
                for c, series in self.counts.items()}
        return early, late

    def total(self) -> int:
        return sum(n for series in self.counts.values() for n in series.values())


@dataclass(frozen=True)
class Snapshot:
    """Induced subgraph on documents published up to ``year``; isolated
    nodes are retained and counted."""

    year: int
    graph: CitationGraph

    @property
    def n(self) -> int:
        return self.graph.node_count

    @property
    def average_degree(self) -> float:
        return self.graph.average_undirected_degree()


@dataclass(frozen=True)
class WindowRow:
    """Per-community row of the window comparison table."""

    community: int
    full_size: int
    window_size: int
    proportion_pct: float
    full_average_degree: float
    window_average_degree: float


@dataclass(frozen=True)
class PathLengthPoint:
    """Mean/std of pair distances for one snapshot year; None marks years
    whose snapshot has fewer than 2 connected nodes."""

    year: int
    mean: float | None
    std: float | None


def publication_series(corpus: Corpus, graph: CitationGraph,
                       partition: Partition,
                       split_year: int | None = None) -> PublicationSeries:
    """Per-community yearly counts of network members; members without a
    year are excluded and counted."""
    if partition.nodes() != set(graph.nodes):
        raise GraphError("partition does not cover the graph's node set")
    counts: dict[int, dict[int, int]] = {cid: {} for cid in partition.community_ids}
    undated = 0
    for u in graph.nodes:
        year = corpus[u].year
        if year is None:
            undated += 1
            continue
        series = counts[partition.community_of(u)]
        series[year] = series.get(year, 0) + 1
    return PublicationSeries(counts=counts, undated=undated, split_year=split_year)


def _dated_nodes(graph: CitationGraph, corpus: Corpus, lo: int | None,
                 hi: int | None) -> set[str]:
    keep = set()
    for u in graph.nodes:
        year = corpus[u].year
        if year is None:
            continue
        if lo is not None and year < lo:
            continue
        if hi is not None and year > hi:
            continue
        keep.add(u)
    return keep


def snapshot(graph: CitationGraph, corpus: Corpus, year: int) -> Snapshot:
    """Cumulative snapshot: induced subgraph on nodes with year <= given."""
    return Snapshot(year=year, graph=graph.subgraph(
        _dated_nodes(graph, corpus, None, year)))


def window_subnetwork(graph: CitationGraph, corpus: Corpus,
                      partition: Partition, y0: int,
                      y1: int) -> tuple[CitationGraph, list[WindowRow]]:
    """Induced subgraph on nodes with y0 <= year <= y1 plus the
    per-community size and mean-degree comparison table."""
    if y0 > y1:
        raise GraphError(f"invalid window: {y0} > {y1}")
    if partition.nodes() != set(graph.nodes):
        raise GraphError("partition does not cover the graph's node set")
    sub = graph.subgraph(_dated_nodes(graph, corpus, y0, y1))
    window_nodes = set(sub.nodes)

    rows = []
    for cid in partition.community_ids:
        members = partition.members(cid)
        inside = members & window_nodes
        full_size = len(members)
        window_size = len(inside)
        full_avg = sum(graph.undirected_degree(u) for u in members) / full_size
        window_avg = (sum(sub.undirected_degree(u) for u in inside) / window_size
                      if window_size else 0.0)
        rows.append(WindowRow(
            community=cid,
            full_size=full_size,
            window_size=window_size,
            proportion_pct=100.0 * window_size / full_size,
            full_average_degree=full_avg,
            window_average_degree=window_avg,
        ))
    return sub, rows


def path_length_series(graph: CitationGraph, corpus: Corpus,
                       years) -> list[PathLengthPoint]:
    """Mean shortest path of each cumulative snapshot, on the undirected
    projection restricted to the largest component. Years whose snapshot
    cannot form a pair yield None markers."""
    points = []
    for year in years:
        snap = snapshot(graph, corpus, year)
        try:
            mean, std = mean_shortest_path(snap.graph)
        except GraphError:
            points.append(PathLengthPoint(year=year, mean=None, std=None))
            continue
        points.append(PathLengthPoint(year=year, mean=mean, std=std))
    return points
