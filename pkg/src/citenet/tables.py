"""Delimited report tables (CSV, loss-free round-trips).

Floats are written with repr (shortest exact representation) so a reload
reproduces the in-memory value bit for bit and two identical runs write
byte-identical files. Absent values are empty fields.
"""

from __future__ import annotations

import csv
from pathlib import Path

from .corpus import DOC_TYPES
from .community import Partition
from .errors import CitenetError
from .keywords import CommunityProfile
from .metrics import MeasureReport, ReducedGraph
from .temporal import PathLengthPoint, PublicationSeries, Snapshot, WindowRow


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _open_writer(path: str | Path):
    handle = Path(path).open("w", encoding="utf-8", newline="")
    return handle, csv.writer(handle)


def write_partition_csv(partition: Partition, path: str | Path) -> None:
    handle, writer = _open_writer(path)
    with handle:
        writer.writerow(["node_id", "community"])
        for node in sorted(partition.nodes()):
            writer.writerow([node, partition.community_of(node)])


def read_partition_csv(path: str | Path) -> Partition:
    assignment: dict[str, int] = {}
    with Path(path).open("r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header != ["node_id", "community"]:
            raise CitenetError(f"not a partition file: {path}")
        for row in reader:
            assignment[row[0]] = int(row[1])
    return Partition(assignment)


def write_measures_csv(report: MeasureReport, path: str | Path,
                       partition: Partition | None = None) -> None:
    handle, writer = _open_writer(path)
    with handle:
        writer.writerow(["node_id", "in_deg", "out_deg", "undeg",
                         "clustering", "betweenness", "community"])
        for node in sorted(report.in_degree):
            community = partition.community_of(node) if partition else None
            writer.writerow([
                node,
                report.in_degree[node],
                report.out_degree[node],
                report.undirected_degree[node],
                _fmt(report.clustering[node]),
                _fmt(report.betweenness[node]),
                _fmt(community),
            ])


def write_community_means_csv(means: dict[int, dict[str, float]],
                              path: str | Path) -> None:
    handle, writer = _open_writer(path)
    with handle:
        writer.writerow(["community", "in_degree", "out_degree",
                         "undirected_degree", "clustering", "betweenness"])
        for cid in sorted(means):
            row = means[cid]
            writer.writerow([cid, _fmt(row["in_degree"]), _fmt(row["out_degree"]),
                             _fmt(row["undirected_degree"]), _fmt(row["clustering"]),
                             _fmt(row["betweenness"])])


def write_profiles_csv(profiles: list[CommunityProfile], path: str | Path) -> None:
    """One row per community: id, size, core %, mean degree, document-type
    percentages, and semicolon-joined top terms."""
    handle, writer = _open_writer(path)
    with handle:
        writer.writerow(["community", "size", "core_pct", "avg_degree",
                         "pct_patent", "pct_journal", "pct_book",
                         "pct_conference", "pct_none", "top_terms"])
        for p in profiles:
            writer.writerow([
                p.community, p.size, _fmt(p.core_pct), _fmt(p.average_degree),
                *(_fmt(p.type_pcts[dt]) for dt in DOC_TYPES),
                ";".join(t.term for t in p.top_terms),
            ])


def write_reduced_strength_csv(reduced: ReducedGraph, path: str | Path) -> None:
    """Per community: citations received from and sent to other
    communities."""
    handle, writer = _open_writer(path)
    with handle:
        writer.writerow(["community", "in_citations", "out_citations"])
        for cid in reduced.community_ids:
            writer.writerow([cid, reduced.in_strength[cid], reduced.out_strength[cid]])


def write_series_csv(series: PublicationSeries, path: str | Path) -> None:
    handle, writer = _open_writer(path)
    with handle:
        writer.writerow(["community", "year", "count"])
        for cid in sorted(series.counts):
            for year in sorted(series.counts[cid]):
                writer.writerow([cid, year, series.counts[cid][year]])


def write_snapshot_csv(snapshots: list[Snapshot],
                       path_lengths: list[PathLengthPoint],
                       path: str | Path) -> None:
    """Snapshot summary: year,n,avg_k,mean_spl,std_spl."""
    by_year = {p.year: p for p in path_lengths}
    handle, writer = _open_writer(path)
    with handle:
        writer.writerow(["year", "n", "avg_k", "mean_spl", "std_spl"])
        for snap in snapshots:
            point = by_year.get(snap.year)
            writer.writerow([
                snap.year, snap.n, _fmt(snap.average_degree),
                _fmt(point.mean if point else None),
                _fmt(point.std if point else None),
            ])


def write_window_csv(rows: list[WindowRow], path: str | Path) -> None:
    handle, writer = _open_writer(path)
    with handle:
        writer.writerow(["community", "full_size", "window_size",
                         "proportion_pct", "full_avg_degree", "window_avg_degree"])
        for row in rows:
            writer.writerow([
                row.community, row.full_size, row.window_size,
                _fmt(row.proportion_pct), _fmt(row.full_average_degree),
                _fmt(row.window_average_degree),
            ])


def write_path_length_csv(points: list[PathLengthPoint], path: str | Path) -> None:
    handle, writer = _open_writer(path)
    with handle:
        writer.writerow(["year", "mean_spl", "std_spl"])
        for point in points:
            writer.writerow([point.year, _fmt(point.mean), _fmt(point.std)])


def write_positions_csv(positions: dict[str, tuple[float, float]],
                        path: str | Path) -> None:
    handle, writer = _open_writer(path)
    with handle:
        writer.writerow(["node_id", "x", "y"])
        for node in sorted(positions):
            x, y = positions[node]
            writer.writerow([node, _fmt(x), _fmt(y)])


def read_positions_csv(path: str | Path) -> dict[str, tuple[float, float]]:
    positions: dict[str, tuple[float, float]] = {}
    with Path(path).open("r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        next(reader, None)
        for row in reader:
            positions[row[0]] = (float(row[1]), float(row[2]))
    return positions
