"""Command-line interface.

Subcommands: ``build`` (construct the citation network), ``analyze``
(communities, keyword profiles, measures, reduced network), ``timeline``
(publication series, snapshots, window table, path lengths), ``layout``
(force-directed drawing), ``synth`` (generate a synthetic corpus) and
``all`` (build + analyze + timeline + layout). Each stage writes CSV
tables with SVG figures alongside into the output directory.

Exit codes: 0 success, 1 internal error, 2 empty-result conditions.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, fields
from pathlib import Path

from . import community, corpus as corpus_mod, graph as graph_mod
from . import graphio, keywords, layout as layout_mod, metrics, plots
from . import synth as synth_mod, tables, temporal
from .errors import CitenetError, EmptyResultError

GRAPH_FILE = "graph.graphml"
PARTITION_FILE = "partition.csv"


@dataclass
class RunConfig:
    """Everything a pipeline run depends on. May be loaded from a JSON
    file whose keys mirror these fields; command-line flags override."""

    corpus: str = ""
    query: list[str] | None = None
    expand_from: str = "core"
    prune_fixpoint: bool = False
    tau: float = 0.15
    trials: int = 20
    seed: int = 0
    topk: int = 5
    min_weight: int = 7
    min_community_size: int = 1
    split_year: int | None = None
    window: tuple[int, int] | None = None
    snapshot_years: list[int] | None = None
    out: str = "out"
    threads: int = 1
    load_report: str | None = None

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        config = cls()
        if getattr(args, "config", None):
            raw = json.loads(Path(args.config).read_text(encoding="utf-8"))
            known = {f.name for f in fields(cls)}
            unknown = set(raw) - known
            if unknown:
                raise CitenetError(f"unknown config keys: {sorted(unknown)}")
            for key, value in raw.items():
                if key == "window" and value is not None:
                    value = tuple(value)
                setattr(config, key, value)
        for f in fields(cls):
            value = getattr(args, f.name, None)
            if value is not None:
                setattr(config, f.name, value)
        return config


def _parse_window(raw: str) -> tuple[int, int]:
    try:
        y0, y1 = raw.split(":")
        return int(y0), int(y1)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(
            f"window must look like Y0:Y1, got {raw!r}") from exc


def _parse_years(raw: str) -> list[int]:
    try:
        return [int(part) for part in raw.split(",") if part]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(
            f"years must be a comma-separated list, got {raw!r}") from exc


def _load_corpus(config: RunConfig) -> corpus_mod.Corpus:
    if not config.corpus:
        raise CitenetError("no corpus configured (use --corpus or a config file)")
    loaded, report = corpus_mod.load_corpus(config.corpus)
    print(report.summary(), file=sys.stderr)
    if config.load_report:
        Path(config.load_report).write_text(
            json.dumps(report.to_dict(), indent=2) + "\n", encoding="utf-8")
    return loaded


def _out_dir(config: RunConfig) -> Path:
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _read_graph(out: Path) -> graph_mod.CitationGraph:
    path = out / GRAPH_FILE
    if not path.exists():
        raise CitenetError(f"{path} not found; run the build stage first")
    built, _ = graphio.read_graphml(path)
    return built


def _read_partition(out: Path) -> community.Partition:
    path = out / PARTITION_FILE
    if not path.exists():
        raise CitenetError(f"{path} not found; run the analyze stage first")
    return tables.read_partition_csv(path)


def _default_snapshot_years(corpus, graph) -> list[int]:
    years = [corpus[u].year for u in graph.nodes
             if u in corpus and corpus[u].year is not None]
    if not years:
        return []
    lo, hi = min(years), max(years)
    ticks = list(range(lo - lo % 10 + 10, hi, 10))
    if lo not in ticks:
        ticks.insert(0, lo)
    if hi not in ticks:
        ticks.append(hi)
    return ticks


def cmd_build(config: RunConfig) -> int:
    loaded = _load_corpus(config)
    query = corpus_mod.Query.from_strings(config.query or [])
    built, trace = graph_mod.build_network(
        loaded, query, expand_from=config.expand_from,
        prune_fixpoint=config.prune_fixpoint)
    out = _out_dir(config)
    graphio.write_graphml(built, out / GRAPH_FILE, corpus=loaded)
    graphio.write_edge_csv(built, out / "edges.csv")
    (out / "build_trace.txt").write_text(trace.summary() + "\n", encoding="utf-8")
    (out / "build_trace.json").write_text(
        json.dumps(trace.to_dict(), indent=2) + "\n", encoding="utf-8")
    print(f"built network: {built.node_count} nodes, {built.edge_count} edges, "
          f"core {len(built.core)}")
    return 0


def cmd_analyze(config: RunConfig) -> int:
    out = _out_dir(config)
    loaded = _load_corpus(config)
    built = _read_graph(out)

    trial_log: list[float] = []
    partition, code = community.detect_communities(
        built, trials=config.trials, seed=config.seed, tau=config.tau,
        threads=config.threads, trial_log=trial_log)
    tables.write_partition_csv(partition, out / PARTITION_FILE)
    log_lines = [f"codelength: {code.total!r} bits over "
                 f"{partition.n_communities} communities",
                 f"index term: {code.index_term!r}",
                 f"tau={config.tau} trials={config.trials} seed={config.seed}"]
    log_lines += [f"trial {t}: {L!r}" for t, L in enumerate(trial_log)]
    (out / "detection_log.txt").write_text("\n".join(log_lines) + "\n",
                                           encoding="utf-8")

    profiles = keywords.community_profiles(loaded, built, partition,
                                           k=config.topk)
    if config.min_community_size > 1:
        profiles = [p for p in profiles if p.size >= config.min_community_size]
    tables.write_profiles_csv(profiles, out / "profiles.csv")

    report = metrics.compute_measures(built, partition)
    tables.write_measures_csv(report, out / "measures.csv", partition)
    tables.write_community_means_csv(report.community_averages,
                                     out / "community_means.csv")
    plots.plot_community_measures(report.community_averages,
                                  out / "community_measures.svg")

    reduced = metrics.reduce_by_community(built, partition,
                                          threshold=config.min_weight)
    sizes = partition.sizes()
    graphio.write_reduced_graphml(reduced, out / "reduced.graphml", sizes)
    graphio.write_reduced_dot(reduced, out / "reduced.dot", sizes)
    tables.write_reduced_strength_csv(reduced, out / "reduced_strength.csv")
    plots.plot_community_citations(reduced, out / "community_citations.svg")

    print(f"analyzed: {partition.n_communities} communities, "
          f"codelength {code.total:.6f} bits")
    return 0


def cmd_timeline(config: RunConfig) -> int:
    out = _out_dir(config)
    loaded = _load_corpus(config)
    built = _read_graph(out)
    partition = _read_partition(out)

    series = temporal.publication_series(loaded, built, partition,
                                         split_year=config.split_year)
    tables.write_series_csv(series, out / "series.csv")
    plots.plot_publication_series(series, out / "publication_series.svg")

    years = config.snapshot_years or _default_snapshot_years(loaded, built)
    snapshots = [temporal.snapshot(built, loaded, y) for y in years]
    points = temporal.path_length_series(built, loaded, years)
    tables.write_snapshot_csv(snapshots, points, out / "snapshots.csv")
    plots.plot_snapshot_summary(snapshots, out / "snapshot_summary.svg")
    tables.write_path_length_csv(points, out / "path_lengths.csv")
    plots.plot_path_lengths(points, out / "mean_shortest_path.svg")

    if config.window is not None:
        y0, y1 = config.window
        _, rows = temporal.window_subnetwork(built, loaded, partition, y0, y1)
        tables.write_window_csv(rows, out / "window.csv")

    print(f"timeline: {len(years)} snapshot years, "
          f"{series.total()} dated documents "
          f"({series.undated} without year excluded)")
    return 0


def cmd_layout(config: RunConfig) -> int:
    out = _out_dir(config)
    built = _read_graph(out)
    partition = None
    if (out / PARTITION_FILE).exists():
        partition = tables.read_partition_csv(out / PARTITION_FILE)
    positions = layout_mod.force_directed_layout(built, seed=config.seed)
    tables.write_positions_csv(positions, out / "positions.csv")
    plots.plot_network(built, positions, out / "network.svg", partition)
    print(f"layout: positioned {built.node_count} nodes")
    return 0


def cmd_all(config: RunConfig) -> int:
    code = cmd_build(config)
    if code:
        return code
    if config.window is None:
        # default window: the middle third of the observed year span
        loaded, _ = corpus_mod.load_corpus(config.corpus)
        if loaded.year_range:
            lo, hi = loaded.year_range
            span = hi - lo
            config.window = (lo + span // 3, lo + 2 * span // 3)
    for stage in (cmd_analyze, cmd_timeline, cmd_layout):
        code = stage(config)
        if code:
            return code
    return 0


def cmd_synth(args: argparse.Namespace) -> int:
    if args.preset == "desk":
        spec = synth_mod.desk_spec(seed=args.seed)
    elif args.preset == "benchmark":
        spec = synth_mod.benchmark_spec(seed=args.seed)
    else:
        sizes = (tuple(int(s) for s in args.sizes.split(","))
                 if args.sizes else (args.block_size,) * args.blocks)
        spec = synth_mod.SynthSpec(
            sizes=sizes, p_in=args.p_in, p_out=args.p_out,
            seed_blocks=tuple(int(b) for b in args.seed_blocks.split(",")),
            marker_rate=args.marker_rate, marker_phrase=args.marker_phrase,
            seed=args.seed)
    generated, truth = synth_mod.generate(spec)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    corpus_mod.save_corpus(generated, out / "corpus.jsonl")
    synth_mod.write_ground_truth(truth, out / "ground_truth.csv")
    spec_dict = {f.name: getattr(spec, f.name) for f in fields(spec)}
    (out / "synth_spec.json").write_text(
        json.dumps(spec_dict, indent=2, default=list) + "\n", encoding="utf-8")
    print(f"generated {len(generated)} documents in {spec.n_blocks} blocks "
          f"-> {out / 'corpus.jsonl'}")
    return 0


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON file mirroring RunConfig fields")
    parser.add_argument("--corpus", help="corpus file (JSON lines)")
    parser.add_argument("--query", action="append",
                        help="seed phrase; repeat for alternatives")
    parser.add_argument("--expand-from", dest="expand_from",
                        choices=["core", "all-seeds"],
                        help="expand references of the core (default) or of all seed matches")
    parser.add_argument("--prune-fixpoint", dest="prune_fixpoint",
                        action="store_const", const=True,
                        help="iterate leaf pruning to a fixed point")
    parser.add_argument("--tau", type=float, help="teleportation probability (default 0.15)")
    parser.add_argument("--trials", type=int, help="optimizer restarts (default 20)")
    parser.add_argument("--seed", type=int, help="RNG seed (default 0)")
    parser.add_argument("--topk", type=int, help="keywords per community (default 5)")
    parser.add_argument("--min-weight", dest="min_weight", type=int,
                        help="reduced-network presentation threshold (default 7)")
    parser.add_argument("--min-community-size", dest="min_community_size",
                        type=int, help="hide smaller communities from profiles")
    parser.add_argument("--split-year", dest="split_year", type=int,
                        help="split the publication series plot at this year")
    parser.add_argument("--window", type=_parse_window, metavar="Y0:Y1",
                        help="year window for the comparison table")
    parser.add_argument("--snapshot-years", dest="snapshot_years",
                        type=_parse_years, metavar="Y1,Y2,...",
                        help="snapshot years (default: decades over the corpus range)")
    parser.add_argument("--out", help="output directory (default ./out)")
    parser.add_argument("--threads", type=int, help="worker threads for detection trials")
    parser.add_argument("--load-report", dest="load_report",
                        help="also write the corpus load report as JSON here")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="citenet",
        description="Citation-network analysis: build, analyze, timeline, layout.")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in [
            ("build", "construct the citation network from seed matches"),
            ("analyze", "communities, keyword profiles, measures, reduced network"),
            ("timeline", "publication series, snapshots, window table, path lengths"),
            ("layout", "force-directed drawing of the built network"),
            ("all", "build + analyze + timeline + layout")]:
        p = sub.add_parser(name, help=help_text)
        _add_run_flags(p)

    p = sub.add_parser("synth", help="generate a synthetic corpus with ground truth")
    p.add_argument("--preset", choices=["desk", "benchmark"],
                   help="desk: 3000 docs, one dominant seed block; "
                        "benchmark: 10x30 recovery benchmark")
    p.add_argument("--blocks", type=int, default=4, help="number of blocks")
    p.add_argument("--block-size", dest="block_size", type=int, default=25,
                   help="documents per block")
    p.add_argument("--sizes", help="comma-separated block sizes (overrides --blocks)")
    p.add_argument("--p-in", dest="p_in", type=float, default=0.2,
                   help="within-block citation probability")
    p.add_argument("--p-out", dest="p_out", type=float, default=0.01,
                   help="between-block citation probability")
    p.add_argument("--seed-blocks", dest="seed_blocks", default="0",
                   help="comma-separated blocks carrying the marker phrase")
    p.add_argument("--marker-rate", dest="marker_rate", type=float, default=1.0)
    p.add_argument("--marker-phrase", dest="marker_phrase",
                   default="vortex lattice regulator")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="out")
    return parser


_COMMANDS = {
    "build": cmd_build,
    "analyze": cmd_analyze,
    "timeline": cmd_timeline,
    "layout": cmd_layout,
    "all": cmd_all,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "synth":
            return cmd_synth(args)
        config = RunConfig.from_args(args)
        return _COMMANDS[args.command](config)
    except EmptyResultError as exc:
        print(f"citenet: {exc}", file=sys.stderr)
        return 2
    except CitenetError as exc:
        print(f"citenet: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"citenet: internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
