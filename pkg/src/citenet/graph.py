"""Directed citation graph and the staged network construction pipeline.

Construction runs in four stages: (a) a graph over the seed documents
matching the query, reduced to its largest weakly connected component
(the *core*); (b) expansion with the documents the core cites; (c) removal
of expanded nodes with indegree <= 1 followed by another largest-component
pass; (d) closure: citation edges among the surviving expanded nodes (and
from expanded nodes back to seeds) are added.

Edge direction is citing -> cited throughout.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .corpus import Corpus, Query, select_seeds
from .errors import GraphError, NoSeedMatchesError


class CitationGraph:
    """Simple directed graph over document ids, immutable once built.

    Nodes carry two flags: ``is_seed`` (document matched the query) and
    ``in_core`` (member of the seed graph's largest component). No
    self-loops, no duplicate edges; both endpoints of every edge are nodes.
    """

    __slots__ = ("_out", "_in", "_seeds", "_core", "_edge_count")

    def __init__(self, nodes, edges, seeds=(), core=()):
        out: dict[str, set[str]] = {node: set() for node in nodes}
        inn: dict[str, set[str]] = {node: set() for node in nodes}
        for u, v in edges:
            if u == v:
                raise GraphError(f"self-loop on node {u!r}")
            if u not in out or v not in out:
                raise GraphError(f"edge ({u!r}, {v!r}) has endpoint outside node set")
            out[u].add(v)
            inn[v].add(u)
        self._out = {u: tuple(sorted(vs)) for u, vs in out.items()}
        self._in = {u: tuple(sorted(vs)) for u, vs in inn.items()}
        self._seeds = frozenset(seeds)
        self._core = frozenset(core)
        if not self._seeds.issuperset(self._core):
            raise GraphError("core flag set on a non-seed node")
        missing = (self._seeds | self._core) - set(self._out)
        if missing:
            raise GraphError(f"flagged nodes missing from graph: {sorted(missing)[:5]}")
        self._edge_count = sum(len(vs) for vs in self._out.values())

    # -- basic accessors ---------------------------------------------------

    @property
    def node_count(self) -> int:
        return len(self._out)

    @property
    def edge_count(self) -> int:
        return self._edge_count

    @property
    def nodes(self) -> tuple[str, ...]:
        return tuple(sorted(self._out))

    def edges(self):
        """All edges as (citing, cited) pairs, sorted."""
        for u in sorted(self._out):
            for v in self._out[u]:
                yield (u, v)

    def has_node(self, u: str) -> bool:
        return u in self._out

    def has_edge(self, u: str, v: str) -> bool:
        return u in self._out and v in self._out[u]

    def successors(self, u: str) -> tuple[str, ...]:
        return self._out[u]

    def predecessors(self, u: str) -> tuple[str, ...]:
        return self._in[u]

    def out_degree(self, u: str) -> int:
        return len(self._out[u])

    def in_degree(self, u: str) -> int:
        return len(self._in[u])

    @property
    def seeds(self) -> frozenset[str]:
        return self._seeds

    @property
    def core(self) -> frozenset[str]:
        return self._core

    def is_seed(self, u: str) -> bool:
        return u in self._seeds

    def in_core(self, u: str) -> bool:
        return u in self._core

    # -- undirected projection ----------------------------------------------

    def undirected_neighbors(self, u: str) -> tuple[str, ...]:
        return tuple(sorted(set(self._out[u]) | set(self._in[u])))

    def undirected_degree(self, u: str) -> int:
        return len(set(self._out[u]) | set(self._in[u]))

    def undirected_edge_count(self) -> int:
        """Edges of the simple undirected projection (antiparallel pairs
        collapse to one)."""
        total = sum(self.undirected_degree(u) for u in self._out)
        return total // 2

    def average_undirected_degree(self) -> float:
        n = self.node_count
        if n == 0:
            return 0.0
        return 2.0 * self.undirected_edge_count() / n

    # -- derived graphs ------------------------------------------------------

    def subgraph(self, keep) -> "CitationGraph":
        """Induced subgraph on ``keep``; seed/core flags are intersected."""
        keep = set(keep)
        unknown = keep - set(self._out)
        if unknown:
            raise GraphError(f"subgraph nodes not present: {sorted(unknown)[:5]}")
        edges = [(u, v) for u in keep for v in self._out[u] if v in keep]
        return CitationGraph(keep, edges, seeds=self._seeds & keep,
                             core=self._core & keep)

    def with_flags(self, seeds=None, core=None) -> "CitationGraph":
        """Copy with replaced seed/core flag sets."""
        return CitationGraph(
            self._out, list(self.edges()),
            seeds=self._seeds if seeds is None else seeds,
            core=self._core if core is None else core,
        )

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, CitationGraph)
                and self._out == other._out
                and self._seeds == other._seeds
                and self._core == other._core)

    def __repr__(self) -> str:
        return (f"CitationGraph(n={self.node_count}, m={self.edge_count}, "
                f"seeds={len(self._seeds)}, core={len(self._core)})")


@dataclass(frozen=True)
class StageCount:
    stage: str
    nodes: int
    edges: int


@dataclass(frozen=True)
class BuildTrace:
    """Audit record of one construction run: per-stage sizes, component
    sizes at each largest-component selection, and removals."""

    stages: tuple[StageCount, ...]
    seed_component_sizes: tuple[int, ...]
    pruned_component_sizes: tuple[int, ...]
    removed_low_indegree: tuple[str, ...]
    dropped_other_components: tuple[str, ...]
    external_references_skipped: int
    expand_from: str
    prune_fixpoint: bool

    def stage(self, name: str) -> StageCount:
        for s in self.stages:
            if s.stage == name:
                return s
        raise KeyError(name)

    def summary(self) -> str:
        lines = ["network construction trace"]
        for s in self.stages:
            lines.append(f"  {s.stage:<10s} nodes={s.nodes:<8d} edges={s.edges}")
        lines.append(f"  seed component sizes   : {list(self.seed_component_sizes)}")
        lines.append(f"  pruned component sizes : {list(self.pruned_component_sizes)}")
        lines.append(f"  removed (indegree<=1)  : {len(self.removed_low_indegree)}")
        lines.append(f"  dropped (off-component): {len(self.dropped_other_components)}")
        lines.append(f"  external refs skipped  : {self.external_references_skipped}")
        lines.append(f"  expand_from={self.expand_from} prune_fixpoint={self.prune_fixpoint}")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "stages": [{"stage": s.stage, "nodes": s.nodes, "edges": s.edges}
                       for s in self.stages],
            "seed_component_sizes": list(self.seed_component_sizes),
            "pruned_component_sizes": list(self.pruned_component_sizes),
            "removed_low_indegree": list(self.removed_low_indegree),
            "dropped_other_components": list(self.dropped_other_components),
            "external_references_skipped": self.external_references_skipped,
            "expand_from": self.expand_from,
            "prune_fixpoint": self.prune_fixpoint,
        }


def weak_components(graph: CitationGraph) -> list[set[str]]:
    """Weakly connected components, largest first; ties broken so the
    component containing the lexicographically smallest node id comes first."""
    unvisited = set(graph.nodes)
    components: list[set[str]] = []
    while unvisited:
        start = next(iter(unvisited))
        comp = {start}
        queue = deque([start])
        unvisited.discard(start)
        while queue:
            u = queue.popleft()
            for v in graph.undirected_neighbors(u):
                if v in unvisited:
                    unvisited.discard(v)
                    comp.add(v)
                    queue.append(v)
        components.append(comp)
    components.sort(key=lambda comp: (-len(comp), min(comp)))
    return components


def largest_weak_component(graph: CitationGraph) -> CitationGraph:
    """Induced subgraph on the largest weakly connected component."""
    if graph.node_count == 0:
        raise GraphError("empty graph")
    return graph.subgraph(weak_components(graph)[0])


def seed_graph(corpus: Corpus, seeds: set[str]) -> CitationGraph:
    """Graph over the seed documents and the citations among them."""
    unknown = set(seeds) - corpus.ids()
    if unknown:
        raise GraphError(f"seed ids not in corpus: {sorted(unknown)[:5]}")
    edges = [(u, v) for u in seeds for v in corpus[u].references if v in seeds]
    return CitationGraph(seeds, edges, seeds=seeds)


def expand_with_references(corpus: Corpus, core: CitationGraph) -> CitationGraph:
    """Add, for every seed node, its in-corpus reference targets that are
    not already present, plus the citing edge. No edges among the newly
    added nodes are created here."""
    nodes = set(core.nodes)
    edges = list(core.edges())
    added: set[str] = set()
    for u in core.nodes:
        if not core.is_seed(u):
            continue
        for v in corpus[u].references:
            if v not in corpus:
                continue  # reference target outside the corpus: skipped
            if v in nodes or v in added:
                if v in added:
                    edges.append((u, v))
                continue
            added.add(v)
            edges.append((u, v))
    return CitationGraph(nodes | added, edges, seeds=core.seeds, core=core.core)


def count_external_references(corpus: Corpus, graph: CitationGraph) -> int:
    """Reference instances from seed nodes whose target is not in the corpus."""
    return sum(
        1
        for u in graph.nodes if graph.is_seed(u)
        for v in corpus[u].references if v not in corpus
    )


def remove_low_indegree(graph: CitationGraph,
                        fixpoint: bool = False) -> tuple[CitationGraph, tuple[str, ...]]:
    """Drop every non-seed node with indegree <= 1 in one simultaneous pass
    (optionally iterated to a fixed point). Returns the reduced graph and
    the removed ids."""
    g = graph
    removed: list[str] = []
    while True:
        doomed = {u for u in g.nodes if not g.is_seed(u) and g.in_degree(u) <= 1}
        if not doomed:
            break
        removed.extend(doomed)
        g = g.subgraph(set(g.nodes) - doomed)
        if not fixpoint:
            break
    return g, tuple(sorted(removed))


def prune_expanded(graph: CitationGraph, fixpoint: bool = False) -> CitationGraph:
    """Pruning stage: low-indegree removal then largest-component selection."""
    reduced, _ = remove_low_indegree(graph, fixpoint=fixpoint)
    return largest_weak_component(reduced)


def close_expanded_edges(corpus: Corpus, graph: CitationGraph) -> CitationGraph:
    """Add citation edges whose source is a surviving non-seed node and
    whose target survives (expanded->expanded and expanded->seed)."""
    nodes = set(graph.nodes)
    edges = list(graph.edges())
    for u in graph.nodes:
        if graph.is_seed(u):
            continue
        for v in corpus[u].references:
            if v in nodes and v != u:
                edges.append((u, v))
    return CitationGraph(nodes, edges, seeds=graph.seeds, core=graph.core)


def build_network(corpus: Corpus, query: Query, *,
                  expand_from: str = "core",
                  prune_fixpoint: bool = False) -> tuple[CitationGraph, BuildTrace]:
    """Run the full construction pipeline. Deterministic for a given
    corpus and query.

    ``expand_from`` selects whether expansion follows references of the
    core only (default) or of every initial seed match ("all-seeds").
    """
    if expand_from not in ("core", "all-seeds"):
        raise GraphError(f"unknown expand_from mode: {expand_from!r}")

    seeds = select_seeds(corpus, query)
    if not seeds:
        raise NoSeedMatchesError("no seed matches")
    g_seeds = seed_graph(corpus, seeds)
    stages = [StageCount("seeds", g_seeds.node_count, g_seeds.edge_count)]

    seed_components = weak_components(g_seeds)
    core_nodes = seed_components[0]
    g_core = g_seeds.subgraph(core_nodes).with_flags(core=core_nodes)
    if g_core.node_count == 0:
        raise GraphError("empty core")
    stages.append(StageCount("core", g_core.node_count, g_core.edge_count))

    expansion_base = g_core if expand_from == "core" else g_seeds.with_flags(core=core_nodes)
    g_expanded = expand_with_references(corpus, expansion_base)
    skipped = count_external_references(corpus, expansion_base)
    stages.append(StageCount("expanded", g_expanded.node_count, g_expanded.edge_count))

    g_reduced, removed = remove_low_indegree(g_expanded, fixpoint=prune_fixpoint)
    pruned_components = weak_components(g_reduced)
    g_pruned = g_reduced.subgraph(pruned_components[0])
    dropped = tuple(sorted(set(g_reduced.nodes) - set(g_pruned.nodes)))
    stages.append(StageCount("pruned", g_pruned.node_count, g_pruned.edge_count))

    g_final = close_expanded_edges(corpus, g_pruned)
    stages.append(StageCount("closed", g_final.node_count, g_final.edge_count))

    trace = BuildTrace(
        stages=tuple(stages),
        seed_component_sizes=tuple(len(c) for c in seed_components),
        pruned_component_sizes=tuple(len(c) for c in pruned_components),
        removed_low_indegree=removed,
        dropped_other_components=dropped,
        external_references_skipped=skipped,
        expand_from=expand_from,
        prune_fixpoint=prune_fixpoint,
    )
    return g_final, trace


def full_graph(corpus: Corpus) -> CitationGraph:
    """Citation graph over the whole corpus (all in-corpus references),
    with no seed/core flags. Useful for benchmarks and direct analyses."""
    ids = corpus.ids()
    edges = [(doc.id, v) for doc in corpus for v in doc.references if v in ids]
    return CitationGraph(ids, edges)
