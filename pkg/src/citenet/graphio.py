"""Graph serialization: GraphML, DOT, and edge-list CSV.

Node attributes carried by exports: ``is_seed``, ``in_core``, ``year``,
``doc_type`` and ``community`` (when assigned). Attribute values
round-trip exactly; element order is fixed (sorted nodes/edges) so a
rerun writes identical files.

The DOT reader only parses the subset this module writes; it exists so
DOT exports round-trip too. GraphML uses networkx for the XML layer.
"""

from __future__ import annotations

import csv
import re
from pathlib import Path

import networkx as nx

from .corpus import Corpus, DocType
from .errors import GraphError
from .graph import CitationGraph
from .community import Partition
from .metrics import ReducedGraph

_NODE_ATTRS = ("is_seed", "in_core", "year", "doc_type", "community")


def node_attributes(graph: CitationGraph, corpus: Corpus | None = None,
                    partition: Partition | None = None) -> dict[str, dict]:
    """Assemble the exportable attribute dict for every node."""
    attrs: dict[str, dict] = {}
    for u in graph.nodes:
        a: dict = {"is_seed": graph.is_seed(u), "in_core": graph.in_core(u)}
        if corpus is not None and u in corpus:
            doc = corpus[u]
            if doc.year is not None:
                a["year"] = doc.year
            a["doc_type"] = doc.doc_type.value
        if partition is not None:
            a["community"] = partition.community_of(u)
        attrs[u] = a
    return attrs


def to_networkx(graph: CitationGraph, corpus: Corpus | None = None,
                partition: Partition | None = None) -> nx.DiGraph:
    """Convert to a networkx DiGraph with export attributes, inserting
    nodes and edges in sorted order."""
    attrs = node_attributes(graph, corpus, partition)
    g = nx.DiGraph()
    for u in graph.nodes:
        g.add_node(u, **attrs[u])
    for u, v in graph.edges():
        g.add_edge(u, v)
    return g


def from_networkx(g: nx.DiGraph) -> tuple[CitationGraph, dict[str, dict]]:
    """Rebuild a CitationGraph (plus leftover per-node attributes) from a
    networkx DiGraph carrying the export attributes."""
    seeds = {u for u, d in g.nodes(data=True) if d.get("is_seed")}
    core = {u for u, d in g.nodes(data=True) if d.get("in_core")}
    graph = CitationGraph(list(g.nodes), list(g.edges), seeds=seeds, core=core)
    attrs = {u: {k: v for k, v in d.items() if k in ("year", "doc_type", "community")}
             for u, d in g.nodes(data=True)}
    return graph, attrs


def write_graphml(graph: CitationGraph, path: str | Path,
                  corpus: Corpus | None = None,
                  partition: Partition | None = None) -> None:
    nx.write_graphml(to_networkx(graph, corpus, partition), str(path))


def read_graphml(path: str | Path) -> tuple[CitationGraph, dict[str, dict]]:
    return from_networkx(nx.read_graphml(str(path)))


# -- DOT -------------------------------------------------------------------

def _dot_quote(value: str) -> str:
    return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _dot_attr(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    return _dot_quote(str(value))


def write_dot(graph: CitationGraph, path: str | Path,
              corpus: Corpus | None = None,
              partition: Partition | None = None,
              name: str = "citations") -> None:
    attrs = node_attributes(graph, corpus, partition)
    lines = [f"digraph {name} {{"]
    for u in graph.nodes:
        pairs = ", ".join(f"{k}={_dot_attr(v)}" for k, v in sorted(attrs[u].items()))
        lines.append(f"  {_dot_quote(u)} [{pairs}];")
    for u, v in graph.edges():
        lines.append(f"  {_dot_quote(u)} -> {_dot_quote(v)};")
    lines.append("}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


_DOT_NODE_RE = re.compile(r'^\s*"((?:[^"\\]|\\.)*)"\s*\[(.*)\];\s*$')
_DOT_EDGE_RE = re.compile(r'^\s*"((?:[^"\\]|\\.)*)"\s*->\s*"((?:[^"\\]|\\.)*)"\s*(?:\[(.*)\])?;\s*$')
_DOT_PAIR_RE = re.compile(r'(\w+)=("(?:[^"\\]|\\.)*"|\S+?)(?:,\s*|$)')


def _dot_unquote(raw: str) -> str:
    return raw.replace('\\"', '"').replace("\\\\", "\\")


def _dot_value(raw: str):
    if raw.startswith('"'):
        return _dot_unquote(raw[1:-1])
    if raw == "true":
        return True
    if raw == "false":
        return False
    try:
        return int(raw)
    except ValueError:
        return raw


def read_dot(path: str | Path) -> tuple[CitationGraph, dict[str, dict]]:
    """Parse a DOT file written by write_dot."""
    nodes: dict[str, dict] = {}
    edges: list[tuple[str, str]] = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        edge = _DOT_EDGE_RE.match(line)
        if edge:
            edges.append((_dot_unquote(edge.group(1)), _dot_unquote(edge.group(2))))
            continue
        node = _DOT_NODE_RE.match(line)
        if node:
            attrs = {key: _dot_value(raw)
                     for key, raw in _DOT_PAIR_RE.findall(node.group(2))}
            nodes[_dot_unquote(node.group(1))] = attrs
    if not nodes and not edges:
        raise GraphError(f"no graph content found in {path}")
    for u, v in edges:
        nodes.setdefault(u, {})
        nodes.setdefault(v, {})
    seeds = {u for u, a in nodes.items() if a.get("is_seed")}
    core = {u for u, a in nodes.items() if a.get("in_core")}
    graph = CitationGraph(list(nodes), edges, seeds=seeds, core=core)
    attrs = {u: {k: v for k, v in a.items() if k in ("year", "doc_type", "community")}
             for u, a in nodes.items()}
    return graph, attrs


def write_reduced_dot(reduced: ReducedGraph, path: str | Path,
                      sizes: dict[int, int] | None = None,
                      apply_threshold: bool = True,
                      name: str = "communities") -> None:
    """Community-level DOT with ``weight`` edge attributes. With
    ``apply_threshold`` only edges at or above the presentation threshold
    are written (full weights always live in the ReducedGraph)."""
    weights = reduced.thresholded() if apply_threshold else reduced.weights
    lines = [f"digraph {name} {{"]
    for cid in reduced.community_ids:
        attr = f" [size={sizes[cid]}]" if sizes else ""
        lines.append(f'  "{cid}"{attr};')
    for (cu, cv) in sorted(weights):
        lines.append(f'  "{cu}" -> "{cv}" [weight={weights[(cu, cv)]}];')
    lines.append("}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_reduced_graphml(reduced: ReducedGraph, path: str | Path,
                          sizes: dict[int, int] | None = None) -> None:
    """Community-level GraphML with full (unthresholded) weights."""
    g = nx.DiGraph()
    for cid in reduced.community_ids:
        if sizes:
            g.add_node(str(cid), size=sizes[cid])
        else:
            g.add_node(str(cid))
    for (cu, cv) in sorted(reduced.weights):
        g.add_edge(str(cu), str(cv), weight=reduced.weights[(cu, cv)])
    nx.write_graphml(g, str(path))


def write_edge_csv(graph: CitationGraph, path: str | Path) -> None:
    """Edge list: source,target (source cites target)."""
    with Path(path).open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["source", "target"])
        for u, v in graph.edges():
            writer.writerow([u, v])
