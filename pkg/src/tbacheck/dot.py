"""Graphviz rendering of zone graphs and guessing zone graphs."""

from __future__ import annotations

from .graph import GuessingZoneGraph, Semantics, ZoneGraph
from .model import TBA


def _escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def _quote(s: str) -> str:
    return f'"{_escape(s)}"'


def _lines(parts) -> str:
    """Quoted DOT label with one line per part."""
    return '"' + "\\n".join(_escape(p) for p in parts) + '"'


def _edge_text(a: TBA, label) -> str:
    t = a.transitions[label]
    return t.label if t.label is not None else f"t{label}"


def to_dot(a: TBA, kind: str = "zg", max_nodes=None) -> str:
    """Whole reachable ZG (``kind="zg"``) or GZG as a DOT digraph; tau edges are dashed."""
    sem = Semantics(a)
    if kind == "zg":
        g = ZoneGraph(sem, max_nodes)
    elif kind == "gzg":
        g = GuessingZoneGraph(sem, max_nodes)
    else:
        raise ValueError(f"unknown graph kind {kind!r}")
    g.explore()
    lines = [f"digraph {_quote(a.name or kind)} {{", "  node [shape=box, style=rounded];"]
    for i, node in enumerate(g.store.nodes):
        parts = [node.state, node.zone.describe(a.clocks)]
        if kind == "gzg":
            parts.append("{" + ",".join(a.clock_name(x) for x in sorted(node.guess)) + "}")
        attrs = f"label={_lines(parts)}"
        if node.state in a.accepting:
            attrs += ", peripheries=2"
        if i == 0:
            attrs += ", penwidth=2"
        lines.append(f"  n{i} [{attrs}];")
    for i in range(len(g.store)):
        for e in g.successors(i):
            if e.label is None:
                lines.append(f'  n{i} -> n{e.dst} [style=dashed, label="tau"];')
            else:
                lines.append(f"  n{i} -> n{e.dst} [label={_quote(_edge_text(a, e.label))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
