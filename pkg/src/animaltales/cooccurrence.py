"""Substitution-adjusted animal co-occurrence graph and its exporters."""

from __future__ import annotations

from dataclasses import dataclass, field
from xml.sax.saxutils import quoteattr

from .errors import InvariantError, ValidationError
from .extraction import MentionTable

EXPORT_FORMATS = ("dot", "graphml", "json")

# 9-step sequential ramp, light gray to near-black, for DOT edge colors.
_GRAY_RAMP = ["#%02x%02x%02x" % ((224 - 26 * i,) * 3) for i in range(9)]

_PENWIDTH_MIN = 1.0
_PENWIDTH_MAX = 4.0


@dataclass
class CooccurrenceGraph:
    """Weighted undirected animal graph; keys are sorted unordered pairs."""

    nodes: dict[str, int] = field(default_factory=dict)  # name -> mention count
    edges: dict[tuple[str, str], int] = field(default_factory=dict)
    threshold: int | None = None


def build_graph(table: MentionTable, multiset: bool = False) -> CooccurrenceGraph:
    """Count co-occurring pairs per tale and subtract substitutable pairs.

    By default an animal pair counts once per tale regardless of repeated
    mentions; ``multiset=True`` weighs each pair by the product of the two
    names' per-tale mention multiplicities (sensitivity mode).
    """
    edges: dict[tuple[str, str], int] = {}

    per_tale_mult: dict[str, dict[str, int]] = {}
    if multiset:
        for m in table.mentions:
            tale = per_tale_mult.setdefault(m.tale_id, {})
            tale[m.canonical] = tale.get(m.canonical, 0) + 1

    for tid, names in table.per_tale_sets.items():
        ordered = sorted(names)
        for i, a in enumerate(ordered):
            for b in ordered[i + 1 :]:
                if multiset:
                    mult = per_tale_mult[tid]
                    weight = mult[a] * mult[b]
                else:
                    weight = 1
                edges[(a, b)] = edges.get((a, b), 0) + weight

    for tid, pairs in table.substitution_pairs.items():
        for pair in pairs:
            key = tuple(sorted(pair))
            edges[key] = edges.get(key, 0) - 1

    for pair, weight in edges.items():
        if weight < 0:
            raise InvariantError(
                f"substitution count exceeds combination count for pair {pair}: {weight}"
            )

    return CooccurrenceGraph(nodes=dict(table.counts), edges=edges, threshold=None)


def filter_graph(g: CooccurrenceGraph, min_weight: int) -> CooccurrenceGraph:
    """Keep edges strictly heavier than ``min_weight``; drop isolated nodes."""
    if min_weight < 0:
        raise ValidationError(f"min_weight must be >= 0, got {min_weight}")
    edges = {pair: w for pair, w in g.edges.items() if w > min_weight}
    kept = {name for pair in edges for name in pair}
    nodes = {name: count for name, count in g.nodes.items() if name in kept}
    return CooccurrenceGraph(nodes=nodes, edges=edges, threshold=min_weight)


def _edge_scale(weights: list[int]) -> dict[int, float]:
    lo, hi = min(weights), max(weights)
    if hi == lo:
        return {w: 0.5 for w in weights}
    return {w: (w - lo) / (hi - lo) for w in weights}


def export_dot(g: CooccurrenceGraph) -> str:
    """Render the graph as deterministic Graphviz DOT.

    Edge ``penwidth`` scales linearly between the lightest and heaviest
    surviving weight; colors walk a 9-step gray-to-dark ramp. Layout is left
    to the rendering tool.
    """
    lines = ["graph cooccurrence {"]
    for name in sorted(g.nodes):
        lines.append(f'  "{name}";')
    if g.edges:
        scale = _edge_scale(list(g.edges.values()))
        for (a, b), w in sorted(g.edges.items()):
            t = scale[w]
            penwidth = _PENWIDTH_MIN + (_PENWIDTH_MAX - _PENWIDTH_MIN) * t
            color = _GRAY_RAMP[round(t * 8)]
            lines.append(
                f'  "{a}" -- "{b}" [weight={w}, penwidth={penwidth:.2f}, color="{color}"];'
            )
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_graphml(g: CooccurrenceGraph) -> str:
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<graphml xmlns="http://graphml.graphdrawing.org/xmlns">',
        '  <key id="count" for="node" attr.name="count" attr.type="int"/>',
        '  <key id="weight" for="edge" attr.name="weight" attr.type="int"/>',
        '  <graph id="cooccurrence" edgedefault="undirected">',
    ]
    for name in sorted(g.nodes):
        lines.append(f"    <node id={quoteattr(name)}>")
        lines.append(f'      <data key="count">{g.nodes[name]}</data>')
        lines.append("    </node>")
    for (a, b), w in sorted(g.edges.items()):
        lines.append(f"    <edge source={quoteattr(a)} target={quoteattr(b)}>")
        lines.append(f'      <data key="weight">{w}</data>')
        lines.append("    </edge>")
    lines.append("  </graph>")
    lines.append("</graphml>")
    return "\n".join(lines) + "\n"


def graph_to_dict(g: CooccurrenceGraph) -> dict:
    return {
        "nodes": [{"name": name, "count": g.nodes[name]} for name in sorted(g.nodes)],
        "edges": [
            {"a": a, "b": b, "weight": w} for (a, b), w in sorted(g.edges.items())
        ],
        "threshold": g.threshold,
    }


def graph_from_dict(data: dict) -> CooccurrenceGraph:
    return CooccurrenceGraph(
        nodes={entry["name"]: entry["count"] for entry in data["nodes"]},
        edges={(e["a"], e["b"]): e["weight"] for e in data["edges"]},
        threshold=data.get("threshold"),
    )


def export_graph(g: CooccurrenceGraph, format: str, out) -> None:
    """Write the graph to a stream as ``dot``, ``graphml`` or ``json``."""
    if format == "dot":
        out.write(export_dot(g))
    elif format == "graphml":
        out.write(export_graphml(g))
    elif format == "json":
        import json

        out.write(json.dumps(graph_to_dict(g), sort_keys=True, indent=2) + "\n")
    else:
        raise ValidationError(f"unknown export format {format!r}; expected one of {EXPORT_FORMATS}")
