"""Plain-text graph files.

Line 1: ``p <node_count> <arc_count>``, then one ``a <src> <dst>`` line per
arc.  ``#`` starts a comment line; ids are 0-based decimal.  Writing sorts
arcs by (src, dst) so write/read round-trips are exact and deterministic.
"""
from __future__ import annotations

from pathlib import Path
from typing import Union

from .graphs import DirectedGraph


class GraphFormatError(ValueError):
    """Malformed graph file; the message names the offending line."""


def parse_graph(text: str, source: str = "<string>") -> DirectedGraph:
    node_count = None
    declared_arcs = None
    arcs: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if fields[0] == "p":
            if node_count is not None:
                raise GraphFormatError(f"{source}:{lineno}: repeated 'p' line")
            if len(fields) != 3:
                raise GraphFormatError(
                    f"{source}:{lineno}: expected 'p <nodes> <arcs>'"
                )
            try:
                node_count = int(fields[1])
                declared_arcs = int(fields[2])
            except ValueError:
                raise GraphFormatError(
                    f"{source}:{lineno}: non-integer counts in 'p' line"
                ) from None
            if node_count < 0 or declared_arcs < 0:
                raise GraphFormatError(f"{source}:{lineno}: negative count")
        elif fields[0] == "a":
            if node_count is None:
                raise GraphFormatError(
                    f"{source}:{lineno}: arc before the 'p' header"
                )
            if len(fields) != 3:
                raise GraphFormatError(f"{source}:{lineno}: expected 'a <src> <dst>'")
            try:
                u, v = int(fields[1]), int(fields[2])
            except ValueError:
                raise GraphFormatError(
                    f"{source}:{lineno}: non-integer node id"
                ) from None
            if not (0 <= u < node_count and 0 <= v < node_count):
                raise GraphFormatError(
                    f"{source}:{lineno}: node id out of range [0, {node_count})"
                )
            if u == v:
                raise GraphFormatError(f"{source}:{lineno}: self-loop ({u},{v})")
            if (u, v) in seen:
                raise GraphFormatError(f"{source}:{lineno}: duplicate arc ({u},{v})")
            seen.add((u, v))
            arcs.append((u, v))
        else:
            raise GraphFormatError(
                f"{source}:{lineno}: unknown record type {fields[0]!r}"
            )
    if node_count is None:
        raise GraphFormatError(f"{source}: missing 'p' header line")
    if declared_arcs != len(arcs):
        raise GraphFormatError(
            f"{source}: header declares {declared_arcs} arcs, found {len(arcs)}"
        )
    return DirectedGraph(node_count, arcs)


def serialize_graph(g: DirectedGraph) -> str:
    lines = [f"p {g.node_count} {g.arc_count}"]
    lines.extend(f"a {u} {v}" for u, v in g.arcs())
    return "\n".join(lines) + "\n"


def read_graph(path: Union[str, Path]) -> DirectedGraph:
    path = Path(path)
    return parse_graph(path.read_text(), source=str(path))


def write_graph(g: DirectedGraph, path: Union[str, Path]) -> None:
    Path(path).write_text(serialize_graph(g))
