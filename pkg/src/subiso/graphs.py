"""Directed graphs over dense integer node ids, with bitset adjacency rows.

Node ids are dense integers in ``[0, node_count)``.  Every graph keeps three
views of the same arc set: ordered successor/predecessor lists and one Python
int per node used as a bit vector over node ids, so arc membership and
set-intersection against domains are single big-int operations.

Graphs are immutable after construction and safe to share between solver
runs.
"""
from __future__ import annotations

from typing import Iterable, Iterator, Sequence


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class DirectedGraph:
    """Immutable directed graph.

    Self-loops are rejected unless ``allow_self_loops`` is set; duplicate
    arcs are always rejected (adjacency rows could not represent them).
    """

    __slots__ = ("node_count", "out_adj", "in_adj", "adjacency_rows", "pred_rows")

    def __init__(
        self,
        node_count: int,
        arcs: Iterable[tuple[int, int]] = (),
        *,
        allow_self_loops: bool = False,
    ) -> None:
        if node_count < 0:
            raise ValueError("node_count must be non-negative")
        self.node_count = node_count
        out_rows = [0] * node_count
        in_rows = [0] * node_count
        for u, v in arcs:
            if not (0 <= u < node_count and 0 <= v < node_count):
                raise ValueError(f"arc ({u},{v}) out of range for {node_count} nodes")
            if u == v and not allow_self_loops:
                raise ValueError(f"self-loop on node {u} not permitted")
            if out_rows[u] >> v & 1:
                raise ValueError(f"duplicate arc ({u},{v})")
            out_rows[u] |= 1 << v
            in_rows[v] |= 1 << u
        self.adjacency_rows = out_rows
        self.pred_rows = in_rows
        self.out_adj = [list(iter_bits(m)) for m in out_rows]
        self.in_adj = [list(iter_bits(m)) for m in in_rows]

    @property
    def arc_count(self) -> int:
        return sum(m.bit_count() for m in self.adjacency_rows)

    def has_arc(self, u: int, v: int) -> bool:
        return bool(self.adjacency_rows[u] >> v & 1)

    def arcs(self) -> Iterator[tuple[int, int]]:
        """All arcs sorted by (src, dst)."""
        for u in range(self.node_count):
            for v in self.out_adj[u]:
                yield u, v

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DirectedGraph):
            return NotImplemented
        return (
            self.node_count == other.node_count
            and self.adjacency_rows == other.adjacency_rows
        )

    def __hash__(self) -> int:
        return hash((self.node_count, tuple(self.adjacency_rows)))

    def __repr__(self) -> str:
        return f"DirectedGraph(nodes={self.node_count}, arcs={self.arc_count})"


class UndirectedView:
    """Undirected reading of a directed graph.

    Edge {u,v} exists iff (u,v) or (v,u) is an arc; an antiparallel arc
    pair is a single undirected edge.
    """

    __slots__ = ("base", "adj_rows", "adj")

    def __init__(self, base: DirectedGraph) -> None:
        self.base = base
        self.adj_rows = [
            base.adjacency_rows[v] | base.pred_rows[v] for v in range(base.node_count)
        ]
        self.adj = [list(iter_bits(m)) for m in self.adj_rows]

    @property
    def node_count(self) -> int:
        return self.base.node_count

    def neighbors(self, v: int) -> list[int]:
        return self.adj[v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj_rows[u] >> v & 1)

    def edges(self) -> Iterator[tuple[int, int]]:
        """Undirected edges as (u, v) with u < v."""
        for u in range(self.node_count):
            for v in self.adj[u]:
                if u < v:
                    yield u, v


def connected_components(
    g: UndirectedView, active: Iterable[int]
) -> list[list[int]]:
    """Components of the subgraph induced by ``active``, as sorted node lists.

    Paths may only pass through active nodes.  Runs in O(|V|+|E|).
    """
    active_mask = 0
    for v in active:
        active_mask |= 1 << v
    rows = g.adj_rows
    components: list[list[int]] = []
    remaining = active_mask
    while remaining:
        start = (remaining & -remaining).bit_length() - 1
        seen = 1 << start
        frontier = seen
        while frontier:
            reach = 0
            for v in iter_bits(frontier):
                reach |= rows[v]
            frontier = reach & active_mask & ~seen
            seen |= frontier
        components.append(list(iter_bits(seen)))
        remaining &= ~seen
    return components


def is_singly_connected(g: UndirectedView, active: Iterable[int]) -> bool:
    """True iff the subgraph induced by ``active`` is a forest."""
    active_list = list(active)
    active_mask = 0
    for v in active_list:
        active_mask |= 1 << v
    edges = (
        sum((g.adj_rows[v] & active_mask).bit_count() for v in active_list) // 2
    )
    n_components = len(connected_components(g, active_list))
    return edges == len(active_list) - n_components


def degree_stats(
    g: DirectedGraph, *, convention: str = "undirected"
) -> tuple[float, float]:
    """Mean and population standard deviation of per-node degree.

    ``convention`` selects the degree notion:
      * ``"undirected"`` -- number of distinct undirected neighbors; an
        antiparallel arc pair counts once (the default).
      * ``"arcs"`` -- in-degree plus out-degree, counting arcs.
    """
    n = g.node_count
    if n == 0:
        raise ValueError("empty graph")
    if convention == "undirected":
        degs = [
            (g.adjacency_rows[v] | g.pred_rows[v]).bit_count() for v in range(n)
        ]
    elif convention == "arcs":
        degs = [
            g.adjacency_rows[v].bit_count() + g.pred_rows[v].bit_count()
            for v in range(n)
        ]
    else:
        raise ValueError(f"unknown degree convention {convention!r}")
    mean = sum(degs) / n
    var = sum((d - mean) ** 2 for d in degs) / n
    return mean, var**0.5
