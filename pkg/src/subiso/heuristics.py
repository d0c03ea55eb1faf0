"""Static variable-set heuristics and dynamic variable selection.

Both static heuristics pick a set S of pattern variables whose
instantiation makes the reduced morphism graph likely to fall apart:

* the cycle heuristic peels away nodes of degree <= 1 until none remain and
  returns the survivors (the 2-core), so the pattern minus S is a forest;
* the partition heuristic finds a balanced 2-partition with a small edgecut
  by move-based local search, then covers the cut edges greedily with nodes
  (a nodecut); assigning the nodecut disconnects the two sides.

Dynamic selection policies: maxcstr (most constraints to other unassigned
variables), minsize (smallest domain), or a fixed static order.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from math import ceil
from typing import Iterable, Optional, Sequence, Union

from .graphs import UndirectedView
from .model import SearchState


@dataclass(frozen=True)
class HeuristicResult:
    """Ordered variable set S and its size as a fraction of the pattern."""

    body_vars: tuple[int, ...]
    fraction: float


def _order_by_degree(view: UndirectedView, nodes: Iterable[int]) -> tuple[int, ...]:
    # High-connectivity separator nodes first; ties by id for determinism.
    return tuple(sorted(nodes, key=lambda v: (-view.degree(v), v)))


def cycle_heuristic(pattern: UndirectedView) -> HeuristicResult:
    """Survivors of iterated degree-<=1 peeling (the undirected 2-core).

    Queue-based peeling with incremental degree counters, O(|V|+|E|).
    Removing the returned set from the pattern leaves a forest; a forest
    input yields an empty set.
    """
    n = pattern.node_count
    degree = [pattern.degree(v) for v in range(n)]
    removed = [False] * n
    queue = [v for v in range(n) if degree[v] <= 1]
    while queue:
        v = queue.pop()
        if removed[v]:
            continue
        removed[v] = True
        for w in pattern.neighbors(v):
            if not removed[w]:
                degree[w] -= 1
                if degree[w] <= 1:
                    queue.append(w)
    survivors = [v for v in range(n) if not removed[v]]
    return HeuristicResult(
        _order_by_degree(pattern, survivors), len(survivors) / n if n else 0.0
    )


def _edgecut(view: UndirectedView, side: Sequence[int]) -> int:
    return sum(1 for u, v in view.edges() if side[u] != side[v])


def partition_heuristic(
    pattern: UndirectedView,
    rng_seed: int,
    *,
    restarts: int = 8,
    balance_tol: Optional[int] = None,
) -> HeuristicResult:
    """Nodecut of a low-edgecut balanced 2-partition of the pattern.

    Local search: gain-driven single-node moves with per-pass node locking
    (each pass applies the best feasible move, keeps the best prefix, and
    repeats while passes improve), over ``restarts`` random starts.  Both
    sides must stay within ``balance_tol`` of half the nodes (default
    ceil(0.1 * n)) and nonempty.  The nodecut is built greedily: repeatedly
    take the node covering the most uncovered cut edges.
    """
    n = pattern.node_count
    if n < 2:
        raise ValueError("partition heuristic needs at least 2 nodes")
    tol = ceil(0.1 * n) if balance_tol is None else balance_tol
    rng = random.Random(rng_seed)
    edges = list(pattern.edges())

    def feasible(size1: int) -> bool:
        return 0 < size1 < n and abs(size1 - n / 2) <= tol

    best_cut: Optional[int] = None
    best_side: Optional[list[int]] = None
    for _ in range(restarts):
        nodes = list(range(n))
        rng.shuffle(nodes)
        side = [0] * n
        for v in nodes[: n // 2]:
            side[v] = 1
        size1 = n // 2
        cut = _edgecut(pattern, side)
        improved = True
        while improved:
            improved = False
            locked = [False] * n
            pass_best_cut = cut
            pass_best_moves: list[int] = []
            moves: list[int] = []
            while True:
                best_gain = None
                best_node = None
                for v in range(n):
                    if locked[v]:
                        continue
                    new_size1 = size1 + (1 if side[v] == 0 else -1)
                    if not feasible(new_size1):
                        continue
                    same = other = 0
                    for w in pattern.neighbors(v):
                        if side[w] == side[v]:
                            same += 1
                        else:
                            other += 1
                    gain = other - same
                    if best_gain is None or gain > best_gain:
                        best_gain = gain
                        best_node = v
                if best_node is None:
                    break
                size1 += 1 if side[best_node] == 0 else -1
                side[best_node] = 1 - side[best_node]
                locked[best_node] = True
                cut -= best_gain  # type: ignore[operator]
                moves.append(best_node)
                if cut < pass_best_cut:
                    pass_best_cut = cut
                    pass_best_moves = list(moves)
            # Revert to the best prefix of this pass.
            for v in reversed(moves[len(pass_best_moves):]):
                size1 += 1 if side[v] == 0 else -1
                side[v] = 1 - side[v]
            cut = pass_best_cut
            if pass_best_moves:
                improved = True
        if best_cut is None or cut < best_cut:
            best_cut = cut
            best_side = list(side)

    assert best_side is not None
    cut_edges = [(u, v) for u, v in edges if best_side[u] != best_side[v]]
    nodecut: list[int] = []
    uncovered = list(cut_edges)
    while uncovered:
        counts: dict[int, int] = {}
        for u, v in uncovered:
            counts[u] = counts.get(u, 0) + 1
            counts[v] = counts.get(v, 0) + 1
        pick = min(counts, key=lambda v: (-counts[v], v))
        nodecut.append(pick)
        uncovered = [e for e in uncovered if pick not in e]
    return HeuristicResult(
        _order_by_degree(pattern, nodecut), len(nodecut) / n
    )


Policy = Union[str, Sequence[int]]


def select_variable(
    state: SearchState, policy: Policy, *, scope: Optional[Iterable[int]] = None
) -> Optional[int]:
    """Pick the next variable to branch on, or None when all are assigned.

    * ``"maxcstr"``: most pattern arcs to other unassigned variables; ties
      by smallest domain, then lowest id.
    * ``"minsize"``: smallest domain; ties by lowest id.
    * a sequence of variables: first unassigned one in that order.

    ``scope`` restricts the candidates (default: all variables).
    """
    sizes = state.sizes
    if isinstance(policy, str):
        candidates = (
            [x for x in range(len(sizes)) if sizes[x] > 1]
            if scope is None
            else [x for x in scope if sizes[x] > 1]
        )
        if not candidates:
            return None
        if policy == "minsize":
            return min(candidates, key=lambda x: (sizes[x], x))
        if policy == "maxcstr":
            pattern = state.inst.pattern

            def arcs_to_unassigned(x: int) -> int:
                return sum(1 for j in pattern.out_adj[x] if sizes[j] > 1) + sum(
                    1 for j in pattern.in_adj[x] if sizes[j] > 1
                )

            return min(
                candidates, key=lambda x: (-arcs_to_unassigned(x), sizes[x], x)
            )
        raise ValueError(f"unknown selection policy {policy!r}")
    for x in policy:
        if sizes[x] > 1 and (scope is None or x in scope):
            return x
    return None
