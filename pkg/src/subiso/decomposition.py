"""Dynamic problem decomposition over the reduced morphism graph.

The reduced graph M keeps only pattern variables whose domain still has more
than one value, with the pattern arcs (read undirected) between them.  The
current subproblem splits into independent parts exactly when M falls apart
into components whose domain unions are pairwise disjoint: the morphism
constraints are confined to components by construction and the remaining
alldiff coupling is entailed once no value is shared.  Components whose
domain unions overlap are merged, so the detector returns the coarsest
valid split or nothing.

Also houses pseudo-tree construction (DFS trees whose non-tree edges all run
to ancestors), used to show why a purely static ordering cannot expose
decompositions when the constraint graph is complete.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

from .graphs import UndirectedView, iter_bits
from .model import SearchState, SipInstance


@dataclass(frozen=True)
class ReducedGraph:
    """Morphism constraint graph restricted to unassigned variables."""

    active: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]  # undirected, u < v


@dataclass(frozen=True)
class DecompositionSplit:
    """A partition of the unassigned variables into independent groups.

    Group domain unions are pairwise disjoint; the groups share only the
    assigned (size-one) variables listed in ``shared_assigned``.
    """

    groups: tuple[tuple[int, ...], ...]
    shared_assigned: tuple[int, ...]


def build_reduced_graph(
    inst: SipInstance, state: SearchState, scope: Optional[Iterable[int]] = None
) -> ReducedGraph:
    """The reduced graph M over ``scope`` (default: all pattern variables)."""
    sizes = state.sizes
    if scope is None:
        active = [x for x in range(inst.pattern.node_count) if sizes[x] > 1]
    else:
        active = sorted(x for x in scope if sizes[x] > 1)
    active_mask = 0
    for x in active:
        active_mask |= 1 << x
    out_rows = inst.pattern.adjacency_rows
    pred_rows = inst.pattern.pred_rows
    edges = []
    for u in active:
        row = (out_rows[u] | pred_rows[u]) & active_mask
        for v in iter_bits(row):
            if u < v:
                edges.append((u, v))
    return ReducedGraph(tuple(active), tuple(edges))


def detect_decomposition(
    inst: SipInstance, state: SearchState, scope: Optional[Iterable[int]] = None
) -> Optional[DecompositionSplit]:
    """Return the coarsest valid split of the current subproblem, or None.

    A split exists iff M (restricted to ``scope``) has at least two
    components after merging every pair of components whose domain unions
    intersect.
    """
    sizes = state.sizes
    domains = state.domains
    pattern = inst.pattern
    if scope is None:
        active = [x for x in range(pattern.node_count) if sizes[x] > 1]
    else:
        active = [x for x in scope if sizes[x] > 1]
    if len(active) < 2:
        return None
    active_mask = 0
    for x in active:
        active_mask |= 1 << x

    # Components of M by BFS over pattern adjacency restricted to active.
    und_rows = pattern.adjacency_rows
    pred_rows = pattern.pred_rows
    comps: list[int] = []  # bitmasks over pattern variables
    remaining = active_mask
    while remaining:
        start = remaining & -remaining
        seen = start
        frontier = start
        while frontier:
            reach = 0
            for v in iter_bits(frontier):
                reach |= und_rows[v] | pred_rows[v]
            frontier = reach & active_mask & ~seen
            seen |= frontier
        comps.append(seen)
        remaining &= ~seen
    if len(comps) < 2:
        return None

    # Merge components whose domain unions overlap (coarsest refinement).
    unions = []
    for comp in comps:
        u = 0
        for x in iter_bits(comp):
            u |= domains[x]
        unions.append(u)
    groups = list(zip(comps, unions))
    merged = True
    while merged:
        merged = False
        out: list[tuple[int, int]] = []
        for comp, dom in groups:
            for k, (ocomp, odom) in enumerate(out):
                if dom & odom:
                    out[k] = (ocomp | comp, odom | dom)
                    merged = True
                    break
            else:
                out.append((comp, dom))
        groups = out
    if len(groups) < 2:
        return None

    # Assigned values can never leak into an open domain (the alldiff
    # removed them), so group unions exclude them; keep that checked.
    assigned = [x for x in range(pattern.node_count) if sizes[x] == 1]
    if __debug__:
        assigned_values = 0
        for x in assigned:
            assigned_values |= domains[x]
        for _, dom in groups:
            assert dom & assigned_values == 0, (
                "open domains overlap assigned values; alldiff propagation "
                "did not run to fixpoint"
            )
    group_vars = sorted(tuple(iter_bits(comp)) for comp, _ in groups)
    return DecompositionSplit(tuple(group_vars), tuple(assigned))


def solve_split(
    split: DecompositionSplit,
    solve_group: Callable[[tuple[int, ...]], tuple[int, Optional[list[dict[int, int]]]]],
    *,
    enumerate_solutions: bool = False,
) -> tuple[int, Optional[list[dict[int, int]]]]:
    """Combine independent group results: counts multiply, extension maps
    cross-join.

    ``solve_group`` solves one group as an independent sub-search and
    returns (count, extensions or None).  A zero count short-circuits the
    remaining groups.
    """
    total = 1
    pieces: Optional[list[dict[int, int]]] = [{}] if enumerate_solutions else None
    for group in split.groups:
        count, exts = solve_group(group)
        if count == 0:
            return 0, ([] if enumerate_solutions else None)
        total *= count
        if pieces is not None:
            assert exts is not None
            pieces = [{**a, **b} for a in pieces for b in exts]
    return total, pieces


@dataclass(frozen=True)
class PseudoTree:
    """Rooted DFS tree in which every non-tree edge joins a node to one of
    its ancestors."""

    root: int
    parent: tuple[Optional[int], ...]
    order: tuple[int, ...]  # DFS preorder

    def children(self) -> list[list[int]]:
        kids: list[list[int]] = [[] for _ in self.parent]
        for v, p in enumerate(self.parent):
            if p is not None:
                kids[p].append(v)
        return kids

    def is_chain(self) -> bool:
        return all(len(k) <= 1 for k in self.children())


def build_pseudo_tree(g: UndirectedView, root: int) -> PseudoTree:
    """DFS spanning tree of ``g`` from ``root``.

    Raises ValueError on disconnected input (decompose into components
    first).  Verifies the back-arc property before returning.
    """
    n = g.node_count
    parent: list[Optional[int]] = [None] * n
    order: list[int] = []
    tin = [-1] * n
    tout = [-1] * n
    clock = 0
    # Iterative DFS, neighbors in ascending id for determinism.
    stack: list[tuple[int, Iterable[int]]] = [(root, iter(g.neighbors(root)))]
    tin[root] = clock
    clock += 1
    order.append(root)
    visited = {root}
    while stack:
        v, it = stack[-1]
        advanced = False
        for w in it:
            if w not in visited:
                visited.add(w)
                parent[w] = v
                tin[w] = clock
                clock += 1
                order.append(w)
                stack.append((w, iter(g.neighbors(w))))
                advanced = True
                break
        if not advanced:
            tout[v] = clock
            clock += 1
            stack.pop()
    if len(visited) != n:
        raise ValueError("graph is disconnected; build one pseudo-tree per component")

    def is_ancestor(a: int, b: int) -> bool:
        return tin[a] <= tin[b] and tout[b] <= tout[a]

    for u, v in g.edges():
        if parent[u] == v or parent[v] == u:
            continue
        assert is_ancestor(u, v) or is_ancestor(v, u), (
            f"edge ({u},{v}) is not a back-arc; DFS invariant violated"
        )
    return PseudoTree(root, tuple(parent), tuple(order))
