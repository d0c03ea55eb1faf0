"""CSP model for subgraph isomorphism: variables, bitset domains, propagators.

One finite-domain variable per pattern node, ranging over target node ids.
Injectivity is an alldiff over all variables; each pattern arc (i,j)
contributes one binary morphism constraint "(value_i, value_j) is a target
arc".  Domains are Python-int bit vectors sized to the target, so the
propagation inner loop is big-int AND against target adjacency rows.

Propagation is event driven.  Whenever a domain shrinks to size one -- by
branching or by pruning -- the variable is treated as assigned: its value is
removed from every other domain (alldiff, forward-checking strength always)
and its morphism constraints fire.  Morphism constraints run either at
forward-checking strength (prune neighbors of newly assigned variables) or
at arc-consistency strength (AC-3 revision over all pattern arcs to
fixpoint).
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional

from .graphs import DirectedGraph, iter_bits


class Propagation(Enum):
    """Strength of morphism-constraint propagation."""

    FC = "fc"
    AC = "ac"


@dataclass(frozen=True)
class MorphismConstraint:
    """Binary constraint induced by one pattern arc."""

    pattern_arc: tuple[int, int]


@dataclass(frozen=True)
class SipInstance:
    """A subgraph isomorphism instance: find injective arc-preserving maps
    from pattern nodes to target nodes.

    ``embedding`` is optional generator metadata (a witness map, pattern
    node i -> target node embedding[i]); solvers never read it.
    """

    pattern: DirectedGraph
    target: DirectedGraph
    embedding: Optional[tuple[int, ...]] = None

    def __post_init__(self) -> None:
        if self.pattern.node_count < 1 or self.target.node_count < 1:
            raise ValueError("pattern and target need at least one node")

    @property
    def constraints(self) -> list[MorphismConstraint]:
        return [MorphismConstraint((u, v)) for u, v in self.pattern.arcs()]


class SearchState:
    """Mutable solver state over a shared immutable instance.

    Domains are bit vectors over target node ids with cached cardinalities;
    every removal is logged on a trail of (variable, removed-bits) deltas so
    ``restore`` is bit-exact.  ``assigned_count`` tracks the number of
    size-one domains incrementally.
    """

    __slots__ = (
        "inst",
        "domains",
        "sizes",
        "trail",
        "assigned_count",
        "_singleton_queue",
        "_arc_queue",
        "_arc_pending",
    )

    def __init__(self, inst: SipInstance, domains: list[int]) -> None:
        self.inst = inst
        self.domains = domains
        self.sizes = [m.bit_count() for m in domains]
        self.trail: list[tuple[int, int]] = []
        self.assigned_count = sum(1 for s in self.sizes if s == 1)
        self._singleton_queue: deque[int] = deque()
        self._arc_queue: deque[tuple[int, int, bool]] = deque()
        self._arc_pending: set[tuple[int, int, bool]] = set()

    def value_of(self, x: int) -> int:
        """The single value of an assigned variable."""
        m = self.domains[x]
        assert m.bit_count() == 1, f"variable {x} is not assigned"
        return m.bit_length() - 1

    def unassigned(self) -> list[int]:
        return [x for x in range(len(self.domains)) if self.sizes[x] > 1]

    def domain_values(self, x: int) -> list[int]:
        return list(iter_bits(self.domains[x]))

    def prune(self, x: int, keep_mask: int) -> int:
        """Intersect domain x with keep_mask, trailing the delta.

        Returns the new size.  A shrink to size one enqueues x as a
        singleton event for the current propagation pass.
        """
        old = self.domains[x]
        removed = old & ~keep_mask
        if not removed:
            return self.sizes[x]
        new = old ^ removed
        self.trail.append((x, removed))
        self.domains[x] = new
        old_size = self.sizes[x]
        new_size = new.bit_count()
        self.sizes[x] = new_size
        self.assigned_count += (new_size == 1) - (old_size == 1)
        if new_size == 1:
            self._singleton_queue.append(x)
        return new_size


def init_state(inst: SipInstance, *, degree_filter: bool = False) -> SearchState:
    """Fresh state with every domain equal to the full target node set.

    ``degree_filter`` enables optional root pre-pruning: target node u is
    kept in domain i only if u's in/out degrees are at least pattern node
    i's.  Off by default; the reference models do not use it.
    """
    nt = inst.target.node_count
    full = (1 << nt) - 1
    if not degree_filter:
        domains = [full] * inst.pattern.node_count
    else:
        p, t = inst.pattern, inst.target
        t_out = [row.bit_count() for row in t.adjacency_rows]
        t_in = [row.bit_count() for row in t.pred_rows]
        domains = []
        for i in range(p.node_count):
            need_out = len(p.out_adj[i])
            need_in = len(p.in_adj[i])
            mask = 0
            for u in range(nt):
                if t_out[u] >= need_out and t_in[u] >= need_in:
                    mask |= 1 << u
            domains.append(mask)
    return SearchState(inst, domains)


def checkpoint(state: SearchState) -> int:
    """Mark the current trail position; marks nest LIFO."""
    return len(state.trail)


def restore(state: SearchState, mark: int) -> None:
    """Undo all domain deltas back to ``mark``, bit-exactly."""
    trail = state.trail
    assert 0 <= mark <= len(trail), "restoring a stale checkpoint mark"
    domains = state.domains
    sizes = state.sizes
    while len(trail) > mark:
        x, removed = trail.pop()
        old_size = sizes[x]
        domains[x] |= removed
        new_size = old_size + removed.bit_count()
        sizes[x] = new_size
        state.assigned_count += (new_size == 1) - (old_size == 1)


def _run_propagation(
    state: SearchState,
    level: Propagation,
    *,
    alldiff: bool = True,
    seed_all_arcs: bool = False,
) -> bool:
    """Drain singleton and revision queues to fixpoint.

    Returns False as soon as any domain empties (the state is then partially
    propagated; callers restore to their checkpoint).
    """
    inst = state.inst
    pattern = inst.pattern
    succ = inst.target.adjacency_rows
    pred = inst.target.pred_rows
    domains = state.domains
    n = pattern.node_count
    mc_out = pattern.out_adj
    mc_in = pattern.in_adj

    singles = state._singleton_queue
    arcs = state._arc_queue
    pending = state._arc_pending
    ac = level is Propagation.AC

    if seed_all_arcs and ac:
        for i in range(n):
            for j in mc_out[i]:
                for task in ((i, j, True), (j, i, False)):
                    if task not in pending:
                        pending.add(task)
                        arcs.append(task)

    def notify(y: int) -> None:
        # D_y shrank: revise every variable whose support set is D_y.
        for i in mc_in[y]:
            task = (i, y, True)
            if task not in pending:
                pending.add(task)
                arcs.append(task)
        for j in mc_out[y]:
            task = (j, y, False)
            if task not in pending:
                pending.add(task)
                arcs.append(task)

    processed: set[int] = set()
    while singles or arcs:
        while singles:
            x = singles.popleft()
            if x in processed:
                continue
            processed.add(x)
            v = state.value_of(x)
            if alldiff:
                keep = ~(1 << v)
                for y in range(n):
                    if y != x and domains[y] >> v & 1:
                        if state.prune(y, keep) == 0:
                            singles.clear()
                            arcs.clear()
                            pending.clear()
                            return False
                        if ac:
                            notify(y)
            if not ac:
                # FC: prune neighbors of the newly assigned variable.
                for j in mc_out[x]:
                    if state.prune(j, succ[v]) == 0:
                        singles.clear()
                        return False
                for j in mc_in[x]:
                    if state.prune(j, pred[v]) == 0:
                        singles.clear()
                        return False
            else:
                notify(x)
        if arcs:
            task = arcs.popleft()
            pending.discard(task)
            x, other, use_succ = task
            dom_other = domains[other]
            masks = succ if use_succ else pred
            new = 0
            m = domains[x]
            while m:
                low = m & -m
                if masks[low.bit_length() - 1] & dom_other:
                    new |= low
                m ^= low
            if new != domains[x]:
                if state.prune(x, new) == 0:
                    singles.clear()
                    arcs.clear()
                    pending.clear()
                    return False
                notify(x)
    return True


def assign(
    state: SearchState, x: int, v: int, level: Propagation = Propagation.FC
) -> bool:
    """Assign x := v and propagate; True iff no domain emptied.

    Triggers alldiff forward checking plus morphism propagation at the given
    level, cascading through any variables pruned to singletons.
    """
    assert state.domains[x] >> v & 1, f"value {v} not in domain of {x}"
    state.prune(x, 1 << v)
    state._singleton_queue.append(x)
    return _run_propagation(state, level)


def propagate_root(state: SearchState, level: Propagation) -> bool:
    """Root propagation pass: process initial singletons; at AC strength also
    run the morphism revision loop to fixpoint."""
    for x in range(len(state.domains)):
        if state.sizes[x] == 1:
            state._singleton_queue.append(x)
    return _run_propagation(state, level, seed_all_arcs=True)


def propagate_alldiff_fc(state: SearchState, x: int) -> bool:
    """Remove the value of assigned variable x from every other domain."""
    assert state.sizes[x] == 1
    v = state.value_of(x)
    keep = ~(1 << v)
    ok = True
    for y in range(len(state.domains)):
        if y != x and state.prune(y, keep) == 0:
            ok = False
    state._singleton_queue.clear()
    return ok


def propagate_mc_fc(state: SearchState, x: int) -> bool:
    """Forward-check the morphism constraints of assigned variable x:
    successors of x's value bound out-neighbors, predecessors bound
    in-neighbors."""
    assert state.sizes[x] == 1
    inst = state.inst
    v = state.value_of(x)
    ok = True
    for j in inst.pattern.out_adj[x]:
        if state.prune(j, inst.target.adjacency_rows[v]) == 0:
            ok = False
    for j in inst.pattern.in_adj[x]:
        if state.prune(j, inst.target.pred_rows[v]) == 0:
            ok = False
    state._singleton_queue.clear()
    return ok


def propagate_mc_ac(state: SearchState) -> bool:
    """Enforce arc consistency on all morphism constraints (AC-3 style).

    At fixpoint every value of D_i has a successor support in D_j and every
    value of D_j a predecessor support in D_i, for each pattern arc (i,j).
    Does not touch the alldiff.
    """
    state._singleton_queue.clear()
    ok = _run_propagation(
        state, Propagation.AC, alldiff=False, seed_all_arcs=True
    )
    state._singleton_queue.clear()
    return ok
