"""Independent brute-force ground truth for subgraph matching.

Enumerates every injective map from pattern nodes to target nodes in
lexicographic order and keeps those under which all pattern arcs land on
target arcs.  Deliberately no propagation and no pruning beyond
injectivity, and no shared code with the solver beyond the graph type: an
oracle that reused solver logic could not catch solver bugs.

Desk scale only; the limits are enforced up front and exceeding them is a
refusal, never an approximation.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

from .model import SipInstance


class OracleLimitError(RuntimeError):
    """The requested instance exceeds the configured brute-force limits."""


@dataclass(frozen=True)
class OracleLimits:
    max_pattern_nodes: int = 8
    max_target_nodes: int = 16
    hard_step_limit: int = 5_000_000


def _enumeration_size(n_target: int, n_pattern: int) -> int:
    size = 1
    for k in range(n_target, n_target - n_pattern, -1):
        size *= k
    return size


def _check_limits(inst: SipInstance, lim: OracleLimits) -> None:
    np_, nt = inst.pattern.node_count, inst.target.node_count
    if np_ > lim.max_pattern_nodes:
        raise OracleLimitError(
            f"pattern has {np_} nodes, limit is {lim.max_pattern_nodes}"
        )
    if nt > lim.max_target_nodes:
        raise OracleLimitError(
            f"target has {nt} nodes, limit is {lim.max_target_nodes}"
        )
    steps = _enumeration_size(nt, min(np_, nt))
    if steps > lim.hard_step_limit:
        raise OracleLimitError(
            f"enumeration needs {steps} injective maps, limit is {lim.hard_step_limit}"
        )


def brute_force_count(inst: SipInstance, lim: OracleLimits = OracleLimits()) -> int:
    """Exact number of injective arc-preserving maps pattern -> target."""
    _check_limits(inst, lim)
    arcs = list(inst.pattern.arcs())
    rows = inst.target.adjacency_rows
    count = 0
    for f in permutations(range(inst.target.node_count), inst.pattern.node_count):
        if all(rows[f[u]] >> f[v] & 1 for u, v in arcs):
            count += 1
    return count


def brute_force_solutions(
    inst: SipInstance, lim: OracleLimits = OracleLimits()
) -> list[tuple[int, ...]]:
    """All satisfying injective maps, in lexicographic order."""
    _check_limits(inst, lim)
    arcs = list(inst.pattern.arcs())
    rows = inst.target.adjacency_rows
    return [
        f
        for f in permutations(range(inst.target.node_count), inst.pattern.node_count)
        if all(rows[f[u]] >> f[v] & 1 for u, v in arcs)
    ]
