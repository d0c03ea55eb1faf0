"""The five solver models and the hybrid two-phase search controller.

Models:
  * cpfc   -- DFS with forward checking everywhere, maxcstr selection.
  * cpac   -- like cpfc but morphism constraints kept arc consistent
              (alldiff stays at forward-checking strength).
  * dec    -- phase 1: forward checking with minsize selection until a
              fraction of the variables is instantiated; phase 2: arc
              consistency, maxcstr selection, and a decomposition check at
              every node, solving detected independent groups separately
              and combining counts as products.
  * dec_h1 -- like dec, but phase 1 instantiates the cycle-heuristic set
              (pattern 2-core) first.
  * dec_h2 -- like dec, with the partition-heuristic nodecut instead.

Phase 2 begins under the node where the switch condition fires and ends
when the search backtracks above it.  When the heuristic set is the whole
pattern, there is nothing left to decompose after instantiating it, so by
default the run never switches and degenerates to forward checking with
minsize selection.

Counts are exact Python ints; a timeout result carries the count of fully
explored root subtrees, flagged as a lower bound.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum
from math import ceil
from typing import Iterable, Optional, Sequence

from . import decomposition as dec_mod
from .graphs import UndirectedView, iter_bits
from .heuristics import (
    HeuristicResult,
    cycle_heuristic,
    partition_heuristic,
    select_variable,
)
from .model import (
    Propagation,
    SearchState,
    SipInstance,
    assign,
    checkpoint,
    init_state,
    propagate_root,
    restore,
)

DEADLINE_CHECK_MASK = (1 << 12) - 1  # deadline test every 2^12 nodes


class Model(str, Enum):
    CPFC = "cpfc"
    CPAC = "cpac"
    DEC = "dec"
    DEC_H1 = "dec_h1"
    DEC_H2 = "dec_h2"


class SearchMode(str, Enum):
    FIRST = "first"
    COUNT_ALL = "count_all"
    ENUMERATE_ALL = "enumerate_all"


class SwitchRule(str, Enum):
    """How the phase switch treats a heuristic set covering every variable.

    DEGENERATE_FULL_S: never switch; the run stays forward checking with
    minsize selection (no decomposition can follow a full set anyway).
    HARD_CAP: switch once the instantiation cap is reached regardless.
    """

    DEGENERATE_FULL_S = "degenerate_full_s"
    HARD_CAP = "hard_cap"


class SolveStatus(str, Enum):
    SOLVED = "solved"
    TIMEOUT = "timeout"


@dataclass
class ModelConfig:
    model: Model = Model.CPFC
    switch_fraction: float = 0.30
    search_mode: SearchMode = SearchMode.COUNT_ALL
    time_limit: Optional[float] = None
    node_limit: Optional[int] = None
    rng_seed: int = 0
    switch_rule: SwitchRule = SwitchRule.DEGENERATE_FULL_S
    # Override the branching policy of the single-phase models (testing aid).
    variable_policy: Optional[str] = None
    # Run arc consistency at the root for AC-strength models (MAC discipline).
    ac_at_root: bool = True
    # Optional degree-compatibility pre-pruning at the root (off: the
    # reference models do not use it).
    root_degree_filter: bool = False
    # Debug switches: skip decomposition checks entirely, or verify every
    # fired split against an undecomposed solve of the same subtree.
    disable_decomposition: bool = False
    shadow_check: bool = False
    record_decisions: bool = False

    def __post_init__(self) -> None:
        if isinstance(self.model, str):
            self.model = Model(self.model)
        if isinstance(self.search_mode, str):
            self.search_mode = SearchMode(self.search_mode)
        if isinstance(self.switch_rule, str):
            self.switch_rule = SwitchRule(self.switch_rule)
        if not 0.0 < self.switch_fraction <= 1.0:
            raise ValueError("switch_fraction must be in (0, 1]")


@dataclass
class SolveResult:
    status: SolveStatus
    solution_count: int
    elapsed: float
    search_nodes: int
    decomposition_events: int
    used_decomposition: bool
    heuristic_fraction: Optional[float]
    phase_switch_depth: Optional[int]
    count_is_lower_bound: bool = False
    solutions: Optional[list[tuple[int, ...]]] = None
    decisions: Optional[list[tuple[int, int]]] = None
    shadow_checks: int = 0


class _Budget(Exception):
    """Raised internally when the time or node budget runs out."""


def _frac_ceil(fraction: float, n: int) -> int:
    # ceil(fraction * n) robust to float noise like 0.3 * 10 = 3.0000...4.
    return ceil(fraction * n - 1e-9)


class _Engine:
    def __init__(self, inst: SipInstance, cfg: ModelConfig) -> None:
        self.inst = inst
        self.cfg = cfg
        self.mode = cfg.search_mode
        self.first_mode = self.mode is SearchMode.FIRST
        self.enumerating = self.mode is SearchMode.ENUMERATE_ALL
        n_p = inst.pattern.node_count

        self.heuristic_fraction: Optional[float] = None
        self.restrict: Optional[frozenset[int]] = None
        body: Optional[HeuristicResult] = None
        if cfg.model is Model.DEC_H1:
            body = cycle_heuristic(UndirectedView(inst.pattern))
        elif cfg.model is Model.DEC_H2:
            if n_p >= 2:
                body = partition_heuristic(UndirectedView(inst.pattern), cfg.rng_seed)
            else:
                body = HeuristicResult((), 0.0)
        self.decomposing = cfg.model in (Model.DEC, Model.DEC_H1, Model.DEC_H2)
        self.never_switch = False
        if body is not None:
            self.heuristic_fraction = body.fraction
            if len(body.body_vars) == n_p and cfg.switch_rule is SwitchRule.DEGENERATE_FULL_S:
                self.never_switch = True
            else:
                self.restrict = frozenset(body.body_vars)

        if cfg.model in (Model.CPFC, Model.CPAC):
            self.phase1_policy = cfg.variable_policy or "maxcstr"
        else:
            self.phase1_policy = cfg.variable_policy or "minsize"
        self.phase1_level = Propagation.AC if cfg.model is Model.CPAC else Propagation.FC
        self.cap = _frac_ceil(cfg.switch_fraction, n_p) if self.decomposing else None

        self.nodes = 0
        self.shadow_nodes = 0
        self.in_shadow = False
        self.events = 0
        self.shadow_checks = 0
        self.switch_depth: Optional[int] = None
        self.lower_bound = 0
        self.solutions: Optional[list[tuple[int, ...]]] = (
            [] if (self.enumerating or self.first_mode) else None
        )
        self.decisions: Optional[list[tuple[int, int]]] = (
            [] if cfg.record_decisions else None
        )
        self.deadline: Optional[float] = None

    # -- bookkeeping ---------------------------------------------------

    def _tick(self) -> None:
        if self.in_shadow:
            self.shadow_nodes += 1
        else:
            self.nodes += 1
        total = self.nodes + self.shadow_nodes
        if self.deadline is not None and total & DEADLINE_CHECK_MASK == 0:
            if time.monotonic() > self.deadline:
                raise _Budget
        if self.cfg.node_limit is not None and self.nodes > self.cfg.node_limit:
            raise _Budget

    def _emit(self, full: dict[int, int]) -> None:
        if self.solutions is not None:
            self.solutions.append(
                tuple(full[i] for i in range(self.inst.pattern.node_count))
            )

    # -- phase 1 ---------------------------------------------------------

    def _all_restricted_assigned(self, state: SearchState) -> bool:
        assert self.restrict is not None
        return all(state.sizes[x] == 1 for x in self.restrict)

    def _switch_now(self, state: SearchState, after_branch: bool) -> bool:
        if not self.decomposing or self.never_switch:
            return False
        assert self.cap is not None
        if state.assigned_count >= self.cap:
            return True
        if self.restrict is not None:
            if self._all_restricted_assigned(state):
                return True
            # Lazy early switch: after instantiating a heuristic variable,
            # look whether a decomposition is already available.
            if after_branch and not self.cfg.disable_decomposition:
                if dec_mod.detect_decomposition(self.inst, state) is not None:
                    return True
        return False

    def _phase1(self, state: SearchState, at_root: bool, after_branch: bool) -> int:
        if self._switch_now(state, after_branch):
            return self._enter_phase2(state, at_root)
        var = select_variable(state, self.phase1_policy, scope=self.restrict)
        if var is None:
            if self.restrict is not None:
                # Heuristic set exhausted below the cap: switch.
                return self._enter_phase2(state, at_root)
            self._emit({x: state.value_of(x) for x in range(len(state.sizes))})
            return 1
        total = 0
        for v in state.domain_values(var):
            self._tick()
            if self.decisions is not None and not self.in_shadow:
                self.decisions.append((var, v))
            mark = checkpoint(state)
            if assign(state, var, v, self.phase1_level):
                sub = self._phase1(state, False, True)
                total += sub
                if at_root:
                    self.lower_bound += sub
            restore(state, mark)
            if self.first_mode and total >= 1:
                break
        return total

    # -- phase 2 ---------------------------------------------------------

    def _enter_phase2(self, state: SearchState, at_root: bool) -> int:
        if not self.in_shadow and self.switch_depth is None:
            self.switch_depth = state.assigned_count
        mark = checkpoint(state)
        # Full propagation at the boundary: the dynamic phase starts from an
        # arc-consistent fixpoint.
        if not propagate_root(state, Propagation.AC):
            restore(state, mark)
            return 0
        scope = tuple(state.unassigned())
        count, pieces = self._phase2(state, scope, at_root)
        if pieces is not None and not self.in_shadow:
            prefix = {
                x: state.value_of(x)
                for x in range(len(state.sizes))
                if x not in scope
            }
            for piece in pieces:
                self._emit({**prefix, **piece})
        restore(state, mark)
        return count

    def _phase2(
        self, state: SearchState, scope: tuple[int, ...], at_root: bool = False
    ) -> tuple[int, Optional[list[dict[int, int]]]]:
        want_pieces = self.enumerating or self.first_mode
        if self.decomposing and not self.cfg.disable_decomposition and not self.in_shadow:
            split = dec_mod.detect_decomposition(self.inst, state, scope=scope)
            if split is not None:
                self.events += 1

                def solve_group(group: tuple[int, ...]):
                    return self._phase2(state, group)

                count, pieces = dec_mod.solve_split(
                    split, solve_group, enumerate_solutions=want_pieces
                )
                if self.cfg.shadow_check:
                    self._shadow_verify(state, scope, count)
                return count, pieces
        var = select_variable(state, "maxcstr", scope=scope)
        if var is None:
            if want_pieces:
                return 1, [{x: state.value_of(x) for x in scope}]
            return 1, None
        total = 0
        pieces: Optional[list[dict[int, int]]] = [] if want_pieces else None
        for v in state.domain_values(var):
            self._tick()
            if self.decisions is not None and not self.in_shadow:
                self.decisions.append((var, v))
            mark = checkpoint(state)
            if assign(state, var, v, Propagation.AC):
                sub, sub_pieces = self._phase2(state, scope)
                total += sub
                if pieces is not None and sub_pieces is not None:
                    pieces.extend(sub_pieces)
                if at_root:
                    self.lower_bound += sub
            restore(state, mark)
            if self.first_mode and total >= 1:
                break
        return total, pieces

    def _shadow_verify(
        self, state: SearchState, scope: tuple[int, ...], decomposed: int
    ) -> None:
        """Solve the same subtree without decomposition; counts must agree."""
        was = self.in_shadow
        self.in_shadow = True
        try:
            direct, _ = self._phase2(state, scope)
        finally:
            self.in_shadow = was
        if direct != decomposed:
            raise AssertionError(
                f"decomposition changed the count: split={decomposed} direct={direct}"
            )
        self.shadow_checks += 1

    # -- entry -----------------------------------------------------------

    def run(self) -> SolveResult:
        cfg = self.cfg
        t0 = time.monotonic()
        if cfg.time_limit is not None:
            self.deadline = t0 + cfg.time_limit
        state = init_state(self.inst, degree_filter=cfg.root_degree_filter)
        status = SolveStatus.SOLVED
        count = 0
        try:
            root_level = self.phase1_level
            if root_level is Propagation.AC and not cfg.ac_at_root:
                root_level = Propagation.FC
            if propagate_root(state, root_level):
                count = self._phase1(state, True, False)
            else:
                count = 0
        except _Budget:
            status = SolveStatus.TIMEOUT
            count = self.lower_bound
            if self.solutions is not None:
                # Every emitted solution is verified, so this is also a
                # valid lower bound.
                count = max(count, len(self.solutions))
        elapsed = time.monotonic() - t0
        if self.first_mode and self.solutions is not None:
            self.solutions = self.solutions[:1]
            count = min(count, 1)
        return SolveResult(
            status=status,
            solution_count=count,
            elapsed=elapsed,
            search_nodes=self.nodes,
            decomposition_events=self.events,
            used_decomposition=self.events > 0,
            heuristic_fraction=self.heuristic_fraction,
            phase_switch_depth=self.switch_depth,
            count_is_lower_bound=status is SolveStatus.TIMEOUT,
            solutions=self.solutions if (self.enumerating or self.first_mode) else None,
            decisions=self.decisions,
            shadow_checks=self.shadow_checks,
        )


def solve(inst: SipInstance, cfg: ModelConfig) -> SolveResult:
    """Solve one instance with the configured model.

    Counting is exact whenever status is SOLVED; on TIMEOUT the count is a
    lower bound and flagged as such.
    """
    return _Engine(inst, cfg).run()


def count_solutions_subtree(
    inst: SipInstance,
    state: SearchState,
    vars: Sequence[int],
    cfg: Optional[ModelConfig] = None,
) -> int:
    """Exact number of extensions assigning exactly ``vars`` on ``state``.

    ``vars`` must be a decomposition group: closed under pattern-arc
    adjacency within the unassigned variables, with a domain union disjoint
    from the other unassigned variables' domains.  Constraints whose scope
    leaves ``vars`` plus the assigned variables are ignored.
    """
    cfg = cfg or ModelConfig(model=Model.DEC)
    engine = _Engine(inst, cfg)
    engine.mode = SearchMode.COUNT_ALL
    engine.first_mode = False
    engine.enumerating = False
    if cfg.time_limit is not None:
        engine.deadline = time.monotonic() + cfg.time_limit
    scope = tuple(x for x in vars if state.sizes[x] > 1)
    count, _ = engine._phase2(state, scope)
    return count
