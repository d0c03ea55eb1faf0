"""Benchmark instance generators: random digraphs and irregular meshes.

Random family: every ordered node pair gets an arc independently with
probability eta; if the undirected view is disconnected, arcs between
random nodes of distinct components are added one at a time until it is
connected.  Mesh family: a dims-dimensional grid with arcs both ways
between grid neighbors, plus floor(rho*n) extra arcs between random
non-adjacent pairs.

Patterns come in two modes.  ``embedded`` extracts a uniformly grown
connected induced subgraph of the target (ceil(alpha*n) nodes) and records
the embedding as a witness, so the instance is satisfiable by
construction.  ``independent`` generates a fresh connected graph of the
same size instead (satisfiability not guaranteed).

Everything is a pure function of its parameters including the seed;
identical parameters give bit-identical instances.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .graphs import DirectedGraph, UndirectedView, connected_components
from .model import SipInstance

MODES = ("embedded", "independent")


@dataclass(frozen=True)
class RandomParams:
    n: int
    eta: float
    alpha: float
    seed: int = 0
    mode: str = "embedded"

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not 0.0 < self.eta <= 1.0:
            raise ValueError("eta must be in (0, 1]")
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError("alpha must be in (0, 1]")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")


@dataclass(frozen=True)
class MeshParams:
    side: int
    dims: int
    rho: float
    alpha: float
    seed: int = 0
    mode: str = "embedded"

    def __post_init__(self) -> None:
        if self.side < 2:
            raise ValueError("side must be >= 2")
        if self.dims < 2:
            raise ValueError("dims must be >= 2")
        if self.rho < 0.0:
            raise ValueError("rho must be >= 0")
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError("alpha must be in (0, 1]")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")


def _pattern_size(alpha: float, n: int) -> int:
    # ceil(alpha * n), guarded against float noise such as (2/3)*3 > 2.
    return max(1, math.ceil(alpha * n - 1e-9))


def _bernoulli_arcs(n: int, eta: float, rng: random.Random) -> set[tuple[int, int]]:
    """Arc set where each ordered pair (u,v), u != v, appears with
    probability eta.  Samples geometric gaps over the linearized pair space,
    so the cost is proportional to the number of arcs drawn."""
    total = n * (n - 1)
    arcs: set[tuple[int, int]] = set()
    if eta >= 1.0:
        for u in range(n):
            for v in range(n):
                if u != v:
                    arcs.add((u, v))
        return arcs
    log_q = math.log1p(-eta)
    k = -1
    while True:
        gap = int(math.log(1.0 - rng.random()) / log_q)
        k += 1 + gap
        if k >= total:
            return arcs
        u, r = divmod(k, n - 1)
        v = r if r < u else r + 1
        arcs.add((u, v))


def _connect(n: int, arcs: set[tuple[int, int]], rng: random.Random) -> None:
    """Add arcs between random nodes of distinct components until the
    undirected view is connected (in place)."""
    parent = list(range(n))

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for u, v in arcs:
        parent[find(u)] = find(v)
    n_comps = len({find(v) for v in range(n)})
    while n_comps > 1:
        groups: dict[int, list[int]] = {}
        for v in range(n):
            groups.setdefault(find(v), []).append(v)
        ra, rb = rng.sample(sorted(groups), 2)
        a = rng.choice(groups[ra])
        b = rng.choice(groups[rb])
        arcs.add((a, b))
        parent[find(a)] = find(b)
        n_comps -= 1


def _random_connected(n: int, eta: float, rng: random.Random) -> DirectedGraph:
    arcs = _bernoulli_arcs(n, eta, rng)
    _connect(n, arcs, rng)
    return DirectedGraph(n, sorted(arcs))


def _grow_induced_pattern(
    target: DirectedGraph, m: int, rng: random.Random
) -> tuple[DirectedGraph, tuple[int, ...]]:
    """Uniform frontier growth of a connected induced subgraph of m nodes;
    returns the relabeled pattern and the embedding witness."""
    view = UndirectedView(target)
    start = rng.randrange(target.node_count)
    selected = [start]
    selected_set = {start}
    while len(selected) < m:
        frontier = sorted(
            {w for v in selected for w in view.neighbors(v)} - selected_set
        )
        if not frontier:
            raise ValueError("target is disconnected; cannot grow the pattern")
        w = rng.choice(frontier)
        selected.append(w)
        selected_set.add(w)
    index = {t: i for i, t in enumerate(selected)}
    arcs = [
        (index[u], index[v])
        for u in selected
        for v in target.out_adj[u]
        if v in selected_set
    ]
    return DirectedGraph(m, sorted(arcs)), tuple(selected)


def _make_pattern(
    target: DirectedGraph, m: int, eta: float, mode: str, rng: random.Random
) -> tuple[DirectedGraph, tuple[int, ...] | None]:
    if mode == "embedded":
        return _grow_induced_pattern(target, m, rng)
    return _random_connected(m, eta, rng), None


def gen_random(p: RandomParams) -> SipInstance:
    """Random-digraph instance for the given parameters."""
    rng = random.Random(p.seed)
    target = _random_connected(p.n, p.eta, rng)
    m = _pattern_size(p.alpha, p.n)
    pattern, witness = _make_pattern(target, m, p.eta, p.mode, rng)
    return SipInstance(pattern, target, witness)


def _mesh_arcs(side: int, dims: int) -> list[tuple[int, int]]:
    n = side**dims
    arcs = []
    for u in range(n):
        coords = []
        k = u
        for _ in range(dims):
            k, c = divmod(k, side)
            coords.append(c)
        stride = 1
        for d in range(dims):
            if coords[d] + 1 < side:
                arcs.append((u, u + stride))
                arcs.append((u + stride, u))
            stride *= side
    return arcs


def gen_mesh(p: MeshParams) -> SipInstance:
    """Irregular mesh instance: grid arcs both ways plus floor(rho*n) extra
    arcs between distinct non-adjacent node pairs."""
    rng = random.Random(p.seed)
    n = p.side**p.dims
    arcs = set(_mesh_arcs(p.side, p.dims))
    adjacent = [0] * n
    for u, v in arcs:
        adjacent[u] |= 1 << v
        adjacent[v] |= 1 << u
    extra = int(p.rho * n)
    attempts = 0
    added = 0
    while added < extra:
        attempts += 1
        if attempts > 100 * extra + 1000:
            raise ValueError("could not place the requested extra arcs")
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u == v or adjacent[u] >> v & 1:
            continue
        arcs.add((u, v))
        adjacent[u] |= 1 << v
        adjacent[v] |= 1 << u
        added += 1
    target = DirectedGraph(n, sorted(arcs))
    m = _pattern_size(p.alpha, n)
    # Independent mode has no eta of its own; match the target's arc density.
    density = len(arcs) / (n * (n - 1)) if n > 1 else 1.0
    pattern, witness = _make_pattern(target, m, max(density, 1e-9), p.mode, rng)
    return SipInstance(pattern, target, witness)


def verify_embedding(inst: SipInstance) -> bool:
    """Check the recorded witness directly: injective and arc preserving.

    Independent of the solver on purpose.
    """
    f = inst.embedding
    if f is None:
        return False
    if len(f) != inst.pattern.node_count:
        return False
    if len(set(f)) != len(f):
        return False
    if any(not 0 <= t < inst.target.node_count for t in f):
        return False
    return all(
        inst.target.has_arc(f[u], f[v]) for u, v in inst.pattern.arcs()
    )


def target_is_connected(inst: SipInstance) -> bool:
    view = UndirectedView(inst.target)
    return len(connected_components(view, range(inst.target.node_count))) == 1
