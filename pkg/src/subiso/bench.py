"""Benchmark harness: suite manifests, per-instance logs, aggregate tables.

A suite manifest is a TOML file with one ``[[class]]`` table per instance
class (generator parameters, instance count, seeds) and optional top-level
defaults for ``models``, ``time_limit``, ``search_mode`` and
``switch_fraction``.  The harness writes one JSON line per (instance,
model) run as it goes -- partial runs stay salvageable -- and aggregates
the log into one CSV row per (class, model) at the end.
"""
from __future__ import annotations

import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, TextIO, Union

try:
    import tomllib  # Python >= 3.11
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

from .generators import MeshParams, RandomParams, gen_mesh, gen_random
from .model import SipInstance
from .search import Model, ModelConfig, SearchMode, SolveStatus, solve

CSV_HEADER = "class,model,instances,solved_pct,mu_s,sigma_s,mean_solutions,D,mean_Dcount,S"

_MODEL_NAMES = {
    "cpfc": Model.CPFC,
    "cpac": Model.CPAC,
    "dec": Model.DEC,
    "dec-h1": Model.DEC_H1,
    "dec-h2": Model.DEC_H2,
}
_MODE_NAMES = {
    "first": SearchMode.FIRST,
    "count": SearchMode.COUNT_ALL,
    "enum": SearchMode.ENUMERATE_ALL,
}


def model_from_name(name: str) -> Model:
    try:
        return _MODEL_NAMES[name]
    except KeyError:
        raise ValueError(
            f"unknown model {name!r}; expected one of {sorted(_MODEL_NAMES)}"
        ) from None


def model_to_name(model: Model) -> str:
    return {v: k for k, v in _MODEL_NAMES.items()}[model]


def mode_from_name(name: str) -> SearchMode:
    try:
        return _MODE_NAMES[name]
    except KeyError:
        raise ValueError(
            f"unknown search mode {name!r}; expected one of {sorted(_MODE_NAMES)}"
        ) from None


@dataclass
class ClassSpec:
    label: str
    generator: str  # "random" | "mesh"
    params: dict[str, Any]
    mode: str
    instances: int
    seed0: int
    models: list[Model]
    time_limit: Optional[float]
    search_mode: SearchMode
    switch_fraction: float

    def instance_for(self, seed: int) -> SipInstance:
        if self.generator == "random":
            return gen_random(
                RandomParams(
                    n=int(self.params["n"]),
                    eta=float(self.params["eta"]),
                    alpha=float(self.params["alpha"]),
                    seed=seed,
                    mode=self.mode,
                )
            )
        if self.generator == "mesh":
            return gen_mesh(
                MeshParams(
                    side=int(self.params["side"]),
                    dims=int(self.params["dims"]),
                    rho=float(self.params["rho"]),
                    alpha=float(self.params["alpha"]),
                    seed=seed,
                    mode=self.mode,
                )
            )
        raise ValueError(f"unknown generator {self.generator!r}")


def load_manifest(path: Union[str, Path]) -> list[ClassSpec]:
    raw = tomllib.loads(Path(path).read_text())
    default_models = [model_from_name(m) for m in raw.get("models", list(_MODEL_NAMES))]
    default_limit = raw.get("time_limit")
    default_mode = mode_from_name(raw.get("search_mode", "count"))
    default_switch = float(raw.get("switch_fraction", 0.30))
    classes = []
    for entry in raw.get("class", []):
        generator = entry["generator"]
        param_keys = (
            ("n", "eta", "alpha") if generator == "random" else ("side", "dims", "rho", "alpha")
        )
        classes.append(
            ClassSpec(
                label=entry["label"],
                generator=generator,
                params={k: entry[k] for k in param_keys},
                mode=entry.get("mode", "embedded"),
                instances=int(entry.get("instances", 1)),
                seed0=int(entry.get("seed0", 0)),
                models=[model_from_name(m) for m in entry.get("models", [])]
                or default_models,
                time_limit=entry.get("time_limit", default_limit),
                search_mode=mode_from_name(entry["search_mode"])
                if "search_mode" in entry
                else default_mode,
                switch_fraction=float(entry.get("switch_fraction", default_switch)),
            )
        )
    if not classes:
        raise ValueError(f"{path}: manifest declares no [[class]] entries")
    return classes


def run_suite(
    classes: list[ClassSpec],
    log_stream: TextIO,
    *,
    echo: Optional[TextIO] = None,
) -> list[dict[str, Any]]:
    """Run every (class, model, seed) combination, one JSON line each."""
    rows: list[dict[str, Any]] = []
    for spec in classes:
        for model in spec.models:
            for k in range(spec.instances):
                seed = spec.seed0 + k
                inst = spec.instance_for(seed)
                cfg = ModelConfig(
                    model=model,
                    search_mode=spec.search_mode,
                    time_limit=spec.time_limit,
                    switch_fraction=spec.switch_fraction,
                    rng_seed=seed,
                )
                result = solve(inst, cfg)
                row = {
                    "class": spec.label,
                    "model": model_to_name(model),
                    "seed": seed,
                    "status": result.status.value,
                    "count": result.solution_count,
                    "count_is_lower_bound": result.count_is_lower_bound,
                    "elapsed": result.elapsed,
                    "nodes": result.search_nodes,
                    "decomposition_events": result.decomposition_events,
                    "used_decomposition": result.used_decomposition,
                    "heuristic_fraction": result.heuristic_fraction,
                    "phase_switch_depth": result.phase_switch_depth,
                }
                rows.append(row)
                log_stream.write(json.dumps(row) + "\n")
                log_stream.flush()
                if echo is not None:
                    echo.write(
                        f"{spec.label} {row['model']} seed={seed}: {row['status']}"
                        f" count={row['count']} nodes={row['nodes']}\n"
                    )
    return rows


@dataclass
class BenchRecord:
    """One aggregate row, shaped like the benchmark tables."""

    class_label: str
    model: str
    instances_run: int
    solved_percent: float
    mean_time: Optional[float]
    stddev_time: Optional[float]
    mean_solutions: Optional[float]
    instances_using_decomposition: int
    mean_decomposition_events: Optional[float]
    mean_heuristic_fraction: Optional[float]


def _mean(xs: list[float]) -> float:
    return sum(xs) / len(xs)


def _pstdev(xs: list[float]) -> float:
    m = _mean(xs)
    return (sum((x - m) ** 2 for x in xs) / len(xs)) ** 0.5


def aggregate(rows: list[dict[str, Any]]) -> list[BenchRecord]:
    """Fold per-instance rows into one record per (class, model), in first
    appearance order.  Time and solution means are over solved instances
    only."""
    order: list[tuple[str, str]] = []
    buckets: dict[tuple[str, str], list[dict[str, Any]]] = {}
    for row in rows:
        key = (row["class"], row["model"])
        if key not in buckets:
            buckets[key] = []
            order.append(key)
        buckets[key].append(row)
    records = []
    for key in order:
        group = buckets[key]
        solved = [r for r in group if r["status"] == SolveStatus.SOLVED.value]
        times = [float(r["elapsed"]) for r in solved]
        counts = [float(r["count"]) for r in solved]
        fracs = [
            float(r["heuristic_fraction"])
            for r in group
            if r["heuristic_fraction"] is not None
        ]
        records.append(
            BenchRecord(
                class_label=key[0],
                model=key[1],
                instances_run=len(group),
                solved_percent=100.0 * len(solved) / len(group),
                mean_time=_mean(times) if times else None,
                stddev_time=_pstdev(times) if times else None,
                mean_solutions=_mean(counts) if counts else None,
                instances_using_decomposition=sum(
                    1 for r in solved if r["used_decomposition"]
                ),
                mean_decomposition_events=_mean(
                    [float(r["decomposition_events"]) for r in solved]
                )
                if solved
                else None,
                mean_heuristic_fraction=_mean(fracs) if fracs else None,
            )
        )
    return records


def _fmt(x: Optional[float], spec: str) -> str:
    return "" if x is None else format(x, spec)


def records_to_csv(records: list[BenchRecord]) -> str:
    lines = [CSV_HEADER]
    for r in records:
        lines.append(
            ",".join(
                [
                    r.class_label,
                    r.model,
                    str(r.instances_run),
                    format(r.solved_percent, ".1f"),
                    _fmt(r.mean_time, ".3f"),
                    _fmt(r.stddev_time, ".3f"),
                    _fmt(r.mean_solutions, ".6g"),
                    str(r.instances_using_decomposition),
                    _fmt(r.mean_decomposition_events, ".2f"),
                    _fmt(r.mean_heuristic_fraction, ".3f"),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def run_bench(
    manifest_path: Union[str, Path],
    out_csv: Union[str, Path],
    log_path: Optional[Union[str, Path]] = None,
    *,
    echo: Optional[TextIO] = None,
) -> list[BenchRecord]:
    classes = load_manifest(manifest_path)
    out_csv = Path(out_csv)
    if log_path is None:
        log_path = out_csv.with_suffix(".jsonl")
    with open(log_path, "w") as log:
        rows = run_suite(classes, log, echo=echo)
    records = aggregate(rows)
    out_csv.write_text(records_to_csv(records))
    return records
