"""Multi-trial benchmark: derived seeds, per-(n, config) aggregation, CSV/JSON output."""

from __future__ import annotations

import csv
import io
import json
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Sequence

from .cover import Algorithm, WeightConfig
from .errors import InvalidArgumentError, RelayPlacementError
from .geometry import Point
from .pipeline import PipelineConfig, run_pipeline, with_seed
from .placement import Strategy
from .scenario import DEFAULT_FIELD, DEFAULT_R_RELAY, DEFAULT_R_SENSOR, PRNG_ID, SCHEMA, derive_seed, generate_scenario

CSV_HEADER = ("n", "config_name", "metric_name", "mean", "stddev", "trials")
TIMING_METRICS = frozenset({"runtime_ms"})


def default_configs() -> dict[str, PipelineConfig]:
    cfgs = [
        PipelineConfig(Algorithm.LSAA, Strategy.RLSA),
        PipelineConfig(Algorithm.LSAA, Strategy.ILSM),
        PipelineConfig(Algorithm.LSAA, Strategy.RLSM),
        PipelineConfig(Algorithm.LSAADC, Strategy.RLSA, coverage_k=2),
        PipelineConfig(Algorithm.WEIGHTED_GREEDY, Strategy.ILSM),
        PipelineConfig(Algorithm.GRID, Strategy.ILSM),
    ]
    return {c.name: c for c in cfgs}


@dataclass(frozen=True)
class BenchmarkSpec:
    n_values: tuple[int, ...] = tuple(range(10, 101, 10))
    trials: int = 100
    configs: Mapping[str, PipelineConfig] = field(default_factory=default_configs)
    base_seed: int = 0
    parallelism: int = 1
    field: tuple[float, float] = DEFAULT_FIELD
    r: float = DEFAULT_R_SENSOR
    R: float = DEFAULT_R_RELAY
    sink: Point | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise InvalidArgumentError("trials must be >= 1")
        if self.parallelism < 1:
            raise InvalidArgumentError("parallelism must be >= 1")
        if any(n < 0 for n in self.n_values):
            raise InvalidArgumentError("n values must be >= 0")
        if not self.configs:
            raise InvalidArgumentError("at least one config is required")


@dataclass
class Cell:
    """All successful trials of one (n, config), keyed by trial index."""

    values: dict[int, dict[str, float]] = field(default_factory=dict)
    failures: dict[int, str] = field(default_factory=dict)

    @property
    def trials(self) -> int:
        return len(self.values)

    def series(self, metric: str) -> list[float]:
        return [self.values[t][metric] for t in sorted(self.values) if metric in self.values[t]]

    def metric_names(self) -> list[str]:
        names: set[str] = set()
        for v in self.values.values():
            names.update(v)
        return sorted(names)


def _mean_std(xs: Sequence[float]) -> tuple[float, float]:
    if not xs:
        return float("nan"), float("nan")
    return statistics.fmean(xs), (statistics.stdev(xs) if len(xs) > 1 else 0.0)


def _g9(x: float) -> float:
    return float(format(x, ".9g"))


@dataclass
class BenchmarkTable:
    cells: dict[tuple[int, str], Cell] = field(default_factory=dict)
    meta: dict[str, Any] = field(default_factory=dict)

    def cell(self, n: int, name: str) -> Cell:
        return self.cells.setdefault((n, name), Cell())

    def mean(self, n: int, name: str, metric: str) -> float:
        return _mean_std(self.cells[(n, name)].series(metric))[0]

    def stddev(self, n: int, name: str, metric: str) -> float:
        return _mean_std(self.cells[(n, name)].series(metric))[1]

    @property
    def failed(self) -> int:
        return sum(len(c.failures) for c in self.cells.values())

    def rows(self, include_timing: bool = False) -> list[tuple[int, str, str, float, float, int]]:
        out = []
        for (n, name) in sorted(self.cells):
            c = self.cells[(n, name)]
            for metric in c.metric_names():
                if metric in TIMING_METRICS and not include_timing:
                    continue
                xs = c.series(metric)
                m, s = _mean_std(xs)
                out.append((n, name, metric, m, s, len(xs)))
        return out

    def to_dict(self, include_timing: bool = False) -> dict[str, Any]:
        cells = []
        for (n, name) in sorted(self.cells):
            c = self.cells[(n, name)]
            metrics = {}
            for metric in c.metric_names():
                if metric in TIMING_METRICS and not include_timing:
                    continue
                xs = c.series(metric)
                m, s = _mean_std(xs)
                metrics[metric] = {"mean": _g9(m), "stddev": _g9(s), "values": [_g9(x) for x in xs]}
            cells.append({
                "n": n,
                "config_name": name,
                "trials": c.trials,
                "failures": [[t, c.failures[t]] for t in sorted(c.failures)],
                "trial_ids": sorted(c.values),
                "metrics": metrics,
            })
        return {"schema": SCHEMA, "meta": self.meta, "cells": cells}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "BenchmarkTable":
        table = cls(meta=dict(data.get("meta", {})))
        for entry in data["cells"]:
            c = table.cell(int(entry["n"]), entry["config_name"])
            ids = entry["trial_ids"]
            for t in ids:
                c.values[t] = {}
            for metric, blob in entry["metrics"].items():
                for t, x in zip(ids, blob["values"]):
                    c.values[t][metric] = float(x)
            for t, reason in entry.get("failures", []):
                c.failures[int(t)] = reason
        return table


def _run_trial(args) -> tuple[int, int, dict[str, Any]]:
    spec, n, t = args
    seed = derive_seed(spec.base_seed, n, t)
    scenario = generate_scenario(n, spec.field, spec.r, spec.R, spec.sink, seed=seed)
    cache: dict[Any, Any] = {}
    out: dict[str, Any] = {}
    for name, cfg in spec.configs.items():
        try:
            out[name] = run_pipeline(scenario, with_seed(cfg, seed), cache).metrics.as_dict()
        except RelayPlacementError as exc:
            out[name] = exc.__class__.__name__ + ": " + str(exc)
    return n, t, out


def run_benchmark(spec: BenchmarkSpec) -> BenchmarkTable:
    """Run every (n, trial) scenario through every config.

    Trial ``t`` at size ``n`` always sees the scenario drawn from
    ``derive_seed(base_seed, n, t)``, so results do not depend on the
    parallelism degree or on the order of configs.
    """
    sink = spec.sink if spec.sink is not None else Point(spec.field[0] / 2, spec.field[1] / 2)
    table = BenchmarkTable(meta={
        "prng": PRNG_ID,
        "base_seed": spec.base_seed,
        "trials": spec.trials,
        "n_values": list(spec.n_values),
        "field": list(spec.field),
        "r": spec.r,
        "R": spec.R,
        "sink": list(sink),
        "configs": sorted(spec.configs),
    })
    for n in spec.n_values:
        for name in spec.configs:
            table.cell(n, name)
    jobs = [(spec, n, t) for n in spec.n_values for t in range(spec.trials)]
    if spec.parallelism > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=spec.parallelism) as pool:
            results = list(pool.map(_run_trial, jobs, chunksize=max(1, len(jobs) // (4 * spec.parallelism))))
    else:
        results = [_run_trial(j) for j in jobs]
    for n, t, per_cfg in results:
        for name, res in per_cfg.items():
            c = table.cell(n, name)
            if isinstance(res, str):
                c.failures[t] = res
            else:
                # stored at output precision so the table survives a JSON round trip
                c.values[t] = {k: _g9(v) for k, v in res.items()}
    return table


def _fmt(x: float) -> str:
    return format(x, ".9g")


def to_csv(table: BenchmarkTable, include_timing: bool = False) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for n, name, metric, m, s, k in table.rows(include_timing):
        w.writerow((n, name, metric, _fmt(m), _fmt(s), k))
    return buf.getvalue()


def to_json(table: BenchmarkTable, include_timing: bool = False) -> str:
    return json.dumps(table.to_dict(include_timing), indent=2, sort_keys=True) + "\n"


def emit_results(table: BenchmarkTable, fmt: str, path: str | Path | None = None, include_timing: bool = False) -> str:
    """Serialise ``table`` as CSV or JSON and write it to ``path`` when given.

    Wall-clock timings are left out unless ``include_timing``, so that
    repeated runs are byte-identical.
    """
    if fmt == "csv":
        text = to_csv(table, include_timing)
    elif fmt == "json":
        text = to_json(table, include_timing)
    else:
        raise InvalidArgumentError(f"unknown format {fmt!r}; expected csv or json")
    if path is not None:
        try:
            Path(path).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise InvalidArgumentError(f"cannot write {path}: {exc}") from exc
    return text


def config_from_dict(d: Mapping[str, Any]) -> PipelineConfig:
    try:
        algo = Algorithm(d.get("cover", "LSAA"))
        strat = Strategy(d.get("placement", "RLSA"))
    except ValueError as exc:
        raise InvalidArgumentError(str(exc)) from exc
    w = d.get("weights")
    weights = WeightConfig(*map(float, w)) if w is not None else WeightConfig()
    k = int(d.get("coverage_k", 2 if algo is Algorithm.LSAADC else 1))
    return PipelineConfig(algo, strat, weights, k, audit=bool(d.get("audit", False)))


def spec_from_dict(d: Mapping[str, Any], **overrides: Any) -> BenchmarkSpec:
    """Benchmark spec from its JSON form; ``overrides`` that are not None win."""
    kw: dict[str, Any] = {}
    if "n_values" in d:
        kw["n_values"] = tuple(int(n) for n in d["n_values"])
    for key in ("trials", "base_seed", "parallelism"):
        if key in d:
            kw[key] = int(d[key])
    for key in ("r", "R"):
        if key in d:
            kw[key] = float(d[key])
    if "field" in d:
        kw["field"] = (float(d["field"][0]), float(d["field"][1]))
    if d.get("sink") is not None:
        kw["sink"] = Point(float(d["sink"][0]), float(d["sink"][1]))
    if "configs" in d:
        cfgs = {}
        for entry in d["configs"]:
            cfg = config_from_dict(entry)
            cfgs[entry.get("name", cfg.name)] = cfg
        kw["configs"] = cfgs
    kw.update({k: v for k, v in overrides.items() if v is not None})
    return BenchmarkSpec(**kw)
