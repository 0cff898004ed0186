"""Command-line entry point: ``relayplace <subcommand> ...``.

Exit codes: 0 success, 2 invalid input, 3 infeasible instance, 4 resource limit.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import replace
from pathlib import Path
from typing import Any, Sequence

from . import bench
from .candidates import enumerate_possible_positions
from .connectivity import build_topology, is_connected, mst_steinerize
from .cover import Algorithm, CoverSolution, OracleLimits, WeightConfig, exact_min_cover, run_cover, validate_cover
from .errors import InvalidArgumentError, RelayPlacementError
from .geometry import Point
from .pipeline import PipelineConfig, run_pipeline
from .placement import Deployment, Strategy, place
from .scenario import DEFAULT_FIELD, DEFAULT_R_RELAY, DEFAULT_R_SENSOR, SCHEMA, Scenario, generate_scenario


def _pair(text: str, sep: str, what: str) -> tuple[float, float]:
    try:
        a, b = text.split(sep)
        return float(a), float(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{what} must look like A{sep}B, got {text!r}") from None


def _sink(text: str) -> Point:
    return Point(*_pair(text, ",", "--sink"))


def _field(text: str) -> tuple[float, float]:
    return _pair(text.lower(), "x", "--field")


def _weights(text: str) -> WeightConfig:
    try:
        a, b, g = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"--weights must be a,b,g, got {text!r}") from None
    try:
        return WeightConfig(a, b, g)
    except InvalidArgumentError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _enum(cls):
    def parse(text: str):
        for member in cls:
            if text.lower() in (member.value.lower(), member.name.lower()):
                return member
        raise argparse.ArgumentTypeError(f"expected one of {', '.join(m.value for m in cls)}")

    parse.__name__ = cls.__name__
    return parse


def _read_json(path: str) -> Any:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
        return json.loads(text)
    except OSError as exc:
        raise InvalidArgumentError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidArgumentError(f"{path} is not valid JSON: {exc}") from exc


def _load_scenario(args) -> Scenario:
    sc = Scenario.from_dict(_read_json(args.scenario))
    changes: dict[str, Any] = {}
    if args.sink is not None:
        changes["sink"] = args.sink
    if args.r is not None:
        changes["r"] = args.r
    if args.R is not None:
        changes["R"] = args.R
    if args.field is not None:
        changes["field_width"], changes["field_height"] = args.field
    return replace(sc, **changes) if changes else sc


def _emit(args, payload: Any, rows: Sequence[Sequence[Any]] | None = None, header: Sequence[str] = ()) -> None:
    if args.format == "csv" and rows is not None:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        text = buf.getvalue()
    else:
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.out:
        try:
            Path(args.out).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise InvalidArgumentError(f"cannot write {args.out}: {exc}") from exc
    else:
        sys.stdout.write(text)


def _solution_dict(sol: CoverSolution) -> dict[str, Any]:
    return {
        "schema": SCHEMA,
        "algorithm": sol.algorithm.value,
        "size": len(sol),
        "positions": [
            {"id": p.id, "covered": list(p.covered), "anchor": list(p.anchor), "second_pass": p.second_pass}
            for p in sol.positions
        ],
        "degrees": list(sol.degrees),
    }


def _solution_rows(sol: CoverSolution):
    return [(p.id, p.anchor.x, p.anchor.y, " ".join(map(str, p.covered))) for p in sol.positions]


def _deployment_dict(dep: Deployment, sc: Scenario) -> dict[str, Any]:
    return {
        "schema": SCHEMA,
        "sink": list(sc.sink),
        "R": sc.R,
        "relays": [
            {"point": list(r.point), "role": r.role.value, "position_id": r.source_position_id}
            for r in dep.relays
        ],
    }


def _deployment_rows(dep: Deployment):
    return [(r.point.x, r.point.y, r.role.value, "" if r.source_position_id is None else r.source_position_id) for r in dep.relays]


def _k_for(algo: Algorithm) -> int:
    return 2 if algo is Algorithm.LSAADC else 1


def cmd_gen(args) -> None:
    sc = generate_scenario(args.n, args.field or DEFAULT_FIELD, args.r or DEFAULT_R_SENSOR, args.R or DEFAULT_R_RELAY, args.sink, seed=args.seed)
    _emit(args, sc.to_dict(), [(i, p.x, p.y) for i, p in enumerate(sc.sensors)], ("sensor", "x", "y"))


def _cover(args, sc: Scenario) -> CoverSolution:
    sol = run_cover(args.algorithm, sc, weights=args.weights)
    validate_cover(sc, sol, _k_for(args.algorithm))
    return sol


def cmd_cover(args) -> None:
    sol = _cover(args, _load_scenario(args))
    _emit(args, _solution_dict(sol), _solution_rows(sol), ("id", "x", "y", "covered"))


def cmd_place(args) -> None:
    sc = _load_scenario(args)
    dep = place(args.strategy, _cover(args, sc), sc, args.seed)
    _emit(args, _deployment_dict(dep, sc), _deployment_rows(dep), ("x", "y", "role", "position_id"))


def cmd_connect(args) -> None:
    data = _read_json(args.scenario)
    try:
        relays = [Point(*r["point"]) if isinstance(r, dict) else Point(*r) for r in data["relays"]]
        sink = args.sink if args.sink is not None else Point(*data["sink"])
        R = args.R if args.R is not None else float(data["R"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidArgumentError(f"connect expects relays, sink and R: {exc}") from exc
    added = mst_steinerize(relays, sink, R)
    graph = build_topology(relays, sink, R, steiner=added)
    payload = {
        "schema": SCHEMA,
        "relays": [list(p) for p in relays],
        "steiner": [list(p) for p in added],
        "connected": is_connected(graph),
        "edges": len(graph.edges),
    }
    _emit(args, payload, [(p.x, p.y, "Steiner") for p in added], ("x", "y", "role"))


def cmd_pipeline(args) -> None:
    sc = _load_scenario(args)
    cfg = PipelineConfig(args.algorithm, args.strategy, args.weights, _k_for(args.algorithm), args.seed, args.audit)
    res = run_pipeline(sc, cfg)
    metrics = res.metrics.as_dict()
    payload = {
        "config": cfg.name,
        "metrics": metrics,
        "deployment": _deployment_dict(res.deployment, sc),
        "connected": is_connected(res.topology),
        "meta": {"sink": list(sc.sink), **sc.meta},
    }
    _emit(args, payload, sorted(metrics.items()), ("metric", "value"))


def cmd_oracle(args) -> None:
    sc = _load_scenario(args)
    limits = OracleLimits(args.max_sensors, args.max_positions, args.time_budget)
    sol = exact_min_cover(sc, enumerate_possible_positions(sc), limits)
    _emit(args, _solution_dict(sol), _solution_rows(sol), ("id", "x", "y", "covered"))


def cmd_bench(args) -> None:
    data = _read_json(args.spec) if args.spec else {}
    spec = bench.spec_from_dict(
        data,
        parallelism=args.parallel,
        base_seed=args.seed,
        trials=args.trials,
        n_values=tuple(args.n) if args.n else None,
        sink=args.sink,
        r=args.r,
        R=args.R,
        field=args.field,
    )
    table = bench.run_benchmark(spec)
    text = bench.emit_results(table, args.format or "csv", args.out, include_timing=args.timing)
    if not args.out:
        sys.stdout.write(text)
    if table.failed:
        print(f"{table.failed} trial runs failed and were excluded", file=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="scenario / RNG seed (bench: base seed)")
    common.add_argument("--sink", type=_sink, default=None, metavar="X,Y")
    common.add_argument("--r", type=float, default=None, help="sensor radius in m")
    common.add_argument("--R", type=float, default=None, help="relay radius in m")
    common.add_argument("--field", type=_field, default=None, metavar="WxH")
    common.add_argument("--weights", type=_weights, default=WeightConfig(), metavar="A,B,G")
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--out", default=None, metavar="PATH")
    common.add_argument("--parallel", type=int, default=None, metavar="N")

    p = argparse.ArgumentParser(prog="relayplace", description="Relay node placement for two-tier sensor networks.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="emit a random scenario as JSON")
    g.add_argument("--n", type=int, required=True)
    g.set_defaults(func=cmd_gen)

    def with_scenario(name: str, help_: str):
        s = sub.add_parser(name, parents=[common], help=help_)
        s.add_argument("scenario", help="scenario JSON path, or - for stdin")
        return s

    def with_algorithm(s, default=Algorithm.LSAA):
        s.add_argument("--algorithm", type=_enum(Algorithm), default=default)

    s = with_scenario("cover", "compute a relay cover")
    with_algorithm(s)
    s.set_defaults(func=cmd_cover)

    s = with_scenario("place", "cover, then choose relay coordinates")
    with_algorithm(s)
    s.add_argument("--strategy", type=_enum(Strategy), default=Strategy.RLSA)
    s.set_defaults(func=cmd_place)

    s = sub.add_parser("connect", parents=[common], help="steinerize a deployment (output of place)")
    s.add_argument("scenario", metavar="deployment", help="JSON with relays, sink and R, or - for stdin")
    s.set_defaults(func=cmd_connect)

    s = with_scenario("pipeline", "cover, place and connect in one go")
    with_algorithm(s)
    s.add_argument("--strategy", type=_enum(Strategy), default=Strategy.RLSA)
    s.add_argument("--audit", action="store_true", help="compare against the exact optimum when small enough")
    s.set_defaults(func=cmd_pipeline)

    s = with_scenario("oracle", "exact minimum cover of a small scenario")
    s.add_argument("--max-sensors", type=int, default=20)
    s.add_argument("--max-positions", type=int, default=10**6)
    s.add_argument("--time-budget", type=float, default=60.0)
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("bench", parents=[common], help="multi-trial benchmark to CSV or JSON")
    s.add_argument("spec", nargs="?", default=None, help="benchmark spec JSON (defaults apply when omitted)")
    s.add_argument("--trials", type=int, default=None)
    s.add_argument("--n", type=int, nargs="+", default=None, help="sensor counts")
    s.add_argument("--timing", action="store_true", help="include runtime_ms (output is then not byte-stable)")
    s.set_defaults(func=cmd_bench)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command != "bench":
        if args.seed is None:
            args.seed = 0
    try:
        args.func(args)
    except RelayPlacementError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
