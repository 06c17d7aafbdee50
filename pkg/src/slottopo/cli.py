"""Batch command-line front end: schedule, evaluate, compare.

    slottopo schedule --scenario S.json --algo hmwm --out runs/hmwm
    slottopo evaluate --scenario S.json --schedules runs/hmwm \
        --reps 5 --out reports/hmwm
    slottopo compare reports/hmwm reports/fcp --out cmp

Exit codes: 0 success, 2 usage, 3 scenario/file parse error, 4 at least
one requested state infeasible, 5 at least one state hit the solver time
budget (without any infeasibility). Scenario paths not found directly are
resolved against ``$SLOTTOPO_SCENARIO_DIR`` and then the packaged data
directory. All randomness derives from ``--seed`` (printed in the log);
identical seeds give bit-identical outputs regardless of worker count.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import multiprocessing
import os
import sys
import time
from dataclasses import replace
from pathlib import Path

from . import __version__
from .bnb import solve_branch_and_bound
from .fcp import schedule_state_fcp
from .hmwm import schedule_state_hmwm
from .ilp_exact import build_ilp
from .lp_io import export_lp
from .railp import build_railp, extract_topology
from .scenario import (Scenario, ScenarioError, TopologySchedule,
                       load_scenario, ranging_audit)
from .sim import compare as compare_reports
from .sim import simulate

__all__ = ["main"]

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_INFEASIBLE = 4
EXIT_TIMEOUT = 5

ALGORITHMS = ("ilp", "railp", "hmwm", "fcp")


def _data_dir() -> Path:
    return Path(__file__).parent / "data"


def resolve_scenario_path(raw: str) -> Path:
    p = Path(raw)
    if p.exists():
        return p
    env_dir = os.environ.get("SLOTTOPO_SCENARIO_DIR")
    if env_dir and (Path(env_dir) / raw).exists():
        return Path(env_dir) / raw
    if (_data_dir() / raw).exists():
        return _data_dir() / raw
    raise ScenarioError(f"scenario file '{raw}' not found (also looked in "
                        f"$SLOTTOPO_SCENARIO_DIR and packaged data)")


def _parse_states(spec: str | None, scenario: Scenario) -> list[int]:
    if not spec:
        return [st.index for st in scenario.states]
    if ".." in spec:
        a, b = spec.split("..", 1)
        lo, hi = int(a), int(b)
    else:
        lo = hi = int(spec)
    available = {st.index for st in scenario.states}
    out = [i for i in range(lo, hi + 1) if i in available]
    if not out:
        raise ScenarioError(f"state range '{spec}' matches no state")
    return out


def _apply_params(scenario: Scenario, overrides: list[str]) -> Scenario:
    if not overrides:
        return scenario
    fields = {}
    for item in overrides:
        if "=" not in item:
            raise ScenarioError(f"bad --param '{item}', expected key=value")
        key, val = item.split("=", 1)
        if not hasattr(scenario.params, key):
            raise ScenarioError(f"unknown parameter '{key}'")
        current = getattr(scenario.params, key)
        fields[key] = type(current)(float(val)) if isinstance(
            current, float) else int(val)
    return replace(scenario, params=replace(scenario.params, **fields))


def _state_seed(master_seed: int, state_index: int) -> int:
    # stable per-state stream independent of worker scheduling
    return (master_seed * 1_000_003 + state_index) % (2 ** 31 - 1)


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(text)
    tmp.replace(path)


# -- schedule ---------------------------------------------------------------

_WORKER_SCENARIO: dict = {}


def _worker_init(scenario_path: str, overrides: tuple[str, ...]) -> None:
    scn = _apply_params(load_scenario(scenario_path), list(overrides))
    _WORKER_SCENARIO["scenario"] = scn


def _schedule_one(task: tuple) -> dict:
    (state_index, algo, seed, tight_m, non_perfect, export_only,
     time_budget, out_dir) = task
    scenario: Scenario = _WORKER_SCENARIO["scenario"]
    state = scenario.state_by_index(state_index)
    traffic = scenario.traffic_for(state)
    params = scenario.params
    t0 = time.perf_counter()
    status = "ok"
    objective = None
    bound = None
    schedule: TopologySchedule | None = None

    if algo == "hmwm":
        schedule = schedule_state_hmwm(state, traffic, params,
                                       prefer_perfect=not non_perfect)
    elif algo == "fcp":
        schedule = schedule_state_fcp(state, _state_seed(seed, state_index),
                                      prefer_perfect=not non_perfect)
    else:
        build = build_ilp if algo == "ilp" else build_railp
        model = build(state, traffic, params, tight_m=tight_m)
        if export_only:
            lp_path = Path(out_dir) / f"state_{state_index:03d}.lp"
            export_lp(model, lp_path)
            status = "exported"
        else:
            sol = solve_branch_and_bound(model, time_budget=time_budget)
            status = sol.status
            if sol.status != "infeasible":
                schedule = extract_topology(sol, state)
                objective = str(sol.objective_value)
                bound = str(sol.bound) if sol.bound is not None else None

    wall_ms = (time.perf_counter() - t0) * 1e3
    entry = {"state": state_index, "algorithm": algo, "status": status,
             "wall_ms": round(wall_ms, 3)}
    if schedule is not None:
        audit = ranging_audit(schedule, state, params.l_min)
        doc = {
            "state": state_index,
            "algorithm": algo,
            "slot_count": state.slot_count,
            "n_nodes": state.n_nodes,
            "nodes": [nd.name for nd in state.nodes],
            "links": [[list(pair) for pair in schedule.matching_at(t)]
                      for t in range(state.slot_count)],
            "status": status,
            "objective": objective,
            "bound": bound,
            "ranging_pass": audit.passed,
            "wall_ms": round(wall_ms, 3),
        }
        _atomic_write(Path(out_dir) / f"state_{state_index:03d}.json",
                      json.dumps(doc, indent=1))
        entry["ranging_pass"] = audit.passed
    return entry


def cmd_schedule(args: argparse.Namespace) -> int:
    path = resolve_scenario_path(args.scenario)
    scenario = _apply_params(load_scenario(path), args.param)
    states = _parse_states(args.states, scenario)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    print(f"slottopo {__version__} schedule algo={args.algo} "
          f"states={states[0]}..{states[-1]} seed={args.seed} "
          f"workers={args.workers}")

    tasks = [(idx, args.algo, args.seed, args.tight_m, args.non_perfect,
              args.export_lp_only, args.time_budget, str(out_dir))
             for idx in states]
    if args.workers > 1:
        with multiprocessing.Pool(
                args.workers, initializer=_worker_init,
                initargs=(str(path), tuple(args.param))) as pool:
            entries = pool.map(_schedule_one, tasks)
    else:
        _worker_init(str(path), tuple(args.param))
        entries = [_schedule_one(t) for t in tasks]

    entries.sort(key=lambda e: e["state"])
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=["state", "algorithm", "status",
                                             "wall_ms", "ranging_pass"],
                            extrasaction="ignore")
    writer.writeheader()
    for e in entries:
        writer.writerow({**{"ranging_pass": ""}, **e})
    _atomic_write(out_dir / "timing.csv", buf.getvalue())

    statuses = {e["status"] for e in entries}
    for e in entries:
        print(f"  state {e['state']:>4} {e['status']:>16} "
              f"{e['wall_ms']:>10.1f} ms")
    if "infeasible" in statuses:
        return EXIT_INFEASIBLE
    if "feasible_timeout" in statuses:
        return EXIT_TIMEOUT
    return EXIT_OK


# -- evaluate ---------------------------------------------------------------


def _load_schedule_file(path: Path) -> tuple[int, str, TopologySchedule]:
    doc = json.loads(path.read_text())
    matchings = [[tuple(pair) for pair in slot] for slot in doc["links"]]
    return (doc["state"], doc["algorithm"],
            TopologySchedule.from_matchings(doc["n_nodes"], matchings))


def cmd_evaluate(args: argparse.Namespace) -> int:
    path = resolve_scenario_path(args.scenario)
    scenario = _apply_params(load_scenario(path), args.param)
    states = _parse_states(args.states, scenario)
    sched_dir = Path(args.schedules)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    merged: dict[int, int] = {}
    censored = 0
    errors = []
    algo = None
    per_state_rows = []
    for idx in states:
        f = sched_dir / f"state_{idx:03d}.json"
        if not f.exists():
            errors.append({"state": idx, "error": "missing schedule file"})
            continue
        state_idx, algo, schedule = _load_schedule_file(f)
        state = scenario.state_by_index(state_idx)
        report = simulate(schedule, state, scenario.traffic_for(state),
                          scenario.params, repetitions=args.reps,
                          horizon_penalty=args.horizon_penalty)
        hist: dict[int, int] = {}
        for d in report.delays:
            hist[d] = hist.get(d, 0) + 1
        for d, c in hist.items():
            merged[d] = merged.get(d, 0) + c
        censored += report.undelivered
        doc = {
            "state": state_idx,
            "algorithm": algo,
            "generated": report.generated,
            "delivered": report.delivered,
            "undelivered": report.undelivered,
            "average_delay_slots": report.average_delay_slots,
            "max_delay": report.max_delay,
            "delay_histogram": {str(d): c for d, c in sorted(hist.items())},
            "cdf": [[d, f] for d, f in report.cdf],
            "ranging_pass": report.ranging.passed,
            "bmax_violations": report.bmax_violations,
            "age_weighted_buffer_sum": report.age_weighted_buffer_sum,
            "repetitions": report.repetitions,
        }
        _atomic_write(out_dir / f"report_{state_idx:03d}.json",
                      json.dumps(doc, indent=1))
        per_state_rows.append(doc)
        print(f"  state {state_idx:>4} avg={report.average_delay_slots:.4f} "
              f"delivered={report.delivered}/{report.generated}")

    if not per_state_rows:
        print("no schedules evaluated", file=sys.stderr)
        return EXIT_PARSE

    total_delivered = sum(merged.values())
    total = total_delivered + censored
    acc = 0
    cdf_rows = []
    for d in sorted(merged):
        acc += merged[d]
        cdf_rows.append((d, acc / total))
    mean = (sum(d * c for d, c in merged.items()) / total_delivered
            if total_delivered else 0.0)
    aggregate = {
        "algorithm": algo,
        "states": [r["state"] for r in per_state_rows],
        "generated": total,
        "delivered": total_delivered,
        "undelivered": censored,
        "average_delay_slots": mean,
        "max_delay": max(merged) if merged else 0,
        "delay_histogram": {str(d): merged[d] for d in sorted(merged)},
        "cdf": [[d, f] for d, f in cdf_rows],
        "ranging_pass_rate": (sum(r["ranging_pass"]
                                  for r in per_state_rows)
                              / len(per_state_rows)),
        "errors": errors,
    }
    _atomic_write(out_dir / "aggregate.json", json.dumps(aggregate, indent=1))
    buf = io.StringIO()
    buf.write("delay_slots,fraction\n")
    for d, f in cdf_rows:
        buf.write(f"{d},{f:.6f}\n")
    _atomic_write(out_dir / "cdf.csv", buf.getvalue())
    print(f"aggregate avg={mean:.4f} over {total} packets "
          f"({len(errors)} state errors)")
    return EXIT_OK


# -- compare ----------------------------------------------------------------


def cmd_compare(args: argparse.Namespace) -> int:
    rows = []
    for d in args.reports:
        agg_path = Path(d) / "aggregate.json"
        if not agg_path.exists():
            print(f"no aggregate.json under {d}", file=sys.stderr)
            return EXIT_PARSE
        agg = json.loads(agg_path.read_text())
        rows.append({
            "algorithm": agg.get("algorithm") or Path(d).name,
            "average_delay_slots": agg["average_delay_slots"],
            "max_delay": agg["max_delay"],
            "generated": agg["generated"],
            "delivered": agg["delivered"],
            "undelivered": agg["undelivered"],
            "delivered_fraction": (agg["delivered"] / agg["generated"]
                                   if agg["generated"] else 1.0),
            "ranging_pass_rate": agg["ranging_pass_rate"],
        })
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    cols = list(rows[0].keys())
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=cols)
    writer.writeheader()
    for row in rows:
        writer.writerow({k: (f"{v:.6f}" if isinstance(v, float) else v)
                         for k, v in row.items()})
    _atomic_write(out_dir / "comparison.csv", buf.getvalue())
    _atomic_write(out_dir / "comparison.json",
                  json.dumps({"rows": rows}, indent=1))
    for row in rows:
        print(f"  {row['algorithm']:>6}: avg {row['average_delay_slots']:.4f}"
              f" slots, delivered {row['delivered_fraction']:.3f}, "
              f"ranging {row['ranging_pass_rate']:.2f}")
    return EXIT_OK


# -- entry ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="slottopo",
        description="Topology design for time-slotted satellite networks")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", required=True,
                        help="scenario JSON (resolved against "
                             "$SLOTTOPO_SCENARIO_DIR and packaged data)")
    common.add_argument("--states", default=None,
                        help="state index or range a..b (default: all)")
    common.add_argument("--param", action="append", default=[],
                        metavar="KEY=VALUE",
                        help="override a scenario parameter (repeatable)")

    sp = sub.add_parser("schedule", parents=[common],
                        help="run a topology-design algorithm per state")
    sp.add_argument("--algo", required=True, choices=ALGORITHMS)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--tight-m", action="store_true",
                    help="recompute big-M constants to minimum safe values")
    sp.add_argument("--non-perfect", action="store_true",
                    help="plain max-weight matchings instead of "
                         "cardinality-preferred")
    sp.add_argument("--export-lp-only", action="store_true",
                    help="write LP files, skip the internal solver")
    sp.add_argument("--time-budget", type=float, default=300.0,
                    help="internal solver budget per state, seconds")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_schedule)

    ep = sub.add_parser("evaluate", parents=[common],
                        help="simulate stored schedules and report delays")
    ep.add_argument("--schedules", required=True,
                    help="directory with state_XXX.json schedule files")
    ep.add_argument("--reps", type=int, default=1,
                    help="times each state schedule is replayed")
    ep.add_argument("--horizon-penalty", action="store_true",
                    help="average censored packets at horizon-end delay")
    ep.add_argument("--out", required=True)
    ep.set_defaults(func=cmd_evaluate)

    cp = sub.add_parser("compare", help="tabulate evaluation reports")
    cp.add_argument("reports", nargs="+",
                    help="report directories from `evaluate`")
    cp.add_argument("--out", required=True)
    cp.set_defaults(func=cmd_compare)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (ScenarioError, json.JSONDecodeError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
