"""Command-line front door: solve, verify, simulate, study, serve."""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace

from .belief_solver import solve_belief, solve_complete
from .full_solver import solve_full
from .game import CapacityError, GameSpec, SpecError, load_spec_file, validate
from .policies import policy_for
from .presets import PRESETS, get_preset
from .simulate import DEFAULT_HORIZONS, SimConfig, simulate, study
from .verify import TOLERANCE, equivalence_suite, lemma_suite, monotonicity_suite


def _load_spec_args(args) -> GameSpec:
    if args.preset and args.spec:
        raise SpecError("pass --preset or --spec, not both")
    if args.preset:
        spec = get_preset(args.preset)
    elif args.spec:
        spec = load_spec_file(args.spec)
    else:
        raise SpecError("one of --preset or --spec is required")
    overrides = {}
    if getattr(args, "model", None):
        overrides["model"] = args.model
    if getattr(args, "alpha", None) is not None:
        overrides["alpha"] = args.alpha
    if getattr(args, "horizon", None) is not None:
        overrides["horizon"] = args.horizon
    return replace(spec, **overrides) if overrides else spec


def _observability(args, spec: GameSpec) -> str:
    if args.partial_obs is None:
        return "partial" if spec.model == "M3" else "full"
    return "partial" if args.partial_obs else "full"


def _solve_plan(spec: GameSpec, baseline: str | None, observability: str):
    if baseline == "complete":
        return solve_complete(spec, observability), "complete"
    if spec.model == "M3":
        return solve_belief(spec), "partial"
    return solve_full(spec), "partial"


def cmd_solve(args) -> int:
    spec = validate(_load_spec_args(args))
    observability = _observability(args, spec)
    plan, planner = _solve_plan(spec, args.baseline, observability)
    if args.dump_tables:
        if not hasattr(plan, "to_csv"):
            raise SpecError("--dump-tables applies to belief-space plans (M3 or complete/partial)")
        with open(args.dump_tables, "w", newline="", encoding="utf-8") as fh:
            plan.to_csv(fh)
    realization = plan.realization()
    predicted = plan.predicted_rewards()
    record = {
        "model": spec.model,
        "planner": planner,
        "observability": observability,
        "first_action": int(plan.first_action),
        "first_action_label": spec.row_labels[plan.first_action],
        "value": float(plan.value),
        "realization": [spec.row_labels[a] for a in realization],
        "predicted_rewards": [float(r) for r in predicted],
    }
    if args.format == "json-lines":
        print(json.dumps(record))
    elif args.format == "csv":
        print("round,action,predicted_reward")
        for t, (a, r) in enumerate(zip(realization, predicted), start=1):
            print(f"{t},{spec.row_labels[a]},{r!r}")
        print(f"total,,{record['value']!r}")
    else:
        print(f"model {spec.model}, planner {planner}, {observability} observability")
        print(f"first action: {record['first_action_label']}")
        print(f"value: {record['value']:g}")
        print("plan (no-learning branch): " + ", ".join(record["realization"]))
        print(
            "predicted per-round rewards: "
            + ", ".join(f"{r:g}" for r in record["predicted_rewards"])
        )
    return 0


def cmd_verify(args) -> int:
    equiv = equivalence_suite(args.instances, args.seed)
    mono = monotonicity_suite(args.instances, args.seed)
    lemma = lemma_suite(args.lemma_instances, args.seed + 1)
    print(
        f"oracle equivalence: {equiv.instances} instances, "
        f"max |delta| = {equiv.max_deviation:.3g}"
    )
    print(
        f"information monotonicity: {mono.instances} instances, "
        f"worst M3-over-M2 excess = {mono.max_deviation:.3g}"
    )
    print(f"commit structure: {lemma.instances} instances, {len(lemma.failures)} violations")
    failures = equiv.failures + mono.failures + lemma.failures
    if failures:
        for f in failures[:10]:
            print(f"FAIL seed={f.seed} instance={f.index} model={f.model}: {f.detail}")
        print(f"FAIL ({len(failures)} total)")
        return 1
    print(f"PASS, max |delta| < {TOLERANCE:g}")
    return 0


def cmd_simulate(args) -> int:
    spec = validate(_load_spec_args(args))
    config = SimConfig(runs=args.runs, seed=args.seed, planner=args.planner, horizons=(spec.horizon,))
    observability = _observability(args, spec)
    plan, _ = _solve_plan(spec, "complete" if args.planner == "complete" else None, observability)
    report = simulate(spec, policy_for(plan), config)
    if args.format == "json-lines":
        line = report.to_json()
        print(line)
        out_text = line + "\n"
    elif args.format == "csv":
        lines = ["round,mean_reward"]
        lines += [f"{t},{r!r}" for t, r in enumerate(report.per_round_mean, start=1)]
        lines.append(f"total,{report.total_mean!r}")
        out_text = "\n".join(lines) + "\n"
        print(out_text, end="")
    else:
        print(
            f"{args.planner} planner, {report.runs} runs: total mean {report.total_mean:.4f}"
            f" +- {report.stderr:.4f}"
        )
        print("per-round means: " + ", ".join(f"{r:.4f}" for r in report.per_round_mean))
        out_text = report.to_json() + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out_text)
    return 0


def cmd_study(args) -> int:
    horizons = tuple(int(x) for x in args.horizons.split(","))
    config = SimConfig(
        runs=args.runs,
        seed=args.seed,
        horizons=horizons,
        instances=args.instances,
        m=args.rows,
        n=args.cols,
    )
    rows = study(config, out=args.out)
    if args.out:
        print(f"wrote {len(rows)} rows to {args.out}")
    else:
        print("T,planner,mean_reward_per_round,stderr,instances,runs_per_instance,seed")
        for r in rows:
            print(
                f"{r['T']},{r['planner']},{r['mean_reward_per_round']!r},{r['stderr']!r},"
                f"{r['instances']},{r['runs_per_instance']},{r['seed']}"
            )
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    host = os.environ.get("REVEALPLAN_HOST", "127.0.0.1")
    app = create_app(db_path=args.db)
    uvicorn.run(app, host=host, port=args.port)
    return 0


def _add_spec_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--preset", choices=sorted(PRESETS), help="compiled-in spec")
    p.add_argument("--spec", help="path to a game-spec JSON document")
    p.add_argument("--model", choices=("M1", "M2", "M3"), help="override the spec's model")
    p.add_argument("--alpha", type=float, help="override the learning probability")
    p.add_argument("--horizon", type=int, help="override the number of rounds")
    p.add_argument(
        "--partial-obs", dest="partial_obs", action="store_true", default=None,
        help="plan for partial observability",
    )
    p.add_argument(
        "--full-obs", dest="partial_obs", action="store_false",
        help="plan for full observability",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="revealplan",
        description="Plan, verify, and simulate repeated leader-follower games "
        "with partially adapting followers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="print the optimal plan and value for a spec")
    _add_spec_flags(p)
    p.add_argument("--baseline", choices=("complete",), help="use the complete-adaptation baseline")
    p.add_argument("--format", choices=("text", "csv", "json-lines"), default="text")
    p.add_argument("--dump-tables", help="write the belief value/action tables to this CSV path")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="cross-check planners against the brute-force oracle")
    p.add_argument("--instances", type=int, default=200)
    p.add_argument("--lemma-instances", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="Monte Carlo roll-outs of a planner against true followers")
    _add_spec_flags(p)
    p.add_argument("--planner", choices=("partial", "complete"), default="partial")
    p.add_argument("--runs", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write the report to this path")
    p.add_argument("--format", choices=("text", "csv", "json-lines"), default="text")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("study", help="horizon sweep comparing partial vs complete planners")
    p.add_argument("--horizons", default=",".join(str(t) for t in DEFAULT_HORIZONS))
    p.add_argument("--instances", type=int, default=1000)
    p.add_argument("--runs", type=int, default=100, help="runs per instance")
    p.add_argument("--rows", type=int, default=3, help="rows of random instances")
    p.add_argument("--cols", type=int, default=3, help="columns of random instances")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write the CSV to this path")
    p.set_defaults(func=cmd_study)

    p = sub.add_parser("serve", help="run the live-session HTTP service")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--db", default="revealplan_sessions.db", help="session store path")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SpecError, CapacityError, KeyError, FileNotFoundError) as exc:
        msg = exc.args[0] if exc.args else str(exc)
        print(f"error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
