"""Command-line entry point: single runs, demos, and report tables.

Exit codes for ``run``: 0 converged with semantic match, 2 stalled (or
converged on the wrong language), 3 budget exhausted, 1 configuration
error.  ``demo`` exits 0 iff the demo's expected conclusion holds.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Optional

from . import harness
from .core import CANONICAL, Language, Trace, pair_decode, trace_generate
from .engines import (
    CEGIS,
    CONVERGED,
    HCEGIS,
    MINCEGIS,
    POSITIVE_ONLY,
    SIMULATED_MINCEGIS,
    STALLED,
    Generalizer,
    chain_generalizer,
    diag_generalizer,
    gold_generalizer,
    rectangle_generalizer,
    run_engine,
    simulate_min_via_arbitrary,
)
from .families import ChainFamily, DiagonalFamily, GoldFamily, RectangleFamily
from .logio import run_jsonl, summary_dict
from .verifiers import CexStrategy


class ConfigError(ValueError):
    pass


def _load_config(path: str) -> dict:
    """Flat key = value file, TOML-compatible for the keys we accept."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip().strip('"').strip("'")
    return values


def _build_family(name: str, universe_bound: Optional[int]):
    if name == "chain":
        return ChainFamily() if universe_bound is None else ChainFamily(universe_bound - 2)
    if name == "rectangle":
        return RectangleFamily()
    if name == "diagonal":
        return DiagonalFamily() if universe_bound is None else DiagonalFamily(universe_bound)
    if name == "gold":
        return GoldFamily() if universe_bound is None else GoldFamily(universe_bound)
    raise ConfigError(f"unknown family: {name}")


def _build_target(family, name: str, spec: str) -> Language:
    try:
        if name == "chain":
            return family.language(int(spec))
        if name == "rectangle":
            ax, bx, ay, by = (int(v) for v in spec.split(","))
            return family.language(ax, bx, ay, by)
        if name == "diagonal":
            if spec.startswith("diag:"):
                return family.diag_language(int(spec[5:]))
            if spec.startswith("fin:"):
                return family.fin_language(tuple(map(tuple, json.loads(spec[4:]))))
            raise ConfigError("diagonal target must be diag:<i> or fin:<json pairs>")
        if name == "gold":
            if spec == "full":
                return family.full_language()
            if spec.startswith("minus:"):
                return family.minus_language(int(spec[6:]))
            raise ConfigError("gold target must be full or minus:<i>")
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"bad target {spec!r} for family {name}: {exc}") from exc
    raise ConfigError(f"unknown family: {name}")


def _build_generalizer(family_name: str, family, name: Optional[str]) -> Generalizer:
    chosen = name or family_name
    builders = {
        "chain": chain_generalizer,
        "rectangle": rectangle_generalizer,
        "diagonal": diag_generalizer,
        "gold": gold_generalizer,
    }
    if chosen not in builders:
        raise ConfigError(f"unknown generalizer: {chosen}")
    if chosen != family_name:
        raise ConfigError(f"generalizer {chosen} does not fit family {family_name}")
    return builders[chosen](family)


def _decoder_for(family_name: str):
    if family_name == "rectangle":
        from .core import point_decode

        return point_decode
    if family_name == "diagonal":
        return pair_decode
    return None


def _out_dir(arg: Optional[str]) -> Path:
    base = arg or os.environ.get("CEGIS_LAB_LOG_DIR") or "."
    path = Path(base)
    path.mkdir(parents=True, exist_ok=True)
    return path


def cmd_run(args) -> int:
    cfg = _load_config(args.config) if args.config else {}

    def pick(flag_value, key, cast=str):
        if flag_value is not None:
            return flag_value
        if key in cfg:
            return cast(cfg[key])
        return None

    family_name = pick(args.family, "family")
    target_spec = pick(args.target, "target")
    engine = pick(args.engine, "engine") or CEGIS
    if family_name is None or target_spec is None:
        raise ConfigError("run requires --family and --target")
    if engine not in (CEGIS, MINCEGIS, HCEGIS, POSITIVE_ONLY, SIMULATED_MINCEGIS):
        raise ConfigError(f"unknown engine: {engine}")

    family = _build_family(family_name, pick(args.universe_bound, "universe_bound", int))
    target = _build_target(family, family_name, target_spec)
    generalizer = _build_generalizer(family_name, family, pick(args.generalizer, "generalizer"))
    seed = pick(args.seed, "seed", int) or 0
    budget = pick(args.budget, "budget", int) or harness.default_budget(target)
    strategy = CexStrategy(kind=pick(args.strategy, "strategy") or "first-found", seed=seed)
    schedule = pick(args.schedule, "schedule") or CANONICAL
    window = min(harness.default_stability_window(target), budget)

    trace = trace_generate(target, schedule, seed=seed, length=budget)
    if engine == SIMULATED_MINCEGIS:
        run = simulate_min_via_arbitrary(
            target, trace, generalizer, strategy, budget=budget, stability_window=window,
        )
    else:
        run = run_engine(
            engine, target, trace, generalizer, strategy,
            budget=budget, stability_window=window,
        )
    verdict = harness.convergence_verdict(run, target)

    out = _out_dir(args.out)
    stem = f"{family_name}-{engine}-{target_spec.replace(':', '_').replace(',', '_')}"
    log_path = out / f"{stem}.jsonl"
    log_path.write_text(run_jsonl(run, _decoder_for(family_name)))
    summary = summary_dict(run)
    summary["verdict"] = verdict.status
    summary["semantic_match"] = verdict.semantic_match
    summary_path = out / f"{stem}.summary.json"
    summary_path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    print(f"{verdict.status} match={verdict.semantic_match} "
          f"queries={run.queries} log={log_path}")

    if verdict.status == CONVERGED and verdict.semantic_match:
        return 0
    if verdict.status == STALLED or verdict.status == CONVERGED:
        return 2
    return 3


def cmd_demo(args) -> int:
    if args.name not in harness.DEMOS:
        print(f"unknown demo: {args.name}", file=sys.stderr)
        return 1
    kwargs = {}
    if args.name == "lemma1" and args.imax is not None:
        kwargs["i_max"] = args.imax
    if args.budget is not None and args.name in ("lemma1", "lemma2", "rectangle", "gold"):
        kwargs["budget"] = args.budget
    report = harness.DEMOS[args.name](**kwargs)

    out = _out_dir(args.out)
    (out / f"demo-{args.name}.md").write_text(report.to_markdown())
    (out / f"demo-{args.name}.json").write_text(
        json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n"
    )
    print(f"{report.title}: passed={report.passed}")
    print(report.conclusion)
    return 0 if report.passed else 1


def cmd_table(args) -> int:
    doc = json.loads(Path(args.report).read_text())
    if "rows" in doc:  # demo report
        keys = ["family", "target", "variant", "status", "semantic_match", "queries"]
        print("| " + " | ".join(keys) + " |")
        print("|" + "---|" * len(keys))
        for row in doc["rows"]:
            print("| " + " | ".join(str(row.get(k, "")) for k in keys) + " |")
        print()
        print(f"**Conclusion**: {doc.get('conclusion', '')}")
        return 0
    # run summary
    print("| field | value |")
    print("|---|---|")
    for key in sorted(doc):
        print(f"| {key} | {doc[key]} |")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cegis-lab",
        description="Counterexample-guided inductive synthesis laboratory",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute one synthesis run")
    run_p.add_argument("--config", help="flat key = value config file")
    run_p.add_argument("--family", help="chain|rectangle|diagonal|gold")
    run_p.add_argument("--target", help="target spec (family-dependent)")
    run_p.add_argument("--engine", help="cegis|mincegis|hcegis|positive-only|simulated-mincegis")
    run_p.add_argument("--generalizer")
    run_p.add_argument("--strategy", help="first-found|seeded-random|adversarial-max")
    run_p.add_argument("--seed", type=int)
    run_p.add_argument("--budget", type=int)
    run_p.add_argument("--universe-bound", dest="universe_bound", type=int)
    run_p.add_argument("--schedule", help="canonical|seeded-random|padded-seeded")
    run_p.add_argument("--out", help="output directory (default: $CEGIS_LAB_LOG_DIR or .)")
    run_p.set_defaults(func=cmd_run)

    demo_p = sub.add_parser("demo", help="run a shipped demonstration")
    demo_p.add_argument("name", help="theorem1|lemma1|lemma2|rectangle|gold")
    demo_p.add_argument("--imax", type=int)
    demo_p.add_argument("--budget", type=int)
    demo_p.add_argument("--out")
    demo_p.set_defaults(func=cmd_demo)

    table_p = sub.add_parser("table", help="render a report or summary JSON as Markdown")
    table_p.add_argument("report")
    table_p.set_defaults(func=cmd_table)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
