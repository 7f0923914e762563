"""Command-line surface: plan, oracle, export, validate, render, bench, gen."""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path

from .errors import (
    HeuristicInvariantViolation,
    InstanceError,
    MmrtcError,
    OracleLimitExceeded,
    SolutionParseError,
    SolverFailed,
)
from .generate import STYLE_DENSITY, generate_instance
from .model import build_model, export_mps, model_stats
from .oracle import oracle_optimum
from .reduction import ReductionParams, build_reduction
from .render import render_svg
from .solution import solution_from_dict, solution_to_dict
from .solve import (
    SolverConfig,
    default_solver_config,
    load_solver_config,
    parameter_search,
    plan,
)
from .stc import build_plan
from .terrain import (
    build_graph,
    decompose,
    format_instance,
    parse_instance,
    root_ids,
)
from .validate import validate_solution
from .warmstart import initial_solution

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_PARSE = 2
EXIT_REDUCTION = 3
EXIT_SOLVER = 4
EXIT_VALIDATION = 5


def _read_instance(path: str):
    return parse_instance(Path(path).read_text(encoding="utf-8"))


def _params_from_args(args) -> ReductionParams:
    alpha = math.inf if args.alpha in ("inf", None) else float(args.alpha)
    return ReductionParams(args.heuristic, alpha=alpha, beta=args.beta)


def _config_from_args(args) -> SolverConfig:
    if getattr(args, "solver_config", None):
        return load_solver_config(args.solver_config)
    return default_solver_config(time_limit=getattr(args, "time_limit", 60.0))


def _coverage_dict(result) -> dict:
    d = decompose(result.graph)
    paths = []
    for path in result.plan.paths:
        paths.append([[d.vertex(did).row, d.vertex(did).col] for did in path])
    return {
        "paths": paths,
        "times": [float(t) for t in result.plan.times],
        "overall": float(result.plan.overall),
    }


def cmd_plan(args) -> int:
    inst = _read_instance(args.instance)
    cfg = _config_from_args(args)
    if args.search:
        chosen, result, probes = parameter_search(inst, cfg, args.budget)
        for rec in probes:
            note = rec.error or f"bound={rec.bound} objective={rec.objective}"
            print(f"probe {rec.params.label()}: {note}")
        print(f"selected {chosen.label()}")
    else:
        result = plan(inst, _params_from_args(args), cfg,
                      warmstart=args.warmstart == "on")
    stats = result.stats
    payload = solution_to_dict(
        result.solution, result.graph,
        coverage=_coverage_dict(result),
        stats=stats.__dict__,
    )
    if args.out:
        Path(args.out).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    if args.svg:
        d = decompose(result.graph)
        Path(args.svg).write_text(
            render_svg(inst, result.graph, solution=result.solution,
                       plan=result.plan, d=d),
            encoding="utf-8",
        )
    gap = "n/a" if stats.gap_pct is None else f"{stats.gap_pct:.1f}%"
    print(f"heuristic:      {stats.heuristic}")
    print(f"makespan:       {stats.makespan}")
    print(f"coverage time:  {stats.coverage_time}")
    print(f"variables:      {stats.variables} of {stats.variables_unreduced} "
          f"({stats.removed_pct:.1f}% removed)")
    print(f"gap:            {gap}")
    print(f"status:         {stats.status}")
    print(f"runtime:        {stats.total_seconds:.2f}s "
          f"(solver {stats.solve_seconds:.2f}s)")
    return EXIT_OK


def cmd_oracle(args) -> int:
    inst = _read_instance(args.instance)
    g = build_graph(inst)
    makespan, solution = oracle_optimum(g, root_ids(inst, g), args.limit)
    print(f"optimal makespan: {float(makespan)}")
    if args.out:
        payload = solution_to_dict(solution, g)
        Path(args.out).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    return EXIT_OK


def cmd_export(args) -> int:
    inst = _read_instance(args.instance)
    g = build_graph(inst)
    roots = root_ids(inst, g)
    red = build_reduction(g, roots, _params_from_args(args))
    m = build_model(list(red.residuals), roots, g.num_vertices)
    stats = model_stats(m)
    Path(args.out).write_text(export_mps(m), encoding="utf-8")
    print(f"wrote {args.out}: {stats.variables} variables, "
          f"{stats.constraints} constraints")
    return EXIT_OK


def cmd_validate(args) -> int:
    inst = _read_instance(args.instance)
    g = build_graph(inst)
    data = json.loads(Path(args.solution).read_text(encoding="utf-8"))
    solution = solution_from_dict(data, g)
    report = validate_solution(solution, g, root_ids(inst, g))
    if args.json:
        print(json.dumps(report.to_dict(), indent=2))
    else:
        print(report.to_text())
    return EXIT_OK if report.passed else EXIT_VALIDATION


def cmd_render(args) -> int:
    inst = _read_instance(args.instance)
    g = build_graph(inst)
    solution = None
    plan_obj = None
    d = None
    if args.solution:
        data = json.loads(Path(args.solution).read_text(encoding="utf-8"))
        solution = solution_from_dict(data, g)
        d = decompose(g)
        plan_obj = build_plan(solution, g, d)
    reduction = None
    if args.heuristic != "none":
        reduction = build_reduction(g, root_ids(inst, g), _params_from_args(args))
    svg = render_svg(inst, g, reduction=reduction, robot=args.robot,
                     solution=solution, plan=plan_obj, d=d)
    Path(args.svg).write_text(svg, encoding="utf-8")
    print(f"wrote {args.svg}")
    return EXIT_OK


def cmd_gen(args) -> int:
    inst = generate_instance(args.style, args.rows, args.cols, args.k,
                             seed=args.seed, density=args.density)
    text = format_instance(inst)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _bench_methods(args) -> list[tuple[str, ReductionParams | None]]:
    alpha = math.inf if args.alpha in ("inf", None) else float(args.alpha)
    return [
        ("warmstart", None),
        ("mip", ReductionParams("none")),
        ("mip-prh", ReductionParams("prh", alpha=alpha)),
        ("mip-srh", ReductionParams("srh", beta=args.beta)),
    ]


def cmd_bench(args) -> int:
    paths: list[Path]
    if args.instances:
        root = Path(args.instances)
        paths = sorted(root.glob("*.mmrtc")) if root.is_dir() else [root]
        instances = [(p.stem, _read_instance(str(p))) for p in paths]
    else:
        instances = [
            (f"{style}-{args.rows}x{args.cols}-s{args.seed + i}",
             generate_instance(style, args.rows, args.cols, args.k,
                               seed=args.seed + i))
            for i, style in enumerate(("floor", "maze", "terrain"))
        ]
    cfg = _config_from_args(args)
    rows = []
    for name, inst in instances:
        g = build_graph(inst)
        roots = root_ids(inst, g)
        d = decompose(g)
        for method, params in _bench_methods(args):
            row = {"instance": name, "method": method, "coverage_time": "",
                   "makespan": "", "gap_pct": "", "removed_pct": "",
                   "runtime_s": "", "error": ""}
            started = time.monotonic()
            try:
                if params is None:
                    seed = initial_solution(g, roots)
                    cov = build_plan(seed, g, d)
                    row["makespan"] = f"{float(seed.makespan):.6g}"
                    row["coverage_time"] = f"{float(cov.overall):.6g}"
                    row["removed_pct"] = "0.0"
                else:
                    result = plan(inst, params, cfg)
                    st = result.stats
                    row["makespan"] = f"{st.makespan:.6g}"
                    row["coverage_time"] = f"{st.coverage_time:.6g}"
                    row["removed_pct"] = f"{st.removed_pct:.1f}"
                    if st.gap_pct is not None:
                        row["gap_pct"] = f"{st.gap_pct:.1f}"
            except MmrtcError as exc:
                row["error"] = f"{type(exc).__name__}: {exc}"
            row["runtime_s"] = f"{time.monotonic() - started:.3f}"
            rows.append(row)
            print(f"{name} {method}: "
                  f"{row['error'] or 'ct=' + row['coverage_time']}")

    header = ["instance", "method", "coverage_time", "makespan", "gap_pct",
              "removed_pct", "runtime_s", "error"]
    out = Path(args.report)
    csv_lines = [",".join(header)]
    csv_lines += [",".join(str(r[h]) for h in header) for r in rows]
    out.write_text("\n".join(csv_lines) + "\n", encoding="utf-8")
    md = out.with_suffix(".md")
    md_lines = ["| " + " | ".join(header) + " |",
                "|" + "---|" * len(header)]
    md_lines += ["| " + " | ".join(str(r[h]) for h in header) + " |" for r in rows]
    md.write_text("\n".join(md_lines) + "\n", encoding="utf-8")
    print(f"wrote {out} and {md}")
    return EXIT_OK


def _add_heuristic_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--heuristic", choices=("none", "prh", "srh"), default="none")
    p.add_argument("--alpha", default="inf",
                   help="parabola width scale for prh (float or 'inf')")
    p.add_argument("--beta", type=float, default=0.0,
                   help="removal budget scale for srh")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mmrtc",
        description="Min-max rooted tree cover planning for multi-robot grid coverage.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="solve an instance and emit a coverage plan")
    p.add_argument("instance")
    _add_heuristic_flags(p)
    p.add_argument("--search", action="store_true",
                   help="pick the heuristic parameter automatically")
    p.add_argument("--budget", type=float, default=60.0,
                   help="total time budget in seconds for --search")
    p.add_argument("--warmstart", choices=("on", "off"), default="on")
    p.add_argument("--time-limit", type=float, default=60.0)
    p.add_argument("--solver-config")
    p.add_argument("--out", help="solution JSON path")
    p.add_argument("--svg", help="rendering path")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("oracle", help="exact makespan by brute force (small instances)")
    p.add_argument("instance")
    p.add_argument("--limit", type=int, default=14, help="max |V| accepted")
    p.add_argument("--out", help="solution JSON path")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("export", help="write the MPS model without solving")
    p.add_argument("instance")
    _add_heuristic_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("validate", help="check a solution JSON against an instance")
    p.add_argument("instance")
    p.add_argument("solution")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("render", help="draw an instance (optionally with overlays)")
    p.add_argument("instance")
    _add_heuristic_flags(p)
    p.add_argument("--solution", help="solution JSON to overlay")
    p.add_argument("--robot", type=int, default=0,
                   help="robot whose reduction is drawn")
    p.add_argument("--svg", required=True)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("bench", help="run all methods over instances, report CSV+Markdown")
    p.add_argument("--instances", help="instance file or directory of *.mmrtc files")
    p.add_argument("--rows", type=int, default=10)
    p.add_argument("--cols", type=int, default=10)
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--alpha", default="0.3")
    p.add_argument("--beta", type=float, default=0.3)
    p.add_argument("--time-limit", type=float, default=60.0)
    p.add_argument("--solver-config")
    p.add_argument("--report", default="bench.csv")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("gen", help="generate a random instance")
    p.add_argument("--style", choices=sorted(STYLE_DENSITY), default="floor")
    p.add_argument("--rows", type=int, default=10)
    p.add_argument("--cols", type=int, default=10)
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--density", type=float, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InstanceError as exc:
        print(f"instance error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (HeuristicInvariantViolation,) as exc:
        print(f"reduction error: {exc}", file=sys.stderr)
        return EXIT_REDUCTION
    except (SolverFailed, SolutionParseError) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except OracleLimitExceeded as exc:
        print(f"oracle refused: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except MmrtcError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
