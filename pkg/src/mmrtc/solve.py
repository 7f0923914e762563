"""External-solver orchestration, the end-to-end pipeline, and parameter search.

Solvers are abstracted as subprocesses: the model is written as a free-format
MPS file, a configurable command is invoked, and its solution file is parsed
back.  The bundled `python -m mmrtc.solve_highs` runner is the default
command, so the toolkit works out of the box; any MPS-capable solver can be
swapped in through a config file or the MMRTC_SOLVER_CMD environment variable.
"""

from __future__ import annotations

import os
import re
import shlex
import subprocess
import sys
import tempfile
import time
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path

from .errors import (
    InfeasibleModel,
    MmrtcError,
    SolutionParseError,
    SolverFailed,
)
from .model import (
    MipModel,
    apply_warmstart,
    build_model,
    export_mps,
    extract_solution,
    model_stats,
)
from .reduction import ReductionParams, ReductionResult, build_reduction
from .solution import MmrtcSolution
from .stc import CoveragePlan, build_plan
from .terrain import Instance, TerrainGraph, build_graph, decompose, root_ids
from .validate import makespan_and_gap, validate_solution
from .warmstart import initial_solution, mst_warmstart

GENERIC_BOUND_PATTERN = r"^#\s*bound\s+(-?[0-9.eE+-]+)"
SEARCH_VALUES = (0.3, 0.6, 0.9)
PROBE_SHARE = 0.02
FINAL_SHARE = 0.88


@dataclass(frozen=True)
class SolverConfig:
    """How to invoke a MILP solver on an exported model.

    `command` is a template with {mps} and {sol} placeholders; {time} (the
    limit in seconds) and {warm} (a warm-start file in `name value` format)
    are substituted when present.
    """

    command: str
    kind: str = "generic"  # solution dialect: generic | cbc | scip
    time_limit: float = 60.0
    threads: int = 1
    bound_pattern: str | None = GENERIC_BOUND_PATTERN

    def __post_init__(self):
        for placeholder in ("{mps}", "{sol}"):
            if placeholder not in self.command:
                raise ValueError(f"solver command must contain {placeholder}")


@dataclass(frozen=True)
class SolveOutcome:
    assignment: dict[str, float]
    objective: float
    bound: float | None
    status: str  # optimal | feasible
    wall_time: float


@dataclass(frozen=True)
class ParsedSolution:
    values: dict[str, float]
    objective: float | None
    bound: float | None
    status: str | None


def default_solver_config(time_limit: float = 60.0) -> SolverConfig:
    command = os.environ.get(
        "MMRTC_SOLVER_CMD",
        f"{sys.executable} -m mmrtc.solve_highs {{mps}} {{sol}} "
        "--time-limit {time} --warm {warm}",
    )
    kind = os.environ.get("MMRTC_SOLVER_KIND", "generic")
    return SolverConfig(command=command, kind=kind, time_limit=time_limit)


def load_solver_config(path: str | Path) -> SolverConfig:
    """Read a key = value config file (command, kind, time_limit, threads, bound_pattern)."""
    values: dict[str, str] = {}
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise MmrtcError(f"bad solver-config line {raw!r}: expected key = value")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()
    if "command" not in values:
        raise MmrtcError("solver config must set 'command'")
    cfg = SolverConfig(
        command=os.environ.get("MMRTC_SOLVER_CMD", values["command"]),
        kind=values.get("kind", "generic"),
        time_limit=float(values.get("time_limit", 60.0)),
        threads=int(values.get("threads", 1)),
        bound_pattern=values.get("bound_pattern", GENERIC_BOUND_PATTERN) or None,
    )
    return cfg


def parse_solution_file(text: str, kind: str) -> ParsedSolution:
    """Parse a solver solution file into a variable assignment plus metadata."""
    if kind == "generic":
        return _parse_generic(text)
    if kind == "cbc":
        return _parse_cbc(text)
    if kind == "scip":
        return _parse_scip(text)
    raise SolutionParseError(f"unknown solution dialect {kind!r}")


def _set_value(values: dict[str, float], name: str, token: str, lineno: int) -> None:
    if name in values:
        raise SolutionParseError(f"line {lineno}: duplicate variable {name!r}")
    try:
        values[name] = float(token)
    except ValueError:
        raise SolutionParseError(f"line {lineno}: bad value {token!r} for {name!r}") from None


def _parse_generic(text: str) -> ParsedSolution:
    values: dict[str, float] = {}
    objective = bound = None
    status = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("**"):
            continue
        if line.startswith("#"):
            fields = line.lstrip("#").split()
            if len(fields) == 2 and fields[0] in ("status", "objective", "bound"):
                if fields[0] == "status":
                    status = fields[1]
                elif fields[0] == "objective":
                    objective = float(fields[1])
                else:
                    bound = float(fields[1])
            continue
        fields = line.split()
        if len(fields) != 2:
            raise SolutionParseError(f"line {lineno}: expected 'name value', got {raw!r}")
        _set_value(values, fields[0], fields[1], lineno)
    return ParsedSolution(values, objective, bound, status)


def _parse_cbc(text: str) -> ParsedSolution:
    values: dict[str, float] = {}
    objective = None
    status = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if "objective value" in line.lower() or lineno == 1 and not line[0].isdigit():
            # Status header, e.g. "Optimal - objective value 16.00000000".
            word = line.split()[0].lower()
            status = {"optimal": "optimal", "stopped": "feasible",
                      "infeasible": "infeasible"}.get(word, word)
            match = re.search(r"objective value\s+(-?[0-9.eE+]+)", line, re.I)
            if match:
                objective = float(match.group(1))
            continue
        fields = line.split()
        if len(fields) >= 3 and fields[0].lstrip("-").isdigit():
            _set_value(values, fields[1], fields[2], lineno)
        else:
            raise SolutionParseError(f"line {lineno}: unrecognized row {raw!r}")
    return ParsedSolution(values, objective, None, status)


def _parse_scip(text: str) -> ParsedSolution:
    values: dict[str, float] = {}
    objective = None
    status = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        low = line.lower()
        if low.startswith("solution status:"):
            status = "infeasible" if "infeasible" in low else (
                "optimal" if "optimal" in low else "feasible")
            continue
        if low.startswith("objective value:"):
            objective = float(line.split(":", 1)[1].strip())
            continue
        if low.startswith("no solution"):
            continue
        fields = line.split()
        if len(fields) >= 2:
            _set_value(values, fields[0], fields[1], lineno)
        else:
            raise SolutionParseError(f"line {lineno}: unrecognized row {raw!r}")
    return ParsedSolution(values, objective, None, status)


def _write_warm_file(path: Path, warm: dict[str, Fraction]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for name, value in warm.items():
            fh.write(f"{name} {float(value)!r}\n")


def solve_external(m: MipModel, warm: dict[str, Fraction] | None,
                   cfg: SolverConfig, workdir: str | Path | None = None) -> SolveOutcome:
    """Export, invoke the configured solver, and parse its solution back."""
    started = time.monotonic()
    with tempfile.TemporaryDirectory(prefix="mmrtc-", dir=workdir) as tmp:
        mps_path = Path(tmp) / "model.mps"
        sol_path = Path(tmp) / "model.sol"
        warm_path = Path(tmp) / "warm.txt"
        mps_path.write_text(export_mps(m), encoding="utf-8")
        if "{warm}" in cfg.command:
            # An empty file means "no start"; solvers that take a warm file
            # always get a readable path.
            _write_warm_file(warm_path, warm or {})
        command = cfg.command.format(
            mps=str(mps_path), sol=str(sol_path),
            warm=str(warm_path), time=cfg.time_limit, threads=cfg.threads,
        )
        try:
            proc = subprocess.run(
                shlex.split(command), capture_output=True, text=True,
                timeout=cfg.time_limit * 2 + 60,
            )
        except subprocess.TimeoutExpired as exc:
            raise SolverFailed(f"solver exceeded its wall-clock allowance: {exc}") from None
        except OSError as exc:
            raise SolverFailed(f"cannot run solver command {command!r}: {exc}") from None
        if not sol_path.exists():
            raise SolverFailed(
                f"solver exited with code {proc.returncode} and no solution file; "
                f"stderr: {proc.stderr.strip()[:500]}"
            )
        sol_text = sol_path.read_text(encoding="utf-8")

    parsed = parse_solution_file(sol_text, cfg.kind)
    if parsed.status == "infeasible":
        raise InfeasibleModel("solver reported the model infeasible")
    if not parsed.values:
        raise SolverFailed(
            f"solver produced no variable values (status {parsed.status!r})"
        )
    missing = [v.name for v in m.variables
               if v.kind == "B" and v.name not in parsed.values]
    if missing:
        raise SolutionParseError(
            f"solution misses {len(missing)} binary variables, e.g. {missing[:5]}"
        )

    bound = parsed.bound
    if bound is None and cfg.bound_pattern:
        for source in (sol_text, proc.stdout or ""):
            match = re.search(cfg.bound_pattern, source, re.MULTILINE)
            if match:
                bound = float(match.group(1))
                break
    objective = parsed.values.get(m.tau_name)
    if objective is None:
        objective = parsed.objective
    if objective is None:
        raise SolutionParseError("solution carries neither tau nor an objective value")
    status = parsed.status or "feasible"
    if status not in ("optimal", "feasible"):
        status = "feasible"
    return SolveOutcome(
        assignment=parsed.values,
        objective=float(objective),
        bound=bound,
        status=status,
        wall_time=time.monotonic() - started,
    )


@dataclass(frozen=True)
class PlanStats:
    variables_unreduced: int
    variables: int
    removed_pct: float
    constraints: int
    makespan: float
    coverage_time: float
    gap_pct: float | None
    status: str
    solve_seconds: float
    total_seconds: float
    heuristic: str


@dataclass(frozen=True)
class PlanResult:
    solution: MmrtcSolution
    plan: CoveragePlan
    stats: PlanStats
    reduction: ReductionResult
    graph: TerrainGraph


def plan(inst: Instance, params: ReductionParams, cfg: SolverConfig,
         warmstart: bool = True) -> PlanResult:
    """Full pipeline: reduce, build, warm-start, solve, extract, validate, STC."""
    started = time.monotonic()
    g = build_graph(inst)
    roots = root_ids(inst, g)
    d = decompose(g)
    red = build_reduction(g, roots, params)
    m = build_model(list(red.residuals), roots, g.num_vertices)

    if params.heuristic == "none":
        seed = initial_solution(g, roots)
    else:
        seed = mst_warmstart(list(red.residuals), roots)
    warm = apply_warmstart(m, seed) if warmstart else None

    outcome = solve_external(m, warm, cfg)
    sol = extract_solution(m, outcome.assignment)
    report = validate_solution(sol, g, roots)
    if not report.passed:
        raise InfeasibleModel(f"extracted solution failed validation:\n{report.to_text()}")
    cov = build_plan(sol, g, d)

    makespan, gap = makespan_and_gap(sol, g, outcome.bound)
    stats = model_stats(m)
    unreduced = len(roots) * (g.num_vertices + 3 * g.num_edges) + 1
    return PlanResult(
        solution=sol,
        plan=cov,
        stats=PlanStats(
            variables_unreduced=unreduced,
            variables=stats.variables,
            removed_pct=100.0 * (unreduced - stats.variables) / unreduced,
            constraints=stats.constraints,
            makespan=makespan,
            coverage_time=float(cov.overall),
            gap_pct=gap,
            status=outcome.status,
            solve_seconds=outcome.wall_time,
            total_seconds=time.monotonic() - started,
            heuristic=params.label(),
        ),
        reduction=red,
        graph=g,
    )


@dataclass(frozen=True)
class ProbeRecord:
    params: ReductionParams
    bound: float | None
    objective: float | None
    error: str | None


def parameter_search(inst: Instance, cfg: SolverConfig,
                     budget: float) -> tuple[ReductionParams, PlanResult, list[ProbeRecord]]:
    """Probe both heuristics over {0.3, 0.6, 0.9}, then solve the best candidate.

    Each probe gets 2% of the budget and the final solve 88%; the candidate
    with the smallest reported lower bound wins (smallest incumbent objective
    when no probe reports a bound), ties going to the earliest candidate.
    """
    candidates = [ReductionParams("prh", alpha=v) for v in SEARCH_VALUES]
    candidates += [ReductionParams("srh", beta=v) for v in SEARCH_VALUES]
    probe_cfg = replace(cfg, time_limit=max(budget * PROBE_SHARE, 0.1))

    g = build_graph(inst)
    roots = root_ids(inst, g)
    records: list[ProbeRecord] = []
    for params in candidates:
        try:
            red = build_reduction(g, roots, params)
            m = build_model(list(red.residuals), roots, g.num_vertices)
            warm = apply_warmstart(m, mst_warmstart(list(red.residuals), roots))
            outcome = solve_external(m, warm, probe_cfg)
            records.append(ProbeRecord(params, outcome.bound, outcome.objective, None))
        except MmrtcError as exc:
            records.append(ProbeRecord(params, None, None, str(exc)))

    final_cfg = replace(cfg, time_limit=max(budget * FINAL_SHARE, 0.1))
    bounded = [r for r in records if r.bound is not None]
    usable = bounded or [r for r in records if r.objective is not None]
    if not usable:
        chosen = ReductionParams("none")
    else:
        key = (lambda r: r.bound) if bounded else (lambda r: r.objective)
        best = usable[0]
        for rec in usable[1:]:
            if key(rec) < key(best):
                best = rec
        chosen = best.params
    return chosen, plan(inst, chosen, final_cfg), records
