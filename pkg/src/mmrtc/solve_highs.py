"""MILP runner: reads an MPS file, solves with scipy's HiGHS, writes a solution file.

This is the default external-solver command for the toolkit:

    python -m mmrtc.solve_highs MODEL.mps OUT.sol [--time-limit S] [--warm FILE]

The warm file holds `name value` lines for a feasible assignment; like any
MIP solver's start vector, it becomes the incumbent whenever the search has
not found anything better by its deadline.  The solution file is the
`generic` dialect: `# status/objective/bound` comment lines followed by one
`name value` line per variable.
"""

from __future__ import annotations

import argparse
import math
import sys

from .mps import MpsProblem, parse_mps


def solve_problem(problem: MpsProblem, time_limit: float | None = None):
    import numpy as np
    from scipy.optimize import Bounds, LinearConstraint, milp
    from scipy.sparse import coo_matrix

    order = list(problem.variables)
    col = {name: j for j, name in enumerate(order)}
    n = len(order)

    c = np.zeros(n)
    for name, coef in problem.rows[problem.objective].terms.items():
        c[col[name]] = coef

    rows = problem.constraint_rows()
    data, ci, cj = [], [], []
    lo, hi = [], []
    for idx, row in enumerate(rows):
        for name, coef in row.terms.items():
            ci.append(idx)
            cj.append(col[name])
            data.append(coef)
        if row.sense == "L":
            lo.append(-np.inf)
            hi.append(row.rhs)
        elif row.sense == "G":
            lo.append(row.rhs)
            hi.append(np.inf)
        else:
            lo.append(row.rhs)
            hi.append(row.rhs)

    integrality = np.array(
        [1 if problem.variables[name].integer else 0 for name in order]
    )
    bounds = Bounds(
        np.array([problem.variables[name].lower for name in order]),
        np.array([problem.variables[name].upper for name in order]),
    )
    options = {}
    if time_limit is not None:
        options["time_limit"] = time_limit
    constraints = None
    if rows:
        a = coo_matrix((data, (ci, cj)), shape=(len(rows), n))
        constraints = LinearConstraint(a, np.array(lo), np.array(hi))
    res = milp(c, constraints=constraints, integrality=integrality,
               bounds=bounds, options=options)
    return order, res


def load_warm_values(path: str, problem: MpsProblem) -> list[float] | None:
    """Read a `name value` warm-start file; reject it unless feasible."""
    values = {name: 0.0 for name in problem.variables}
    seen_any = False
    try:
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                fields = line.split()
                if len(fields) == 2 and fields[0] in values:
                    values[fields[0]] = float(fields[1])
                    seen_any = True
    except OSError:
        return None
    if not seen_any:
        return None
    for row in problem.constraint_rows():
        lhs = sum(coef * values[name] for name, coef in row.terms.items())
        ok = {"L": lhs <= row.rhs + 1e-6,
              "G": lhs >= row.rhs - 1e-6,
              "E": abs(lhs - row.rhs) <= 1e-6}[row.sense]
        if not ok:
            return None
    return [values[name] for name in problem.variables]


def format_solution(problem: MpsProblem, order: list[str], res,
                    warm: list[float] | None) -> str:
    status = {0: "optimal", 1: "feasible", 2: "infeasible", 3: "unbounded"}.get(
        res.status, "unknown"
    )
    x = list(res.x) if res.x is not None else None
    objective = float(res.fun) if res.fun is not None else None
    if warm is not None and res.status != 2:
        obj_terms = problem.rows[problem.objective].terms
        warm_obj = sum(coef * warm[order.index(name)] for name, coef in obj_terms.items())
        if objective is None or warm_obj < objective:
            x, objective = warm, warm_obj
            if status in ("unknown",):
                status = "feasible"
    if status == "feasible" and x is None:
        status = "unknown"
    lines = [f"# status {status}"]
    if objective is not None:
        lines.append(f"# objective {objective!r}")
    bound = getattr(res, "mip_dual_bound", None)
    if bound is not None and math.isfinite(bound):
        lines.append(f"# bound {float(bound)!r}")
    if x is not None:
        for name, value in zip(order, x):
            lines.append(f"{name} {float(value)!r}")
    return "\n".join(lines) + "\n"


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="python -m mmrtc.solve_highs",
        description="Solve a free-format MPS model with HiGHS (via scipy).",
    )
    parser.add_argument("mps", help="input MPS file")
    parser.add_argument("sol", help="output solution file")
    parser.add_argument("--time-limit", type=float, default=None)
    parser.add_argument("--warm", help="feasible warm-start file (name value lines)")
    args = parser.parse_args(argv)

    with open(args.mps, encoding="utf-8") as fh:
        problem = parse_mps(fh.read())
    warm = load_warm_values(args.warm, problem) if args.warm else None
    order, res = solve_problem(problem, args.time_limit)
    with open(args.sol, "w", encoding="utf-8") as fh:
        fh.write(format_solution(problem, order, res, warm))
    return 0


if __name__ == "__main__":
    sys.exit(main())
