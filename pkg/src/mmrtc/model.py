"""The tree-cover MIP over per-robot residual graphs: build, export, map back.

Per robot i over its residual graph (V_i, E_i) the model holds binary edge
variables x_i_e, binary vertex variables y_i_v and two continuous flow
variables per edge; one continuous makespan variable tau is shared.  Total
variable count is sum_i(|V_i| + 3|E_i|) + 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    InfeasibleReduction,
    InvalidResidual,
    SolutionParseError,
    SolverOutputInvalid,
    WarmstartMismatch,
)
from .solution import MmrtcSolution
from .terrain import TerrainGraph, Tree
from .warmstart import flow_assignment

BINARY = "B"
CONTINUOUS = "C"

INTEGRALITY_TOL = 1e-6
EXTRACT_THRESHOLD = 0.5


@dataclass(frozen=True)
class Variable:
    name: str
    kind: str  # BINARY or CONTINUOUS
    lower: Fraction
    upper: Fraction | None  # None = +inf


@dataclass(frozen=True)
class LinRow:
    name: str
    terms: tuple[tuple[int, Fraction], ...]  # (variable index, coefficient)
    sense: str  # "<=", "=", ">="
    rhs: Fraction


@dataclass(frozen=True)
class ModelStats:
    variables: int
    binaries: int
    continuous: int
    constraints: int


class MipModel:
    """Immutable MIP with deterministic variable and row order."""

    def __init__(self, variables: list[Variable], constraints: list[LinRow],
                 x_index: dict[tuple[int, int], int],
                 y_index: dict[tuple[int, int], int],
                 f_index: dict[tuple[int, int, int], int],
                 tau_index: int,
                 graphs: tuple[TerrainGraph, ...],
                 roots: tuple[int, ...],
                 full_vertex_count: int):
        self.variables = tuple(variables)
        self.constraints = tuple(constraints)
        self.x_index = x_index
        self.y_index = y_index
        self.f_index = f_index
        self.tau_index = tau_index
        self.graphs = graphs
        self.roots = roots
        self.full_vertex_count = full_vertex_count
        self.index_of = {v.name: i for i, v in enumerate(self.variables)}

    @property
    def k(self) -> int:
        return len(self.roots)

    @property
    def tau_name(self) -> str:
        return self.variables[self.tau_index].name


def build_model(residuals: list[TerrainGraph], roots: list[int],
                full_vertex_count: int,
                tau_cutoff: Fraction | None = None) -> MipModel:
    """Assemble the model for one residual graph per robot.

    full_vertex_count is the |V| of the unreduced terrain graph; it bounds the
    per-vertex flow cap at 1 - 1/|V| even when residual graphs are smaller.
    """
    if len(residuals) != len(roots):
        raise ValueError(f"{len(residuals)} residual graphs for {len(roots)} roots")
    for i, (g_i, root) in enumerate(zip(residuals, roots)):
        if not g_i.has_vertex(root):
            raise InvalidResidual(f"robot {i}: root {root} missing from its residual graph")

    covered: set[int] = set()
    for g_i in residuals:
        covered |= g_i.vertex_id_set()
    if len(covered) != full_vertex_count:
        raise InfeasibleReduction(
            f"{full_vertex_count - len(covered)} vertices are absent from every "
            "residual graph; the Cover constraints cannot be satisfied"
        )

    variables: list[Variable] = []
    x_index: dict[tuple[int, int], int] = {}
    y_index: dict[tuple[int, int], int] = {}
    f_index: dict[tuple[int, int, int], int] = {}

    def add(name: str, kind: str, upper: Fraction | None = None) -> int:
        variables.append(Variable(name, kind, Fraction(0), upper))
        return len(variables) - 1

    for i, g_i in enumerate(residuals):
        for vid in g_i.vertex_ids():
            y_index[(i, vid)] = add(f"y_{i}_{vid}", BINARY, Fraction(1))
        for e in g_i.edges:
            x_index[(i, e.id)] = add(f"x_{i}_{e.id}", BINARY, Fraction(1))
    for i, g_i in enumerate(residuals):
        for e in g_i.edges:
            f_index[(i, e.id, e.u)] = add(f"f_{i}_{e.id}_{e.u}", CONTINUOUS)
            f_index[(i, e.id, e.v)] = add(f"f_{i}_{e.id}_{e.v}", CONTINUOUS)
    tau_index = add("tau", CONTINUOUS, tau_cutoff)

    one = Fraction(1)
    rows: list[LinRow] = []
    for i, g_i in enumerate(residuals):
        terms = [(x_index[(i, e.id)], e.weight) for e in g_i.edges]
        terms.append((tau_index, -one))
        rows.append(LinRow(f"makespan_{i}", tuple(terms), "<=", Fraction(0)))

    for vid in sorted(covered):
        terms = tuple(
            (y_index[(i, vid)], one)
            for i in range(len(residuals))
            if (i, vid) in y_index
        )
        rows.append(LinRow(f"cover_{vid}", terms, ">=", one))

    flow_cap = one - Fraction(1, full_vertex_count) if full_vertex_count > 0 else one
    for i, (g_i, root) in enumerate(zip(residuals, roots)):
        rows.append(LinRow(f"rooted_{i}", ((y_index[(i, root)], one),), "=", one))
        terms = [(y_index[(i, vid)], one) for vid in g_i.vertex_ids()]
        terms += [(x_index[(i, e.id)], -one) for e in g_i.edges]
        rows.append(LinRow(f"tree_{i}", tuple(terms), "=", one))
        for e in g_i.edges:
            rows.append(LinRow(
                f"flow_split_{i}_{e.id}",
                ((f_index[(i, e.id, e.u)], one), (f_index[(i, e.id, e.v)], one),
                 (x_index[(i, e.id)], -one)),
                "=", Fraction(0)))
        for vid in g_i.vertex_ids():
            terms = tuple((f_index[(i, eid, vid)], one) for eid, _ in g_i.neighbors(vid))
            if terms:
                rows.append(LinRow(f"flow_cap_{i}_{vid}", terms, "<=", flow_cap))
        for e in g_i.edges:
            for endpoint in (e.u, e.v):
                rows.append(LinRow(
                    f"link_{i}_{e.id}_{endpoint}",
                    ((x_index[(i, e.id)], one), (y_index[(i, endpoint)], -one)),
                    "<=", Fraction(0)))

    return MipModel(variables, rows, x_index, y_index, f_index, tau_index,
                    tuple(residuals), tuple(roots), full_vertex_count)


def model_stats(m: MipModel) -> ModelStats:
    binaries = sum(1 for v in m.variables if v.kind == BINARY)
    return ModelStats(
        variables=len(m.variables),
        binaries=binaries,
        continuous=len(m.variables) - binaries,
        constraints=len(m.constraints),
    )


def _num(value: Fraction) -> str:
    """Deterministic numeric text: exact decimals when finite, else shortest float."""
    if value.denominator == 1:
        return str(value.numerator)
    den = value.denominator
    for p in (2, 5):
        while den % p == 0:
            den //= p
    if den == 1:  # terminating decimal
        sign = "-" if value < 0 else ""
        v = abs(value)
        digits = 0
        scaled = v
        while scaled.denominator != 1:
            scaled *= 10
            digits += 1
        text = str(scaled.numerator).rjust(digits + 1, "0")
        return f"{sign}{text[:-digits]}.{text[-digits:]}"
    return repr(float(value))


def export_mps(m: MipModel, name: str = "mmrtc") -> str:
    """Free-format MPS text; byte-identical for identical models."""
    lines = [f"NAME {name}", "ROWS", " N obj"]
    sense_tag = {"<=": "L", ">=": "G", "=": "E"}
    for row in m.constraints:
        lines.append(f" {sense_tag[row.sense]} {row.name}")

    entries: list[list[tuple[str, Fraction]]] = [[] for _ in m.variables]
    entries[m.tau_index].append(("obj", Fraction(1)))
    for row in m.constraints:
        for var_idx, coef in row.terms:
            entries[var_idx].append((row.name, coef))

    lines.append("COLUMNS")
    in_int = False
    for idx, var in enumerate(m.variables):
        want_int = var.kind == BINARY
        if want_int and not in_int:
            lines.append("    MARKER_INT_BEGIN 'MARKER' 'INTORG'")
            in_int = True
        elif not want_int and in_int:
            lines.append("    MARKER_INT_END 'MARKER' 'INTEND'")
            in_int = False
        for row_name, coef in entries[idx]:
            lines.append(f"    {var.name} {row_name} {_num(coef)}")
    if in_int:
        lines.append("    MARKER_INT_END 'MARKER' 'INTEND'")

    lines.append("RHS")
    for row in m.constraints:
        if row.rhs != 0:
            lines.append(f"    rhs {row.name} {_num(row.rhs)}")
    lines.append("RANGES")
    lines.append("BOUNDS")
    for var in m.variables:
        if var.kind == BINARY:
            lines.append(f" BV bnd {var.name}")
        elif var.upper is not None:
            lines.append(f" UP bnd {var.name} {_num(var.upper)}")
    lines.append("ENDATA")
    return "\n".join(lines) + "\n"


def _snap(value: float) -> float:
    rounded = round(value)
    if abs(value - rounded) <= INTEGRALITY_TOL:
        return float(rounded)
    return value


def extract_solution(m: MipModel, assignment: dict[str, float]) -> MmrtcSolution:
    """Decode binary values into rooted trees; recomputes the makespan from weights."""
    missing = [v.name for v in m.variables if v.kind == BINARY and v.name not in assignment]
    if missing:
        raise SolutionParseError(
            f"assignment misses {len(missing)} binary variables, e.g. {missing[:5]}"
        )
    trees: list[Tree] = []
    makespan = Fraction(0)
    for i, (g_i, root) in enumerate(zip(m.graphs, m.roots)):
        eids = []
        for e in g_i.edges:
            if _snap(assignment[f"x_{i}_{e.id}"]) > EXTRACT_THRESHOLD:
                eids.append(e.id)
        _check_is_tree(g_i, root, eids, robot=i)
        tree = Tree(root, tuple(sorted(eids)))
        trees.append(tree)
        makespan = max(makespan, tree.weight(g_i))
    return MmrtcSolution(tuple(trees), makespan)


def _check_is_tree(g: TerrainGraph, root: int, eids: list[int], robot: int) -> None:
    if not eids:
        return
    adj: dict[int, list[int]] = {}
    for eid in eids:
        e = g.edge(eid)
        adj.setdefault(e.u, []).append(e.v)
        adj.setdefault(e.v, []).append(e.u)
    if root not in adj:
        raise SolverOutputInvalid(f"robot {robot}: selected edges do not touch root {root}")
    if len(eids) != len(adj) - 1:
        raise SolverOutputInvalid(
            f"robot {robot}: {len(eids)} edges over {len(adj)} vertices is not a tree"
        )
    seen = {root}
    stack = [root]
    while stack:
        for other in adj[stack.pop()]:
            if other not in seen:
                seen.add(other)
                stack.append(other)
    if len(seen) != len(adj):
        raise SolverOutputInvalid(f"robot {robot}: selected edges are disconnected")


def apply_warmstart(m: MipModel, s: MmrtcSolution) -> dict[str, Fraction]:
    """Full assignment (every variable) that satisfies every row exactly."""
    values: dict[str, Fraction] = {v.name: Fraction(0) for v in m.variables}
    makespan = Fraction(0)
    for i, (g_i, tree) in enumerate(zip(m.graphs, s.trees)):
        for eid in tree.edges:
            if (i, eid) not in m.x_index:
                raise WarmstartMismatch(
                    f"robot {i}: warm-start edge {eid} is outside its residual graph"
                )
            values[f"x_{i}_{eid}"] = Fraction(1)
        for vid in tree.vertex_ids(g_i):
            values[f"y_{i}_{vid}"] = Fraction(1)
        for (eid, vid), flow in flow_assignment(tree, g_i, m.full_vertex_count).items():
            values[f"f_{i}_{eid}_{vid}"] = flow
        makespan = max(makespan, tree.weight(g_i))
    values[m.tau_name] = makespan
    return values


def constraint_residuals(m: MipModel, assignment: dict[str, Fraction | float]):
    """Per-row violation amounts (0 when satisfied); exact under Fraction input."""
    out = []
    for row in m.constraints:
        lhs = sum(coef * assignment[m.variables[idx].name] for idx, coef in row.terms)
        if row.sense == "<=":
            violation = max(lhs - row.rhs, 0)
        elif row.sense == ">=":
            violation = max(row.rhs - lhs, 0)
        else:
            violation = abs(lhs - row.rhs)
        out.append((row.name, violation))
    return out
