"""Independent feasibility checker for tree-cover solutions.

Deliberately shares no constraint code with the model module: trees are
checked structurally (edge count, connectivity, rootedness) so this acts as a
second opinion on what the flow encoding enforces.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .solution import MmrtcSolution
from .terrain import TerrainGraph


@dataclass(frozen=True)
class ValidationReport:
    cover_ok: bool
    uncovered: tuple[int, ...]
    rooted_ok: bool
    root_issues: tuple[str, ...]
    trees_ok: bool
    tree_issues: tuple[str, ...]
    makespan: Fraction

    @property
    def passed(self) -> bool:
        return self.cover_ok and self.rooted_ok and self.trees_ok

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "cover": {"ok": self.cover_ok, "uncovered": list(self.uncovered)},
            "rooted": {"ok": self.rooted_ok, "issues": list(self.root_issues)},
            "trees": {"ok": self.trees_ok, "issues": list(self.tree_issues)},
            "makespan": float(self.makespan),
        }

    def to_text(self) -> str:
        lines = [
            f"cover:  {'pass' if self.cover_ok else 'FAIL'}"
            + (f" (uncovered: {list(self.uncovered)})" if self.uncovered else ""),
            f"rooted: {'pass' if self.rooted_ok else 'FAIL'}"
            + (f" ({'; '.join(self.root_issues)})" if self.root_issues else ""),
            f"trees:  {'pass' if self.trees_ok else 'FAIL'}"
            + (f" ({'; '.join(self.tree_issues)})" if self.tree_issues else ""),
            f"makespan: {float(self.makespan)}",
        ]
        return "\n".join(lines)


def validate_solution(s: MmrtcSolution, g: TerrainGraph,
                      roots: list[int]) -> ValidationReport:
    """Check the Cover / Rooted / Tree groups structurally and recompute the makespan."""
    covered: set[int] = set()
    root_issues: list[str] = []
    tree_issues: list[str] = []
    makespan = Fraction(0)

    if len(s.trees) != len(roots):
        root_issues.append(f"{len(s.trees)} trees for {len(roots)} roots")

    for i, tree in enumerate(s.trees):
        root = roots[i] if i < len(roots) else None
        if root is not None and tree.root != root:
            root_issues.append(f"tree {i} rooted at {tree.root}, expected {root}")

        adj: dict[int, list[int]] = {tree.root: []}
        weight = Fraction(0)
        bad_edge = False
        for eid in tree.edges:
            try:
                e = g.edge(eid)
            except KeyError:
                tree_issues.append(f"tree {i}: unknown edge id {eid}")
                bad_edge = True
                continue
            adj.setdefault(e.u, []).append(e.v)
            adj.setdefault(e.v, []).append(e.u)
            weight += e.weight
        vertices = set(adj)
        covered |= vertices
        makespan = max(makespan, weight)
        if bad_edge:
            continue
        if len(tree.edges) > len(vertices) - 1:
            tree_issues.append(
                f"tree {i}: {len(tree.edges)} edges over {len(vertices)} vertices (cycle)"
            )
            continue
        seen = {tree.root}
        stack = [tree.root]
        while stack:
            for other in adj[stack.pop()]:
                if other not in seen:
                    seen.add(other)
                    stack.append(other)
        if len(seen) != len(vertices):
            tree_issues.append(f"tree {i}: disconnected from its root")

    uncovered = tuple(sorted(g.vertex_id_set() - covered))
    return ValidationReport(
        cover_ok=not uncovered,
        uncovered=uncovered,
        rooted_ok=not root_issues,
        root_issues=tuple(root_issues),
        trees_ok=not tree_issues,
        tree_issues=tuple(tree_issues),
        makespan=makespan,
    )


def makespan_and_gap(s: MmrtcSolution, g: TerrainGraph,
                     reported_bound: float | None) -> tuple[float, float | None]:
    """Recomputed makespan plus the optimality gap in percent, when a bound is known."""
    makespan = float(max((t.weight(g) for t in s.trees), default=Fraction(0)))
    if reported_bound is None or makespan == 0:
        return makespan, None
    gap = (makespan - reported_bound) / makespan * 100.0
    return makespan, gap
