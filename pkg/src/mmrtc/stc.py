"""Spanning-tree circumnavigation: turn rooted subtrees into closed coverage paths.

A tree vertex owns four sub-cells of the decomposition graph.  Walking the
tree's boundary with the tree on the robot's left is realized as a local
successor rule on (vertex, quadrant) states: circulate the quadrants
counterclockwise (NW, SW, SE, NE) and, whenever the boundary being crossed
carries a tree edge, step into the neighbor instead, entering at the
quadrant mirrored across the shared cell border.  The rule is a bijection on
states, and for a tree its orbit is a single cycle through all 4|V(T)|
sub-cells.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import CoverageGapError, OpenPathError, SolverOutputInvalid
from .solution import MmrtcSolution
from .terrain import DecompGraph, TerrainGraph, Tree

# Quadrant -> sub-cell offset in doubled coordinates.
_OFFSET = {"NW": (0, 0), "NE": (0, 1), "SW": (1, 0), "SE": (1, 1)}
# Counterclockwise circulation; each step crosses one compass boundary.
_NEXT = {"NW": ("SW", (0, -1)), "SW": ("SE", (1, 0)),
         "SE": ("NE", (0, 1)), "NE": ("NW", (-1, 0))}
# Quadrant entered in the neighbor when a tree edge forces a crossing.
_ENTRY = {(0, -1): "NE", (1, 0): "NW", (0, 1): "SW", (-1, 0): "SE"}


@dataclass(frozen=True)
class CoveragePlan:
    """Closed per-robot paths over sub-cells (first vertex = last, implicitly)."""

    paths: tuple[tuple[int, ...], ...]
    times: tuple[Fraction, ...]
    overall: Fraction


def circumnavigate(tree: Tree, g: TerrainGraph, d: DecompGraph) -> list[int]:
    """Closed path of sub-cell ids around the tree, each visited exactly once."""
    tree_dirs: dict[int, set[tuple[int, int]]] = {tree.root: set()}
    for eid in tree.edges:
        e = g.edge(eid)
        u, v = g.vertex(e.u), g.vertex(e.v)
        step = (v.row - u.row, v.col - u.col)
        tree_dirs.setdefault(e.u, set()).add(step)
        tree_dirs.setdefault(e.v, set()).add((-step[0], -step[1]))

    start = (tree.root, "NW")
    state = start
    path: list[int] = []
    seen: set[tuple[int, str]] = set()
    while True:
        if state in seen:
            raise SolverOutputInvalid("circumnavigation revisited a sub-cell; input is not a tree")
        seen.add(state)
        vid, quad = state
        path.append(d.subcell(g.vertex(vid), *_OFFSET[quad]))
        nxt_quad, crossing = _NEXT[quad]
        if crossing in tree_dirs[vid]:
            v = g.vertex(vid)
            nvid = g.vertex_at(v.row + crossing[0], v.col + crossing[1])
            state = (nvid, _ENTRY[crossing])
        else:
            state = (vid, nxt_quad)
        if state == start:
            break
    if len(path) != 4 * len(tree_dirs):
        raise SolverOutputInvalid("circumnavigation closed early; input is not a tree")
    return path


def coverage_time(path: list[int] | tuple[int, ...], d: DecompGraph) -> Fraction:
    """Sum of sub-cell weights along a closed path (each occurrence counted)."""
    seq = list(path)
    if not seq:
        return Fraction(0)
    if len(seq) > 1 and seq[0] == seq[-1]:
        raise OpenPathError("closed paths must leave the return to start implicit")
    for a, b in zip(seq, seq[1:] + seq[:1]):
        if a != b and not d.adjacent(a, b):
            raise OpenPathError(f"sub-cells {a} and {b} are consecutive but not adjacent")
    return sum((d.vertex(did).weight for did in seq), Fraction(0))


def build_plan(solution: MmrtcSolution, g: TerrainGraph, d: DecompGraph) -> CoveragePlan:
    """Per-robot circumnavigation paths plus coverage times; verifies full coverage."""
    paths = []
    times = []
    covered: set[int] = set()
    for tree in solution.trees:
        path = tuple(circumnavigate(tree, g, d))
        paths.append(path)
        times.append(coverage_time(path, d))
        covered.update(path)
    if len(covered) != d.num_vertices:
        raise CoverageGapError(
            f"{d.num_vertices - len(covered)} sub-cells uncovered; solution is invalid"
        )
    return CoveragePlan(tuple(paths), tuple(times), max(times, default=Fraction(0)))
