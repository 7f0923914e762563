"""Tree-cover solution container and its JSON wire format."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import SolutionParseError
from .terrain import TerrainGraph, Tree


@dataclass(frozen=True)
class MmrtcSolution:
    """k rooted subtrees; makespan is the maximum subtree weight."""

    trees: tuple[Tree, ...]
    makespan: Fraction


def solution_from_trees(g: TerrainGraph, trees: list[Tree] | tuple[Tree, ...]) -> MmrtcSolution:
    makespan = max((t.weight(g) for t in trees), default=Fraction(0))
    return MmrtcSolution(tuple(trees), makespan)


def _coord(g: TerrainGraph, vid: int) -> list[int]:
    v = g.vertex(vid)
    return [v.row, v.col]


def solution_to_dict(sol: MmrtcSolution, g: TerrainGraph,
                     coverage: dict | None = None,
                     stats: dict | None = None) -> dict:
    """JSON-ready dict; vertices are encoded as [row, col] pairs for human diffing."""
    trees = []
    for t in sol.trees:
        edges = []
        for eid in t.edges:
            e = g.edge(eid)
            edges.append([_coord(g, e.u), _coord(g, e.v)])
        trees.append({"root": _coord(g, t.root), "edges": edges})
    out: dict = {"makespan": float(sol.makespan), "trees": trees}
    if coverage is not None:
        out["coverage"] = coverage
    if stats is not None:
        out["stats"] = stats
    return out


def solution_from_dict(data: dict, g: TerrainGraph) -> MmrtcSolution:
    """Inverse of solution_to_dict (coverage/stats blocks are left to the caller)."""
    if not isinstance(data, dict) or "trees" not in data:
        raise SolutionParseError("solution JSON must be an object with a 'trees' list")
    pair_ids: dict[tuple[int, int], int] = {}
    for e in g.edges:
        pair_ids[(e.u, e.v)] = e.id

    def vid_of(coord) -> int:
        if not (isinstance(coord, list) and len(coord) == 2):
            raise SolutionParseError(f"bad vertex coordinate {coord!r}")
        vid = g.vertex_at(int(coord[0]), int(coord[1]))
        if vid is None:
            raise SolutionParseError(f"no vertex at {coord!r}")
        return vid

    trees = []
    for entry in data["trees"]:
        root = vid_of(entry["root"])
        eids = []
        for pair in entry.get("edges", []):
            u, v = vid_of(pair[0]), vid_of(pair[1])
            key = (min(u, v), max(u, v))
            if key not in pair_ids:
                raise SolutionParseError(f"no edge between {pair[0]} and {pair[1]}")
            eids.append(pair_ids[key])
        trees.append(Tree(root, tuple(sorted(eids))))
    return solution_from_trees(g, trees)
