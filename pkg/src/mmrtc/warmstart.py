"""Feasible seed solutions: Voronoi-region forests, residual MSTs, exact flow values."""

from __future__ import annotations

from fractions import Fraction

from .solution import MmrtcSolution, solution_from_trees
from .terrain import TerrainGraph, Tree, dijkstra, minimum_spanning_tree


def voronoi_regions(g: TerrainGraph, roots: list[int]) -> list[frozenset[int]]:
    """Assign each vertex to its nearest root (ties to the smallest robot index).

    Each region is connected (predecessor chains stay within a region) and
    contains its root, and the regions partition the vertex set.
    """
    results = [dijkstra(g, r) for r in roots]
    regions: list[set[int]] = [set() for _ in roots]
    for vid in g.vertex_ids():
        best = min(range(len(roots)), key=lambda i: (results[i].distance(vid), i))
        regions[best].add(vid)
    return [frozenset(r) for r in regions]


def initial_solution(g: TerrainGraph, roots: list[int]) -> MmrtcSolution:
    """Voronoi-partition MST forest; feasible for the unreduced model."""
    trees = []
    for i, region in enumerate(voronoi_regions(g, roots)):
        trees.append(minimum_spanning_tree(g.induced_subgraph(region), roots[i]))
    return solution_from_trees(g, trees)


def mst_warmstart(residuals: list[TerrainGraph], roots: list[int]) -> MmrtcSolution:
    """One MST per residual graph; feasible for the reduced model by construction."""
    trees = [minimum_spanning_tree(res, root) for res, root in zip(residuals, roots)]
    makespan = max(
        sum((res.edge(eid).weight for eid in t.edges), Fraction(0))
        for res, t in zip(residuals, trees)
    )
    return MmrtcSolution(tuple(trees), makespan)


def flow_assignment(tree: Tree, g: TerrainGraph, n: int) -> dict[tuple[int, int], Fraction]:
    """Exact flow values supporting a known tree: (edge id, vertex id) -> flow.

    Orienting the tree away from its root, an edge to a child whose subtree
    has s vertices sends 1 - s/n toward the child and s/n back to the parent.
    Every edge splits to exactly one unit, each non-root tree vertex receives
    exactly 1 - 1/n in total, and the root receives (|V(tree)| - 1)/n.
    """
    adj: dict[int, list[tuple[int, int]]] = {tree.root: []}
    for eid in tree.edges:
        e = g.edge(eid)
        adj.setdefault(e.u, []).append((eid, e.v))
        adj.setdefault(e.v, []).append((eid, e.u))

    # Iterative DFS: records (parent edge, child) in discovery order.
    order: list[tuple[int, int]] = []
    parent: dict[int, int | None] = {tree.root: None}
    stack = [tree.root]
    while stack:
        vid = stack.pop()
        for eid, other in adj[vid]:
            if other not in parent:
                parent[other] = vid
                order.append((eid, other))
                stack.append(other)

    size = {vid: 1 for vid in parent}
    for eid, child in reversed(order):
        size[parent[child]] += size[child]  # type: ignore[index]

    flows: dict[tuple[int, int], Fraction] = {}
    for eid, child in order:
        s = Fraction(size[child], n)
        flows[(eid, child)] = 1 - s
        flows[(eid, parent[child])] = s  # type: ignore[index]
    return flows
