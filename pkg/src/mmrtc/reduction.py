"""Removal heuristics that shrink the model, plus residual connectivity repair.

Each robot i gets an inferior graph H_i (vertices it should not cover), built
from one sub-component H_ij per other robot j.  Both heuristics guarantee
V(H_ij) and V(H_ji) never intersect, which keeps the reduced model complete;
build_reduction asserts that guarantee and the resulting cover/connectivity
properties on every run.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import HeuristicInvariantViolation
from .terrain import (
    DijkstraResult,
    TerrainGraph,
    boundary_vertices,
    connected_components,
    dijkstra,
)

HEURISTICS = ("none", "prh", "srh")


@dataclass(frozen=True)
class ReductionParams:
    heuristic: str  # "none" | "prh" | "srh"
    alpha: float = math.inf  # prh: parabola width scale; inf disables removal
    beta: float = 0.0  # srh: removal budget scale; 0 disables removal

    def __post_init__(self):
        if self.heuristic not in HEURISTICS:
            raise ValueError(f"unknown heuristic {self.heuristic!r}")
        if self.alpha < 0:
            raise ValueError("alpha must be >= 0")
        if self.beta < 0 or math.isinf(self.beta):
            raise ValueError("beta must be finite and >= 0")

    def label(self) -> str:
        if self.heuristic == "prh":
            return f"prh(alpha={self.alpha})"
        if self.heuristic == "srh":
            return f"srh(beta={self.beta})"
        return "none"


@dataclass(frozen=True)
class InferiorGraph:
    """Vertices/edges removed from robot i's residual graph, with provenance."""

    robot: int
    heuristic: str
    sub_components: tuple[tuple[int, frozenset[int], frozenset[int]], ...]  # (j, V(H_ij), E(H_ij))
    vertices: frozenset[int]  # after connectivity repair
    edges: frozenset[int]


@dataclass(frozen=True)
class ReductionResult:
    params: ReductionParams
    inferior: tuple[InferiorGraph, ...]
    residuals: tuple[TerrainGraph, ...]


def logistic(x: float) -> float:
    """Numerically stable 1 / (1 + exp(-x)); accepts the +inf sentinel."""
    if math.isinf(x):
        return 1.0 if x > 0 else 0.0
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    z = math.exp(x)
    return z / (1.0 + z)


def farthest_boundary_vertex(g: TerrainGraph, boundary: frozenset[int],
                             dist_i: DijkstraResult, dist_j: DijkstraResult) -> int:
    """Boundary vertex maximizing d(r_i, v) - d(r_j, v); ties to the smallest id."""
    best = None
    best_key = None
    for vid in sorted(boundary):
        key = dist_i.distance(vid) - dist_j.distance(vid)
        if best_key is None or key > best_key:
            best, best_key = vid, key
    assert best is not None, "boundary set is empty"
    return best


def parabola_width(alpha: float, d_rj_cij: Fraction, d_ri_rj: Fraction) -> float:
    """Width a_ij = alpha * logistic(d(r_j, c_ij) / d(r_i, r_j))."""
    if math.isinf(alpha):
        return math.inf
    return alpha * logistic(float(d_rj_cij / d_ri_rj))


def prh_sub_component(g: TerrainGraph, roots: list[int], i: int, j: int,
                      alpha: float,
                      dist: dict[int, DijkstraResult] | None = None,
                      boundary: frozenset[int] | None = None,
                      ) -> tuple[frozenset[int], frozenset[int]]:
    """Induced subgraph inside the parabola based at r_j, opening away from r_i.

    Membership uses Euclidean (row, col) coordinates: with the y'-axis running
    from r_i through r_j, vertex v belongs iff y'(v) >= (a_ij * x'(v))^2.
    """
    if math.isinf(alpha):
        return frozenset(), frozenset()
    if dist is None:
        dist = {roots[i]: dijkstra(g, roots[i]), roots[j]: dijkstra(g, roots[j])}
    if boundary is None:
        boundary = boundary_vertices(g)
    r_i, r_j = roots[i], roots[j]
    c_ij = farthest_boundary_vertex(g, boundary, dist[r_i], dist[r_j])
    a_ij = parabola_width(alpha, dist[r_j].distance(c_ij), dist[r_i].distance(r_j))

    pi, pj = g.vertex(r_i), g.vertex(r_j)
    ux, uy = pj.row - pi.row, pj.col - pi.col
    norm = math.hypot(ux, uy)
    ux, uy = ux / norm, uy / norm
    members = set()
    for v in g.vertices:
        dx, dy = v.row - pj.row, v.col - pj.col
        y_axis = dx * ux + dy * uy
        x_axis = -dx * uy + dy * ux
        if y_axis >= (a_ij * x_axis) ** 2:
            members.add(v.id)
    edges = frozenset(e.id for e in g.edges if e.u in members and e.v in members)
    return frozenset(members), edges


def srh_budget(beta: float, s_size: int, d_ri_rj: Fraction, d_rj_cij: Fraction) -> int:
    """FFS size limit b_ij = ceil(beta * |S_ij| * logistic(d(r_i,r_j) / d(r_j,c_ij)))."""
    if d_rj_cij == 0:
        sigma = 1.0
    else:
        sigma = logistic(float(d_ri_rj / d_rj_cij))
    return math.ceil(beta * s_size * sigma)


def ffs_tree(g: TerrainGraph, allowed: frozenset[int], seed: int,
             key: DijkstraResult, limit: int) -> tuple[frozenset[int], frozenset[int]]:
    """Farthest-first traversal from seed inside `allowed`, capped at `limit` vertices.

    A max-priority queue on key-distance expands the farthest frontier vertex
    first; ties break to the smallest vertex id.  Only the component of
    `allowed` reachable from the seed can be grown.
    """
    if limit <= 0:
        return frozenset(), frozenset()
    in_tree = {seed}
    edges: set[int] = set()
    heap: list[tuple[Fraction, int, int]] = []

    def push_neighbors(vid: int) -> None:
        for eid, other in g.neighbors(vid):
            if other in allowed and other not in in_tree:
                heapq.heappush(heap, (-key.distance(other), other, eid))

    push_neighbors(seed)
    while heap and len(in_tree) < limit:
        _, vid, eid = heapq.heappop(heap)
        if vid in in_tree:
            continue
        in_tree.add(vid)
        edges.add(eid)
        push_neighbors(vid)
    return frozenset(in_tree), frozenset(edges)


def srh_sub_component(g: TerrainGraph, roots: list[int], i: int, j: int,
                      beta: float,
                      dist: dict[int, DijkstraResult] | None = None,
                      boundary: frozenset[int] | None = None,
                      ) -> tuple[frozenset[int], frozenset[int]]:
    """FFS tree within S_ij = vertices strictly closer to r_j than to r_i."""
    if dist is None:
        dist = {roots[i]: dijkstra(g, roots[i]), roots[j]: dijkstra(g, roots[j])}
    if boundary is None:
        boundary = boundary_vertices(g)
    r_i, r_j = roots[i], roots[j]
    d_i, d_j = dist[r_i], dist[r_j]
    s_ij = frozenset(
        vid for vid in g.vertex_ids() if d_i.distance(vid) > d_j.distance(vid)
    )
    if not s_ij:
        return frozenset(), frozenset()
    c_ij = farthest_boundary_vertex(g, boundary, d_i, d_j)
    limit = srh_budget(beta, len(s_ij), d_i.distance(r_j), d_j.distance(c_ij))
    if c_ij in s_ij:
        seed = c_ij
    else:
        # The boundary argmax can fall outside S_ij; seed from the vertex of
        # S_ij farthest from r_i instead.
        seed = max(sorted(s_ij), key=lambda vid: d_i.distance(vid))
    return ffs_tree(g, s_ij, seed, d_i, limit)


def _inferior_for_robot(g: TerrainGraph, roots: list[int], i: int,
                        params: ReductionParams,
                        dist: dict[int, DijkstraResult],
                        boundary: frozenset[int]) -> InferiorGraph:
    comps = []
    h_v: set[int] = set()
    h_e: set[int] = set()
    for j in range(len(roots)):
        if i == j:
            continue
        if params.heuristic == "prh":
            vs, es = prh_sub_component(g, roots, i, j, params.alpha, dist, boundary)
        elif params.heuristic == "srh":
            vs, es = srh_sub_component(g, roots, i, j, params.beta, dist, boundary)
        else:
            vs, es = frozenset(), frozenset()
        comps.append((j, vs, es))
        h_v |= vs
        h_e |= es
    final_v, final_e = connectivity_check(g, roots[i], frozenset(h_v),
                                          frozenset(h_e), dist[roots[i]])
    return InferiorGraph(i, params.heuristic, tuple(comps), final_v, final_e)


def prh_inferior(g: TerrainGraph, roots: list[int], i: int,
                 alpha: float) -> InferiorGraph:
    """Robot i's finalized inferior graph under the parabolic heuristic."""
    dist = {r: dijkstra(g, r) for r in roots}
    return _inferior_for_robot(g, roots, i, ReductionParams("prh", alpha=alpha),
                               dist, boundary_vertices(g))


def srh_inferior(g: TerrainGraph, roots: list[int], i: int,
                 beta: float) -> InferiorGraph:
    """Robot i's finalized inferior graph under the subgraph heuristic."""
    dist = {r: dijkstra(g, r) for r in roots}
    return _inferior_for_robot(g, roots, i, ReductionParams("srh", beta=beta),
                               dist, boundary_vertices(g))


def connectivity_check(g: TerrainGraph, root: int,
                       vertices: frozenset[int], edges: frozenset[int],
                       dist_root: DijkstraResult | None = None,
                       ) -> tuple[frozenset[int], frozenset[int]]:
    """Shrink an inferior graph until the residual is connected and holds the root.

    Repair loop: while the residual G - H is disconnected, pick the residual
    component (not the root's) whose vertices are nearest to the root in the
    full graph, carve the shortest path from that component to the root out of
    H, and repeat.  Ties break to the smallest vertex id.  Each pass removes
    at least one vertex from H, so the loop terminates.
    """
    if dist_root is None:
        dist_root = dijkstra(g, root)
    h_v = set(vertices)
    h_v.discard(root)
    h_e = {eid for eid in edges
           if g.edge(eid).u in h_v and g.edge(eid).v in h_v}
    while True:
        residual = g.remove_vertices(h_v)
        comps = connected_components(residual)
        others = [c for c in comps if root not in c]
        if not others:
            break
        candidates = sorted(
            (dist_root.distance(vid), vid) for comp in others for vid in comp
        )
        _, nearest = candidates[0]
        path = dist_root.path_to(nearest)
        before = len(h_v)
        h_v.difference_update(path)
        assert len(h_v) < before, "repair failed to shrink the inferior graph"
        h_e = {eid for eid in h_e
               if g.edge(eid).u in h_v and g.edge(eid).v in h_v}
    return frozenset(h_v), frozenset(h_e)


def build_reduction(g: TerrainGraph, roots: list[int],
                    params: ReductionParams) -> ReductionResult:
    """Inferior graph family plus per-robot residual graphs, fully checked."""
    k = len(roots)
    dist = {r: dijkstra(g, r) for r in roots}
    boundary = boundary_vertices(g)

    inferior = [_inferior_for_robot(g, roots, i, params, dist, boundary)
                for i in range(k)]
    residuals = [g.remove_vertices(h.vertices) for h in inferior]

    # Pairwise disjointness (the completeness precondition) is checked on the
    # pre-repair sub-components; repair only ever shrinks them.
    by_pair = {(h.robot, j): vs for h in inferior for j, vs, _ in h.sub_components}
    for i in range(k):
        for j in range(i + 1, k):
            overlap = by_pair[(i, j)] & by_pair[(j, i)]
            if overlap:
                raise HeuristicInvariantViolation(
                    f"sub-components for robots {i} and {j} share vertices "
                    f"{sorted(overlap)[:5]}; the heuristic is buggy"
                )

    union: set[int] = set()
    for res in residuals:
        union |= res.vertex_id_set()
    if union != g.vertex_id_set():
        raise HeuristicInvariantViolation(
            f"residual graphs miss vertices {sorted(g.vertex_id_set() - union)[:5]}"
        )
    for i, res in enumerate(residuals):
        if not res.has_vertex(roots[i]):
            raise HeuristicInvariantViolation(f"residual {i} lost its root")
        if not res.is_connected():
            raise HeuristicInvariantViolation(f"residual {i} is disconnected")
    return ReductionResult(params, tuple(inferior), tuple(residuals))
