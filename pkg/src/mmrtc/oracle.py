"""Exact brute-force optimum for small instances.

Independent of the MIP path: per robot, every connected vertex subset
containing its root is enumerated, scored by the MST weight of its induced
subgraph (no subtree over vertex set S can weigh less, and the MST itself is
feasible), and the search minimizes the maximum score over k-tuples of
subsets whose union covers all vertices.
"""

from __future__ import annotations

import heapq
from fractions import Fraction

from .errors import OracleLimitExceeded
from .solution import MmrtcSolution, solution_from_trees
from .terrain import TerrainGraph, minimum_spanning_tree

VERTEX_LIMIT = 14
ROBOT_LIMIT = 3


def _adjacency_masks(g: TerrainGraph) -> list[int]:
    adj = [0] * g.num_vertices
    for e in g.edges:
        adj[e.u] |= 1 << e.v
        adj[e.v] |= 1 << e.u
    return adj


def _connected(mask: int, start_bit: int, adj: list[int]) -> bool:
    seen = start_bit
    frontier = start_bit
    while frontier:
        nxt = 0
        m = frontier
        while m:
            low = m & -m
            nxt |= adj[low.bit_length() - 1]
            m ^= low
        frontier = nxt & mask & ~seen
        seen |= frontier
    return seen == mask


def _mst_weight(g: TerrainGraph, mask: int) -> Fraction:
    start = (mask & -mask).bit_length() - 1
    in_tree = 1 << start
    total = Fraction(0)
    heap: list[tuple[Fraction, int, int]] = []

    def push(vid: int) -> None:
        for eid, other in g.neighbors(vid):
            if mask >> other & 1 and not in_tree >> other & 1:
                heapq.heappush(heap, (g.edge(eid).weight, eid, other))

    push(start)
    while heap:
        w, _, vid = heapq.heappop(heap)
        if in_tree >> vid & 1:
            continue
        in_tree |= 1 << vid
        total += w
        push(vid)
    return total


def _rooted_subsets(g: TerrainGraph, root: int,
                    adj: list[int]) -> list[tuple[Fraction, int]]:
    """(MST weight, vertex mask) for every connected subset containing root."""
    n = g.num_vertices
    others = [v for v in range(n) if v != root]
    root_bit = 1 << root
    out: list[tuple[Fraction, int]] = []
    for sub in range(1 << len(others)):
        mask = root_bit
        m = sub
        while m:
            low = m & -m
            mask |= 1 << others[low.bit_length() - 1]
            m ^= low
        if _connected(mask, root_bit, adj):
            out.append((_mst_weight(g, mask), mask))
    out.sort()
    return out


def _superset_min(n: int, candidates: list[tuple[Fraction, int]]):
    """best[m] = cheapest candidate whose mask is a superset of m (with choice)."""
    size = 1 << n
    inf = None
    best: list[Fraction | None] = [inf] * size
    choice = [0] * size
    for weight, mask in candidates:
        if best[mask] is None or weight < best[mask]:
            best[mask] = weight
            choice[mask] = mask
    for bit in range(n):
        step = 1 << bit
        for m in range(size):
            if not m & step:
                other = best[m | step]
                if other is not None and (best[m] is None or other < best[m]):
                    best[m] = other
                    choice[m] = choice[m | step]
    return best, choice


def oracle_optimum(g: TerrainGraph, roots: list[int],
                   limit_vertices: int = VERTEX_LIMIT) -> tuple[Fraction, MmrtcSolution]:
    """Exact minimum makespan plus an optimal solution realized as MSTs."""
    n = g.num_vertices
    k = len(roots)
    if n > limit_vertices:
        raise OracleLimitExceeded(f"|V| = {n} exceeds the limit {limit_vertices}")
    if k > ROBOT_LIMIT:
        raise OracleLimitExceeded(f"k = {k} exceeds the limit {ROBOT_LIMIT}")
    if sorted(g.vertex_ids()) != list(range(n)):
        raise OracleLimitExceeded("oracle requires contiguous vertex ids 0..n-1")

    adj = _adjacency_masks(g)
    full = (1 << n) - 1
    cands = [_rooted_subsets(g, r, adj) for r in roots]

    def realize(masks: list[int]) -> MmrtcSolution:
        trees = [
            minimum_spanning_tree(g.induced_subgraph(
                [v for v in range(n) if mask >> v & 1]), root)
            for mask, root in zip(masks, roots)
        ]
        return solution_from_trees(g, trees)

    if k == 1:
        weight, mask = next((w, m) for w, m in cands[0] if m == full)
        return weight, realize([mask])

    last_best, last_choice = _superset_min(n, cands[-1])

    if k == 2:
        best_val: Fraction | None = None
        best_masks: list[int] = []
        for w1, m1 in cands[0]:
            if best_val is not None and w1 >= best_val:
                break
            rest = full & ~m1
            w2 = last_best[rest]
            if w2 is None:
                continue
            val = max(w1, w2)
            if best_val is None or val < best_val:
                best_val = val
                best_masks = [m1, last_choice[rest]]
        assert best_val is not None, "no feasible cover found (graph bug)"
        return best_val, realize(best_masks)

    # k == 3: close the last robot with the superset table and memoize the
    # best value of the middle robot per still-uncovered mask.
    memo: dict[int, tuple[Fraction | None, int, int]] = {}

    def middle(rest: int) -> tuple[Fraction | None, int, int]:
        if rest in memo:
            return memo[rest]
        best: Fraction | None = None
        pick = (0, 0)
        for w2, m2 in cands[1]:
            if best is not None and w2 >= best:
                break
            w3 = last_best[rest & ~m2]
            if w3 is None:
                continue
            val = max(w2, w3)
            if best is None or val < best:
                best = val
                pick = (m2, last_choice[rest & ~m2])
        memo[rest] = (best, pick[0], pick[1])
        return memo[rest]

    best_val = None
    best_masks = []
    for w1, m1 in cands[0]:
        if best_val is not None and w1 >= best_val:
            break
        sub, m2, m3 = middle(full & ~m1)
        if sub is None:
            continue
        val = max(w1, sub)
        if best_val is None or val < best_val:
            best_val = val
            best_masks = [m1, m2, m3]
    assert best_val is not None, "no feasible cover found (graph bug)"
    return best_val, realize(best_masks)
