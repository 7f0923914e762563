"""Grid instances, the terrain graph, its 4x decomposition, and graph utilities.

Weights are kept as exact `Fraction` values end to end: instance files carry
decimals with at most 3 fractional digits, so every derived quantity (edge
weights, quarter-cell weights, path distances, tree weights) stays exact.
"""

from __future__ import annotations

import heapq
import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    DisconnectedFreeSpace,
    DuplicateRoots,
    InvalidRoot,
    InvalidWeight,
    MalformedHeader,
    NoPath,
    NonRectangularGrid,
    RootOnObstacle,
)

Coord = tuple[int, int]

_WEIGHT_RE = re.compile(r"^\d+(\.\d{1,3})?$")


@dataclass(frozen=True)
class Instance:
    """A grid map: cell weights (None = obstacle) plus k root positions."""

    rows: int
    cols: int
    k: int
    weighted: bool
    cells: tuple[tuple[Fraction | None, ...], ...]
    roots: tuple[Coord, ...]

    def is_free(self, row: int, col: int) -> bool:
        return self.cells[row][col] is not None

    def free_cells(self) -> list[Coord]:
        return [
            (r, c)
            for r in range(self.rows)
            for c in range(self.cols)
            if self.cells[r][c] is not None
        ]


@dataclass(frozen=True)
class Vertex:
    id: int
    row: int
    col: int
    weight: Fraction


@dataclass(frozen=True)
class Edge:
    id: int
    u: int  # smaller endpoint id
    v: int
    weight: Fraction


class TerrainGraph:
    """Undirected graph with vertex and edge weights and stable integer ids.

    Subgraphs keep the ids of their parent graph, so model variables and
    solutions reference vertices and edges globally.
    """

    def __init__(self, vertices: list[Vertex] | tuple[Vertex, ...],
                 edges: list[Edge] | tuple[Edge, ...]):
        self.vertices = tuple(sorted(vertices, key=lambda v: v.id))
        self.edges = tuple(sorted(edges, key=lambda e: e.id))
        self._vertex_by_id = {v.id: v for v in self.vertices}
        self._edge_by_id = {e.id: e for e in self.edges}
        self._by_coord = {(v.row, v.col): v.id for v in self.vertices}
        self._adj: dict[int, list[tuple[int, int]]] = {v.id: [] for v in self.vertices}
        for e in self.edges:
            self._adj[e.u].append((e.id, e.v))
            self._adj[e.v].append((e.id, e.u))
        for lst in self._adj.values():
            lst.sort()

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def vertex(self, vid: int) -> Vertex:
        return self._vertex_by_id[vid]

    def edge(self, eid: int) -> Edge:
        return self._edge_by_id[eid]

    def has_vertex(self, vid: int) -> bool:
        return vid in self._vertex_by_id

    def vertex_ids(self) -> list[int]:
        return [v.id for v in self.vertices]

    def vertex_id_set(self) -> frozenset[int]:
        return frozenset(self._vertex_by_id)

    def vertex_at(self, row: int, col: int) -> int | None:
        return self._by_coord.get((row, col))

    def neighbors(self, vid: int) -> list[tuple[int, int]]:
        """(edge id, neighbor id) pairs in ascending edge-id order."""
        return self._adj[vid]

    def degree(self, vid: int) -> int:
        return len(self._adj[vid])

    def total_vertex_weight(self) -> Fraction:
        return sum((v.weight for v in self.vertices), Fraction(0))

    def induced_subgraph(self, vertex_ids) -> "TerrainGraph":
        keep = set(vertex_ids)
        vs = [v for v in self.vertices if v.id in keep]
        es = [e for e in self.edges if e.u in keep and e.v in keep]
        return TerrainGraph(vs, es)

    def remove_vertices(self, vertex_ids) -> "TerrainGraph":
        drop = set(vertex_ids)
        return self.induced_subgraph(vid for vid in self._vertex_by_id if vid not in drop)

    def is_connected(self) -> bool:
        comps = connected_components(self)
        return len(comps) <= 1


@dataclass(frozen=True)
class Tree:
    """Rooted tree as a subgraph of some TerrainGraph: root id plus edge ids."""

    root: int
    edges: tuple[int, ...]

    def vertex_ids(self, g: TerrainGraph) -> frozenset[int]:
        ids = {self.root}
        for eid in self.edges:
            e = g.edge(eid)
            ids.add(e.u)
            ids.add(e.v)
        return frozenset(ids)

    def weight(self, g: TerrainGraph) -> Fraction:
        return sum((g.edge(eid).weight for eid in self.edges), Fraction(0))


def _parse_weight(token: str) -> Fraction:
    if not _WEIGHT_RE.match(token):
        raise InvalidWeight(
            f"bad weight {token!r}: expected a positive decimal with at most 3 fractional digits"
        )
    value = Fraction(token)
    if value <= 0:
        raise InvalidWeight(f"bad weight {token!r}: weights must be positive")
    return value


def weight_str(w: Fraction) -> str:
    """Canonical decimal text for a weight (at most 3 fractional digits)."""
    if w.denominator == 1:
        return str(w.numerator)
    scaled = w * 1000
    if scaled.denominator != 1:
        raise InvalidWeight(f"weight {w} is not representable with 3 decimals")
    text = f"{scaled.numerator // 1000}.{scaled.numerator % 1000:03d}"
    return text.rstrip("0")


def parse_instance(text: str) -> Instance:
    """Parse and validate an instance file (see the repository README for the format)."""
    lines = text.splitlines()
    idx = 0

    def take_outside() -> str | None:
        nonlocal idx
        while idx < len(lines):
            line = lines[idx].strip()
            idx += 1
            if line and not line.startswith("#"):
                return line
        return None

    magic = take_outside()
    if magic is None or magic.split() != ["mmrtc", "1"]:
        raise MalformedHeader(f"expected 'mmrtc 1' magic line, got {magic!r}")

    header = take_outside()
    if header is None:
        raise MalformedHeader("missing '<rows> <cols> <k> <weighted>' line")
    parts = header.split()
    if len(parts) != 4:
        raise MalformedHeader(f"expected 4 header fields, got {header!r}")
    try:
        rows, cols, k, weighted_flag = (int(p) for p in parts)
    except ValueError:
        raise MalformedHeader(f"non-integer header field in {header!r}") from None
    if rows <= 0 or cols <= 0:
        raise MalformedHeader(f"grid dimensions must be positive, got {rows}x{cols}")
    if k < 1:
        raise MalformedHeader(f"robot count must be >= 1, got {k}")
    if weighted_flag not in (0, 1):
        raise MalformedHeader(f"weighted flag must be 0 or 1, got {weighted_flag}")

    # Grid rows are consumed verbatim: a leading '#' here is an obstacle cell,
    # not a comment.
    cells: list[tuple[Fraction | None, ...]] = []
    for r in range(rows):
        if idx >= len(lines):
            raise NonRectangularGrid(f"grid ends after {r} of {rows} rows")
        tokens = lines[idx].split()
        idx += 1
        if len(tokens) != cols:
            raise NonRectangularGrid(
                f"grid row {r} has {len(tokens)} cells, expected {cols}"
            )
        row_cells: list[Fraction | None] = []
        for token in tokens:
            if token == "#":
                row_cells.append(None)
            else:
                w = _parse_weight(token)
                if weighted_flag == 0 and w != 1:
                    raise InvalidWeight(
                        f"unweighted instance has cell weight {token!r} (must be 1)"
                    )
                row_cells.append(w)
        cells.append(tuple(row_cells))

    roots: list[Coord] = []
    for i in range(k):
        line = take_outside()
        if line is None:
            raise InvalidRoot(f"missing root line {i + 1} of {k}")
        parts = line.split()
        if len(parts) != 2:
            raise InvalidRoot(f"bad root line {line!r}: expected '<row> <col>'")
        try:
            rr, cc = int(parts[0]), int(parts[1])
        except ValueError:
            raise InvalidRoot(f"bad root line {line!r}: expected integers") from None
        if not (0 <= rr < rows and 0 <= cc < cols):
            raise InvalidRoot(f"root ({rr}, {cc}) outside the {rows}x{cols} grid")
        if cells[rr][cc] is None:
            raise RootOnObstacle(f"root ({rr}, {cc}) is on an obstacle")
        roots.append((rr, cc))

    if take_outside() is not None:
        raise MalformedHeader("unexpected trailing content after root lines")
    if len(set(roots)) != k:
        dupes = sorted({p for p in roots if roots.count(p) > 1})
        raise DuplicateRoots(f"duplicate roots: {dupes}")

    inst = Instance(rows, cols, k, bool(weighted_flag), tuple(cells), tuple(roots))
    free = inst.free_cells()
    if not free:
        raise DisconnectedFreeSpace("instance has no free cells")
    _check_free_space_connected(inst, free)
    return inst


def _check_free_space_connected(inst: Instance, free: list[Coord]) -> None:
    free_set = set(free)
    seen = {free[0]}
    stack = [free[0]]
    while stack:
        r, c = stack.pop()
        for nr, nc in ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)):
            if (nr, nc) in free_set and (nr, nc) not in seen:
                seen.add((nr, nc))
                stack.append((nr, nc))
    if len(seen) != len(free):
        missing = sorted(free_set - seen)[:5]
        raise DisconnectedFreeSpace(
            f"free space is disconnected ({len(free) - len(seen)} unreachable cells, e.g. {missing})"
        )


def format_instance(inst: Instance) -> str:
    """Canonical text for an instance; parse(format(inst)) == inst."""
    out = [f"mmrtc 1", f"{inst.rows} {inst.cols} {inst.k} {1 if inst.weighted else 0}"]
    for r in range(inst.rows):
        out.append(" ".join(
            "#" if w is None else weight_str(w) for w in inst.cells[r]
        ))
    for rr, cc in inst.roots:
        out.append(f"{rr} {cc}")
    return "\n".join(out) + "\n"


def build_graph(inst: Instance) -> TerrainGraph:
    """Terrain graph: one vertex per free cell, 4-neighbor edges, w_e = mean of endpoints."""
    ids: dict[Coord, int] = {}
    vertices: list[Vertex] = []
    for r in range(inst.rows):
        for c in range(inst.cols):
            w = inst.cells[r][c]
            if w is not None:
                ids[(r, c)] = len(vertices)
                vertices.append(Vertex(len(vertices), r, c, w))
    edges: list[Edge] = []
    for v in vertices:
        for nr, nc in ((v.row, v.col + 1), (v.row + 1, v.col)):
            other = ids.get((nr, nc))
            if other is not None:
                w_e = (v.weight + vertices[other].weight) / 2
                edges.append(Edge(len(edges), v.id, other, w_e))
    return TerrainGraph(vertices, edges)


def root_ids(inst: Instance, g: TerrainGraph) -> list[int]:
    out = []
    for rr, cc in inst.roots:
        vid = g.vertex_at(rr, cc)
        if vid is None:
            raise InvalidRoot(f"root ({rr}, {cc}) has no vertex")
        out.append(vid)
    return out


@dataclass(frozen=True)
class DVertex:
    id: int
    row: int  # doubled coordinates
    col: int
    weight: Fraction
    parent: int  # terrain vertex id


class DecompGraph:
    """4x decomposition of a terrain graph: four quarter-weight sub-cells per vertex."""

    def __init__(self, vertices: list[DVertex], edges: list[tuple[int, int]]):
        self.vertices = tuple(vertices)
        self.edges = tuple(edges)
        self.by_coord = {(v.row, v.col): v.id for v in self.vertices}
        self._adjacent: set[tuple[int, int]] = set()
        for u, v in self.edges:
            self._adjacent.add((u, v))
            self._adjacent.add((v, u))

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    def vertex(self, did: int) -> DVertex:
        return self.vertices[did]

    def adjacent(self, u: int, v: int) -> bool:
        return (u, v) in self._adjacent

    def subcell(self, g_vertex: Vertex, dr: int, dc: int) -> int:
        return self.by_coord[(2 * g_vertex.row + dr, 2 * g_vertex.col + dc)]

    def total_weight(self) -> Fraction:
        return sum((v.weight for v in self.vertices), Fraction(0))


def decompose(g: TerrainGraph) -> DecompGraph:
    """Split every vertex into its four sub-cells at doubled coordinates."""
    coords: list[tuple[int, int, Fraction, int]] = []
    for v in g.vertices:
        quarter = v.weight / 4
        for dr in (0, 1):
            for dc in (0, 1):
                coords.append((2 * v.row + dr, 2 * v.col + dc, quarter, v.id))
    coords.sort(key=lambda t: (t[0], t[1]))
    vertices = [DVertex(i, r, c, w, p) for i, (r, c, w, p) in enumerate(coords)]
    by_coord = {(v.row, v.col): v.id for v in vertices}
    edges: list[tuple[int, int]] = []
    for v in vertices:
        for nr, nc in ((v.row, v.col + 1), (v.row + 1, v.col)):
            other = by_coord.get((nr, nc))
            if other is not None:
                edges.append((v.id, other))
    return DecompGraph(vertices, edges)


def boundary_vertices(g: TerrainGraph) -> frozenset[int]:
    """Vertices with degree < 4 (grid-boundary cells and obstacle-adjacent cells)."""
    return frozenset(v.id for v in g.vertices if g.degree(v.id) < 4)


class DijkstraResult:
    """Distances and predecessor links from a single source."""

    def __init__(self, source: int, dist: dict[int, Fraction],
                 pred: dict[int, tuple[int, int] | None]):
        self.source = source
        self.dist = dist
        self._pred = pred

    def distance(self, vid: int) -> Fraction:
        return self.dist[vid]

    def reaches(self, vid: int) -> bool:
        return vid in self.dist

    def path_to(self, vid: int) -> list[int]:
        """Vertex ids from the source to vid along a shortest path."""
        if vid not in self.dist:
            raise NoPath(f"no path from {self.source} to {vid}")
        out = [vid]
        while True:
            link = self._pred[out[-1]]
            if link is None:
                break
            out.append(link[0])
        out.reverse()
        return out


def dijkstra(g: TerrainGraph, source: int) -> DijkstraResult:
    """Exact shortest-path distances from source over edge weights."""
    dist: dict[int, Fraction] = {source: Fraction(0)}
    pred: dict[int, tuple[int, int] | None] = {source: None}
    heap: list[tuple[Fraction, int]] = [(Fraction(0), source)]
    done: set[int] = set()
    while heap:
        d, vid = heapq.heappop(heap)
        if vid in done:
            continue
        done.add(vid)
        for eid, other in g.neighbors(vid):
            nd = d + g.edge(eid).weight
            if other not in dist or nd < dist[other]:
                dist[other] = nd
                pred[other] = (vid, eid)
                heapq.heappush(heap, (nd, other))
    return DijkstraResult(source, dist, pred)


def shortest_path(g: TerrainGraph, s: int, t: int) -> list[int]:
    return dijkstra(g, s).path_to(t)


def connected_components(g: TerrainGraph) -> list[frozenset[int]]:
    """Vertex-set partition, ordered by each component's smallest vertex id."""
    seen: set[int] = set()
    comps: list[frozenset[int]] = []
    for v in g.vertices:
        if v.id in seen:
            continue
        comp = {v.id}
        stack = [v.id]
        while stack:
            cur = stack.pop()
            for _, other in g.neighbors(cur):
                if other not in comp:
                    comp.add(other)
                    stack.append(other)
        seen |= comp
        comps.append(frozenset(comp))
    return comps


def minimum_spanning_tree(g: TerrainGraph, root: int) -> Tree:
    """Prim's MST rooted at the given vertex; ties broken by edge id."""
    in_tree = {root}
    edges: list[int] = []
    heap: list[tuple[Fraction, int, int]] = []
    for eid, other in g.neighbors(root):
        heapq.heappush(heap, (g.edge(eid).weight, eid, other))
    while heap:
        _, eid, vid = heapq.heappop(heap)
        if vid in in_tree:
            continue
        in_tree.add(vid)
        edges.append(eid)
        for neid, other in g.neighbors(vid):
            if other not in in_tree:
                heapq.heappush(heap, (g.edge(neid).weight, neid, other))
    if len(in_tree) != g.num_vertices:
        raise NoPath(
            f"graph is disconnected: spanning tree from {root} reaches "
            f"{len(in_tree)} of {g.num_vertices} vertices"
        )
    return Tree(root, tuple(sorted(edges)))
