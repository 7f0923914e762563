import itertools
import random
from fractions import Fraction

import pytest

from mmrtc.errors import (
    DisconnectedFreeSpace,
    DuplicateRoots,
    InvalidRoot,
    InvalidWeight,
    MalformedHeader,
    NoPath,
    NonRectangularGrid,
    RootOnObstacle,
)
from mmrtc.generate import generate_instance
from mmrtc.terrain import (
    boundary_vertices,
    build_graph,
    connected_components,
    decompose,
    dijkstra,
    format_instance,
    minimum_spanning_tree,
    parse_instance,
    shortest_path,
)

from conftest import unit_path, unit_square


class TestParseInstance:
    def test_smallest_connected_instance(self):
        inst = parse_instance("mmrtc 1\n1 2 1 0\n1 1\n0 0\n")
        assert (inst.rows, inst.cols, inst.k) == (1, 2, 1)
        assert len(inst.free_cells()) == 2
        assert inst.roots == ((0, 0),)

    def test_floor_small_profile(self, floor_small):
        # 5x10 with 4 obstacles (8.0%), k=4: 46 free cells.
        assert len(floor_small.free_cells()) == 46
        assert floor_small.k == 4

    def test_disconnected_free_space(self):
        with pytest.raises(DisconnectedFreeSpace):
            parse_instance("mmrtc 1\n1 3 1 0\n1 # 1\n0 0\n")

    def test_malformed_header(self):
        with pytest.raises(MalformedHeader):
            parse_instance("mmrtc 2\n1 2 1 0\n1 1\n0 0\n")
        with pytest.raises(MalformedHeader):
            parse_instance("mmrtc 1\n1 2 1\n1 1\n0 0\n")

    def test_non_rectangular_grid(self):
        with pytest.raises(NonRectangularGrid):
            parse_instance("mmrtc 1\n2 2 1 0\n1 1\n1\n0 0\n")

    def test_root_on_obstacle(self):
        with pytest.raises(RootOnObstacle):
            parse_instance("mmrtc 1\n1 3 1 0\n1 1 #\n0 2\n")

    def test_duplicate_roots(self):
        with pytest.raises(DuplicateRoots):
            parse_instance("mmrtc 1\n1 3 2 0\n1 1 1\n0 0\n0 0\n")

    def test_root_out_of_bounds(self):
        with pytest.raises(InvalidRoot):
            parse_instance("mmrtc 1\n1 2 1 0\n1 1\n0 5\n")

    def test_bad_weight(self):
        with pytest.raises(InvalidWeight):
            parse_instance("mmrtc 1\n1 2 1 1\n1 0\n0 0\n")
        with pytest.raises(InvalidWeight):
            parse_instance("mmrtc 1\n1 2 1 1\n1 2.5555\n0 0\n")

    def test_comments_outside_grid(self):
        text = "# a comment\nmmrtc 1\n# another\n1 2 1 0\n1 1\n# before roots\n0 0\n# after\n"
        inst = parse_instance(text)
        assert inst.roots == ((0, 0),)

    def test_obstacle_row_starting_with_hash(self):
        # Inside the grid block '#' is an obstacle cell, not a comment.
        inst = parse_instance("mmrtc 1\n2 2 1 0\n# 1\n1 1\n1 1\n")
        assert inst.cells[0][0] is None
        assert len(inst.free_cells()) == 3

    def test_roundtrip(self, terrain_small):
        assert parse_instance(format_instance(terrain_small)) == terrain_small


class TestBuildGraph:
    def test_floor_small_counts(self, floor_small):
        g = build_graph(floor_small)
        assert (g.num_vertices, g.num_edges) == (46, 73)

    def test_2x2_unit(self):
        g = build_graph(unit_square(2))
        assert (g.num_vertices, g.num_edges) == (4, 4)
        assert all(e.weight == 1 for e in g.edges)

    def test_weight_averaging(self):
        inst = parse_instance("mmrtc 1\n1 3 1 1\n1 2 3\n0 0\n")
        g = build_graph(inst)
        assert [e.weight for e in g.edges] == [Fraction(3, 2), Fraction(5, 2)]

    def test_edge_weight_is_endpoint_mean(self):
        inst = generate_instance("terrain", 6, 6, 2, seed=3)
        g = build_graph(inst)
        for e in g.edges:
            assert e.weight == (g.vertex(e.u).weight + g.vertex(e.v).weight) / 2

    def test_vertex_ids_row_major(self, floor_small):
        g = build_graph(floor_small)
        coords = [(v.row, v.col) for v in g.vertices]
        assert coords == sorted(coords)


class TestDecompose:
    def test_single_vertex(self):
        inst = parse_instance("mmrtc 1\n1 1 1 1\n4\n0 0\n")
        d = decompose(build_graph(inst))
        assert d.num_vertices == 4
        assert all(v.weight == 1 for v in d.vertices)

    def test_floor_small_size(self, floor_small):
        d = decompose(build_graph(floor_small))
        assert d.num_vertices == 4 * 46

    def test_weight_conservation(self):
        for seed in range(5):
            inst = generate_instance("terrain", 5, 7, 2, seed=seed)
            g = build_graph(inst)
            d = decompose(g)
            assert d.total_weight() == g.total_vertex_weight()


class TestBoundary:
    def test_3x3(self):
        g = build_graph(unit_square(3))
        assert len(boundary_vertices(g)) == 8

    def test_path_all_boundary(self):
        g = build_graph(unit_path(6))
        assert boundary_vertices(g) == frozenset(range(6))

    def test_4x4(self):
        g = build_graph(unit_square(4))
        assert len(boundary_vertices(g)) == 12


def _bellman_ford(g, source):
    dist = {v.id: None for v in g.vertices}
    dist[source] = Fraction(0)
    for _ in range(g.num_vertices):
        changed = False
        for e in g.edges:
            for a, b in ((e.u, e.v), (e.v, e.u)):
                if dist[a] is not None and (dist[b] is None or dist[a] + e.weight < dist[b]):
                    dist[b] = dist[a] + e.weight
                    changed = True
        if not changed:
            break
    return dist


class TestDijkstra:
    def test_self_distance(self):
        g = build_graph(unit_square(3))
        assert dijkstra(g, 4).distance(4) == 0

    def test_unit_grid_corner_to_corner(self):
        g = build_graph(unit_square(3))
        assert dijkstra(g, 0).distance(8) == 4

    def test_weighted_path(self):
        inst = parse_instance("mmrtc 1\n1 3 1 1\n1 2 3\n0 0\n")
        g = build_graph(inst)
        assert dijkstra(g, 0).distance(2) == 4

    def test_against_bellman_ford(self):
        rng = random.Random(99)
        for _ in range(8):
            inst = generate_instance("terrain", rng.randint(3, 7), rng.randint(3, 7),
                                     2, seed=rng.randrange(1 << 20))
            g = build_graph(inst)
            src = rng.choice(g.vertex_ids())
            res = dijkstra(g, src)
            bf = _bellman_ford(g, src)
            for vid in g.vertex_ids():
                assert res.distance(vid) == bf[vid]

    def test_triangle_inequality(self):
        g = build_graph(unit_square(4))
        rng = random.Random(5)
        results = {v: dijkstra(g, v) for v in g.vertex_ids()}
        for _ in range(60):
            a, b, c = (rng.choice(g.vertex_ids()) for _ in range(3))
            assert results[a].distance(c) <= results[a].distance(b) + results[b].distance(c)


class TestGraphUtils:
    def test_shortest_path_identity(self):
        g = build_graph(unit_square(3))
        assert shortest_path(g, 4, 4) == [4]

    def test_shortest_path_disconnected(self):
        g = build_graph(unit_path(4)).induced_subgraph({0, 1, 3})
        with pytest.raises(NoPath):
            shortest_path(g, 0, 3)

    def test_components_after_cut_vertex(self):
        # Dumbbell: two 2x2 blobs joined through one middle cell.
        inst = parse_instance(
            "mmrtc 1\n2 5 1 0\n1 1 # 1 1\n1 1 1 1 1\n0 0\n"
        )
        g = build_graph(inst)
        cut = g.vertex_at(1, 2)
        comps = connected_components(g.remove_vertices({cut}))
        assert len(comps) == 2

    def test_mst_2x2(self):
        g = build_graph(unit_square(2))
        tree = minimum_spanning_tree(g, 0)
        assert tree.weight(g) == 3
        assert len(tree.edges) == 3

    def test_mst_matches_bruteforce(self):
        rng = random.Random(17)
        for _ in range(6):
            while True:
                inst = generate_instance("terrain", 2, rng.randint(2, 4), 1,
                                         seed=rng.randrange(1 << 20))
                g = build_graph(inst)
                if g.num_vertices <= 8:
                    break
            tree = minimum_spanning_tree(g, 0)
            n = g.num_vertices
            best = None
            for combo in itertools.combinations(g.edges, n - 1):
                seen = {0}
                adj = {}
                for e in combo:
                    adj.setdefault(e.u, []).append(e.v)
                    adj.setdefault(e.v, []).append(e.u)
                stack = [0]
                while stack:
                    for other in adj.get(stack.pop(), ()):
                        if other not in seen:
                            seen.add(other)
                            stack.append(other)
                if len(seen) == n:
                    w = sum(e.weight for e in combo)
                    best = w if best is None else min(best, w)
            assert tree.weight(g) == best
