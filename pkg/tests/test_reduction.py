import math
import random
from fractions import Fraction

import pytest

from mmrtc.generate import generate_instance
from mmrtc.reduction import (
    ReductionParams,
    build_reduction,
    connectivity_check,
    farthest_boundary_vertex,
    ffs_tree,
    logistic,
    parabola_width,
    prh_sub_component,
    srh_budget,
    srh_sub_component,
)
from mmrtc.terrain import boundary_vertices, dijkstra
from mmrtc.validate import validate_solution
from mmrtc.warmstart import mst_warmstart

from conftest import graph_and_roots, unit_path, unit_square


class TestLogistic:
    def test_zero(self):
        assert logistic(0.0) == 0.5

    def test_one(self):
        assert logistic(1.0) == pytest.approx(0.731058, abs=1e-6)

    def test_infinity_sentinel(self):
        assert logistic(math.inf) == 1.0


class TestFarthestBoundary:
    def test_path_endpoints(self):
        g, roots = graph_and_roots(unit_path(5, roots=((0, 0), (0, 4))))
        b = boundary_vertices(g)
        d0, d4 = dijkstra(g, 0), dijkstra(g, 4)
        assert farthest_boundary_vertex(g, b, d0, d4) == 4

    def test_symmetric_3x3_opposite_corners(self):
        g, roots = graph_and_roots(unit_square(3, roots=((0, 0), (2, 2))))
        b = boundary_vertices(g)
        d_i, d_j = dijkstra(g, roots[0]), dijkstra(g, roots[1])
        assert farthest_boundary_vertex(g, b, d_i, d_j) == roots[1]


class TestParabolaWidth:
    def test_alpha_zero(self):
        assert parabola_width(0.0, Fraction(3), Fraction(2)) == 0.0

    def test_equal_distances(self):
        a = parabola_width(2.0, Fraction(5), Fraction(5))
        assert a == pytest.approx(2.0 * 0.7310585786300049)

    def test_alpha_inf_means_no_removal(self):
        g, roots = graph_and_roots(unit_path(5, roots=((0, 0), (0, 4))))
        vs, es = prh_sub_component(g, roots, 0, 1, math.inf)
        assert vs == frozenset() and es == frozenset()


class TestPrhMembership:
    def test_alpha_zero_is_half_plane(self):
        g, roots = graph_and_roots(unit_square(3, roots=((1, 0), (1, 2))))
        vs, _ = prh_sub_component(g, roots, 0, 1, 0.0)
        # y' >= 0 relative to r_j along the ray r_i -> r_j: column-2 cells.
        assert vs == frozenset(v.id for v in g.vertices if v.col >= 2)
        assert roots[1] in vs and roots[0] not in vs

    def test_path_alpha_zero(self):
        g, roots = graph_and_roots(unit_path(5, roots=((0, 0), (0, 4))))
        vs, _ = prh_sub_component(g, roots, 0, 1, 0.0)
        assert vs == frozenset({4})

    def test_disjointness_any_alpha(self):
        rng = random.Random(21)
        for _ in range(25):
            inst = generate_instance("floor", rng.randint(4, 9), rng.randint(4, 9),
                                     rng.randint(2, 4), seed=rng.randrange(1 << 20))
            g, roots = graph_and_roots(inst)
            alpha = rng.choice((0.0, 0.3, 0.9, 2.0))
            for i in range(len(roots)):
                for j in range(i + 1, len(roots)):
                    vij, _ = prh_sub_component(g, roots, i, j, alpha)
                    vji, _ = prh_sub_component(g, roots, j, i, alpha)
                    assert not (vij & vji)


class TestSrhBudget:
    def test_beta_zero(self):
        assert srh_budget(0.0, 10, Fraction(3), Fraction(2)) == 0

    def test_ratio_infinity(self):
        assert srh_budget(1.0, 10, Fraction(3), Fraction(0)) == 10

    def test_ceil_example(self):
        assert srh_budget(0.3, 7, Fraction(5), Fraction(5)) == 2


class TestFfsTree:
    def test_limit_one(self):
        g, _ = graph_and_roots(unit_path(5))
        vs, es = ffs_tree(g, frozenset(range(5)), 4, dijkstra(g, 0), 1)
        assert vs == frozenset({4}) and es == frozenset()

    def test_limit_zero(self):
        g, _ = graph_and_roots(unit_path(5))
        vs, es = ffs_tree(g, frozenset(range(5)), 4, dijkstra(g, 0), 0)
        assert vs == frozenset() and es == frozenset()

    def test_farthest_first_order(self):
        g, _ = graph_and_roots(unit_path(5))
        vs, _ = ffs_tree(g, frozenset(range(5)), 4, dijkstra(g, 0), 3)
        assert vs == frozenset({4, 3, 2})

    def test_exhaustion_spans_component(self):
        g, _ = graph_and_roots(unit_square(3))
        allowed = frozenset(range(9))
        vs, es = ffs_tree(g, allowed, 8, dijkstra(g, 0), 99)
        assert vs == allowed
        assert len(es) == len(vs) - 1


class TestSrhInferior:
    def test_beta_zero_empty(self):
        g, roots = graph_and_roots(unit_path(4, roots=((0, 0), (0, 3))))
        vs, es = srh_sub_component(g, roots, 0, 1, 0.0)
        assert vs == frozenset()

    def test_per_robot_assembly(self):
        from mmrtc.reduction import prh_inferior, srh_inferior

        g, roots = graph_and_roots(unit_path(5, roots=((0, 0), (0, 4))))
        h = srh_inferior(g, roots, 0, 1.0)
        assert h.robot == 0
        assert roots[0] not in h.vertices
        assert [j for j, _, _ in h.sub_components] == [1]
        residual = g.remove_vertices(h.vertices)
        assert residual.is_connected() and residual.has_vertex(roots[0])

        hp = prh_inferior(g, roots, 0, 0.0)
        assert hp.vertices == frozenset({4})

    def test_disjoint_s_sets_on_path(self):
        g, roots = graph_and_roots(unit_path(4, roots=((0, 0), (0, 3))))
        d0, d3 = dijkstra(g, 0), dijkstra(g, 3)
        s01 = {v for v in range(4) if d0.distance(v) > d3.distance(v)}
        s10 = {v for v in range(4) if d3.distance(v) > d0.distance(v)}
        assert s01 == {2, 3} and s10 == {0, 1}
        for beta in (0.2, 0.7, 1.0):
            v01, _ = srh_sub_component(g, roots, 0, 1, beta)
            v10, _ = srh_sub_component(g, roots, 1, 0, beta)
            assert v01 <= s01 and v10 <= s10

    def test_equidistant_vertices_excluded(self):
        # Middle vertex of a 1x5 path with roots at both ends is in neither S.
        g, roots = graph_and_roots(unit_path(5, roots=((0, 0), (0, 4))))
        for i, j in ((0, 1), (1, 0)):
            vs, _ = srh_sub_component(g, roots, i, j, 1.0)
            assert 2 not in vs


class TestConnectivityCheck:
    def test_empty_inferior_unchanged(self):
        g, _ = graph_and_roots(unit_path(5))
        vs, es = connectivity_check(g, 0, frozenset(), frozenset())
        assert vs == frozenset() and es == frozenset()

    def test_path_repair_trace(self):
        # Removing v2 disconnects {v3, v4}; the carved shortest path from v3
        # to the root passes through v2, emptying the inferior graph.
        g, _ = graph_and_roots(unit_path(5))
        vs, _ = connectivity_check(g, 0, frozenset({2}), frozenset())
        assert vs == frozenset()

    def test_root_always_ejected(self):
        g, _ = graph_and_roots(unit_path(3))
        vs, _ = connectivity_check(g, 0, frozenset({0}), frozenset())
        assert 0 not in vs

    def test_donut_pocket_reconnected(self):
        # 5x5 grid, inferior ring around the center: the pocket reconnects
        # through one carved corridor and the residual is connected.
        g, _ = graph_and_roots(unit_square(5))
        ring = {v.id for v in g.vertices
                if max(abs(v.row - 2), abs(v.col - 2)) == 1}
        vs, _ = connectivity_check(g, 0, frozenset(ring), frozenset())
        assert vs < ring
        residual = g.remove_vertices(vs)
        assert residual.is_connected()
        center = g.vertex_at(2, 2)
        assert residual.has_vertex(center)

    def test_never_grows(self):
        rng = random.Random(3)
        for _ in range(15):
            inst = generate_instance("floor", 6, 6, 2, seed=rng.randrange(1 << 20))
            g, roots = graph_and_roots(inst)
            sample = frozenset(rng.sample(g.vertex_ids(),
                                          min(8, g.num_vertices // 2)))
            vs, _ = connectivity_check(g, roots[0], sample, frozenset())
            assert vs <= sample


class TestBuildReduction:
    @pytest.mark.parametrize("params", [
        ReductionParams("prh", alpha=math.inf),
        ReductionParams("srh", beta=0.0),
        ReductionParams("none"),
    ])
    def test_sentinels_keep_everything(self, params, floor_small):
        g, roots = graph_and_roots(floor_small)
        red = build_reduction(g, roots, params)
        for res, h in zip(red.residuals, red.inferior):
            assert res.num_vertices == g.num_vertices
            assert res.num_edges == g.num_edges
            assert not h.vertices

    def test_k1_no_removal(self):
        g, roots = graph_and_roots(unit_square(3))
        red = build_reduction(g, roots, ReductionParams("srh", beta=1.0))
        assert red.residuals[0].num_vertices == g.num_vertices

    def test_completeness_properties_sampled(self):
        rng = random.Random(77)
        for _ in range(40):
            style = rng.choice(("floor", "maze", "terrain"))
            inst = generate_instance(style, rng.randint(5, 12), rng.randint(5, 12),
                                     rng.randint(2, 4), seed=rng.randrange(1 << 20))
            g, roots = graph_and_roots(inst)
            if rng.random() < 0.5:
                params = ReductionParams("prh", alpha=rng.choice((0.0, 0.3, 0.6, 0.9)))
            else:
                params = ReductionParams("srh", beta=rng.choice((0.3, 0.6, 0.9, 1.0)))
            red = build_reduction(g, roots, params)  # asserts internally
            union = set()
            for res in red.residuals:
                union |= res.vertex_id_set()
            assert union == g.vertex_id_set()
            for i, res in enumerate(red.residuals):
                assert res.has_vertex(roots[i])
                assert res.is_connected()
            warm = mst_warmstart(list(red.residuals), roots)
            assert validate_solution(warm, g, roots).passed
