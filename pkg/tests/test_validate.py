import random

import pytest

from mmrtc.generate import generate_instance
from mmrtc.solution import solution_from_trees
from mmrtc.terrain import Tree, minimum_spanning_tree
from mmrtc.validate import makespan_and_gap, validate_solution
from mmrtc.warmstart import initial_solution

from conftest import graph_and_roots, unit_path, unit_square


class TestValidateSolution:
    def test_warmstart_passes(self):
        inst = generate_instance("floor", 6, 6, 3, seed=1)
        g, roots = graph_and_roots(inst)
        report = validate_solution(initial_solution(g, roots), g, roots)
        assert report.passed
        assert report.cover_ok and report.rooted_ok and report.trees_ok

    def test_dropped_vertex_fails_cover(self):
        g, roots = graph_and_roots(unit_path(4, roots=((0, 0), (0, 3))))
        # Trees that jointly skip v1.
        sol = solution_from_trees(g, [Tree(0, ()), Tree(3, (2,))])
        report = validate_solution(sol, g, roots)
        assert not report.cover_ok
        assert 1 in report.uncovered
        assert not report.passed

    def test_chord_edge_fails_tree(self):
        g, roots = graph_and_roots(unit_square(2))
        # All 4 edges of the 2x2 grid: cycle, |E| != |V| - 1.
        sol = solution_from_trees(g, [Tree(0, (0, 1, 2, 3))])
        report = validate_solution(sol, g, roots)
        assert not report.trees_ok
        assert any("cycle" in issue for issue in report.tree_issues)

    def test_swapped_root_fails_rooted(self):
        g, roots = graph_and_roots(unit_path(4, roots=((0, 0), (0, 3))))
        sol = solution_from_trees(g, [
            minimum_spanning_tree(g.induced_subgraph({3, 2}), 3),
            minimum_spanning_tree(g.induced_subgraph({0, 1}), 0),
        ])
        report = validate_solution(sol, g, roots)
        assert not report.rooted_ok

    def test_disconnected_tree_detected(self):
        g, roots = graph_and_roots(unit_path(5))
        sol = solution_from_trees(g, [Tree(0, (0, 3))])  # edges 0 and 3 don't touch
        report = validate_solution(sol, g, roots)
        assert not report.trees_ok
        assert any("disconnected" in issue for issue in report.tree_issues)

    def test_mutation_suite(self):
        rng = random.Random(12)
        for _ in range(10):
            inst = generate_instance("floor", 5, 6, 2, seed=rng.randrange(1 << 20))
            g, roots = graph_and_roots(inst)
            sol = initial_solution(g, roots)
            assert validate_solution(sol, g, roots).passed

            # Vertex drop: remove a leaf edge from every tree.
            dropped = []
            for t in sol.trees:
                dropped.append(Tree(t.root, t.edges[:-1]) if t.edges else t)
            mutated = solution_from_trees(g, dropped)
            report = validate_solution(mutated, g, roots)
            if any(t.edges for t in sol.trees):
                assert not report.cover_ok or report.passed is False

            # Edge add: append a non-tree edge to the first tree.
            t0 = sol.trees[0]
            extra = [e.id for e in g.edges
                     if e.id not in t0.edges
                     and e.u in t0.vertex_ids(g) and e.v in t0.vertex_ids(g)]
            if extra:
                chord = solution_from_trees(
                    g, [Tree(t0.root, tuple(sorted(t0.edges + (extra[0],))))]
                    + list(sol.trees[1:]))
                assert not validate_solution(chord, g, roots).trees_ok

    def test_report_renders(self):
        g, roots = graph_and_roots(unit_path(2))
        report = validate_solution(initial_solution(g, roots), g, roots)
        assert "pass" in report.to_text()
        assert report.to_dict()["passed"] is True


class TestMakespanAndGap:
    def test_zero_gap(self):
        g, roots = graph_and_roots(unit_path(3))
        sol = initial_solution(g, roots)
        makespan, gap = makespan_and_gap(sol, g, float(sol.makespan))
        assert gap == 0.0

    def test_floor_small_style_row(self):
        # makespan 16, bound 16 -> 0.0%
        g, roots = graph_and_roots(unit_path(17))  # MST weight 16
        sol = initial_solution(g, roots)
        makespan, gap = makespan_and_gap(sol, g, 16.0)
        assert makespan == 16.0
        assert gap == 0.0

    def test_ten_percent(self):
        g, roots = graph_and_roots(unit_path(11))  # makespan 10
        sol = initial_solution(g, roots)
        makespan, gap = makespan_and_gap(sol, g, 9.0)
        assert makespan == 10.0
        assert gap == pytest.approx(10.0)

    def test_unknown_bound(self):
        g, roots = graph_and_roots(unit_path(3))
        sol = initial_solution(g, roots)
        assert makespan_and_gap(sol, g, None)[1] is None
