"""Tests for the bundled MPS runner and its warm-start handling."""

import pytest

pytest.importorskip("scipy")

from mmrtc.errors import InfeasibleModel
from mmrtc.model import apply_warmstart, build_model, export_mps
from mmrtc.mps import parse_mps
from mmrtc.solve import parse_solution_file, solve_external
from mmrtc.solve_highs import format_solution, load_warm_values, main as runner_main
from mmrtc.warmstart import initial_solution

from conftest import graph_and_roots, unit_path

INFEASIBLE_MPS = """\
NAME infeasible
ROWS
 N obj
 G atleast
 L atmost
COLUMNS
    x obj 1
    x atleast 1
    x atmost 1
RHS
    rhs atleast 2
    rhs atmost 1
ENDATA
"""


def test_runner_writes_generic_dialect(tmp_path):
    g, roots = graph_and_roots(unit_path(2))
    m = build_model([g], roots, 2)
    mps = tmp_path / "m.mps"
    sol = tmp_path / "m.sol"
    mps.write_text(export_mps(m))
    assert runner_main([str(mps), str(sol), "--time-limit", "10"]) == 0
    parsed = parse_solution_file(sol.read_text(), "generic")
    assert parsed.status == "optimal"
    assert parsed.values["tau"] == pytest.approx(1.0, abs=1e-6)
    assert parsed.bound == pytest.approx(1.0, abs=1e-6)


def test_runner_reports_infeasible(tmp_path):
    mps = tmp_path / "bad.mps"
    sol = tmp_path / "bad.sol"
    mps.write_text(INFEASIBLE_MPS)
    assert runner_main([str(mps), str(sol)]) == 0
    parsed = parse_solution_file(sol.read_text(), "generic")
    assert parsed.status == "infeasible"


def test_solve_external_raises_on_infeasible(tmp_path, monkeypatch):
    # Route a structurally infeasible hand-made model through the runner by
    # rebuilding one whose cover row can never hold: covered by unit test
    # above; here check the orchestration error path via a stub command.
    g, roots = graph_and_roots(unit_path(2))
    m = build_model([g], roots, 2)
    import sys
    stub = tmp_path / "stub.py"
    stub.write_text(
        "import sys\n"
        "open(sys.argv[2], 'w').write('# status infeasible\\n')\n"
    )
    from mmrtc.solve import SolverConfig
    cfg = SolverConfig(command=f"{sys.executable} {stub} {{mps}} {{sol}}",
                       time_limit=5)
    with pytest.raises(InfeasibleModel):
        solve_external(m, None, cfg)


def test_load_warm_values_accepts_feasible(tmp_path):
    g, roots = graph_and_roots(unit_path(3))
    m = build_model([g], roots, 3)
    warm = apply_warmstart(m, initial_solution(g, roots))
    path = tmp_path / "warm.txt"
    path.write_text("".join(f"{k} {float(v)!r}\n" for k, v in warm.items()))
    problem = parse_mps(export_mps(m))
    values = load_warm_values(str(path), problem)
    assert values is not None
    order = list(problem.variables)
    assert values[order.index("tau")] == pytest.approx(2.0)


def test_load_warm_values_rejects_infeasible(tmp_path):
    g, roots = graph_and_roots(unit_path(3))
    m = build_model([g], roots, 3)
    path = tmp_path / "warm.txt"
    path.write_text("y_0_0 1.0\ntau 0.0\n")  # violates Cover for v1, v2
    problem = parse_mps(export_mps(m))
    assert load_warm_values(str(path), problem) is None


def test_load_warm_values_empty_file(tmp_path):
    g, roots = graph_and_roots(unit_path(2))
    problem = parse_mps(export_mps(build_model([g], roots, 2)))
    path = tmp_path / "warm.txt"
    path.write_text("")
    assert load_warm_values(str(path), problem) is None


class _FakeResult:
    def __init__(self, status, x=None, fun=None, bound=None):
        self.status = status
        self.x = x
        self.fun = fun
        self.mip_dual_bound = bound


def test_format_solution_falls_back_to_warm(tmp_path):
    g, roots = graph_and_roots(unit_path(3))
    m = build_model([g], roots, 3)
    problem = parse_mps(export_mps(m))
    order = list(problem.variables)
    warm_map = apply_warmstart(m, initial_solution(g, roots))
    warm = [float(warm_map[name]) for name in order]
    # Time limit hit with no incumbent: the warm vector becomes the answer.
    text = format_solution(problem, order, _FakeResult(status=1), warm)
    parsed = parse_solution_file(text, "generic")
    assert parsed.status == "feasible"
    assert parsed.values["tau"] == pytest.approx(2.0)


def test_format_solution_keeps_better_incumbent(tmp_path):
    g, roots = graph_and_roots(unit_path(3))
    m = build_model([g], roots, 3)
    problem = parse_mps(export_mps(m))
    order = list(problem.variables)
    warm_map = apply_warmstart(m, initial_solution(g, roots))
    warm = [float(warm_map[name]) for name in order]
    better = [v for v in warm]
    better[order.index("tau")] = 1.5
    res = _FakeResult(status=1, x=better, fun=1.5, bound=1.0)
    parsed = parse_solution_file(format_solution(problem, order, res, warm), "generic")
    assert parsed.values["tau"] == pytest.approx(1.5)
    assert parsed.bound == pytest.approx(1.0)


def test_mps_reader_rejects_garbage():
    from mmrtc.errors import SolutionParseError
    with pytest.raises(SolutionParseError):
        parse_mps("ROWS\n L r1\nCOLUMNS\n    x r1 1\nRHS\nENDATA\n")  # no N row
