"""Static SVG rendering of instances, reductions, subtrees, and coverage paths."""

from __future__ import annotations

from fractions import Fraction

from .reduction import ReductionResult
from .solution import MmrtcSolution
from .stc import CoveragePlan
from .terrain import DecompGraph, Instance, TerrainGraph

CELL = 24  # pixels per grid cell

PALETTE = (
    "#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd",
    "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f",
)


def robot_color(i: int) -> str:
    return PALETTE[i % len(PALETTE)]


def _shade(w: Fraction, lo: Fraction, hi: Fraction) -> str:
    if hi == lo:
        level = 235
    else:
        t = float((w - lo) / (hi - lo))
        level = int(235 - 90 * t)  # heavier cells are darker
    return f"rgb({level},{level},{level})"


def render_svg(inst: Instance, g: TerrainGraph,
               reduction: ReductionResult | None = None,
               robot: int = 0,
               solution: MmrtcSolution | None = None,
               plan: CoveragePlan | None = None,
               d: DecompGraph | None = None) -> str:
    """Layered SVG: grid, roots, optional inferior/residual markers, trees, paths."""
    width, height = inst.cols * CELL, inst.rows * CELL
    weights = [w for row in inst.cells for w in row if w is not None]
    lo, hi = min(weights), max(weights)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{height}" viewBox="0 0 {width} {height}">'
    ]

    parts.append('<g id="grid">')
    for r in range(inst.rows):
        for c in range(inst.cols):
            w = inst.cells[r][c]
            fill = "#000000" if w is None else _shade(w, lo, hi)
            parts.append(
                f'<rect x="{c * CELL}" y="{r * CELL}" width="{CELL}" height="{CELL}" '
                f'fill="{fill}" stroke="#cccccc" stroke-width="0.5"/>'
            )
    parts.append("</g>")

    def center(vid: int) -> tuple[float, float]:
        v = g.vertex(vid)
        return (v.col + 0.5) * CELL, (v.row + 0.5) * CELL

    if reduction is not None:
        inferior = reduction.inferior[robot]
        residual = reduction.residuals[robot]
        parts.append(f'<g id="inferior" stroke="#000000" stroke-width="1.5">')
        arm = CELL * 0.22
        for vid in sorted(inferior.vertices):
            x, y = center(vid)
            parts.append(f'<line x1="{x - arm}" y1="{y - arm}" x2="{x + arm}" y2="{y + arm}"/>')
            parts.append(f'<line x1="{x - arm}" y1="{y + arm}" x2="{x + arm}" y2="{y - arm}"/>')
        parts.append("</g>")
        parts.append('<g id="residual" fill="#444444">')
        for vid in sorted(residual.vertex_id_set()):
            x, y = center(vid)
            parts.append(f'<circle cx="{x}" cy="{y}" r="{CELL * 0.1}"/>')
        parts.append("</g>")

    if solution is not None:
        parts.append('<g id="trees" stroke-width="2" fill="none">')
        for i, tree in enumerate(solution.trees):
            color = robot_color(i)
            for eid in tree.edges:
                e = g.edge(eid)
                x1, y1 = center(e.u)
                x2, y2 = center(e.v)
                parts.append(
                    f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{color}"/>'
                )
        parts.append("</g>")

    if plan is not None and d is not None:
        parts.append('<g id="paths" stroke-width="3" fill="none" stroke-opacity="0.75">')
        half = CELL / 2
        for i, path in enumerate(plan.paths):
            points = []
            for did in path + path[:1]:
                dv = d.vertex(did)
                points.append(f"{(dv.col + 0.5) * half:.1f},{(dv.row + 0.5) * half:.1f}")
            parts.append(
                f'<polyline points="{" ".join(points)}" stroke="{robot_color(i)}"/>'
            )
        parts.append("</g>")

    parts.append('<g id="roots">')
    for i, (rr, cc) in enumerate(inst.roots):
        x, y = (cc + 0.5) * CELL, (rr + 0.5) * CELL
        parts.append(
            f'<circle cx="{x}" cy="{y}" r="{CELL * 0.3}" fill="{robot_color(i)}" '
            f'stroke="#000000" stroke-width="1"/>'
        )
    parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
