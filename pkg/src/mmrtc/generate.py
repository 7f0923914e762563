"""Random instance generator: floor / maze / terrain styles.

Obstacle layouts are sampled and then trimmed to the largest connected free
component, so the target obstacle density is approximate; weights use three
decimal digits to match the instance-file precision.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .terrain import Instance

STYLE_DENSITY = {"floor": 0.12, "maze": 0.40, "terrain": 0.15}


def _largest_component(rows: int, cols: int, free: set[tuple[int, int]]) -> set[tuple[int, int]]:
    best: set[tuple[int, int]] = set()
    remaining = set(free)
    while remaining:
        start = min(remaining)
        comp = {start}
        stack = [start]
        while stack:
            r, c = stack.pop()
            for nb in ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)):
                if nb in remaining and nb not in comp:
                    comp.add(nb)
                    stack.append(nb)
        remaining -= comp
        if len(comp) > len(best):
            best = comp
    return best


def generate_instance(style: str, rows: int, cols: int, k: int, seed: int,
                      density: float | None = None) -> Instance:
    """Deterministic random instance; style picks density and weighting."""
    if style not in STYLE_DENSITY:
        raise ValueError(f"unknown style {style!r}; pick one of {sorted(STYLE_DENSITY)}")
    if density is None:
        density = STYLE_DENSITY[style]
    rng = random.Random(seed)
    cells = [(r, c) for r in range(rows) for c in range(cols)]
    n_obstacles = int(round(density * len(cells)))
    obstacles = set(rng.sample(cells, n_obstacles))
    free = _largest_component(rows, cols, set(cells) - obstacles)
    if len(free) < max(k, 2):
        raise ValueError(
            f"seed {seed} leaves only {len(free)} connected free cells for k={k}"
        )

    weighted = style == "terrain"
    grid: list[tuple[Fraction | None, ...]] = []
    for r in range(rows):
        row: list[Fraction | None] = []
        for c in range(cols):
            if (r, c) not in free:
                row.append(None)
            elif weighted:
                row.append(Fraction(rng.randint(1000, 4000), 1000))
            else:
                row.append(Fraction(1))
        grid.append(tuple(row))

    roots = tuple(rng.sample(sorted(free), k))
    return Instance(rows, cols, k, weighted, tuple(grid), roots)
