import random
from pathlib import Path

import pytest

from mmrtc.generate import generate_instance
from mmrtc.terrain import build_graph, parse_instance, root_ids

FIXTURES = Path(__file__).parent / "fixtures"


def load_fixture(name):
    return parse_instance((FIXTURES / name).read_text())


def graph_and_roots(inst):
    g = build_graph(inst)
    return g, root_ids(inst, g)


def parse(text):
    return parse_instance(text)


@pytest.fixture
def floor_small():
    return load_fixture("floor_small.mmrtc")


@pytest.fixture
def maze_small():
    return load_fixture("maze_small.mmrtc")


@pytest.fixture
def terrain_small():
    return load_fixture("terrain_small.mmrtc")


def unit_path(n, roots=((0, 0),)):
    """1 x n corridor of unit weights."""
    grid = " ".join(["1"] * n)
    root_lines = "\n".join(f"{r} {c}" for r, c in roots)
    return parse_instance(f"mmrtc 1\n1 {n} {len(roots)} 0\n{grid}\n{root_lines}\n")


def unit_square(n, roots=((0, 0),)):
    """n x n all-free grid of unit weights."""
    rows = "\n".join(" ".join(["1"] * n) for _ in range(n))
    root_lines = "\n".join(f"{r} {c}" for r, c in roots)
    return parse_instance(f"mmrtc 1\n{n} {n} {len(roots)} 0\n{rows}\n{root_lines}\n")


def random_small_instance(rng: random.Random, max_vertices=12, ks=(2, 3), weighted=False):
    """Connected instance with |V| <= max_vertices and k roots, oracle-sized."""
    while True:
        rows = rng.randint(2, 3)
        cols = rng.randint(2, max_vertices // rows)
        style = "terrain" if weighted else "floor"
        k = rng.choice(ks)
        try:
            inst = generate_instance(style, rows, cols, k, seed=rng.randrange(1 << 30),
                                     density=rng.choice((0.0, 0.1, 0.2)))
        except ValueError:
            continue
        g = build_graph(inst)
        if g.num_vertices <= max_vertices and g.num_vertices >= k + 1:
            return inst
