"""Shared helpers for the test suite: seeded random graphs and measures."""

import random
from fractions import Fraction

import pytest

from g2inv.metric_graph import GraphMeasure, PMGraph


def rand_frac(rng: random.Random, max_num: int = 12, max_den: int = 8) -> Fraction:
    """A random positive rational with small numerator and denominator."""
    return Fraction(rng.randint(1, max_num), rng.randint(1, max_den))


def random_pm_graph(
    rng: random.Random,
    max_vertices: int = 5,
    extra_edges: int = 3,
    max_genus: int = 2,
) -> PMGraph:
    """A random connected metric graph: spanning tree plus extra edges.

    Extra edges may be loops or parallel edges, so all the multigraph
    code paths get exercised.
    """
    n = rng.randint(1, max_vertices)
    vertices = [(f"v{i}", rng.randint(0, max_genus)) for i in range(n)]
    edges = []
    for i in range(1, n):
        j = rng.randrange(i)
        edges.append((f"t{i}", f"v{j}", f"v{i}", rand_frac(rng)))
    extras = rng.randint(0 if edges else 1, extra_edges)
    for k in range(extras):
        u = rng.randrange(n)
        v = rng.randrange(n)
        edges.append((f"x{k}", f"v{u}", f"v{v}", rand_frac(rng)))
    return PMGraph(vertices, edges)


def random_probability_measure(rng: random.Random, graph: PMGraph) -> GraphMeasure:
    """A random probability measure with masses on some vertices and edges."""
    masses = {v: Fraction(rng.randint(0, 4)) for v in graph.vertex_ids}
    densities = {e: Fraction(rng.randint(0, 3)) for e in graph.edge_ids}
    raw = GraphMeasure(masses, densities)
    total = raw.total_mass(graph)
    if total == 0:
        v = graph.vertex_ids[0]
        raw = GraphMeasure({v: 1}, {})
        total = Fraction(1)
    return raw.scale(Fraction(1) / total)


@pytest.fixture
def rng():
    return random.Random(20260817)
