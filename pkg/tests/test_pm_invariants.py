"""Invariants of polarized metric graphs against hand-checked table rows,
the admissibility property, and internal cross-checks."""

import random
from fractions import Fraction

import pytest

from g2inv.errors import GenusZeroError
from g2inv.metric_graph import GraphMeasure, PMGraph, subdivide, vertex_point
from g2inv.pm_invariants import (
    admissibility_poly,
    admissible_measure,
    canonical_divisor,
    epsilon_invariant,
    is_bridge,
    lambda_invariant,
    node_counts,
    nonarch_report,
    phi_invariant,
    total_genus,
    _solve_for_measure,
)

from conftest import rand_frac, random_pm_graph


def point_graph():
    return PMGraph([("v", 2)])


def two_part(a):
    return PMGraph([("u", 1), ("w", 1)], [("e", "u", "w", a)])


def one_part_loop(a):
    return PMGraph([("v", 1)], [("e", "v", "v", a)])


def part_with_loop(a, b):
    return PMGraph([("u", 1), ("w", 0)], [("br", "u", "w", a), ("lp", "w", "w", b)])


def two_loops(a, b):
    return PMGraph([("v", 0)], [("la", "v", "v", a), ("lb", "v", "v", b)])


def dumbbell(a, b, c):
    return PMGraph(
        [("u", 0), ("w", 0)],
        [("br", "u", "w", a), ("lb", "u", "u", b), ("lc", "w", "w", c)],
    )


def banana(a, b, c):
    return PMGraph(
        [("u", 0), ("w", 0)],
        [("ea", "u", "w", a), ("eb", "u", "w", b), ("ec", "u", "w", c)],
    )


# -- genus and canonical divisor ---------------------------------------------


def test_total_genus():
    assert total_genus(point_graph()) == 2
    assert total_genus(banana(1, 1, 1)) == 2
    assert total_genus(one_part_loop(5)) == 2
    assert total_genus(two_loops(1, 2)) == 2
    assert total_genus(PMGraph([("v", 0)], [("e", "v", "v", 1)])) == 1


def test_canonical_divisor_degree(rng):
    g = point_graph()
    k = canonical_divisor(g)
    assert k.coefficient(vertex_point("v")) == 2
    t = banana(1, 2, 3)
    k = canonical_divisor(t)
    assert k.coefficient(vertex_point("u")) == 1
    assert k.coefficient(vertex_point("w")) == 1
    for _ in range(20):
        graph = random_pm_graph(rng)
        assert canonical_divisor(graph).degree == 2 * total_genus(graph) - 2


def test_node_counts():
    nc = node_counts(two_part(3))
    assert (nc.delta0, nc.delta1) == (0, 3)
    nc = node_counts(banana(1, 2, 3))
    assert (nc.delta0, nc.delta1) == (6, 0)
    nc = node_counts(point_graph())
    assert (nc.delta0, nc.delta1) == (0, 0)
    nc = node_counts(dumbbell(1, 2, 3))
    assert (nc.delta0, nc.delta1) == (5, 1)
    assert nc.delta == 6


def test_bridge_detection():
    g = dumbbell(1, 2, 3)
    assert is_bridge(g, "br")
    assert not is_bridge(g, "lb")
    t = banana(1, 1, 1)
    assert not any(is_bridge(t, e) for e in t.edge_ids)


# -- admissible measure -------------------------------------------------------


def test_admissible_measure_on_two_part():
    mu = admissible_measure(two_part(4))
    assert mu.vertex_masses == {"u": Fraction(1, 2), "w": Fraction(1, 2)}
    assert mu.edge_densities == {}


def test_admissible_measure_on_loop():
    a = Fraction(4)
    mu = admissible_measure(one_part_loop(a))
    assert mu.vertex_masses == {"v": Fraction(1, 2)}
    assert mu.edge_densities == {"e": 1 / (2 * a)}


def test_admissible_measure_on_banana():
    mu = admissible_measure(banana(1, 1, 1))
    assert mu.vertex_masses == {}
    assert mu.edge_densities == {
        "ea": Fraction(1, 3),
        "eb": Fraction(1, 3),
        "ec": Fraction(1, 3),
    }


def test_admissible_measure_requires_genus():
    with pytest.raises(GenusZeroError):
        admissible_measure(PMGraph([("v", 0)]))


def test_admissibility_property_random(rng):
    seen = 0
    while seen < 12:
        graph = random_pm_graph(rng)
        if total_genus(graph) < 1:
            continue
        mu = admissible_measure(graph)
        assert mu.is_probability(graph)
        h = admissibility_poly(graph, mu)
        assert h.constant_value() is not None
        seen += 1


def test_fallback_solver_agrees_with_candidate(rng):
    for graph in (
        two_part(3),
        one_part_loop(2),
        banana(1, 2, 3),
        dumbbell(Fraction(1, 2), 1, 2),
        part_with_loop(2, 5),
    ):
        direct = _solve_for_measure(graph)
        candidate = admissible_measure(graph)
        assert direct is not None
        for v in graph.vertex_ids:
            assert direct.mass(v) == candidate.mass(v)
        for e in graph.edge_ids:
            assert direct.density(e) == candidate.density(e)


# -- the seven table rows ------------------------------------------------------


def check_row(graph, delta0, delta1, r_kk, epsilon, phi):
    rep = nonarch_report(graph)
    assert rep.genus == 2
    assert rep.delta0 == delta0
    assert rep.delta1 == delta1
    assert rep.r_kk == r_kk
    assert rep.epsilon == epsilon
    assert rep.phi == phi
    assert 10 * rep.lambda_ == delta0 + 2 * delta1


def test_row_good_reduction():
    check_row(point_graph(), 0, 0, 0, 0, 0)


def test_row_two_parts():
    a = Fraction(3)
    check_row(two_part(a), 0, a, 2 * a, a, a)
    a = Fraction(7, 5)
    check_row(two_part(a), 0, a, 2 * a, a, a)


def test_row_one_part_loop():
    a = Fraction(2)
    check_row(one_part_loop(a), a, 0, 0, a / 6, a / 12)
    assert epsilon_invariant(one_part_loop(2)) == Fraction(1, 3)
    assert phi_invariant(one_part_loop(12)) == 1


def test_row_part_with_loop():
    a, b = Fraction(2), Fraction(3)
    check_row(part_with_loop(a, b), b, a, 2 * a, a + b / 6, a + b / 12)
    assert epsilon_invariant(part_with_loop(2, 3)) == Fraction(5, 2)
    assert phi_invariant(part_with_loop(2, 3)) == Fraction(9, 4)


def test_row_two_loops():
    a, b = Fraction(1), Fraction(1)
    check_row(two_loops(a, b), a + b, 0, 0, Fraction(1, 3), Fraction(1, 6))
    assert lambda_invariant(two_loops(1, 1)) == Fraction(1, 5)


def test_row_dumbbell():
    a, b, c = Fraction(1), Fraction(1), Fraction(1)
    check_row(
        dumbbell(a, b, c),
        b + c,
        a,
        2 * a,
        a + (b + c) / 6,
        a + (b + c) / 12,
    )
    assert phi_invariant(dumbbell(1, 1, 1)) == Fraction(7, 6)


def test_row_banana():
    a, b, c = Fraction(1), Fraction(1), Fraction(1)
    check_row(
        banana(a, b, c),
        3,
        0,
        Fraction(2, 3),
        Fraction(5, 9),
        Fraction(1, 9),
    )
    a, b, c = Fraction(1), Fraction(2), Fraction(3)
    s = a * b + b * c + c * a
    check_row(
        banana(a, b, c),
        a + b + c,
        0,
        2 * a * b * c / s,
        (a + b + c) / 6 + a * b * c / (6 * s),
        (a + b + c) / 12 - 5 * a * b * c / (12 * s),
    )
    assert lambda_invariant(banana(1, 1, 1)) == Fraction(3, 10)


def test_lambda_law_on_subdivided_variants(rng):
    for _ in range(6):
        base = [
            two_part(rand_frac(rng)),
            one_part_loop(rand_frac(rng)),
            banana(rand_frac(rng), rand_frac(rng), rand_frac(rng)),
            dumbbell(rand_frac(rng), rand_frac(rng), rand_frac(rng)),
        ][rng.randrange(4)]
        cuts = {
            e: [base.edge_length(e) * Fraction(rng.randint(1, 3), 4)]
            for e in base.edge_ids
            if rng.random() < 0.6
        }
        graph = subdivide(base, cuts).graph
        rep = nonarch_report(graph)
        base_rep = nonarch_report(base)
        assert 10 * rep.lambda_ == rep.delta0 + 2 * rep.delta1
        assert rep == base_rep


def test_scaling_covariance(rng):
    seen = 0
    while seen < 4:
        graph = random_pm_graph(rng, max_genus=1)
        if total_genus(graph) < 2:
            continue
        seen += 1
        s = rand_frac(rng)
        scaled = PMGraph(
            [(v, graph.genus(v)) for v in graph.vertex_ids],
            [
                (e, *graph.edge_ends(e), graph.edge_length(e) * s)
                for e in graph.edge_ids
            ],
        )
        rep = nonarch_report(graph)
        srep = nonarch_report(scaled)
        assert srep.delta0 == s * rep.delta0
        assert srep.delta1 == s * rep.delta1
        assert srep.r_kk == s * rep.r_kk
        assert srep.epsilon == s * rep.epsilon
        assert srep.phi == s * rep.phi
        assert srep.lambda_ == s * rep.lambda_


def test_invariants_need_genus_two():
    circle_genus1 = PMGraph([("v", 0)], [("e", "v", "v", 1)])
    with pytest.raises(ValueError):
        epsilon_invariant(circle_genus1)
    with pytest.raises(ValueError):
        phi_invariant(circle_genus1)
