"""Exact potential theory on polarized metric graphs.

A polarized metric graph is a finite connected multigraph (loops allowed)
whose edges carry positive rational lengths and whose vertices carry
nonnegative integer weights.  Treating edge lengths as resistances turns
the graph into an electrical network; this module solves the associated
Laplace problems exactly over the rationals: Poisson equations, effective
resistance, the resistance pairing on divisors, Green's functions for
vertex-mass-plus-constant-density measures, and exact integration.

Conventions:

* Each edge is oriented by its endpoint pair (u, v); points on it are
  addressed by an offset t in [0, len(e)] measured from u.
* A function f that is quadratic on each edge has the distributional
  Laplacian

      Delta f = -f'' dx  -  sum_p (sum of outgoing slopes of f at p) delta_p.

  With this sign a solution of Delta f = delta_x - delta_y is the
  potential of a unit current flowing from x to y, and the effective
  resistance is r(x, y) = f(x) - f(y).
* Measures are vertex point masses plus a constant density per edge.
  This class is closed under everything done here, and for such measures
  the diagonal Green's function x -> g(x,x) is quadratic on every edge.
* Points in the interior of an edge are handled by one mechanism only:
  temporary subdivision of the edge at that point.  Solutions are
  returned on the subdivided graph (`PiecewisePoly.graph` says which);
  values at the original points are unchanged by subdivision.
"""

from __future__ import annotations

from fractions import Fraction
from dataclasses import dataclass
from typing import Any, Hashable, Iterable, Mapping

from .errors import (
    DisconnectedError,
    InterpolationMismatchError,
    NonProbabilityMeasureError,
    NonZeroMassError,
)
from .exact import (
    as_rational,
    is_exact_zero,
    sign_known_nonnegative,
    simplify_exact,
    solve_dense,
)

VertexId = Hashable
EdgeId = Hashable


def _require_positive(value: Any, what: str) -> None:
    nonneg = sign_known_nonnegative(value)
    if nonneg is False or (nonneg is True and is_exact_zero(value)):
        raise ValueError(f"{what} must be positive, got {value}")


class PMGraph:
    """A connected metric graph with integer genus weights on vertices.

    Immutable after construction.  `vertices` is an iterable of
    (id, genus) pairs and `edges` an iterable of (id, u, v, length)
    tuples; u == v gives a loop, which counts twice toward the degree
    of its vertex.  Lengths may be ints, Fractions, 'p/q' strings, or
    elements of a symbolic field.
    """

    def __init__(
        self,
        vertices: Iterable[tuple[VertexId, int]],
        edges: Iterable[tuple[EdgeId, VertexId, VertexId, Any]] = (),
    ):
        self._genus: dict[VertexId, int] = {}
        for vid, q in vertices:
            if vid in self._genus:
                raise ValueError(f"duplicate vertex id {vid!r}")
            if not isinstance(q, int) or q < 0:
                raise ValueError(f"vertex {vid!r}: genus must be a nonnegative int")
            self._genus[vid] = q
        if not self._genus:
            raise ValueError("a metric graph needs at least one vertex")

        self._edges: dict[EdgeId, tuple[VertexId, VertexId, Any]] = {}
        self._incident: dict[VertexId, list[tuple[EdgeId, int]]] = {
            v: [] for v in self._genus
        }
        for eid, u, v, length in edges:
            if eid in self._edges:
                raise ValueError(f"duplicate edge id {eid!r}")
            if u not in self._genus or v not in self._genus:
                raise ValueError(f"edge {eid!r} references an unknown vertex")
            length = as_rational(length)
            _require_positive(length, f"edge {eid!r} length")
            self._edges[eid] = (u, v, length)
            self._incident[u].append((eid, 0))
            self._incident[v].append((eid, 1))

        self._check_connected()

    def _check_connected(self) -> None:
        start = next(iter(self._genus))
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for eid, end in self._incident[v]:
                u, w, _ = self._edges[eid]
                other = w if end == 0 else u
                if other not in seen:
                    seen.add(other)
                    stack.append(other)
        if len(seen) != len(self._genus):
            raise DisconnectedError("the graph is not connected")

    # -- introspection ------------------------------------------------------

    @property
    def vertex_ids(self) -> tuple[VertexId, ...]:
        return tuple(self._genus)

    @property
    def edge_ids(self) -> tuple[EdgeId, ...]:
        return tuple(self._edges)

    def genus(self, v: VertexId) -> int:
        return self._genus[v]

    def edge_ends(self, e: EdgeId) -> tuple[VertexId, VertexId]:
        u, v, _ = self._edges[e]
        return u, v

    def edge_length(self, e: EdgeId):
        return self._edges[e][2]

    def incident(self, v: VertexId) -> tuple[tuple[EdgeId, int], ...]:
        """Edge-ends at v as (edge id, end) pairs; a loop appears twice."""
        return tuple(self._incident[v])

    def degree(self, v: VertexId) -> int:
        return len(self._incident[v])

    @property
    def num_vertices(self) -> int:
        return len(self._genus)

    @property
    def num_edges(self) -> int:
        return len(self._edges)

    @property
    def betti1(self) -> int:
        return self.num_edges - self.num_vertices + 1

    @property
    def total_length(self):
        total = Fraction(0)
        for _, _, length in self._edges.values():
            total = total + length
        return total

    # -- points -------------------------------------------------------------

    def vertex_point(self, v: VertexId) -> "GraphPoint":
        if v not in self._genus:
            raise ValueError(f"unknown vertex {v!r}")
        return GraphPoint(vertex=v, edge=None, offset=None)

    def point(self, e: EdgeId, offset: Any) -> "GraphPoint":
        """The point at `offset` from the first endpoint of edge `e`.

        Offsets 0 and len(e) canonicalize to the corresponding vertex, so
        each point of the graph has exactly one representation.
        """
        if e not in self._edges:
            raise ValueError(f"unknown edge {e!r}")
        u, v, length = self._edges[e]
        offset = as_rational(offset)
        if is_exact_zero(offset):
            return self.vertex_point(u)
        if is_exact_zero(offset - length):
            return self.vertex_point(v)
        if sign_known_nonnegative(offset) is False or (
            sign_known_nonnegative(length - offset) is False
        ):
            raise ValueError(f"offset {offset} outside [0, {length}] on edge {e!r}")
        return GraphPoint(vertex=None, edge=e, offset=offset)

    def validate_point(self, p: "GraphPoint") -> None:
        if p.vertex is not None:
            if p.vertex not in self._genus:
                raise ValueError(f"point refers to unknown vertex {p.vertex!r}")
        elif p.edge not in self._edges:
            raise ValueError(f"point refers to unknown edge {p.edge!r}")

    def __repr__(self) -> str:
        return f"PMGraph({self.num_vertices} vertices, {self.num_edges} edges)"


@dataclass(frozen=True)
class GraphPoint:
    """A point of a metric graph: a vertex, or an edge-interior position.

    Construct through `PMGraph.vertex_point` / `PMGraph.point`, which
    canonicalize endpoint offsets to vertices.
    """

    vertex: VertexId | None
    edge: EdgeId | None
    offset: Any

    @property
    def is_vertex(self) -> bool:
        return self.vertex is not None

    def __repr__(self) -> str:
        if self.is_vertex:
            return f"GraphPoint(vertex={self.vertex!r})"
        return f"GraphPoint(edge={self.edge!r}, offset={self.offset})"


def vertex_point(v: VertexId) -> GraphPoint:
    """A vertex as a graph point (no graph validation)."""
    return GraphPoint(vertex=v, edge=None, offset=None)


class GraphDivisor:
    """A finite formal sum of graph points with exact coefficients.

    Points must be canonical (built by `PMGraph.point` or `vertex_point`);
    duplicates are merged and zero coefficients dropped.
    """

    def __init__(self, items: Iterable[tuple[GraphPoint, Any]] = ()):
        acc: dict[GraphPoint, Any] = {}
        for pt, coeff in items:
            coeff = as_rational(coeff)
            if pt in acc:
                acc[pt] = acc[pt] + coeff
            else:
                acc[pt] = coeff
        self._coeffs = {
            pt: c for pt, c in acc.items() if not is_exact_zero(c)
        }

    @property
    def support(self) -> tuple[tuple[GraphPoint, Any], ...]:
        return tuple(self._coeffs.items())

    @property
    def degree(self):
        total = Fraction(0)
        for c in self._coeffs.values():
            total = total + c
        return total

    def coefficient(self, pt: GraphPoint):
        return self._coeffs.get(pt, Fraction(0))

    def scale(self, factor: Any) -> "GraphDivisor":
        factor = as_rational(factor)
        return GraphDivisor((pt, c * factor) for pt, c in self._coeffs.items())

    def __add__(self, other: "GraphDivisor") -> "GraphDivisor":
        return GraphDivisor(list(self._coeffs.items()) + list(other._coeffs.items()))

    def __neg__(self) -> "GraphDivisor":
        return self.scale(-1)

    def __len__(self) -> int:
        return len(self._coeffs)

    def __repr__(self) -> str:
        return f"GraphDivisor({dict(self._coeffs)!r})"


class GraphMeasure:
    """Vertex point masses plus a constant density per edge.

    Signed in general; `is_probability` checks for mass one with
    nonnegative parts.  Zero entries are dropped.
    """

    def __init__(
        self,
        vertex_mass: Mapping[VertexId, Any] | None = None,
        edge_density: Mapping[EdgeId, Any] | None = None,
    ):
        self._mass = {
            v: as_rational(m)
            for v, m in (vertex_mass or {}).items()
            if not is_exact_zero(as_rational(m))
        }
        self._density = {
            e: as_rational(d)
            for e, d in (edge_density or {}).items()
            if not is_exact_zero(as_rational(d))
        }

    @property
    def vertex_masses(self) -> dict[VertexId, Any]:
        return dict(self._mass)

    @property
    def edge_densities(self) -> dict[EdgeId, Any]:
        return dict(self._density)

    def mass(self, v: VertexId):
        return self._mass.get(v, Fraction(0))

    def density(self, e: EdgeId):
        return self._density.get(e, Fraction(0))

    def total_mass(self, graph: PMGraph):
        total = Fraction(0)
        for v, m in self._mass.items():
            if v not in graph.vertex_ids:
                raise ValueError(f"measure references unknown vertex {v!r}")
            total = total + m
        for e, d in self._density.items():
            total = total + d * graph.edge_length(e)
        return simplify_exact(total)

    def is_probability(self, graph: PMGraph) -> bool:
        if not is_exact_zero(self.total_mass(graph) - 1):
            return False
        parts = list(self._mass.values()) + list(self._density.values())
        return all(sign_known_nonnegative(p) is not False for p in parts)

    def scale(self, factor: Any) -> "GraphMeasure":
        factor = as_rational(factor)
        return GraphMeasure(
            {v: m * factor for v, m in self._mass.items()},
            {e: d * factor for e, d in self._density.items()},
        )

    def __neg__(self) -> "GraphMeasure":
        return self.scale(-1)

    def __add__(self, other: "GraphMeasure") -> "GraphMeasure":
        mass = dict(self._mass)
        for v, m in other._mass.items():
            mass[v] = mass.get(v, Fraction(0)) + m
        density = dict(self._density)
        for e, d in other._density.items():
            density[e] = density.get(e, Fraction(0)) + d
        return GraphMeasure(mass, density)

    def __repr__(self) -> str:
        return f"GraphMeasure(masses={self._mass!r}, densities={self._density!r})"


class PiecewisePoly:
    """A continuous function, quadratic on each edge of its graph.

    Stored as coefficients (c2, c1, c0) per edge, f(t) = c2 t^2 + c1 t + c0
    in the offset coordinate, plus the vertex values.  Construction checks
    that edge-end values agree with the vertex values.
    """

    def __init__(
        self,
        graph: PMGraph,
        edge_coeffs: Mapping[EdgeId, tuple[Any, Any, Any]],
        vertex_values: Mapping[VertexId, Any],
        *,
        check: bool = True,
    ):
        self.graph = graph
        self._coeffs = {
            e: tuple(as_rational(c) for c in edge_coeffs[e]) for e in graph.edge_ids
        }
        self._values = {v: as_rational(vertex_values[v]) for v in graph.vertex_ids}
        if check:
            self._check_continuity()

    def _check_continuity(self) -> None:
        for e in self.graph.edge_ids:
            u, v = self.graph.edge_ends(e)
            c2, c1, c0 = self._coeffs[e]
            length = self.graph.edge_length(e)
            if not is_exact_zero(c0 - self._values[u]):
                raise ValueError(f"edge {e!r}: value at offset 0 disagrees with vertex")
            end_val = c2 * length * length + c1 * length + c0
            if not is_exact_zero(end_val - self._values[v]):
                raise ValueError(
                    f"edge {e!r}: value at offset len disagrees with vertex"
                )

    def coefficients(self, e: EdgeId) -> tuple[Any, Any, Any]:
        return self._coeffs[e]

    def value_at_vertex(self, v: VertexId):
        return self._values[v]

    def __call__(self, point: GraphPoint):
        if point.is_vertex:
            return self._values[point.vertex]
        c2, c1, c0 = self._coeffs[point.edge]
        t = point.offset
        return simplify_exact(c2 * t * t + c1 * t + c0)

    def constant_value(self):
        """The constant this function equals everywhere, or None."""
        ref = next(iter(self._values.values()))
        for val in self._values.values():
            if not is_exact_zero(val - ref):
                return None
        for c2, c1, _ in self._coeffs.values():
            if not (is_exact_zero(c2) and is_exact_zero(c1)):
                return None
        return ref

    def _zip(self, other: "PiecewisePoly", op) -> "PiecewisePoly":
        if other.graph is not self.graph:
            raise ValueError("piecewise polynomials live on different graphs")
        coeffs = {
            e: tuple(op(a, b) for a, b in zip(self._coeffs[e], other._coeffs[e]))
            for e in self.graph.edge_ids
        }
        values = {
            v: op(self._values[v], other._values[v]) for v in self.graph.vertex_ids
        }
        return PiecewisePoly(self.graph, coeffs, values, check=False)

    def __add__(self, other: "PiecewisePoly") -> "PiecewisePoly":
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other: "PiecewisePoly") -> "PiecewisePoly":
        return self._zip(other, lambda a, b: a - b)

    def scale(self, factor: Any) -> "PiecewisePoly":
        factor = as_rational(factor)
        coeffs = {
            e: tuple(c * factor for c in self._coeffs[e]) for e in self.graph.edge_ids
        }
        values = {v: self._values[v] * factor for v in self.graph.vertex_ids}
        return PiecewisePoly(self.graph, coeffs, values, check=False)

    def add_constant(self, const: Any) -> "PiecewisePoly":
        const = as_rational(const)
        coeffs = {
            e: (c2, c1, c0 + const) for e, (c2, c1, c0) in self._coeffs.items()
        }
        values = {v: val + const for v, val in self._values.items()}
        return PiecewisePoly(self.graph, coeffs, values, check=False)

    def __repr__(self) -> str:
        return f"PiecewisePoly(on {self.graph!r})"


def zero_poly(graph: PMGraph) -> PiecewisePoly:
    return PiecewisePoly(
        graph,
        {e: (Fraction(0), Fraction(0), Fraction(0)) for e in graph.edge_ids},
        {v: Fraction(0) for v in graph.vertex_ids},
        check=False,
    )


# -- subdivision ------------------------------------------------------------


class SubdivisionMap:
    """Result of subdividing edges at interior points.

    Provides the subdivided graph together with translations of points,
    divisors and measures from the parent graph.  Subdivision vertices get
    genus 0, so the total genus and first Betti number are unchanged.
    """

    def __init__(self, parent: PMGraph, cuts: Mapping[EdgeId, Iterable[Any]]):
        self.parent = parent
        self._cuts: dict[EdgeId, list[Any]] = {}
        for e, offsets in cuts.items():
            length = parent.edge_length(e)
            cleaned: list[Any] = []
            for t in offsets:
                t = as_rational(t)
                if is_exact_zero(t) or is_exact_zero(t - length):
                    continue  # endpoint cut is a no-op
                if any(is_exact_zero(t - s) for s in cleaned):
                    continue
                cleaned.append(t)
            if not cleaned:
                continue
            try:
                cleaned.sort()
            except TypeError:
                if len(cleaned) > 1:
                    raise ValueError(
                        "multiple symbolic cut offsets on one edge cannot be ordered"
                    )
            self._cuts[e] = cleaned

        vertices = [(v, parent.genus(v)) for v in parent.vertex_ids]
        edges = []
        self._cut_vertex: dict[tuple[EdgeId, int], VertexId] = {}
        self._segments: dict[EdgeId, list[tuple[EdgeId, Any, Any]]] = {}
        for e in parent.edge_ids:
            u, v, length = *parent.edge_ends(e), parent.edge_length(e)
            if e not in self._cuts:
                edges.append((e, u, v, length))
                continue
            offsets = self._cuts[e]
            nodes = [u]
            for i, t in enumerate(offsets):
                w = ("cut", e, i)
                self._cut_vertex[(e, i)] = w
                vertices.append((w, 0))
                nodes.append(w)
            nodes.append(v)
            bounds = [Fraction(0)] + offsets + [length]
            segs = []
            for i in range(len(nodes) - 1):
                seg_id = ("seg", e, i)
                seg_len = simplify_exact(bounds[i + 1] - bounds[i])
                edges.append((seg_id, nodes[i], nodes[i + 1], seg_len))
                segs.append((seg_id, bounds[i], bounds[i + 1]))
            self._segments[e] = segs
        self.graph = PMGraph(vertices, edges)

    def cut_point(self, e: EdgeId, t: Any) -> GraphPoint:
        """The subdivision vertex created at offset t of parent edge e."""
        t = as_rational(t)
        for i, s in enumerate(self._cuts.get(e, [])):
            if is_exact_zero(t - s):
                return self.graph.vertex_point(self._cut_vertex[(e, i)])
        raise ValueError(f"no cut at offset {t} on edge {e!r}")

    def map_point(self, p: GraphPoint) -> GraphPoint:
        if p.is_vertex:
            return self.graph.vertex_point(p.vertex)
        e, t = p.edge, p.offset
        if e not in self._cuts:
            return self.graph.point(e, t)
        for i, s in enumerate(self._cuts[e]):
            if is_exact_zero(t - s):
                return self.graph.vertex_point(self._cut_vertex[(e, i)])
        for seg_id, lo, hi in self._segments[e]:
            below = sign_known_nonnegative(t - lo)
            above = sign_known_nonnegative(hi - t)
            if below and above:
                return self.graph.point(seg_id, simplify_exact(t - lo))
        raise ValueError(f"cannot locate offset {t} on subdivided edge {e!r}")

    def map_divisor(self, d: GraphDivisor) -> GraphDivisor:
        return GraphDivisor((self.map_point(pt), c) for pt, c in d.support)

    def map_measure(self, m: GraphMeasure) -> GraphMeasure:
        density: dict[EdgeId, Any] = {}
        for e, rho in m.edge_densities.items():
            if e in self._segments:
                for seg_id, _, _ in self._segments[e]:
                    density[seg_id] = rho  # densities are per unit length
            else:
                density[e] = rho
        return GraphMeasure(m.vertex_masses, density)


def subdivide(graph: PMGraph, cuts: Mapping[EdgeId, Iterable[Any]]) -> SubdivisionMap:
    """Subdivide edges of a graph at interior offsets."""
    return SubdivisionMap(graph, cuts)


def _subdivide_at_points(
    graph: PMGraph, points: Iterable[GraphPoint]
) -> tuple[SubdivisionMap | None, list[GraphPoint]]:
    """Subdivide so that every listed point becomes a vertex.

    Returns (map or None, points translated to the working graph); None
    means no subdivision was necessary.
    """
    cuts: dict[EdgeId, list[Any]] = {}
    pts = list(points)
    if all(p.is_vertex for p in pts):
        return None, pts
    for p in pts:
        if not p.is_vertex:
            cuts.setdefault(p.edge, []).append(p.offset)
    smap = SubdivisionMap(graph, cuts)
    return smap, [smap.map_point(p) for p in pts]


# -- core solves ------------------------------------------------------------


def _combined_source(
    graph: PMGraph, divisor: GraphDivisor | None, measure: GraphMeasure | None
) -> tuple[dict[VertexId, Any], dict[EdgeId, Any]]:
    """Vertex point masses and edge densities of divisor + measure.

    The divisor part must be vertex supported (callers subdivide first).
    """
    point_mass: dict[VertexId, Any] = {v: Fraction(0) for v in graph.vertex_ids}
    density: dict[EdgeId, Any] = {e: Fraction(0) for e in graph.edge_ids}
    if divisor is not None:
        for pt, coeff in divisor.support:
            graph.validate_point(pt)
            if not pt.is_vertex:
                raise ValueError("divisor must be vertex-supported at this stage")
            point_mass[pt.vertex] = point_mass[pt.vertex] + coeff
    if measure is not None:
        for v, m in measure.vertex_masses.items():
            point_mass[v] = point_mass[v] + m
        for e, d in measure.edge_densities.items():
            density[e] = density[e] + d
    return point_mass, density


def _solve_vertex_potentials(
    graph: PMGraph,
    point_mass: Mapping[VertexId, Any],
    density: Mapping[EdgeId, Any],
    base: VertexId,
) -> dict[VertexId, Any]:
    """Solve the weighted-Laplacian system L f = b with f(base) = 0.

    b(p) collects the point mass at p plus half of each incident edge's
    density mass (a loop contributes its full density mass).
    """
    order = [v for v in graph.vertex_ids if v != base]
    index = {v: i for i, v in enumerate(order)}
    n = len(order)
    if n == 0:
        return {base: Fraction(0)}

    matrix = [[Fraction(0)] * n for _ in range(n)]
    rhs = [Fraction(0)] * n
    for v in order:
        i = index[v]
        b = point_mass[v]
        for eid, end in graph.incident(v):
            u, w, length = *graph.edge_ends(eid), graph.edge_length(eid)
            other = w if end == 0 else u
            b = b + density[eid] * length / 2
            if other == v:
                continue  # loop: no off-diagonal term
            matrix[i][i] = matrix[i][i] + 1 / length
            if other != base:
                j = index[other]
                matrix[i][j] = matrix[i][j] - 1 / length
        rhs[i] = simplify_exact(b)
        matrix[i] = [simplify_exact(x) for x in matrix[i]]

    try:
        sol = solve_dense(matrix, rhs)
    except ValueError as exc:  # pragma: no cover - cannot happen when connected
        raise AssertionError(
            "reduced Laplacian of a connected graph is nonsingular"
        ) from exc
    potentials = {base: Fraction(0)}
    for v, val in zip(order, sol):
        potentials[v] = val
    return potentials


def _poly_from_potentials(
    graph: PMGraph,
    potentials: Mapping[VertexId, Any],
    density: Mapping[EdgeId, Any],
) -> PiecewisePoly:
    coeffs = {}
    for e in graph.edge_ids:
        u, v = graph.edge_ends(e)
        length = graph.edge_length(e)
        c2 = -density[e] / 2
        c0 = potentials[u]
        c1 = simplify_exact((potentials[v] - potentials[u]) / length - c2 * length)
        coeffs[e] = (simplify_exact(c2), c1, c0)
    return PiecewisePoly(graph, coeffs, dict(potentials), check=False)


def solve_poisson(
    graph: PMGraph,
    divisor: GraphDivisor | None,
    measure: GraphMeasure | None,
    base: VertexId,
) -> PiecewisePoly:
    """Solve Delta f = divisor + measure with f(base) = 0.

    The source must have total mass exactly zero.  If the divisor touches
    edge interiors the problem is solved on the subdivided graph and the
    result lives there (see `PiecewisePoly.graph`).
    """
    if base not in graph.vertex_ids:
        raise ValueError(f"base vertex {base!r} not in graph")
    total = divisor.degree if divisor is not None else Fraction(0)
    if measure is not None:
        total = total + measure.total_mass(graph)
    if not is_exact_zero(total):
        raise NonZeroMassError(f"source has total mass {total}, expected 0")

    if divisor is not None and any(not pt.is_vertex for pt, _ in divisor.support):
        smap, _ = _subdivide_at_points(graph, [pt for pt, _ in divisor.support])
        graph = smap.graph
        divisor = smap.map_divisor(divisor)
        measure = smap.map_measure(measure) if measure is not None else None

    point_mass, density = _combined_source(graph, divisor, measure)
    potentials = _solve_vertex_potentials(graph, point_mass, density, base)
    return _poly_from_potentials(graph, potentials, density)


def poly_laplacian(f: PiecewisePoly) -> tuple[GraphDivisor, GraphMeasure]:
    """The distributional Laplacian of f, split into points and densities.

    Inverse of `solve_poisson` up to the base-point normalization: it
    returns (divisor of vertex masses, measure holding -f'' per edge).
    """
    graph = f.graph
    density = {}
    slope_sum: dict[VertexId, Any] = {v: Fraction(0) for v in graph.vertex_ids}
    for e in graph.edge_ids:
        c2, c1, _ = f.coefficients(e)
        u, v = graph.edge_ends(e)
        length = graph.edge_length(e)
        density[e] = simplify_exact(-2 * c2)
        slope_sum[u] = slope_sum[u] + c1
        slope_sum[v] = slope_sum[v] - (2 * c2 * length + c1)
    points = GraphDivisor(
        (vertex_point(v), simplify_exact(-s)) for v, s in slope_sum.items()
    )
    return points, GraphMeasure({}, density)


def effective_resistance(graph: PMGraph, x: GraphPoint, y: GraphPoint):
    """Effective resistance between two points, edge lengths as resistances."""
    graph.validate_point(x)
    graph.validate_point(y)
    if x == y:
        return Fraction(0)
    smap, (px, py) = _subdivide_at_points(graph, [x, y])
    work = smap.graph if smap is not None else graph
    f = solve_poisson(
        work,
        GraphDivisor([(px, 1), (py, -1)]),
        None,
        base=py.vertex,
    )
    r = f(px)
    if sign_known_nonnegative(r) is False:  # pragma: no cover - sanity guard
        raise AssertionError("negative effective resistance")
    return r


def resistance_pairing(graph: PMGraph, d: GraphDivisor, e: GraphDivisor):
    """The resistance function extended bilinearly to pairs of divisors."""
    cache: dict[frozenset, Any] = {}
    total = Fraction(0)
    for px, cx in d.support:
        for py, cy in e.support:
            if px == py:
                continue
            key = frozenset((px, py))
            if key not in cache:
                cache[key] = effective_resistance(graph, px, py)
            total = total + cx * cy * cache[key]
    return simplify_exact(total)


def _green_raw(
    graph: PMGraph, mu: GraphMeasure, y: GraphPoint
) -> tuple[PiecewisePoly, GraphPoint, GraphMeasure]:
    """Green's function machinery shared by the public entry points.

    Returns (g, y', mu') where g lives on the (possibly subdivided) graph,
    y' is y there, and mu' is the measure there.  g solves
    Delta g = delta_y - mu and is normalized by integral(g dmu) = 0.
    """
    mass = mu.total_mass(graph)
    if not is_exact_zero(mass - 1):
        raise NonProbabilityMeasureError(f"measure has mass {mass}, expected 1")
    graph.validate_point(y)
    smap, (py,) = _subdivide_at_points(graph, [y])
    work = smap.graph if smap is not None else graph
    wmu = smap.map_measure(mu) if smap is not None else mu
    f = solve_poisson(work, GraphDivisor([(py, 1)]), -wmu, base=py.vertex)
    shift = integrate(work, f, measure=wmu)
    return f.add_constant(simplify_exact(-shift)), py, wmu


def green_function(graph: PMGraph, mu: GraphMeasure, y: GraphPoint) -> PiecewisePoly:
    """The Green's function g(., y) of a probability measure.

    Solves Delta g = delta_y - mu, normalized by integral(g dmu) = 0.  If y
    lies in the interior of an edge the result is returned on the graph
    subdivided at y.
    """
    g, _, _ = _green_raw(graph, mu, y)
    return g


def diagonal_green(graph: PMGraph, mu: GraphMeasure) -> PiecewisePoly:
    """The diagonal x -> g(x, x) of the Green's function, per-edge quadratic.

    Computed by evaluating at three offsets per edge and interpolating; a
    fourth point plus both endpoints must match exactly, else
    InterpolationMismatchError is raised.
    """
    mass = mu.total_mass(graph)
    if not is_exact_zero(mass - 1):
        raise NonProbabilityMeasureError(f"measure has mass {mass}, expected 1")

    def g_at(point: GraphPoint):
        g, py, _ = _green_raw(graph, mu, point)
        return g(py)

    values = {v: g_at(graph.vertex_point(v)) for v in graph.vertex_ids}
    coeffs = {}
    for e in graph.edge_ids:
        length = graph.edge_length(e)
        samples = [length / 4, length / 2, 3 * length / 4]
        sample_vals = [g_at(graph.point(e, t)) for t in samples]
        c2, c1, c0 = _interpolate_quadratic(samples, sample_vals)
        check_t = length / 3
        predicted = c2 * check_t * check_t + c1 * check_t + c0
        if not is_exact_zero(predicted - g_at(graph.point(e, check_t))):
            raise InterpolationMismatchError(
                f"diagonal of the Green's function is not quadratic on edge {e!r}"
            )
        u, v = graph.edge_ends(e)
        end_val = c2 * length * length + c1 * length + c0
        if not (
            is_exact_zero(c0 - values[u]) and is_exact_zero(end_val - values[v])
        ):
            raise InterpolationMismatchError(
                f"diagonal interpolation on edge {e!r} disagrees at an endpoint"
            )
        coeffs[e] = (c2, c1, c0)
    return PiecewisePoly(graph, coeffs, values, check=False)


def _interpolate_quadratic(ts: list, vals: list) -> tuple[Any, Any, Any]:
    matrix = [[t * t, t, Fraction(1)] for t in ts]
    c2, c1, c0 = solve_dense(matrix, vals)
    return c2, c1, c0


def integrate(
    graph: PMGraph,
    f: PiecewisePoly,
    divisor: GraphDivisor | None = None,
    measure: GraphMeasure | None = None,
):
    """Integrate f against a point-plus-density source, exactly."""
    if f.graph is not graph:
        raise ValueError("function does not live on this graph")
    total = Fraction(0)
    if divisor is not None:
        for pt, coeff in divisor.support:
            graph.validate_point(pt)
            total = total + coeff * f(pt)
    if measure is not None:
        for v, m in measure.vertex_masses.items():
            total = total + m * f.value_at_vertex(v)
        for e, rho in measure.edge_densities.items():
            c2, c1, c0 = f.coefficients(e)
            length = graph.edge_length(e)
            antiderivative = (
                c2 * length * length * length / 3
                + c1 * length * length / 2
                + c0 * length
            )
            total = total + rho * antiderivative
    return simplify_exact(total)
