"""V-representation convex geometry on the dual side of the pair.

Sets of summable sequences are represented by finitely many generators: a
``PointSet`` is just finitely many points, a ``Polyhedron`` is the closed
convex hull of its vertices swept along its recession rays.  Every geometric
query (membership, redundancy, support values) reduces to a small exact LP on
the generators, so no facet/H-representation is ever computed.

``PolarSpec`` pins down the concrete model: test functionals live in the
finitely supported sup-norm space, dual points in l1, and the polar of the
radius-r sup-ball is the closed l1-ball of radius r.  Finite-dimensional
examples embed as vectors supported on the first few coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import inf
from typing import Iterable, Sequence, Union

from .errors import BadParameter, UnboundedInput
from .numerics import (
    BoundedOptimal,
    RationalLike,
    SparseVec,
    as_rational,
    l1_norm,
    pair,
    solve_bounded,
)

__all__ = [
    "PointSet",
    "Polyhedron",
    "PolarSpec",
    "ScalarSet",
    "FinitePoints",
    "Interval",
    "closed_convex_hull",
    "irredundant_vertices",
    "membership",
    "support_value",
    "scalar_image",
    "recession_rays",
    "path_combine",
    "polar_contains",
]


def _dedupe(points: Iterable[SparseVec]) -> tuple[SparseVec, ...]:
    seen: dict[SparseVec, None] = {}
    for p in points:
        seen.setdefault(p, None)
    return tuple(seen)


@dataclass(frozen=True)
class PointSet:
    """A finite nonempty set of dual points, order-preserving and deduplicated."""

    points: tuple[SparseVec, ...]

    def __init__(self, points: Iterable[SparseVec]):
        deduped = _dedupe(points)
        if not deduped:
            raise BadParameter("a point set must contain at least one point")
        object.__setattr__(self, "points", deduped)


@dataclass(frozen=True)
class Polyhedron:
    """Closed convex hull of ``vertices`` plus nonnegative combinations of ``rays``.

    The generator lists may be redundant; ``irredundant=True`` promises that no
    vertex lies in the hull of the remaining generators and no ray lies in the
    cone of the remaining rays.
    """

    vertices: tuple[SparseVec, ...]
    rays: tuple[SparseVec, ...] = ()
    irredundant: bool = False

    def __init__(self, vertices: Iterable[SparseVec], rays: Iterable[SparseVec] = (), irredundant: bool = False):
        vs = _dedupe(vertices)
        if not vs:
            raise BadParameter("a polyhedron must have at least one vertex")
        rs = tuple(rays)
        if any(not r for r in rs):
            raise BadParameter("recession rays must be nonzero")
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "rays", rs)
        object.__setattr__(self, "irredundant", irredundant)

    @property
    def bounded(self) -> bool:
        return not self.rays


@dataclass(frozen=True)
class PolarSpec:
    """The closed l1-ball of a given radius, i.e. the polar of the radius-r sup-ball."""

    radius: Fraction

    def __init__(self, radius: RationalLike = 1):
        r = as_rational(radius)
        if r <= 0:
            raise BadParameter("polar radius must be positive")
        object.__setattr__(self, "radius", r)

    def max_abs_pairing(self, functional: SparseVec) -> Fraction:
        """sup of |pairing| against this ball; attained at a scaled basis direction."""
        return self.radius * max((abs(v) for _, v in functional.items()), default=Fraction(0))


@dataclass(frozen=True)
class FinitePoints:
    """A finite strictly increasing list of scalars."""

    values: tuple[Fraction, ...]

    def __init__(self, values: Iterable[RationalLike]):
        vs = tuple(sorted({as_rational(v) for v in values}))
        if not vs:
            raise BadParameter("a finite scalar set must be nonempty")
        object.__setattr__(self, "values", vs)


@dataclass(frozen=True)
class Interval:
    """A closed scalar interval; either end may be infinite."""

    lower: Union[Fraction, float]
    upper: Union[Fraction, float]

    def __init__(self, lower, upper):
        def end(value):
            if isinstance(value, float):
                if value in (inf, -inf):
                    return value
                raise BadParameter("interval ends must be rational or infinite")
            return as_rational(value)

        lo, hi = end(lower), end(upper)
        if not lo <= hi:
            raise BadParameter(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)


ScalarSet = Union[FinitePoints, Interval]

SetLike = Union[PointSet, Polyhedron]


def _generators(body: SetLike) -> tuple[tuple[SparseVec, ...], tuple[SparseVec, ...]]:
    if isinstance(body, PointSet):
        return body.points, ()
    return body.vertices, body.rays


def _combination_feasible(
    target: SparseVec,
    points: Sequence[SparseVec],
    rays: Sequence[SparseVec],
    *,
    affine: bool,
) -> bool:
    """Is target = sum a_i p_i + sum b_j r_j with a, b >= 0 (and sum a = 1 if affine)?"""
    coords: set[int] = set(target.support)
    for g in points:
        coords.update(g.support)
    for g in rays:
        coords.update(g.support)
    variables = [("a", i) for i in range(len(points))] + [("b", j) for j in range(len(rays))]
    rows: list = []
    if affine:
        rows.append(({("a", i): Fraction(1) for i in range(len(points))}, "=", Fraction(1)))
    for k in sorted(coords):
        coeffs: dict = {}
        for i, g in enumerate(points):
            v = g.get(k)
            if v:
                coeffs[("a", i)] = v
        for j, g in enumerate(rays):
            v = g.get(k)
            if v:
                coeffs[("b", j)] = v
        rows.append((coeffs, "=", target.get(k)))
    out = solve_bounded(variables, {}, rows, sense="min")
    return isinstance(out, BoundedOptimal)


def membership(sigma: SparseVec, body: SetLike) -> bool:
    """Exact test of sigma lying in the closed convex hull of the generators."""
    points, rays = _generators(body)
    if isinstance(body, PointSet):
        return sigma in points
    return _combination_feasible(sigma, points, rays, affine=True)


def _prune_vertices(vertices: Sequence[SparseVec], rays: Sequence[SparseVec]) -> tuple[SparseVec, ...]:
    keep = list(vertices)
    i = 0
    while i < len(keep):
        rest = keep[:i] + keep[i + 1 :]
        if rest and _combination_feasible(keep[i], rest, rays, affine=True):
            del keep[i]
        else:
            i += 1
    return tuple(keep)


def _prune_rays(rays: Sequence[SparseVec]) -> tuple[SparseVec, ...]:
    # Collapse positively parallel duplicates first so mutual membership cannot
    # delete both members of a parallel pair.
    keep: list[SparseVec] = []
    directions: set[SparseVec] = set()
    for r in rays:
        unit = r.scale(Fraction(1) / l1_norm(r))
        if unit not in directions:
            directions.add(unit)
            keep.append(r)
    i = 0
    while i < len(keep):
        rest = keep[:i] + keep[i + 1 :]
        if rest and _combination_feasible(keep[i], [], rest, affine=False):
            del keep[i]
        else:
            i += 1
    return tuple(keep)


def closed_convex_hull(body: SetLike) -> Polyhedron:
    """The closed convex hull as an irredundant polyhedron."""
    points, rays = _generators(body)
    if isinstance(body, Polyhedron) and body.irredundant:
        return body
    clean_rays = _prune_rays(rays)
    clean_vertices = _prune_vertices(points, clean_rays)
    return Polyhedron(clean_vertices, clean_rays, irredundant=True)


def irredundant_vertices(body: SetLike) -> PointSet:
    """The extreme points of the hull of the generators."""
    return PointSet(closed_convex_hull(body).vertices)


def recession_rays(body: Polyhedron) -> list[SparseVec]:
    """An irredundant list of recession directions; empty exactly when bounded."""
    return list(_prune_rays(body.rays))


def support_value(body: Polyhedron, functional: SparseVec) -> Union[Fraction, float]:
    """max of the pairing over the polyhedron; +inf when a ray escapes upward."""
    for r in body.rays:
        if pair(functional, r) > 0:
            return inf
    return max(pair(functional, v) for v in body.vertices)


def scalar_image(body: SetLike, functional: SparseVec) -> ScalarSet:
    """The set of pairing values: finitely many for points, an interval for a hull."""
    if isinstance(body, PointSet):
        return FinitePoints(pair(functional, p) for p in body.points)
    hi = support_value(body, functional)
    lo_raw = support_value(body, -functional)
    lo = -inf if lo_raw == inf else -lo_raw
    return Interval(lo, hi)


def path_combine(lam: RationalLike, first: Polyhedron, second: Polyhedron) -> Polyhedron:
    """The pointwise blend {(1-t)p + t q}, a polytope on pairwise vertex blends."""
    t = as_rational(lam)
    if not 0 <= t <= 1:
        raise BadParameter(f"blend parameter must lie in [0, 1], got {t}")
    if first.rays or second.rays:
        raise UnboundedInput("pointwise blending is defined for bounded sets only")
    combos = [v.scale(1 - t) + w.scale(t) for v in first.vertices for w in second.vertices]
    return closed_convex_hull(PointSet(combos))


def polar_contains(sigma: SparseVec, ball: PolarSpec) -> bool:
    """Exact membership of the closed l1-ball of the given radius."""
    return l1_norm(sigma) <= ball.radius
