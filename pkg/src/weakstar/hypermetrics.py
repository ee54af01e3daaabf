"""Hausdorff-type distances between generator-represented dual sets.

Three layers of structure, all exact:

* ``pseudometric_dH`` — for one test functional, the Hausdorff distance (in
  the extended reals) between the scalar images of two sets.  The whole family
  of these, one per functional, is the object of interest; +inf is a
  first-class value, arising exactly when one image escapes in a direction the
  other does not.
* ``metric_d`` — a single metric on a fixed bounded "normalizing" body,
  summing weighted image differences over an enumeration of functionals.  With
  the default coordinate enumeration the sum is finite and exact.
* ``hausdorff_full`` — the Hausdorff metric induced by ``metric_d`` on bounded
  polytopes inside the normalizing body, computed by per-vertex distance LPs
  (the farthest point of a polytope from a convex body is a vertex).

The module also produces separation witnesses (a functional telling two
distinct hulls apart), infinite-distance witnesses (a functional seeing a
recession-cone mismatch), and evaluates Boolean combinations of
cylinder-boundedness predicates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import inf
from typing import Optional, Union

from .errors import BadParameter, NotInNormalizingSet, UnboundedInput
from .geometry import (
    FinitePoints,
    Interval,
    PointSet,
    PolarSpec,
    Polyhedron,
    ScalarSet,
    membership,
    polar_contains,
    recession_rays,
    scalar_image,
)
from .numerics import BoundedOptimal, SparseVec, pair, solve_bounded

__all__ = [
    "MetricConfig",
    "CylinderSpec",
    "ClopenAtom",
    "ClopenNot",
    "ClopenAnd",
    "ClopenOr",
    "ClopenExpr",
    "pseudometric_dH",
    "metric_d",
    "point_body_distance",
    "hausdorff_full",
    "separating_direction",
    "immeasurable_witness",
    "cylinder_bounded",
    "clopen_eval",
]

SetLike = Union[PointSet, Polyhedron]
Distance = Union[Fraction, float]  # a rational or +inf


# ---------------------------------------------------------------------------
# Configuration of the compact-set metric.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MetricConfig:
    """Weighted enumeration of test functionals over a bounded normalizing body.

    The n-th functional (n >= 1) is the coordinate functional e_{n-1} by
    default; passing ``explicit_functionals`` replaces the enumeration by that
    finite list (a truncation of any user-chosen enumeration — the discarded
    tail of the metric sum is certified below 2^(1-N) on the normalizing set,
    since each term is at most 2^(1-n)).  The n-th weight is
    2^(-n) / (1 + normalizer(A_n)) where normalizer(A) is the largest absolute
    pairing of A against the normalizing body, so every term of the metric sum
    on that body is bounded by 2^(1-n).
    """

    normalizing_set: Union[PolarSpec, Polyhedron]
    explicit_functionals: Optional[tuple[SparseVec, ...]]

    def __init__(
        self,
        normalizing_set: Union[PolarSpec, Polyhedron, None] = None,
        explicit_functionals=None,
    ):
        body = PolarSpec(1) if normalizing_set is None else normalizing_set
        if isinstance(body, Polyhedron) and body.rays:
            raise BadParameter("the normalizing set must be bounded")
        prefix = None if explicit_functionals is None else tuple(explicit_functionals)
        if prefix is not None and not prefix:
            raise BadParameter("an explicit functional enumeration must be nonempty")
        object.__setattr__(self, "normalizing_set", body)
        object.__setattr__(self, "explicit_functionals", prefix)

    def functional(self, n: int) -> SparseVec:
        """The n-th test functional, n >= 1."""
        if n < 1:
            raise BadParameter("enumeration index starts at 1")
        if self.explicit_functionals is None:
            return SparseVec.basis(n - 1)
        if n > len(self.explicit_functionals):
            raise BadParameter(f"enumeration has only {len(self.explicit_functionals)} functionals")
        return self.explicit_functionals[n - 1]

    def normalizer(self, functional: SparseVec) -> Fraction:
        """max |pairing| of the functional against the normalizing body."""
        body = self.normalizing_set
        if isinstance(body, PolarSpec):
            return body.max_abs_pairing(functional)
        return max(abs(pair(functional, v)) for v in body.vertices)

    def weight(self, n: int) -> Fraction:
        return Fraction(1, 2**n) / (1 + self.normalizer(self.functional(n)))

    def contains(self, sigma: SparseVec) -> bool:
        body = self.normalizing_set
        if isinstance(body, PolarSpec):
            return polar_contains(sigma, body)
        return membership(sigma, body)

    def term_indices(self, *vectors: SparseVec) -> list[int]:
        """Enumeration indices that can contribute a nonzero metric term.

        For the coordinate enumeration only indices touching some support
        matter; an explicit enumeration is summed in full.
        """
        if self.explicit_functionals is not None:
            return list(range(1, len(self.explicit_functionals) + 1))
        coords: set[int] = set()
        for v in vectors:
            coords.update(v.support)
        return [k + 1 for k in sorted(coords)]

    def truncation_bound(self) -> Fraction:
        """Certified bound on the discarded metric tail, zero when the sum is exact."""
        if self.explicit_functionals is None:
            return Fraction(0)
        return Fraction(2) ** (1 - len(self.explicit_functionals))


# ---------------------------------------------------------------------------
# Hausdorff distance between scalar images.
# ---------------------------------------------------------------------------


def _point_to_interval(x: Fraction, lo, hi) -> Distance:
    below = (lo - x) if lo != -inf else Fraction(0)
    above = (x - hi) if hi != inf else Fraction(0)
    return max(below, above, Fraction(0))


def _excess_interval_over_interval(a, b, c, d) -> Distance:
    """sup over [a,b] of the distance to [c,d], with infinite-end conventions."""
    if c == -inf:
        low_gap: Distance = Fraction(0)
    elif a == -inf:
        low_gap = inf
    else:
        low_gap = c - a
    if d == inf:
        high_gap: Distance = Fraction(0)
    elif b == inf:
        high_gap = inf
    else:
        high_gap = b - d
    return max(low_gap, high_gap, Fraction(0))


def _excess_points_over_interval(xs, lo, hi) -> Distance:
    return max(_point_to_interval(x, lo, hi) for x in xs)


def _excess_interval_over_points(a, b, xs) -> Distance:
    if a == -inf or b == inf:
        return inf
    # The distance-to-finite-set function is piecewise linear with breakpoints
    # at midpoints of consecutive points; its max over [a,b] is attained at an
    # interval end or a breakpoint inside.
    candidates = [a, b]
    for left, right in zip(xs, xs[1:]):
        mid = (left + right) / 2
        candidates.append(min(max(mid, a), b))
    return max(min(abs(y - x) for x in xs) for y in candidates)


def _hausdorff_scalar(first: ScalarSet, second: ScalarSet) -> Distance:
    if isinstance(first, FinitePoints) and isinstance(second, FinitePoints):
        xs, ys = first.values, second.values
        one = max(min(abs(x - y) for y in ys) for x in xs)
        two = max(min(abs(x - y) for x in xs) for y in ys)
        return max(one, two)
    if isinstance(first, Interval) and isinstance(second, Interval):
        one = _excess_interval_over_interval(first.lower, first.upper, second.lower, second.upper)
        two = _excess_interval_over_interval(second.lower, second.upper, first.lower, first.upper)
        return max(one, two)
    if isinstance(first, FinitePoints):
        points, interval = first, second
    else:
        points, interval = second, first
    one = _excess_points_over_interval(points.values, interval.lower, interval.upper)
    two = _excess_interval_over_points(interval.lower, interval.upper, points.values)
    return max(one, two)


def pseudometric_dH(first: SetLike, second: SetLike, functional: SparseVec) -> Distance:
    """Hausdorff distance between the scalar images under one test functional."""
    return _hausdorff_scalar(scalar_image(first, functional), scalar_image(second, functional))


# ---------------------------------------------------------------------------
# The compact-set metric and its induced Hausdorff metric.
# ---------------------------------------------------------------------------


def metric_d(sigma: SparseVec, tau: SparseVec, cfg: MetricConfig = MetricConfig()) -> Fraction:
    """Weighted sum of image differences over the configured enumeration."""
    for point in (sigma, tau):
        if not cfg.contains(point):
            raise NotInNormalizingSet("both points must lie in the normalizing set")
    diff = sigma - tau
    total = Fraction(0)
    for n in cfg.term_indices(diff):
        total += cfg.weight(n) * abs(pair(cfg.functional(n), diff))
    return total


def point_body_distance(sigma: SparseVec, body: Polyhedron, cfg: MetricConfig = MetricConfig()) -> Fraction:
    """min over the polytope of metric_d to sigma, via the dual-ball LP.

    The metric is a weighted l1 norm of image differences, so the distance is
    the maximum of ``y . image(sigma) - support(y)`` over the dual box
    ``|y_n| <= weight_n``, a small LP with one row per vertex of the body.
    """
    if body.rays:
        raise UnboundedInput("distance target must be a polytope")
    if sigma in body.vertices:
        return Fraction(0)
    ns = cfg.term_indices(sigma, *body.vertices)
    weights = {n: cfg.weight(n) for n in ns}
    functionals = {n: cfg.functional(n) for n in ns}
    variables = [("y", n) for n in ns] + [("zp",), ("zm",)]
    lower = {("y", n): -weights[n] for n in ns}
    upper = {("y", n): weights[n] for n in ns}
    rows = []
    for q in body.vertices:
        coeffs = {("y", n): pair(functionals[n], q) for n in ns}
        coeffs[("zp",)] = Fraction(-1)
        coeffs[("zm",)] = Fraction(1)
        rows.append((coeffs, "<=", Fraction(0)))
    objective = {("y", n): pair(functionals[n], sigma) for n in ns}
    objective[("zp",)] = Fraction(-1)
    objective[("zm",)] = Fraction(1)
    out = solve_bounded(variables, objective, rows, lower=lower, upper=upper, sense="max")
    assert isinstance(out, BoundedOptimal)
    return out.value


def hausdorff_full(first: Polyhedron, second: Polyhedron, cfg: MetricConfig = MetricConfig()) -> Fraction:
    """The Hausdorff metric induced by metric_d on polytopes in the normalizing set."""
    if first.rays or second.rays:
        raise UnboundedInput("the full Hausdorff metric needs bounded inputs")
    for body in (first, second):
        for v in body.vertices:
            if not cfg.contains(v):
                raise NotInNormalizingSet("vertex outside the normalizing set")
    best = Fraction(0)
    for v in first.vertices:
        best = max(best, point_body_distance(v, second, cfg))
    for w in second.vertices:
        best = max(best, point_body_distance(w, first, cfg))
    return best


# ---------------------------------------------------------------------------
# Separation and infinite-distance witnesses.
# ---------------------------------------------------------------------------


def _separate_from_hull(target: SparseVec, hull: Polyhedron) -> SparseVec:
    """A functional with pairing margin > 0 between target and every hull vertex."""
    coords: set[int] = set(target.support)
    for q in hull.vertices:
        coords.update(q.support)
    ks = sorted(coords)
    variables = [("a", k) for k in ks] + [("gap",)]
    lower = {("a", k): Fraction(-1) for k in ks}
    upper = {("a", k): Fraction(1) for k in ks}
    rows = []
    for q in hull.vertices:
        coeffs = {("a", k): target.get(k) - q.get(k) for k in ks}
        coeffs[("gap",)] = Fraction(-1)
        rows.append((coeffs, ">=", Fraction(0)))
    out = solve_bounded(variables, {("gap",): Fraction(1)}, rows, lower=lower, upper=upper, sense="max")
    assert isinstance(out, BoundedOptimal) and out.value > 0, "separation LP must find a positive gap"
    return SparseVec({k: out.assignment[("a", k)] for k in ks})


def separating_direction(first: Polyhedron, second: Polyhedron) -> Optional[SparseVec]:
    """A functional whose image Hausdorff distance is positive, if hulls differ.

    Scans the vertices of the first body in listed order for one outside the
    second hull (then the roles swapped); equal hulls give None.
    """
    if first.rays or second.rays:
        raise UnboundedInput("separation witnesses are computed for bounded sets")
    for target, hull in ((first, second), (second, first)):
        for v in target.vertices:
            if not membership(v, hull):
                return _separate_from_hull(v, hull)
    return None


def immeasurable_witness(first: Polyhedron, second: Polyhedron) -> Optional[SparseVec]:
    """A functional seeing one recession cone escape where the other stays bounded.

    Exists exactly when the recession cones differ; equal cones make every
    image pair bounded/unbounded in the same directions, hence all image
    distances finite.
    """
    cone_first = recession_rays(first)
    cone_second = recession_rays(second)
    for rays, other_rays in ((cone_first, cone_second), (cone_second, cone_first)):
        other = Polyhedron([SparseVec.zero()], rays=other_rays)
        for r in rays:
            if membership(r, other):
                continue
            return _escape_direction(r, other_rays)
    return None


def _escape_direction(ray: SparseVec, blocked: list[SparseVec]) -> SparseVec:
    """A functional strictly positive on ray, nonpositive on every blocked ray."""
    coords: set[int] = set(ray.support)
    for s in blocked:
        coords.update(s.support)
    ks = sorted(coords)
    variables = [("a", k) for k in ks] + [("gap",)]
    lower = {("a", k): Fraction(-1) for k in ks}
    upper = {("a", k): Fraction(1) for k in ks}
    escape_row = {("a", k): ray.get(k) for k in ks}
    escape_row[("gap",)] = Fraction(-1)
    rows = [(escape_row, ">=", Fraction(0))]
    for s in blocked:
        rows.append(({("a", k): s.get(k) for k in ks}, "<=", Fraction(0)))
    out = solve_bounded(variables, {("gap",): Fraction(1)}, rows, lower=lower, upper=upper, sense="max")
    assert isinstance(out, BoundedOptimal) and out.value > 0, "escape LP must find a positive gap"
    return SparseVec({k: out.assignment[("a", k)] for k in ks})


# ---------------------------------------------------------------------------
# Cylinder boundedness and its clopen Boolean algebra.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CylinderSpec:
    """Finitely many primal functionals cutting out a cylinder; may be empty."""

    generators: tuple[SparseVec, ...]

    def __init__(self, generators=()):
        object.__setattr__(self, "generators", tuple(generators))


@dataclass(frozen=True)
class ClopenAtom:
    cylinder: CylinderSpec


@dataclass(frozen=True)
class ClopenNot:
    inner: "ClopenExpr"


@dataclass(frozen=True)
class ClopenAnd:
    items: tuple["ClopenExpr", ...]

    def __init__(self, *items):
        object.__setattr__(self, "items", tuple(items))


@dataclass(frozen=True)
class ClopenOr:
    items: tuple["ClopenExpr", ...]

    def __init__(self, *items):
        object.__setattr__(self, "items", tuple(items))


ClopenExpr = Union[ClopenAtom, ClopenNot, ClopenAnd, ClopenOr]


def cylinder_bounded(body: Polyhedron, cylinder: CylinderSpec) -> bool:
    """True when every recession ray is invisible to every cylinder generator."""
    return all(pair(a, r) == 0 for r in body.rays for a in cylinder.generators)


def clopen_eval(expr: ClopenExpr, body: Polyhedron) -> bool:
    if isinstance(expr, ClopenAtom):
        return cylinder_bounded(body, expr.cylinder)
    if isinstance(expr, ClopenNot):
        return not clopen_eval(expr.inner, body)
    if isinstance(expr, ClopenAnd):
        return all(clopen_eval(item, body) for item in expr.items)
    if isinstance(expr, ClopenOr):
        return any(clopen_eval(item, body) for item in expr.items)
    raise BadParameter(f"unknown clopen expression node {type(expr)!r}")
