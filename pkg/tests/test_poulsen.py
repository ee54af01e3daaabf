"""Tests for the certified densification run, its scheduler, and verification."""

import dataclasses
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weakstar.errors import (
    BadParameter,
    TargetOutsidePolar,
    UnboundedInput,
    VariantPreconditionViolated,
)
from weakstar.faces import certificate_is_valid
from weakstar.geometry import PolarSpec, Polyhedron, membership
from weakstar.hypermetrics import MetricConfig, hausdorff_full
from weakstar.numerics import SparseVec, l1_norm, pair
from weakstar.poulsen import (
    PoulsenTrace,
    Variant,
    construct,
    jordan_decompose,
    scheduler_next,
    scheduler_register,
    scheduler_start,
    verify_trace,
)

F = Fraction


def vec(entries):
    return SparseVec({k: F(v) for k, v in entries.items()})


SQUARE = [
    vec({0: F(1, 4), 1: F(1, 4)}),
    vec({0: F(-1, 4), 1: F(1, 4)}),
    vec({0: F(-1, 4), 1: F(-1, 4)}),
    vec({0: F(1, 4), 1: F(-1, 4)}),
]
POLAR = PolarSpec(1)


class TestVariant:
    def test_wire_names(self):
        assert Variant.PLAIN.value == "plain"
        assert Variant.POSITIVE.value == "positive"
        assert Variant.STATE_SPACE.value == "state"


class TestScheduler:
    def test_first_served_is_first_vertex(self):
        state = scheduler_start(SQUARE)
        served, _ = scheduler_next(state)
        assert served == SQUARE[0]

    def test_initial_round_serves_vertices_in_order(self):
        state = scheduler_start(SQUARE)
        served = []
        for _ in range(4):
            point, state = scheduler_next(state)
            served.append(point)
        assert served == SQUARE

    def test_each_element_recurs_within_three_rounds(self):
        state = scheduler_start(SQUARE)
        pool = len(state.queue)
        counts = {v: 0 for v in SQUARE}
        for _ in range(3 * pool):
            point, state = scheduler_next(state)
            if point in counts:
                counts[point] += 1
        assert all(n >= 2 for n in counts.values())

    def test_deterministic_sequences(self):
        a = scheduler_start(SQUARE)
        b = scheduler_start(SQUARE)
        for _ in range(10):
            pa, a = scheduler_next(a)
            pb, b = scheduler_next(b)
            assert pa == pb
        assert a == b

    def test_blends_eventually_served(self):
        state = scheduler_start(SQUARE)
        served = []
        for _ in range(6):
            point, state = scheduler_next(state)
            served.append(point)
        assert served[4] == SQUARE[0]
        midpoint = (SQUARE[0] + SQUARE[1]).scale(F(1, 2))
        assert served[5] == midpoint

    def test_candidates_stay_inside_the_hull(self):
        hull = Polyhedron(SQUARE)
        state = scheduler_start(SQUARE)
        for _ in range(12):
            point, state = scheduler_next(state)
            assert membership(point, hull)

    def test_singleton_pool_never_invents_points(self):
        origin = SparseVec.zero()
        state = scheduler_start([origin])
        for _ in range(6):
            point, state = scheduler_next(state)
            assert point == origin
        assert state.queue == (origin,)

    def test_registered_stage_feeds_new_blends(self):
        origin = SparseVec.zero()
        spike = SparseVec.basis(0, F(1, 2))
        state = scheduler_start([origin])
        state = scheduler_register(state, [origin, spike])
        served = set()
        for _ in range(8):
            point, state = scheduler_next(state)
            served.add(point)
        assert spike in served or any(p.get(0) > 0 for p in served)

    def test_empty_pool_rejected(self):
        with pytest.raises(BadParameter):
            scheduler_start([])
        state = scheduler_start(SQUARE)
        with pytest.raises(BadParameter):
            scheduler_register(state, [])


class TestConstructSchedule:
    def test_blend_and_scale_schedule(self):
        target = Polyhedron([SparseVec.zero()])
        _, trace = construct(target, POLAR, F(1, 2), 3)
        blends = [s.blend for s in trace.steps]
        scales = [s.spike_scale for s in trace.steps]
        assert blends == [F(1, 8), F(1, 16), F(1, 32)]
        assert scales == [F(1), F(1, 16), F(1, 32)]

    def test_blend_capped_at_one(self):
        target = Polyhedron([SparseVec.zero()])
        _, trace = construct(target, POLAR, F(16), 2)
        assert trace.steps[0].blend == 1
        assert trace.steps[1].blend == 1
        assert trace.steps[1].spike_scale == F(1, 2)

    def test_single_step_from_origin(self):
        target = Polyhedron([SparseVec.zero()])
        result, trace = construct(target, POLAR, F(1, 2), 1)
        step = trace.steps[0]
        assert step.new_vertex == SparseVec.basis(0, F(1, 8))
        assert step.functional == SparseVec.basis(0)
        assert pair(step.functional, step.new_vertex) == F(1, 8)
        assert step.certificate.margin == F(1, 8)
        assert set(result.vertices) == {SparseVec.zero(), step.new_vertex}

    def test_state_space_single_step(self):
        target = Polyhedron([SparseVec.basis(0)])
        _, trace = construct(target, POLAR, F(1, 2), 1, Variant.STATE_SPACE)
        omega = trace.steps[0].new_vertex
        assert omega == SparseVec({0: F(7, 8), 1: F(1, 8)})
        assert sum(v for _, v in omega.items()) == 1

    def test_fresh_coordinates_avoid_target_support(self):
        target = Polyhedron([vec({0: F(1, 4), 5: F(1, 4)})])
        _, trace = construct(target, POLAR, F(1, 2), 3)
        assert [s.fresh_coordinate for s in trace.steps] == [6, 7, 8]

    def test_zero_steps_returns_the_hull(self):
        target = Polyhedron(SQUARE + [SparseVec.zero()])
        result, trace = construct(target, POLAR, F(1, 2), 0)
        assert set(result.vertices) == set(SQUARE)
        assert trace.steps == ()

    def test_deterministic(self):
        target = Polyhedron(SQUARE)
        first = construct(target, POLAR, F(1, 4), 4)
        second = construct(target, POLAR, F(1, 4), 4)
        assert first == second


class TestConstructGuards:
    def test_epsilon_must_be_positive(self):
        with pytest.raises(BadParameter):
            construct(Polyhedron([SparseVec.zero()]), POLAR, F(0), 1)

    def test_steps_must_be_nonnegative(self):
        with pytest.raises(BadParameter):
            construct(Polyhedron([SparseVec.zero()]), POLAR, F(1, 2), -1)

    def test_unbounded_target_rejected(self):
        body = Polyhedron([SparseVec.zero()], rays=[SparseVec.basis(0)])
        with pytest.raises(UnboundedInput):
            construct(body, POLAR, F(1, 2), 1)

    def test_target_outside_ball_rejected(self):
        body = Polyhedron([SparseVec.basis(0, F(3))])
        with pytest.raises(TargetOutsidePolar):
            construct(body, POLAR, F(1, 2), 1)

    def test_positive_variant_rejects_negative_coordinates(self):
        body = Polyhedron([SparseVec.basis(0, F(-1, 2))])
        with pytest.raises(VariantPreconditionViolated):
            construct(body, POLAR, F(1, 2), 1, Variant.POSITIVE)

    def test_state_variant_rejects_unnormalized_vertices(self):
        body = Polyhedron([SparseVec.basis(0, F(1, 2))])
        with pytest.raises(VariantPreconditionViolated):
            construct(body, POLAR, F(1, 2), 1, Variant.STATE_SPACE)


class TestConstructInvariants:
    def test_distance_stays_within_budget(self):
        target = Polyhedron(SQUARE)
        cfg = MetricConfig(normalizing_set=POLAR)
        for eps in (F(1, 2), F(1, 4)):
            result, _ = construct(target, POLAR, eps, 6)
            distance = hausdorff_full(target, result, cfg)
            assert distance <= eps <= 2 * eps

    def test_intermediate_distances_nonincreasing(self):
        target = Polyhedron([SparseVec.zero()])
        result, trace = construct(target, POLAR, F(1, 2), 4)
        cfg = MetricConfig(normalizing_set=POLAR)
        base = list(target.vertices)
        table = []
        for n in range(len(trace.steps) + 1):
            stage = Polyhedron(base + [s.new_vertex for s in trace.steps[:n]])
            table.append(hausdorff_full(stage, result, cfg))
        assert table == sorted(table, reverse=True)
        assert table[-1] == 0

    def test_cross_pairings_strictly_below_margins(self):
        target = Polyhedron(SQUARE)
        _, trace = construct(target, POLAR, F(1, 2), 5)
        for j, early in enumerate(trace.steps):
            assert pair(early.functional, early.new_vertex) == early.blend
            for late in trace.steps[j + 1 :]:
                assert pair(early.functional, late.new_vertex) < early.blend

    def test_certificates_valid_for_their_stage_hulls(self):
        target = Polyhedron(SQUARE)
        _, trace = construct(target, POLAR, F(1, 2), 3)
        base = list(target.vertices)
        for n, step in enumerate(trace.steps, start=1):
            stage = Polyhedron(base + [s.new_vertex for s in trace.steps[:n]])
            assert certificate_is_valid(step.certificate, stage)

    def test_all_vertices_stay_inside_the_ball(self):
        target = Polyhedron(SQUARE)
        for variant in (Variant.PLAIN, Variant.POSITIVE):
            body = target
            if variant is Variant.POSITIVE:
                body = Polyhedron([vec({0: F(1, 4)}), vec({1: F(1, 2)})])
            result, _ = construct(body, POLAR, F(1, 2), 5, variant)
            for v in result.vertices:
                assert l1_norm(v) <= POLAR.radius

    def test_positive_variant_stays_in_the_cone(self):
        body = Polyhedron([vec({0: F(1, 4)}), vec({1: F(1, 2)})])
        result, _ = construct(body, POLAR, F(1, 2), 5, Variant.POSITIVE)
        for v in result.vertices:
            assert all(value >= 0 for _, value in v.items())

    def test_state_variant_stays_on_the_simplex(self):
        body = Polyhedron([SparseVec.basis(0), SparseVec.basis(1)])
        result, _ = construct(body, POLAR, F(1, 2), 5, Variant.STATE_SPACE)
        for v in result.vertices:
            assert all(value >= 0 for _, value in v.items())
            assert sum(value for _, value in v.items()) == 1

    def test_result_contains_target(self):
        target = Polyhedron(SQUARE)
        result, _ = construct(target, POLAR, F(1, 2), 4)
        for v in target.vertices:
            assert membership(v, result)


class TestVerifyTrace:
    def run(self, variant=Variant.PLAIN, steps=3):
        if variant is Variant.STATE_SPACE:
            target = Polyhedron([SparseVec.basis(0), SparseVec.basis(1)])
        elif variant is Variant.POSITIVE:
            target = Polyhedron([vec({0: F(1, 4)}), vec({1: F(1, 2)})])
        else:
            target = Polyhedron(SQUARE)
        result, trace = construct(target, POLAR, F(1, 2), steps, variant)
        return target, result, trace

    @pytest.mark.parametrize("variant", [Variant.PLAIN, Variant.POSITIVE, Variant.STATE_SPACE])
    def test_clean_runs_pass_everything(self, variant):
        target, result, trace = self.run(variant)
        report = verify_trace(target, POLAR, result, trace)
        assert report.passed
        assert report.failures() == []
        names = [c.name for c in report.checks]
        assert len(names) == len(set(names))
        assert all(c.detail for c in report.checks)

    def test_perturbed_blend_weight_caught(self):
        target, result, trace = self.run()
        step = trace.steps[1]
        crooked = dataclasses.replace(step, blend=step.blend + F(1, 1000))
        steps = trace.steps[:1] + (crooked,) + trace.steps[2:]
        tampered = dataclasses.replace(trace, steps=steps)
        report = verify_trace(target, POLAR, result, tampered)
        assert not report.passed
        failed = {c.name for c in report.failures()}
        assert "schedule_blend_weights" in failed
        passed = {c.name for c in report.checks if c.passed}
        assert "distance_within_double_budget" in passed

    def test_designated_vertex_replaced_by_barycenter_caught(self):
        target, result, trace = self.run()
        victim = trace.steps[-1].new_vertex
        others = [v for v in result.vertices if v != victim]
        barycenter = SparseVec.zero()
        for v in others:
            barycenter = barycenter + v.scale(F(1, len(others)))
        swapped = Polyhedron(others + [barycenter])
        report = verify_trace(target, POLAR, swapped, trace)
        assert not report.passed
        assert "designated_exposed" in {c.name for c in report.failures()}

    def test_vertex_outside_ball_caught(self):
        target, result, trace = self.run()
        inflated = Polyhedron(list(result.vertices) + [SparseVec.basis(9, F(2))])
        report = verify_trace(target, POLAR, inflated, trace)
        assert "vertices_in_ball" in {c.name for c in report.failures()}

    def test_result_missing_target_vertex_caught(self):
        target, result, trace = self.run()
        shrunk = Polyhedron([s.new_vertex for s in trace.steps])
        report = verify_trace(target, POLAR, shrunk, trace)
        assert "result_extends_target" in {c.name for c in report.failures()}


class TestJordanDecompose:
    def test_mixed_signs(self):
        pos, neg = jordan_decompose(vec({0: 3, 1: -2}))
        assert pos == vec({0: 3})
        assert neg == vec({1: 2})

    def test_nonnegative_input(self):
        sigma = vec({0: F(1, 2), 3: F(2, 3)})
        assert jordan_decompose(sigma) == (sigma, SparseVec.zero())

    def test_zero(self):
        assert jordan_decompose(SparseVec.zero()) == (SparseVec.zero(), SparseVec.zero())

    @settings(max_examples=100, deadline=None)
    @given(
        st.dictionaries(
            st.integers(0, 9),
            st.fractions(min_value=-5, max_value=5, max_denominator=12).filter(bool),
            max_size=6,
        )
    )
    def test_roundtrip_disjoint_and_additive(self, entries):
        sigma = SparseVec(entries)
        pos, neg = jordan_decompose(sigma)
        assert pos - neg == sigma
        assert not set(pos.support) & set(neg.support)
        assert all(v > 0 for _, v in pos.items())
        assert all(v > 0 for _, v in neg.items())
        assert l1_norm(pos) + l1_norm(neg) == l1_norm(sigma)
        if sigma.support:
            ball = PolarSpec(l1_norm(sigma))
            from weakstar.geometry import polar_contains

            assert polar_contains(pos, ball) and polar_contains(neg, ball)
