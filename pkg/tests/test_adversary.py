import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dyadcol.adversary import (
    ChainSpec,
    build_counterexample,
    game_script,
    previsibility_profile,
    random_chain_spec,
    verify_counterexample,
)
from dyadcol.criteria import check_homogeneous
from dyadcol.errors import PreconditionError
from dyadcol.intervals import DyadicInterval, HomogeneityParams


class TestChainSpec:
    def test_defaults(self):
        spec = ChainSpec(a=1, n=2, j=4)
        assert spec.d == 2
        assert spec.eta == Fraction(1, 2)
        assert spec.i_slots == (0,)
        assert spec.j_slots == (0, 0, 0)
        assert spec.side_choices == (0, 0, 0)

    def test_validation(self):
        with pytest.raises(PreconditionError):
            ChainSpec(a=0, n=2, j=4)
        with pytest.raises(PreconditionError):
            ChainSpec(a=1, n=1, j=4)
        with pytest.raises(PreconditionError):
            ChainSpec(a=1, n=2, j=3)  # needs j >= n + a + 1
        with pytest.raises(PreconditionError):
            ChainSpec(a=1, n=2, j=4, anchor=8)  # anchor beyond level j - a
        with pytest.raises(PreconditionError):
            ChainSpec(a=1, n=2, j=4, i_slots=(2,))  # slot outside the block
        with pytest.raises(PreconditionError):
            ChainSpec(a=2, n=2, j=5, i_slots=(0, 0, 1))  # repeated slot
        with pytest.raises(PreconditionError):
            ChainSpec(a=1, n=2, j=4, j_slots=(0, 0))  # wrong count

    @given(st.data())
    @settings(max_examples=50)
    def test_from_sides_round_trips(self, data):
        a = data.draw(st.integers(min_value=1, max_value=2))
        n = data.draw(st.integers(min_value=2, max_value=4))
        j = n + a + 1
        sides = tuple(data.draw(st.integers(0, 1)) for _ in range(n + 1))
        spec = ChainSpec.from_sides(a, n, j, sides)
        assert spec.side_choices == sides

    @given(st.integers(min_value=0, max_value=10_000))
    @settings(max_examples=50)
    def test_random_specs_build(self, seed):
        rng = random.Random(seed)
        a = rng.choice([1, 2])
        n = rng.choice([2, 3])
        j = n + a + 1 + rng.randrange(0, 2)
        spec = random_chain_spec(a, n, j, rng)
        family = build_counterexample(spec)
        assert len(family.chain) == n + 2
        assert len(family.brothers) == n + 1
        assert len(family.i_marks) == spec.d - 1
        assert len(family.j_marks) == n + 1


class TestFamilyGeometry:
    def test_reference_placement(self):
        family = build_counterexample(ChainSpec(a=1, n=2, j=4))
        assert [(i.level, i.index) for i in family.chain] == [
            (3, 0), (2, 0), (1, 0), (0, 0)]
        assert [(i.level, i.index) for i in family.brothers] == [
            (3, 1), (2, 1), (1, 1)]
        assert [(i.level, i.index) for i in family.i_marks] == [(4, 0)]
        assert [(i.level, i.index) for i in family.j_marks] == [
            (4, 2), (4, 4), (4, 8)]

    def test_nesting_and_disjointness(self):
        rng = random.Random(9)
        for _ in range(10):
            spec = random_chain_spec(2, 3, 7, rng)
            family = build_counterexample(spec)
            for inner, outer in zip(family.chain, family.chain[1:]):
                assert outer.contains(inner)
                assert inner.parent() == outer
            for brother, link in zip(family.brothers, family.chain):
                assert brother.sibling() == link
            for mark in family.i_marks:
                assert family.chain[0].contains(mark)
            for i, mark in enumerate(family.j_marks):
                assert family.brothers[i].contains(mark)

    def test_stage_sets_grow_one_leaf_at_a_time(self):
        family = build_counterexample(ChainSpec(a=1, n=3, j=5))
        n = 3
        for k in range(1, n + 1):
            prev, cur = family.stage(k - 1), family.stage(k)
            assert len(cur) == len(prev) + 1
            fresh = cur.difference(prev)
            assert list(fresh) == [family.added(k)]

    def test_stage_bounds(self):
        family = build_counterexample(ChainSpec(a=1, n=2, j=4))
        with pytest.raises(PreconditionError):
            family.stage(3)
        with pytest.raises(PreconditionError):
            family.added(0)


class TestVerification:
    def test_reference_family_report(self):
        family = build_counterexample(ChainSpec(a=1, n=2, j=4))
        report = verify_counterexample(family)
        assert report.stage0_homogeneous
        assert report.counts_formula_ok
        assert report.boundary_table.counts == (3, 1)
        assert report.boundary_weaker_eta_passes
        assert report.boundary_target_eta_fails
        assert report.profile == (False, False)
        assert report.stage0_canonical_count == 1
        assert report.stage_counts == (1,)
        assert report.stage_witnesses_forced
        assert report.final_count == 0
        assert report.ok

    def test_oracle_free_report(self):
        family = build_counterexample(ChainSpec(a=1, n=3, j=5))
        report = verify_counterexample(family, use_oracle=False)
        assert report.stage0_canonical_count is None
        assert report.stage_counts is None
        assert report.final_count is None
        assert report.ok

    def test_profile_all_false(self):
        rng = random.Random(21)
        for _ in range(6):
            spec = random_chain_spec(1, 3, 6, rng)
            family = build_counterexample(spec)
            assert not any(previsibility_profile(family))

    def test_forced_colouring_fails_only_at_the_last_stage(self):
        family = build_counterexample(ChainSpec(a=1, n=2, j=4))
        params = family.params
        for k in range(2):
            ok, _ = check_homogeneous(family.stage_colouring(k), params)
            assert ok
        ok, violation = check_homogeneous(family.stage_colouring(2), params)
        assert not ok
        assert violation.testing_interval == DyadicInterval(0, 0)

    def test_weaker_ratio_admits_the_final_stage(self):
        family = build_counterexample(ChainSpec(a=1, n=2, j=4))
        weaker = HomogeneityParams(Fraction(1, 3), family.d)
        ok, _ = check_homogeneous(family.stage_colouring(2), weaker)
        assert ok


class TestGameScript:
    def test_script_shape(self):
        family = build_counterexample(ChainSpec(a=2, n=2, j=5))
        script = game_script(family)
        assert len(script) == 3
        assert len(script[0]) == family.d  # d - 1 fixed marks plus the first J
        assert all(len(batch) == 1 for batch in script[1:])

    def test_script_batches_partition_the_family(self):
        family = build_counterexample(ChainSpec(a=1, n=3, j=5))
        script = game_script(family)
        seen = script[0]
        for batch in script[1:]:
            assert seen.is_disjoint_from(batch)
            seen = seen.union(batch)
        assert seen == family.stage(3)
