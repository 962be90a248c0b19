import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dyadcol.criteria import (
    HOM1,
    HOM2,
    PREVIS,
    Violation,
    check_homogeneous,
    check_previsible,
    colour_modulo_d,
)
from dyadcol.errors import PreconditionError
from dyadcol.intervals import (
    Colouring,
    DyadicInterval,
    HomogeneityParams,
    IntervalSet,
)

from conftest import cu_pairs, etas, total_colourings
from naive import naive_check_homogeneous, naive_check_previsible

HALF = Fraction(1, 2)


def colouring_of(j, d, pairs):
    members = IntervalSet.from_indices(j, [idx for idx, _ in pairs])
    return Colouring(members, d, {
        DyadicInterval(j, idx): colour for idx, colour in pairs
    })


class TestCheckHomogeneous:
    def test_empty_collection_passes(self):
        col = Colouring(IntervalSet.empty(3), 2, {})
        ok, violation = check_homogeneous(col, HomogeneityParams(HALF, 2))
        assert ok and violation is None

    def test_small_node_repeat_colour_fails(self):
        # two members of the same colour inside a node holding at most d members
        col = colouring_of(3, 3, [(0, 1), (1, 1)])
        ok, violation = check_homogeneous(col, HomogeneityParams(HALF, 3))
        assert not ok
        assert violation.kind == HOM1
        # the scan runs from the root down, so the widest offender is named
        assert violation.testing_interval == DyadicInterval(0, 0)
        assert violation.detail["colour"] == 1
        assert violation.detail["count"] == 2

    def test_hom1_localised_when_root_is_clean(self):
        # root sees 4 members (beyond d = 3) balanced enough; the repeat
        # hides inside one quarter
        col = colouring_of(3, 3, [(0, 1), (1, 1), (4, 2), (6, 3)])
        ok, violation = check_homogeneous(col, HomogeneityParams(Fraction(1, 3), 3))
        assert not ok
        assert violation.kind == HOM1
        assert violation.testing_interval == DyadicInterval(1, 0)

    def test_unbalanced_large_node_fails(self):
        # root holds 4 members with d = 2: counts (3, 1) break eta = 1/2
        col = colouring_of(3, 2, [(0, 1), (2, 1), (5, 1), (7, 2)])
        ok, violation = check_homogeneous(col, HomogeneityParams(HALF, 2))
        assert not ok
        assert violation.kind == HOM2
        assert violation.testing_interval == DyadicInterval(0, 0)
        assert violation.detail["max"] == 3
        assert violation.detail["min"] == 1
        assert violation.detail["argmax_colour"] == 1
        assert violation.detail["argmin_colour"] == 2

    def test_equality_boundary_passes(self):
        # root counts (2, 1) with eta = 1/2: 1 * 2 <= 2 * 1 exactly
        col = colouring_of(3, 2, [(0, 1), (3, 2), (5, 1)])
        ok, _ = check_homogeneous(col, HomogeneityParams(HALF, 2))
        assert ok

    def test_weaker_ratio_can_pass_where_target_fails(self):
        col = colouring_of(4, 2, [(0, 1), (3, 2), (7, 1), (12, 1)])
        assert not check_homogeneous(col, HomogeneityParams(Fraction(1, 2), 2))[0]
        assert check_homogeneous(col, HomogeneityParams(Fraction(1, 3), 2))[0]

    def test_partial_colouring_rejected(self):
        members = IntervalSet.from_indices(2, [0, 1])
        col = Colouring(members, 2, {DyadicInterval(2, 0): 1})
        with pytest.raises(PreconditionError):
            check_homogeneous(col, HomogeneityParams(HALF, 2))

    def test_d_mismatch_rejected(self):
        col = colouring_of(2, 2, [(0, 1)])
        with pytest.raises(PreconditionError):
            check_homogeneous(col, HomogeneityParams(HALF, 3))

    @given(total_colourings(max_j=5, max_d=4), etas())
    @settings(max_examples=150)
    def test_matches_naive(self, colouring, eta):
        params = HomogeneityParams(eta, colouring.d)
        ok, violation = check_homogeneous(colouring, params)
        assert ok == naive_check_homogeneous(colouring, params)
        if not ok:
            assert violation is not None
            assert violation.kind in (HOM1, HOM2)

    @given(total_colourings(max_j=4, max_d=3))
    @settings(max_examples=60)
    def test_colour_permutation_invariance(self, colouring):
        params = HomogeneityParams(HALF, colouring.d)
        d = colouring.d
        perm = list(range(1, d + 1))
        random.Random(0).shuffle(perm)
        permuted = Colouring(colouring.base, d, {
            m: perm[c - 1] for m, c in colouring.assignment.items()
        })
        assert check_homogeneous(colouring, params)[0] == \
            check_homogeneous(permuted, params)[0]

    @given(total_colourings(max_j=4, max_d=3))
    @settings(max_examples=60)
    def test_monotone_in_eta(self, colouring):
        # passing at some ratio implies passing at every weaker one
        strong = HomogeneityParams(Fraction(1, 2), colouring.d)
        weak = HomogeneityParams(Fraction(1, 7), colouring.d)
        if check_homogeneous(colouring, strong)[0]:
            assert check_homogeneous(colouring, weak)[0]

    @given(total_colourings(max_j=4, max_d=3))
    @settings(max_examples=60)
    def test_mirror_invariance(self, colouring):
        j = colouring.base.level
        top = (1 << j) - 1
        mirrored = Colouring(
            IntervalSet.from_indices(j, [top - m.index for m in colouring.base]),
            colouring.d,
            {
                DyadicInterval(j, top - m.index): c
                for m, c in colouring.assignment.items()
            },
        )
        params = HomogeneityParams(HALF, colouring.d)
        assert check_homogeneous(colouring, params)[0] == \
            check_homogeneous(mirrored, params)[0]


class TestCheckPrevisible:
    def test_empty_fresh_set_is_previsible(self):
        c = IntervalSet.from_indices(3, [0, 5])
        ok, violation = check_previsible(c, IntervalSet.empty(3), 2)
        assert ok and violation is None

    def test_full_complement_always_previsible(self):
        rng = random.Random(11)
        for _ in range(40):
            j = rng.randrange(0, 7)
            d = rng.randrange(1, 5)
            c = IntervalSet.from_indices(
                j, rng.sample(range(1 << j), rng.randrange(0, (1 << j) + 1))
            )
            u = IntervalSet.full(j).difference(c)
            assert check_previsible(c, u, d)[0]

    def test_chain_placement_is_not_previsible(self):
        # two coloured leaves far apart, fresh leaf landing inside the crowded half
        c = IntervalSet.from_indices(4, [0, 8])
        u = IntervalSet.from_indices(4, [4])
        ok, violation = check_previsible(c, u, 2)
        assert not ok
        assert violation.kind == PREVIS
        assert violation.testing_interval == DyadicInterval(0, 0)
        assert violation.detail["heavy_child"] == {"level": 1, "index": 0}
        assert violation.detail["h_light"] == 1
        assert violation.detail["h_heavy"] == 2
        assert violation.detail["c_heavy"] == 1
        assert violation.detail["u_heavy"] == 1

    def test_both_orientations_checked(self):
        # mirror image of the chain placement must fail the same way
        c = IntervalSet.from_indices(4, [15, 7])
        u = IntervalSet.from_indices(4, [11])
        ok, violation = check_previsible(c, u, 2)
        assert not ok
        assert violation.detail["heavy_child"] == {"level": 1, "index": 1}

    def test_disjointness_required(self):
        c = IntervalSet.from_indices(3, [0, 1])
        u = IntervalSet.from_indices(3, [1])
        with pytest.raises(PreconditionError):
            check_previsible(c, u, 2)

    def test_level_mismatch_rejected(self):
        with pytest.raises(PreconditionError):
            check_previsible(IntervalSet.empty(3), IntervalSet.empty(4), 2)

    @given(cu_pairs(max_j=5), st.integers(min_value=1, max_value=4))
    @settings(max_examples=150)
    def test_matches_naive(self, pair, d):
        c, u = pair
        ok, violation = check_previsible(c, u, d)
        assert ok == naive_check_previsible(c, u, d)
        if not ok:
            assert violation.kind == PREVIS

    @given(cu_pairs(max_j=4), st.integers(min_value=1, max_value=3))
    @settings(max_examples=60)
    def test_mirror_invariance(self, pair, d):
        c, u = pair
        j = c.level
        top = (1 << j) - 1
        mc = IntervalSet.from_indices(j, [top - m.index for m in c])
        mu = IntervalSet.from_indices(j, [top - m.index for m in u])
        assert check_previsible(c, u, d)[0] == check_previsible(mc, mu, d)[0]


class TestColourModuloD:
    def test_left_to_right_cycle(self):
        s = IntervalSet.from_indices(3, [1, 2, 5, 6, 7])
        col = colour_modulo_d(s, 3)
        assert [col.colour_of(m) for m in s] == [1, 2, 3, 1, 2]

    def test_custom_order(self):
        s = IntervalSet.from_indices(3, [0, 3, 4])
        col = colour_modulo_d(s, 3, colour_order=(2, 3, 1))
        assert [col.colour_of(m) for m in s] == [2, 3, 1]

    def test_order_must_be_permutation(self):
        s = IntervalSet.from_indices(2, [0])
        with pytest.raises(PreconditionError):
            colour_modulo_d(s, 3, colour_order=(1, 2))
        with pytest.raises(PreconditionError):
            colour_modulo_d(s, 3, colour_order=(1, 2, 2))

    def test_empty_collection(self):
        col = colour_modulo_d(IntervalSet.empty(4), 2)
        assert col.is_total
        assert len(col.base) == 0

    @given(st.data())
    @settings(max_examples=100)
    def test_always_homogeneous_at_half(self, data):
        j = data.draw(st.integers(min_value=0, max_value=6))
        d = data.draw(st.integers(min_value=1, max_value=5))
        idxs = data.draw(st.sets(st.integers(min_value=0, max_value=(1 << j) - 1)))
        s = IntervalSet.from_indices(j, idxs)
        col = colour_modulo_d(s, d)
        ok, violation = check_homogeneous(col, HomogeneityParams(HALF, d))
        assert ok, violation

    @given(st.data())
    @settings(max_examples=60)
    def test_contiguous_runs_balance_within_one(self, data):
        # under any testing interval the members form a contiguous run of the
        # enumeration, so cyclic colours differ by at most one per bucket
        j = data.draw(st.integers(min_value=1, max_value=5))
        d = data.draw(st.integers(min_value=1, max_value=4))
        idxs = data.draw(st.sets(st.integers(min_value=0, max_value=(1 << j) - 1)))
        s = IntervalSet.from_indices(j, idxs)
        col = colour_modulo_d(s, d)
        level = data.draw(st.integers(min_value=0, max_value=j))
        index = data.draw(st.integers(min_value=0, max_value=(1 << level) - 1))
        node = DyadicInterval(level, index)
        counts = [0] * d
        for m in s.under(node):
            counts[col.colour_of(m) - 1] += 1
        assert max(counts) - min(counts) <= 1


class TestViolation:
    def test_kind_validated(self):
        with pytest.raises(PreconditionError):
            Violation("nonsense", DyadicInterval(0, 0), {})

    def test_equality(self):
        a = Violation(HOM1, DyadicInterval(1, 0), {"colour": 1, "count": 2})
        b = Violation(HOM1, DyadicInterval(1, 0), {"colour": 1, "count": 2})
        c = Violation(HOM1, DyadicInterval(1, 1), {"colour": 1, "count": 2})
        assert a == b
        assert a != c
