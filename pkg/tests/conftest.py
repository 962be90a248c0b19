import random
from fractions import Fraction
from typing import Optional, Tuple

from hypothesis import strategies as st

from dyadcol.criteria import check_previsible, colour_modulo_d
from dyadcol.intervals import Colouring, DyadicInterval, HomogeneityParams, IntervalSet


def random_subset(rng: random.Random, j: int, size: Optional[int] = None) -> IntervalSet:
    population = range(1 << j)
    if size is None:
        size = rng.randrange(0, (1 << j) + 1)
    return IntervalSet.from_indices(j, rng.sample(population, size))


def random_total_colouring(rng: random.Random, j: int, d: int) -> Colouring:
    members = random_subset(rng, j)
    assignment = {m: rng.randrange(1, d + 1) for m in members}
    return Colouring(members, d, assignment)


def random_previsible_instance(
    rng: random.Random,
    j: int,
    d: int,
    eta: Fraction,
    *,
    max_tries: int = 200,
) -> Tuple[Colouring, IntervalSet, HomogeneityParams]:
    """Rejection-sample a previsible (coloured base, fresh batch) pair.

    The base is coloured cyclically, which passes the balance check for any
    ratio up to 1/2, so the constructive extender's preconditions all hold.
    The full complement is previsible against any base, which bounds the
    rejection loop.
    """
    params = HomogeneityParams(eta, d)
    for _ in range(max_tries):
        c = random_subset(rng, j)
        complement = IntervalSet.full(j).difference(c)
        if not complement:
            continue
        size = rng.randrange(1, len(complement) + 1)
        u = IntervalSet.from_intervals(j, rng.sample(list(complement), size))
        ok, _ = check_previsible(c, u, d)
        if ok:
            return colour_modulo_d(c, d), u, params
    c = random_subset(rng, j, size=rng.randrange(0, 1 << j))
    u = IntervalSet.full(j).difference(c)
    if not u:
        c = IntervalSet.empty(j)
        u = IntervalSet.full(j)
    return colour_modulo_d(c, d), u, params


# hypothesis strategies


def interval_sets(j: int):
    return st.sets(
        st.integers(min_value=0, max_value=(1 << j) - 1), max_size=1 << j
    ).map(lambda idxs: IntervalSet.from_indices(j, idxs))


@st.composite
def total_colourings(draw, max_j: int = 5, max_d: int = 4):
    j = draw(st.integers(min_value=0, max_value=max_j))
    d = draw(st.integers(min_value=1, max_value=max_d))
    members = draw(interval_sets(j))
    assignment = {
        m: draw(st.integers(min_value=1, max_value=d)) for m in members
    }
    return Colouring(members, d, assignment)


@st.composite
def cu_pairs(draw, max_j: int = 5):
    """Disjoint (existing, fresh) sets at a shared leaf level."""
    j = draw(st.integers(min_value=0, max_value=max_j))
    c = draw(interval_sets(j))
    rest = IntervalSet.full(j).difference(c)
    u_idxs = draw(st.sets(st.sampled_from([m.index for m in rest]))) if rest else set()
    return c, IntervalSet.from_indices(j, u_idxs)


@st.composite
def etas(draw):
    den = draw(st.integers(min_value=2, max_value=8))
    num = draw(st.integers(min_value=1, max_value=den // 2))
    return Fraction(num, den)
