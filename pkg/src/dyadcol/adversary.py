"""Adversarial chain families: staged enlargements that no fixed balance ratio survives.

For ``d = 2**a`` colours and ``eta = 1/n`` the construction nests a chain of
intervals ``L_1 < L_2 < ... < L_{n+2}`` (each the dyadic parent of the
previous), marks ``d - 1`` leaves inside ``L_1`` and one leaf ``J_i`` inside
each brother ``P_i`` of ``L_i``.  The stage-k collection is

    C(k) = {I_1..I_{d-1}} | {J_{n-k+1}, ..., J_{n+1}},  k = 0..n.

Stage 0 admits exactly one homogeneous colouring up to permutation; each
enlargement up to stage n-1 admits exactly one consistent extension (the new
leaf is forced to the colour of the J's); and stage n admits none for
``eta = 1/n`` while still passing at the slightly weaker ``1/(n+1)``.
None of the stage pairs is ``d``-previsible, so the constructive colourer's
precondition correctly walls them off.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Tuple

from .criteria import check_homogeneous, check_previsible
from .errors import PreconditionError
from .intervals import (
    MAX_LEVEL,
    Colouring,
    CountTable,
    DyadicInterval,
    HomogeneityParams,
    IntervalSet,
    count_table,
)
from .oracle import oracle_extensions


@dataclass(frozen=True)
class ChainSpec:
    """Placement recipe for one chain family.

    Attributes:
        a: colour count exponent, ``d = 2**a``.
        n: chain depth; the target ratio is ``eta = 1/n``.
        j: leaf level; requires ``j >= n + a + 1``.
        anchor: index of ``L_1`` in ``D_{j-a}``.  Its low ``n + 1`` bits
            double as the side choices (which child of ``L_{i+1}`` is
            ``L_i``), so no separate field is stored; see ``side_choices``.
        i_slots: ``d - 1`` distinct leaf offsets inside ``L_1``.
        j_slots: one leaf offset inside each brother ``P_1, ..., P_{n+1}``;
            entry ``i`` ranges over ``[0, 2**(a+i))``.
    """

    a: int
    n: int
    j: int
    anchor: int = 0
    i_slots: Tuple[int, ...] = ()
    j_slots: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.a < 1:
            raise PreconditionError(f"a must be at least 1, got {self.a}")
        if self.n < 2:
            raise PreconditionError(f"n must be at least 2, got {self.n}")
        if self.j < self.n + self.a + 1:
            raise PreconditionError(
                f"j must be at least n + a + 1 = {self.n + self.a + 1}, got {self.j}"
            )
        if self.j > MAX_LEVEL:
            raise PreconditionError(f"j must not exceed {MAX_LEVEL}, got {self.j}")
        if not 0 <= self.anchor < (1 << (self.j - self.a)):
            raise PreconditionError(
                f"anchor must be in [0, 2**{self.j - self.a}), got {self.anchor}"
            )
        d = self.d
        i_slots = self.i_slots or tuple(range(d - 1))
        object.__setattr__(self, "i_slots", tuple(i_slots))
        if len(self.i_slots) != d - 1 or len(set(self.i_slots)) != d - 1:
            raise PreconditionError(f"i_slots must be {d - 1} distinct offsets")
        for slot in self.i_slots:
            if not 0 <= slot < (1 << self.a):
                raise PreconditionError(f"i_slot {slot} outside [0, 2**{self.a})")
        j_slots = self.j_slots or tuple(0 for _ in range(self.n + 1))
        object.__setattr__(self, "j_slots", tuple(j_slots))
        if len(self.j_slots) != self.n + 1:
            raise PreconditionError(f"j_slots must have {self.n + 1} entries")
        for i, slot in enumerate(self.j_slots):
            if not 0 <= slot < (1 << (self.a + i)):
                raise PreconditionError(f"j_slot {slot} outside [0, 2**{self.a + i})")

    @property
    def d(self) -> int:
        return 1 << self.a

    @property
    def eta(self) -> Fraction:
        return Fraction(1, self.n)

    @property
    def params(self) -> HomogeneityParams:
        return HomogeneityParams(self.eta, self.d)

    @property
    def side_choices(self) -> Tuple[int, ...]:
        """Bit i-1 says whether ``L_i`` is the right (1) or left (0) child of ``L_{i+1}``."""
        return tuple((self.anchor >> (i - 1)) & 1 for i in range(1, self.n + 2))

    @classmethod
    def from_sides(
        cls,
        a: int,
        n: int,
        j: int,
        sides: Tuple[int, ...],
        top_index: int = 0,
        i_slots: Tuple[int, ...] = (),
        j_slots: Tuple[int, ...] = (),
    ) -> "ChainSpec":
        """Build the anchor from the index of ``L_{n+2}`` plus explicit side choices."""
        if len(sides) != n + 1:
            raise PreconditionError(f"sides must have {n + 1} entries")
        anchor = top_index
        for i in range(n + 1, 0, -1):
            bit = sides[i - 1]
            if bit not in (0, 1):
                raise PreconditionError(f"side choices must be bits, got {bit}")
            anchor = (anchor << 1) | bit
        return cls(a=a, n=n, j=j, anchor=anchor, i_slots=i_slots, j_slots=j_slots)


def random_chain_spec(a: int, n: int, j: int, rng: random.Random) -> ChainSpec:
    """A uniformly random placement (anchor, marker slots) for the given shape."""
    d = 1 << a
    anchor = rng.randrange(1 << (j - a))
    i_slots = tuple(rng.sample(range(1 << a), d - 1))
    j_slots = tuple(rng.randrange(1 << (a + i)) for i in range(n + 1))
    return ChainSpec(a=a, n=n, j=j, anchor=anchor, i_slots=i_slots, j_slots=j_slots)


@dataclass(frozen=True)
class StageFamily:
    """The realised chain: intervals, brothers, marked leaves, staged collections."""

    spec: ChainSpec
    chain: Tuple[DyadicInterval, ...]  # L_1 .. L_{n+2}
    brothers: Tuple[DyadicInterval, ...]  # P_1 .. P_{n+1}
    i_marks: Tuple[DyadicInterval, ...]  # I_1 .. I_{d-1}
    j_marks: Tuple[DyadicInterval, ...]  # J_1 .. J_{n+1}

    @property
    def d(self) -> int:
        return self.spec.d

    @property
    def params(self) -> HomogeneityParams:
        return self.spec.params

    def stage(self, k: int) -> IntervalSet:
        """The stage-k collection ``C(k)``."""
        n = self.spec.n
        if not 0 <= k <= n:
            raise PreconditionError(f"stage must be in [0, {n}], got {k}")
        members = self.i_marks + self.j_marks[n - k :]
        return IntervalSet.from_intervals(self.spec.j, members)

    def added(self, k: int) -> DyadicInterval:
        """The single leaf joining at stage k, ``C(k) \\ C(k-1)``."""
        n = self.spec.n
        if not 1 <= k <= n:
            raise PreconditionError(f"added stage must be in [1, {n}], got {k}")
        return self.j_marks[n - k]

    def stage_colouring(self, k: int) -> Colouring:
        """The forced colouring of ``C(k)``: every J gets colour 1, ``I_m`` gets ``m + 1``."""
        assignment: Dict[DyadicInterval, int] = {}
        for m, mark in enumerate(self.i_marks, start=1):
            assignment[mark] = m + 1
        n = self.spec.n
        for mark in self.j_marks[n - k :]:
            assignment[mark] = 1
        return Colouring(self.stage(k), self.d, assignment)


def build_counterexample(spec: ChainSpec) -> StageFamily:
    """Realise a :class:`ChainSpec` into intervals and staged collections."""
    a, n, j = spec.a, spec.n, spec.j
    chain = [DyadicInterval(j - a, spec.anchor)]
    for _ in range(n + 1):
        chain.append(chain[-1].parent())
    brothers = tuple(chain[i].sibling() for i in range(n + 1))
    i_marks = tuple(
        DyadicInterval(j, (spec.anchor << a) + slot) for slot in spec.i_slots
    )
    j_marks = []
    for i, brother in enumerate(brothers, start=1):
        shift = a + i - 1
        j_marks.append(DyadicInterval(j, (brother.index << shift) + spec.j_slots[i - 1]))
    family = StageFamily(spec, tuple(chain), brothers, i_marks, tuple(j_marks))
    # geometric sanity: every marked leaf sits where the recipe says
    for mark in i_marks:
        if not chain[0].contains(mark):
            raise PreconditionError(f"marker {mark} escaped L_1")
    for i, mark in enumerate(j_marks):
        if not brothers[i].contains(mark):
            raise PreconditionError(f"marker {mark} escaped its brother interval")
    if len(set(i_marks) | set(j_marks)) != len(i_marks) + len(j_marks):
        raise PreconditionError("marked leaves collide")
    return family


def previsibility_profile(family: StageFamily) -> Tuple[bool, ...]:
    """Previsibility of each stage pair ``(C(k), C(k+1) \\ C(k))``, k = 0..n-1.

    Every entry is False for a well-formed family: the chain is built so the
    constructive path never applies to it.
    """
    results = []
    for k in range(family.spec.n):
        u = IntervalSet.from_intervals(family.spec.j, (family.added(k + 1),))
        ok, _ = check_previsible(family.stage(k), u, family.d)
        results.append(ok)
    return tuple(results)


@dataclass(frozen=True)
class CounterexampleReport:
    """Everything :func:`verify_counterexample` measured, None where skipped."""

    stage0_homogeneous: bool
    counts_formula_ok: bool
    boundary_table: CountTable
    boundary_weaker_eta_passes: bool
    boundary_target_eta_fails: bool
    profile: Tuple[bool, ...]
    stage0_canonical_count: Optional[int] = None
    stage_counts: Optional[Tuple[int, ...]] = None
    stage_witnesses_forced: Optional[bool] = None
    final_count: Optional[int] = None

    @property
    def ok(self) -> bool:
        checks = [
            self.stage0_homogeneous,
            self.counts_formula_ok,
            self.boundary_weaker_eta_passes,
            self.boundary_target_eta_fails,
            not any(self.profile),
        ]
        if self.stage0_canonical_count is not None:
            checks.append(self.stage0_canonical_count == 1)
        if self.stage_counts is not None:
            checks.append(all(c == 1 for c in self.stage_counts))
        if self.stage_witnesses_forced is not None:
            checks.append(self.stage_witnesses_forced)
        if self.final_count is not None:
            checks.append(self.final_count == 0)
        return all(checks)


def game_script(family: StageFamily) -> Tuple[IntervalSet, ...]:
    """The family's stages as a ready-to-play move script: the full stage-0
    batch first, then one leaf per enlargement."""
    n, j = family.spec.n, family.spec.j
    script = [family.stage(0)]
    for k in range(1, n + 1):
        script.append(IntervalSet.from_intervals(j, (family.added(k),)))
    return tuple(script)


def verify_counterexample(
    family: StageFamily, use_oracle: bool = True, *, budget: Optional[int] = None
) -> CounterexampleReport:
    """Measure the family against everything it promises.

    Always checked: the stage-0 colouring is homogeneous; the stage-(n-1)
    colouring shows counts ``(s - 2, 1, ..., 1)`` inside each chain interval
    ``L_s`` for ``s = 3..n+2``; at the top interval the final colouring
    passes with ratio ``1/(n+1)`` but fails with ``1/n``; and no stage pair
    is previsible.

    With ``use_oracle`` the enumeration facts are added: stage 0 admits
    exactly one colouring class, stages ``1..n-1`` admit exactly one
    extension each (the new leaf forced to the J colour), and stage ``n``
    admits none.
    """
    spec = family.spec
    n, d = spec.n, spec.d
    params = spec.params

    ok0, _ = check_homogeneous(family.stage_colouring(0), params)

    colouring_pre = family.stage_colouring(n - 1)
    formula_ok = True
    for s in range(3, n + 3):
        table = count_table(colouring_pre, family.chain[s - 1])
        expected = (s - 2,) + (1,) * (d - 1)
        if table.counts != expected or table.uncoloured:
            formula_ok = False
            break

    top = family.chain[n + 1]
    final_colouring = family.stage_colouring(n)
    boundary = count_table(final_colouring, top)
    mx, mn = boundary.max_count(), boundary.min_count()
    weaker = Fraction(1, n + 1)
    weaker_passes = weaker.numerator * mx <= weaker.denominator * mn
    target_fails = spec.eta.numerator * mx > spec.eta.denominator * mn

    profile = previsibility_profile(family)

    canonical_count: Optional[int] = None
    stage_counts: Optional[Tuple[int, ...]] = None
    forced: Optional[bool] = None
    final_count: Optional[int] = None
    if use_oracle:
        blank = Colouring(family.stage(0), d, {})
        canonical_count = oracle_extensions(blank, params, budget=budget).canonical_count
        counts = []
        forced = True
        for k in range(1, n):
            base = Colouring(family.stage(k), d, family.stage_colouring(k - 1).assignment)
            report = oracle_extensions(base, params, budget=budget)
            counts.append(report.count)
            if report.count != 1 or report.witnesses[0].colour_of(family.added(k)) != 1:
                forced = False
        stage_counts = tuple(counts)
        base = Colouring(family.stage(n), d, family.stage_colouring(n - 1).assignment)
        final_count = oracle_extensions(base, params, budget=budget).count

    return CounterexampleReport(
        stage0_homogeneous=ok0,
        counts_formula_ok=formula_ok,
        boundary_table=boundary,
        boundary_weaker_eta_passes=weaker_passes,
        boundary_target_eta_fails=target_fails,
        profile=profile,
        stage0_canonical_count=canonical_count,
        stage_counts=stage_counts,
        stage_witnesses_forced=forced,
        final_count=final_count,
    )
