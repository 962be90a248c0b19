"""Constructive extension of a homogeneous colouring across a previsible enlargement.

Given a total ``(eta, d)``-homogeneous colouring of ``C`` and a disjoint set
``U`` such that ``(C, U)`` is ``d``-previsible, :func:`extend_colouring`
produces a total colouring of ``H = C | U`` that keeps every colour of ``C``
and is again ``(eta, d)``-homogeneous (for any ``eta <= 1/2``).

The algorithm walks the tree bottom-up in stages ``s = j - alpha, ..., 0``
where ``2**alpha <= d < 2**(alpha+1)``.  A node ``K`` at level ``j - alpha``
or deeper holds at most ``2**alpha <= d`` leaves, so once every colour count
inside such a node is at most one, all deeper testing intervals pass rule
HOM1 automatically; the stages therefore only ever need to look one level
down.  The stage invariant is: after stage ``s``, a node ``K`` in ``D_s`` has
all of ``U & K`` coloured exactly when ``|H & K| >= d`` and ``C & K`` is
nonempty, in which case every colour appears in ``K`` and the HOM2 ratio
holds there; otherwise ``U & K`` is entirely uncoloured.

Colouring decisions at a parent split into cases identified by
:class:`CaseLabel` from the four child counts ``(|C & L'|, |C & L''|,
|H & L'|, |H & L''|)``.  Stage I labels cover the deepest stage, stage II the
inductive step; the ``A`` branch has members of ``C`` in both children, the
``B`` branch in exactly one.  The relevant fact used by stage I.2 without
re-derivation: HOM1 for the input colouring guarantees the colours already
present in such a node are pairwise distinct, so the unused colours exactly
suffice.  Every stage re-checks its own postcondition and raises
:class:`~dyadcol.errors.InternalBreachError` on any breach.
"""

from __future__ import annotations

import bisect
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

from .criteria import check_homogeneous, check_previsible
from .errors import InternalBreachError, PreconditionError
from .intervals import Colouring, DyadicInterval, HomogeneityParams, IntervalSet


class CaseLabel(Enum):
    """Which colouring rule fired at a node; values follow the case taxonomy above."""

    I_1 = "I.1"
    I_2 = "I.2"
    II_1 = "II.1"
    II_2_A_1 = "II.2.A.1"
    II_2_A_2 = "II.2.A.2"
    II_2_A_3 = "II.2.A.3"
    II_2_A_4 = "II.2.A.4"
    II_2_B_1 = "II.2.B.1"
    II_2_B_2 = "II.2.B.2"
    II_2_B_3 = "II.2.B.3"
    II_2_B_4 = "II.2.B.4"


def dispatch_case(counts: Sequence[int], d: int) -> CaseLabel:
    """Classify an inductive-step node from ``(c_left, c_right, h_left, h_right)``.

    The label depends only on these four counts and ``d``.  The ``B`` cases
    are reported in their normalised orientation (the child without members
    of ``C`` plays the first role), so mirrored inputs map to the same label.
    """
    if len(counts) != 4:
        raise PreconditionError("counts must be (c_left, c_right, h_left, h_right)")
    cl, cr, hl, hr = counts
    if not isinstance(d, int) or d < 1:
        raise PreconditionError(f"d must be a positive integer, got {d}")
    for value in counts:
        if not isinstance(value, int) or value < 0:
            raise PreconditionError(f"counts must be non-negative integers, got {counts}")
    if cl > hl or cr > hr:
        raise PreconditionError(f"inconsistent counts {counts}: c may not exceed h")
    if hl + hr < d or (cl == 0 and cr == 0):
        return CaseLabel.II_1
    if cl > 0 and cr > 0:
        if hl >= d and hr >= d:
            return CaseLabel.II_2_A_1
        if hl < d and hr < d:
            return CaseLabel.II_2_A_2
        if hl < d:
            return CaseLabel.II_2_A_3
        return CaseLabel.II_2_A_4
    # exactly one child carries members of C; normalise the empty child first
    h_empty, h_other = (hl, hr) if cl == 0 else (hr, hl)
    if h_empty >= d and h_other >= d:
        return CaseLabel.II_2_B_1
    if h_empty < d and h_other < d:
        return CaseLabel.II_2_B_2
    if h_empty < d:
        return CaseLabel.II_2_B_3
    return CaseLabel.II_2_B_4


class InductionState:
    """Working state of one extension run: sorted leaf indices plus the growing assignment.

    Exposed mainly for instrumentation; :func:`extend_colouring` is the API.
    """

    def __init__(self, c_col: Colouring, u: IntervalSet, params: HomogeneityParams) -> None:
        self.j = c_col.base.level
        self.d = params.d
        self.num = params.eta.numerator
        self.den = params.eta.denominator
        self.c_indices: Tuple[int, ...] = c_col.base.indices
        self.u_indices: Tuple[int, ...] = u.indices
        self.h_indices: Tuple[int, ...] = tuple(sorted(self.c_indices + self.u_indices))
        self.c_set = frozenset(self.c_indices)
        # colours keyed by leaf index; C's colours are fixed from the start
        self.colour: Dict[int, int] = {
            member.index: colour for member, colour in c_col.assignment.items()
        }
        self.assigned_u = 0
        self.stage: Optional[int] = None

    # -- node queries ------------------------------------------------------

    def _span(self, indices: Tuple[int, ...], level: int, idx: int) -> Tuple[int, int]:
        shift = self.j - level
        lo = bisect.bisect_left(indices, idx << shift)
        hi = bisect.bisect_left(indices, (idx + 1) << shift)
        return lo, hi

    def h_under(self, level: int, idx: int) -> Tuple[int, ...]:
        lo, hi = self._span(self.h_indices, level, idx)
        return self.h_indices[lo:hi]

    def c_under(self, level: int, idx: int) -> Tuple[int, ...]:
        lo, hi = self._span(self.c_indices, level, idx)
        return self.c_indices[lo:hi]

    def u_under(self, level: int, idx: int) -> Tuple[int, ...]:
        lo, hi = self._span(self.u_indices, level, idx)
        return self.u_indices[lo:hi]

    def h_count(self, level: int, idx: int) -> int:
        lo, hi = self._span(self.h_indices, level, idx)
        return hi - lo

    def c_count(self, level: int, idx: int) -> int:
        lo, hi = self._span(self.c_indices, level, idx)
        return hi - lo

    def colour_row(self, level: int, idx: int) -> List[int]:
        """Current per-colour counts of coloured members under a node."""
        row = [0] * self.d
        for leaf in self.h_under(level, idx):
            colour = self.colour.get(leaf)
            if colour is not None:
                row[colour - 1] += 1
        return row

    def c_colours_under(self, level: int, idx: int) -> List[int]:
        """Distinct colours used by C inside a node; breaches if any repeats."""
        seen: List[int] = []
        for leaf in self.c_under(level, idx):
            colour = self.colour[leaf]
            if colour in seen:
                raise InternalBreachError(
                    f"colour {colour} repeats inside node ({level},{idx}) where "
                    "distinct colours were guaranteed"
                )
            seen.append(colour)
        return sorted(seen)

    # -- assignment --------------------------------------------------------

    def paint(self, leaves: Sequence[int], colours: Sequence[int]) -> None:
        if len(colours) < len(leaves):
            raise InternalBreachError(
                f"{len(leaves)} leaves to colour but only {len(colours)} colours supplied"
            )
        for leaf, colour in zip(leaves, colours):
            if leaf in self.colour:
                raise InternalBreachError(f"leaf {leaf} would be re-coloured")
            if leaf not in self.c_set:
                self.assigned_u += 1
            self.colour[leaf] = colour

    @property
    def is_total(self) -> bool:
        return len(self.colour) == len(self.h_indices)


def _canonical_pair(
    state: InductionState,
    first: Tuple[int, int],
    second: Tuple[int, int],
) -> None:
    """Colour both children when each holds fewer than d members of H (cases *.2).

    Relabels the colours through an explicit bijection so that inside the
    node the first child's C-colours read 1..m and the second child's read
    m+1..m+n (overlapping ranges when m+n >= d), runs the canonical recipe,
    then maps the chosen colours back.
    """
    d = state.d
    m = state.c_count(*first)
    n = state.c_count(*second)
    u1 = [leaf for leaf in state.u_under(*first)]
    u2 = [leaf for leaf in state.u_under(*second)]
    x, y = len(u1), len(u2)
    if m + x >= d or n + y >= d or m + x + n + y < d:
        raise InternalBreachError(
            f"pair-colouring counts out of range: m={m} x={x} n={n} y={y} d={d}"
        )
    cols1 = state.c_colours_under(*first)
    cols2 = state.c_colours_under(*second)
    actual: List[int] = [0] * (d + 1)  # canonical colour -> actual colour, 1-based

    if m + n < d:
        overlap = set(cols1) & set(cols2)
        if overlap:
            raise InternalBreachError(
                f"colours {sorted(overlap)} appear in both children of a node holding "
                "at most d members of C"
            )
        rest = sorted(set(range(1, d + 1)) - set(cols1) - set(cols2))
        for canon, col in enumerate(cols1 + cols2 + rest, start=1):
            actual[canon] = col
        seq1 = list(range(m + n + 1, d + 1)) + list(range(m + 1, m + n + 1))
        if m + n + x < d:
            seq2 = (
                list(range(m + n + x + 1, d + 1))
                + list(range(1, m + 1))
                + list(range(m + n + 1, m + n + x + 1))
            )
        else:
            # free choice among colours 1..m and m+n+1..d; prefer the fresh
            # upper range first, mirroring the ordered branch above
            seq2 = list(range(m + n + 1, d + 1)) + list(range(1, m + 1))
    else:
        shared = sorted(set(cols1) & set(cols2))
        only1 = sorted(set(cols1) - set(shared))
        only2 = sorted(set(cols2) - set(shared))
        if len(shared) != m + n - d or len(cols1) != m or len(cols2) != n:
            raise InternalBreachError(
                f"expected {m + n - d} shared colours between children, found {len(shared)}"
            )
        for canon, col in enumerate(shared + only1 + only2, start=1):
            actual[canon] = col
        seq1 = list(range(m + 1, m + x + 1))
        seq2 = list(range(m + n - d + 1, m + n - d + y + 1))

    state.paint(u1, [actual[c] for c in seq1[:x]])
    state.paint(u2, [actual[c] for c in seq2[:y]])


def _forced_light(
    state: InductionState,
    light: Tuple[int, int],
    heavy: Tuple[int, int],
) -> None:
    """Colour the light child when the heavy one already holds >= d members (cases *.3/A.4).

    Previsibility guarantees the heavy child contributed no new intervals, so
    only ``U`` inside the light child needs colours.  Colours absent from the
    light child are ordered by how often they occur inside the heavy child
    (ties by colour index) and handed out left to right.
    """
    d = state.d
    if state.u_under(*heavy):
        raise InternalBreachError(
            f"previsibility should forbid new intervals under heavy child {heavy}"
        )
    u_light = list(state.u_under(*light))
    if not u_light:
        return
    present = set(state.c_colours_under(*light))
    heavy_row = state.colour_row(*heavy)
    absent = sorted(
        (colour for colour in range(1, d + 1) if colour not in present),
        key=lambda colour: (heavy_row[colour - 1], colour),
    )
    if len(u_light) > len(absent):
        raise InternalBreachError(
            f"{len(u_light)} new intervals under {light} but only {len(absent)} free colours"
        )
    state.paint(u_light, absent)


def _modulo_fill(state: InductionState, node: Tuple[int, int], order: Sequence[int]) -> None:
    leaves = state.u_under(*node)
    d = state.d
    state.paint(leaves, [order[k % d] for k in range(len(leaves))])


def _heavy_empty(
    state: InductionState,
    heavy: Tuple[int, int],
    light: Tuple[int, int],
) -> None:
    """Case B.4: the child without C holds >= d members, the other fewer.

    New intervals in the light child take distinct colours unused there; the
    heavy child (entirely new) is filled cyclically, cycling through the
    colours still unused in the light child before the used ones, which keeps
    the combined counts inside the parent balanced to within one.
    """
    d = state.d
    u_light = list(state.u_under(*light))
    present = sorted(state.c_colours_under(*light))
    unused = [colour for colour in range(1, d + 1) if colour not in set(present)]
    if len(u_light) >= len(unused) and u_light:
        # |H & light| < d guarantees strictly fewer new intervals than free colours
        raise InternalBreachError(
            f"light child {light} has {len(u_light)} new intervals, {len(unused)} free colours"
        )
    state.paint(u_light, unused[: len(u_light)])
    used_light = set(present) | set(unused[: len(u_light)])
    order = [c for c in range(1, d + 1) if c not in used_light] + sorted(used_light)
    _modulo_fill(state, heavy, order)


def _finish_root(state: InductionState) -> None:
    """Final rule once the induction leaves the root uncoloured (|H| < d or C empty)."""
    d = state.d
    if state.assigned_u:
        raise InternalBreachError("root wrap-up reached with new intervals already coloured")
    total = len(state.h_indices)
    if total < d:
        used: List[int] = []
        for leaf in state.c_indices:
            colour = state.colour[leaf]
            if colour in used:
                raise InternalBreachError(
                    "a collection smaller than d must use pairwise distinct colours"
                )
            used.append(colour)
        free = [colour for colour in range(1, d + 1) if colour not in set(used)]
        state.paint(list(state.u_indices), free[: len(state.u_indices)])
    elif not state.c_indices:
        state.paint(list(state.u_indices), [k % d + 1 for k in range(len(state.u_indices))])
    else:
        raise InternalBreachError("root wrap-up requires |H| < d or an empty C")


def _verify_stage(state: InductionState, level: int, nodes: Sequence[int]) -> None:
    """Re-check the stage invariant on every populated node of this level."""
    d = state.d
    for idx in nodes:
        h = state.h_count(level, idx)
        c = state.c_count(level, idx)
        u_leaves = state.u_under(level, idx)
        coloured = sum(1 for leaf in u_leaves if leaf in state.colour)
        if h >= d and c > 0:
            if coloured != len(u_leaves):
                raise InternalBreachError(
                    f"node ({level},{idx}) should be fully coloured after its stage"
                )
            row = state.colour_row(level, idx)
            mn = min(row)
            mx = max(row)
            if mn < 1:
                raise InternalBreachError(
                    f"colour {row.index(mn) + 1} is missing inside node ({level},{idx})"
                )
            if state.num * mx > state.den * mn:
                raise InternalBreachError(
                    f"balance breached inside node ({level},{idx}): max={mx} min={mn}"
                )
            if h <= d and mx > 1:
                raise InternalBreachError(
                    f"node ({level},{idx}) holds at most d members but repeats a colour"
                )
        else:
            if coloured:
                raise InternalBreachError(
                    f"node ({level},{idx}) should still be uncoloured after its stage"
                )


def extend_colouring(
    c_col: Colouring,
    u: IntervalSet,
    params: HomogeneityParams,
    *,
    verify: bool = True,
    trace: Optional[List[Tuple[DyadicInterval, CaseLabel]]] = None,
) -> Colouring:
    """Extend ``c_col`` over ``u`` into a total homogeneous colouring of the union.

    Preconditions (each failure raises :class:`PreconditionError`, carrying
    the offending :class:`~dyadcol.criteria.Violation` where applicable):
    ``c_col`` is total and ``(eta, d)``-homogeneous, ``u`` is disjoint from
    its base at the same level, and ``(C, U)`` is ``d``-previsible.

    The output keeps every colour of ``c_col``, is bit-for-bit reproducible,
    and is re-validated with :func:`~dyadcol.criteria.check_homogeneous`
    before being returned (disable the per-stage re-checks with
    ``verify=False``; the final validation always runs).  ``trace``, when
    given, collects ``(node, CaseLabel)`` pairs in processing order.
    """
    if params.d != c_col.d:
        raise PreconditionError(f"params.d ({params.d}) != colouring.d ({c_col.d})")
    if u.level != c_col.base.level:
        raise PreconditionError(
            f"level mismatch: colouring at {c_col.base.level}, new intervals at {u.level}"
        )
    if not c_col.is_total:
        raise PreconditionError("the base colouring must be total")
    if not c_col.base.is_disjoint_from(u):
        raise PreconditionError("new intervals must be disjoint from the coloured collection")
    ok, violation = check_homogeneous(c_col, params)
    if not ok:
        raise PreconditionError("the base colouring is not homogeneous", violation)
    ok, violation = check_previsible(c_col.base, u, params.d)
    if not ok:
        raise PreconditionError("the enlargement is not previsible", violation)

    state = InductionState(c_col, u, params)
    j, d = state.j, state.d
    alpha = d.bit_length() - 1
    start = j - alpha

    if start < 0:
        # the whole board holds fewer than d leaves; only the wrap-up rule applies
        _finish_root(state)
    else:
        for level in range(start, -1, -1):
            state.stage = level
            shift = j - level
            nodes = sorted({leaf >> shift for leaf in state.h_indices})
            for idx in nodes:
                h = state.h_count(level, idx)
                c = state.c_count(level, idx)
                if level == start:
                    if h > d:
                        raise InternalBreachError(
                            f"node ({level},{idx}) holds {h} > d leaves at the deepest stage"
                        )
                    if h < d or c == 0:
                        label = CaseLabel.I_1
                        if level == 0:
                            _finish_root(state)
                    else:
                        label = CaseLabel.I_2
                        present = set(state.c_colours_under(level, idx))
                        free = [col for col in range(1, d + 1) if col not in present]
                        state.paint(list(state.u_under(level, idx)), free)
                else:
                    cl = state.c_count(level + 1, idx << 1)
                    cr = state.c_count(level + 1, (idx << 1) | 1)
                    hl = state.h_count(level + 1, idx << 1)
                    hr = state.h_count(level + 1, (idx << 1) | 1)
                    label = dispatch_case((cl, cr, hl, hr), d)
                    left = (level + 1, idx << 1)
                    right = (level + 1, (idx << 1) | 1)
                    empty_child, other_child = (left, right) if cl == 0 else (right, left)
                    if label is CaseLabel.II_1:
                        if level == 0:
                            _finish_root(state)
                    elif label is CaseLabel.II_2_A_1:
                        pass  # both children were completed at earlier stages
                    elif label in (CaseLabel.II_2_A_2, CaseLabel.II_2_B_2):
                        if label is CaseLabel.II_2_A_2:
                            _canonical_pair(state, left, right)
                        else:
                            _canonical_pair(state, empty_child, other_child)
                    elif label is CaseLabel.II_2_A_3:
                        _forced_light(state, light=left, heavy=right)
                    elif label is CaseLabel.II_2_A_4:
                        _forced_light(state, light=right, heavy=left)
                    elif label is CaseLabel.II_2_B_1:
                        _modulo_fill(state, empty_child, tuple(range(1, d + 1)))
                    elif label is CaseLabel.II_2_B_3:
                        _forced_light(state, light=empty_child, heavy=other_child)
                    else:  # II_2_B_4
                        _heavy_empty(state, heavy=empty_child, light=other_child)
                if trace is not None:
                    trace.append((DyadicInterval(level, idx), label))
            # the root wrap-up deliberately colours nodes the invariant calls
            # uncoloured, so level 0 is covered by the final full check instead
            if verify and level > 0:
                _verify_stage(state, level, nodes)

    if not state.is_total:
        raise InternalBreachError("extension finished without colouring every interval")

    h_set = c_col.base.union(u)
    result = Colouring(
        h_set,
        d,
        {DyadicInterval(j, leaf): colour for leaf, colour in state.colour.items()},
    )
    for member, colour in c_col.assignment.items():
        if result.assignment[member] != colour:
            raise InternalBreachError(f"colour of {member} was not preserved")
    ok, violation = check_homogeneous(result, params)
    if not ok:
        raise InternalBreachError(f"extension produced an inhomogeneous colouring: {violation}")
    return result
