"""The two normative predicates (homogeneity, previsibility) and the modulo-d colouring.

A total colouring of a collection ``C`` in ``D_j`` with ``d`` colours is
``(eta, d)``-homogeneous when every dyadic testing interval ``L`` with
``|L| >= 2**-j`` satisfies one of:

* ``|C & L| <= d``  -> every colour appears at most once inside ``L`` (HOM1);
* ``|C & L| >  d``  -> ``eta * max_i |C_i & L| <= min_i |C_i & L|`` (HOM2),
  compared exactly as ``eta.num * max <= eta.den * min``; equality passes.

A disjoint pair ``(c, u)`` is ``d``-previsible when for every ``L`` above the
leaf level and BOTH orientations of its children ``(light, heavy)``: if
``|H & light| < d <= |H & heavy|`` (``H = c | u``) then the heavy child may
not contain members of both ``c`` and ``u``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .errors import PreconditionError
from .intervals import Colouring, DyadicInterval, HomogeneityParams, IntervalSet

HOM1 = "HOM1"
HOM2 = "HOM2"
PREVIS = "PREVIS"

_KINDS = (HOM1, HOM2, PREVIS)


@dataclass(frozen=True)
class Violation:
    """A checkable witness that one rule fails at one testing interval.

    ``detail`` carries enough numbers to re-verify the failure by hand:

    * HOM1: ``colour`` and its ``count`` (>= 2) inside ``testing_interval``;
    * HOM2: ``max``/``min`` counts and the colours attaining them;
    * PREVIS: ``testing_interval`` is the parent; ``heavy_child`` names the
      child holding at least ``d`` members of ``c | u`` plus members of both
      ``c`` and ``u``, while its sibling holds fewer than ``d``.
    """

    kind: str
    testing_interval: DyadicInterval
    detail: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise PreconditionError(f"kind must be one of {_KINDS}, got {self.kind!r}")
        object.__setattr__(self, "detail", dict(self.detail))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Violation):
            return NotImplemented
        return (
            self.kind == other.kind
            and self.testing_interval == other.testing_interval
            and dict(self.detail) == dict(other.detail)
        )

    __hash__ = None  # type: ignore[assignment]


def _colour_rows(colouring: Colouring) -> List[Dict[int, List[int]]]:
    """Per-level colour counts for populated nodes, bottom-up; index 0 = root level."""
    d = colouring.d
    j = colouring.base.level
    assignment = colouring.assignment
    row: Dict[int, List[int]] = {}
    for member in colouring.base:
        cell = row.get(member.index)
        if cell is None:
            cell = row[member.index] = [0] * d
        cell[assignment[member] - 1] += 1
    levels = [row]
    for _ in range(j):
        up: Dict[int, List[int]] = {}
        for idx, cell in row.items():
            parent = idx >> 1
            acc = up.get(parent)
            if acc is None:
                up[parent] = list(cell)
            else:
                for i in range(d):
                    acc[i] += cell[i]
        levels.append(up)
        row = up
    levels.reverse()
    return levels


def check_homogeneous(
    colouring: Colouring, params: HomogeneityParams
) -> Tuple[bool, Optional[Violation]]:
    """Test a total colouring against both homogeneity rules.

    Returns ``(True, None)`` or ``(False, violation)`` where the violation is
    the lexicographically first failure by (level, index), scanning from the
    root down.  Empty testing intervals pass trivially, so only populated
    nodes are visited; the counts come from one bottom-up aggregation pass.
    """
    if params.d != colouring.d:
        raise PreconditionError(f"params.d ({params.d}) != colouring.d ({colouring.d})")
    if not colouring.is_total:
        raise PreconditionError("check_homogeneous requires a total colouring")
    d = colouring.d
    num = params.eta.numerator
    den = params.eta.denominator
    levels = _colour_rows(colouring)
    for level, row in enumerate(levels):
        for idx in sorted(row):
            cell = row[idx]
            total = sum(cell)
            if total > d:
                mx = max(cell)
                mn = min(cell)
                if num * mx > den * mn:
                    return False, Violation(
                        HOM2,
                        DyadicInterval(level, idx),
                        {
                            "max": mx,
                            "min": mn,
                            "argmax_colour": cell.index(mx) + 1,
                            "argmin_colour": cell.index(mn) + 1,
                        },
                    )
            else:
                mx = max(cell)
                if mx > 1:
                    offender = next(i for i, c in enumerate(cell) if c >= 2)
                    return False, Violation(
                        HOM1,
                        DyadicInterval(level, idx),
                        {"colour": offender + 1, "count": cell[offender]},
                    )
    return True, None


def check_previsible(
    c: IntervalSet, u: IntervalSet, d: int
) -> Tuple[bool, Optional[Violation]]:
    """Test the disjoint pair ``(c, u)`` for ``d``-previsibility.

    Scans parents from the root down and checks both child orientations;
    returns the first failing parent in (level, index) order.
    """
    if c.level != u.level:
        raise PreconditionError(f"level mismatch: c at {c.level}, u at {u.level}")
    if not isinstance(d, int) or d < 1:
        raise PreconditionError(f"d must be a positive integer, got {d}")
    if not c.is_disjoint_from(u):
        raise PreconditionError("c and u must be disjoint")
    j = c.level
    if j == 0:
        return True, None
    # triples (|H & node|, |c & node|, |u & node|) per populated node
    row: Dict[int, List[int]] = {}
    for member in c:
        row[member.index] = [1, 1, 0]
    for member in u:
        row[member.index] = [1, 0, 1]
    levels = [row]
    for _ in range(j):
        up: Dict[int, List[int]] = {}
        for idx, cell in row.items():
            parent = idx >> 1
            acc = up.get(parent)
            if acc is None:
                up[parent] = list(cell)
            else:
                acc[0] += cell[0]
                acc[1] += cell[1]
                acc[2] += cell[2]
        levels.append(up)
        row = up
    levels.reverse()
    zero = [0, 0, 0]
    for level in range(j):
        parents = levels[level]
        children = levels[level + 1]
        for idx in sorted(parents):
            left = children.get(idx << 1, zero)
            right = children.get((idx << 1) | 1, zero)
            for light, heavy, heavy_idx in ((left, right, (idx << 1) | 1), (right, left, idx << 1)):
                if light[0] < d <= heavy[0] and heavy[1] > 0 and heavy[2] > 0:
                    heavy_child = DyadicInterval(level + 1, heavy_idx)
                    return False, Violation(
                        PREVIS,
                        DyadicInterval(level, idx),
                        {
                            "heavy_child": {"level": heavy_child.level, "index": heavy_child.index},
                            "h_light": light[0],
                            "h_heavy": heavy[0],
                            "c_heavy": heavy[1],
                            "u_heavy": heavy[2],
                        },
                    )
    return True, None


def colour_modulo_d(
    s: IntervalSet, d: int, colour_order: Optional[Sequence[int]] = None
) -> Colouring:
    """Colour ``s`` cyclically: the l-th member left to right gets the l-th colour mod d.

    ``colour_order`` permutes the cycle; the default is ``1, 2, ..., d``.  Any
    dyadic interval cuts a contiguous run out of the left-to-right enumeration,
    so the resulting counts inside every testing interval differ by at most
    one, which makes the colouring (1/2, d)-homogeneous.
    """
    if not isinstance(d, int) or d < 1:
        raise PreconditionError(f"d must be a positive integer, got {d}")
    if colour_order is None:
        order: Tuple[int, ...] = tuple(range(1, d + 1))
    else:
        order = tuple(colour_order)
        if sorted(order) != list(range(1, d + 1)):
            raise PreconditionError(f"colour_order must be a permutation of 1..{d}")
    assignment = {member: order[l % d] for l, member in enumerate(s)}
    return Colouring(s, d, assignment)
