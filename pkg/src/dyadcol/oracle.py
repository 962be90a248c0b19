"""Exhaustive enumeration of homogeneous total extensions of a partial colouring.

The oracle is the independent side of the dual check on the constructive
colourer: a depth-first search over the uncoloured members (left to right,
colours in ascending order) that never consults the constructive algorithm.

Pruning is conservative and provably safe:

* a testing interval holding at most ``d`` members dies as soon as any colour
  count inside it reaches two (counts only grow);
* a testing interval holding more than ``d`` members dies once
  ``eta.num * max > eta.den * (min + unassigned)``, since the minimum count
  can rise by at most the number of still-unassigned members inside it.

Every candidate that reaches the bottom is re-validated with the full
checker before being counted.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Dict, List, Optional, Set, Tuple

from .criteria import check_homogeneous
from .errors import BudgetExceededError, PreconditionError
from .intervals import Colouring, DyadicInterval, HomogeneityParams

DEFAULT_BUDGET = 10_000_000

BUDGET_ENV_VAR = "DYAD_BUDGET"


def budget_from_env(default: int = DEFAULT_BUDGET) -> int:
    """The oracle budget, honouring the DYAD_BUDGET environment variable."""
    raw = os.environ.get(BUDGET_ENV_VAR)
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError as exc:
        raise PreconditionError(f"{BUDGET_ENV_VAR} must be an integer, got {raw!r}") from exc
    if value < 1:
        raise PreconditionError(f"{BUDGET_ENV_VAR} must be positive, got {value}")
    return value


@dataclass(frozen=True)
class ExtensionReport:
    """Result of one oracle run.

    Attributes:
        count: number of homogeneous total extensions found; exact unless
            ``capped`` is set, in which case it reads "at least this many".
        capped: the search stopped early because ``limit`` was reached.
        witnesses: the first extensions found, up to the witness cap.
        canonical_count: number of colour-permutation classes among all
            extensions; computed only for a fully uncoloured base on an
            uncapped run, else None.
        nodes_visited: colour placements tried, a measure of search effort.
    """

    count: int
    capped: bool
    witnesses: Tuple[Colouring, ...]
    canonical_count: Optional[int]
    nodes_visited: int


def canonicalize(colouring: Colouring) -> Colouring:
    """Relabel colours by first appearance left to right (1, 2, ...).

    Two total colourings are permutations of one another exactly when their
    canonical forms are equal; the map is idempotent.
    """
    if not colouring.is_total:
        raise PreconditionError("canonicalize requires a total colouring")
    mapping: Dict[int, int] = {}
    relabelled: Dict[DyadicInterval, int] = {}
    for member in colouring.base:
        colour = colouring.assignment[member]
        fresh = mapping.get(colour)
        if fresh is None:
            fresh = mapping[colour] = len(mapping) + 1
        relabelled[member] = fresh
    return Colouring(colouring.base, colouring.d, relabelled)


def _canonical_key(base_members, assignment: Dict[int, int]) -> Tuple[int, ...]:
    mapping: Dict[int, int] = {}
    key: List[int] = []
    for member in base_members:
        colour = assignment[member.index]
        fresh = mapping.get(colour)
        if fresh is None:
            fresh = mapping[colour] = len(mapping) + 1
        key.append(fresh)
    return tuple(key)


def oracle_extensions(
    base: Colouring,
    params: HomogeneityParams,
    limit: Optional[int] = None,
    *,
    max_witnesses: int = 64,
    budget: Optional[int] = None,
) -> ExtensionReport:
    """Count (and witness) all homogeneous total extensions of ``base``.

    ``limit`` stops the search once that many extensions are found, marking
    the report as capped.  The search refuses to start when the worst case
    ``d ** |uncoloured|`` exceeds ``budget`` (default :data:`DEFAULT_BUDGET`),
    raising :class:`BudgetExceededError`.
    """
    if params.d != base.d:
        raise PreconditionError(f"params.d ({params.d}) != colouring.d ({base.d})")
    if limit is not None and limit < 1:
        raise PreconditionError(f"limit must be positive when given, got {limit}")
    if budget is None:
        budget = DEFAULT_BUDGET
    d = base.d
    j = base.base.level
    uncoloured = tuple(base.uncoloured())
    if d ** len(uncoloured) > budget:
        raise BudgetExceededError(
            f"worst case {d}**{len(uncoloured)} colourings exceeds the budget of {budget}"
        )

    num = params.eta.numerator
    den = params.eta.denominator

    # per active node: [row of d assigned counts, unassigned, total]
    stats: Dict[Tuple[int, int], List] = {}
    for member in base.base:
        colour = base.assignment.get(member)
        for level in range(j + 1):
            key = (level, member.index >> (j - level))
            st = stats.get(key)
            if st is None:
                st = stats[key] = [[0] * d, 0, 0]
            st[2] += 1
            if colour is None:
                st[1] += 1
            else:
                st[0][colour - 1] += 1

    def feasible(st: List) -> bool:
        row, unassigned, total = st
        if total <= d:
            return max(row) <= 1
        return num * max(row) <= den * (min(row) + unassigned)

    report_zero = ExtensionReport(0, False, (), 0 if not base.assignment else None, 0)
    for st in stats.values():
        if not feasible(st):
            # the already-coloured part is beyond repair; no extension exists
            return report_zero

    ancestors: List[List[List]] = []
    for member in uncoloured:
        ancestors.append([stats[(level, member.index >> (j - level))] for level in range(j + 1)])

    assignment: Dict[int, int] = {m.index: c for m, c in base.assignment.items()}
    collect_canonical = not base.assignment
    canonical_forms: Optional[Set[Tuple[int, ...]]] = set() if collect_canonical else None

    count = 0
    capped = False
    nodes_visited = 0
    witnesses: List[Colouring] = []
    members = base.base.members
    total_uncoloured = len(uncoloured)

    def record() -> None:
        nonlocal count
        trial = Colouring(
            base.base, d, {DyadicInterval(j, idx): col for idx, col in assignment.items()}
        )
        ok, _ = check_homogeneous(trial, params)
        if not ok:
            return
        count += 1
        if len(witnesses) < max_witnesses:
            witnesses.append(trial)
        if canonical_forms is not None:
            canonical_forms.add(_canonical_key(members, assignment))

    def dfs(k: int) -> bool:
        """Explore position k; returns False to abort the whole search."""
        nonlocal capped, nodes_visited
        if k == total_uncoloured:
            record()
            if limit is not None and count >= limit:
                capped = True
                return False
            return True
        member = uncoloured[k]
        chain = ancestors[k]
        for colour in range(1, d + 1):
            nodes_visited += 1
            slot = colour - 1
            ok = True
            for st in chain:
                st[0][slot] += 1
                st[1] -= 1
            for st in chain:
                if not feasible(st):
                    ok = False
                    break
            if ok:
                assignment[member.index] = colour
                keep_going = dfs(k + 1)
                del assignment[member.index]
            else:
                keep_going = True
            for st in chain:
                st[0][slot] -= 1
                st[1] += 1
            if not keep_going:
                return False
        return True

    finished = dfs(0)
    if not finished and limit is not None and count >= limit:
        capped = True

    canonical_count: Optional[int] = None
    if canonical_forms is not None and not capped:
        canonical_count = len(canonical_forms)

    return ExtensionReport(count, capped, tuple(witnesses), canonical_count, nodes_visited)
