"""Two-player enlargement duel on one leaf row.

Player A repeatedly presents a batch of fresh leaves; player B must colour
each batch so the whole coloured collection stays balance-checked.  B wins by
filling the row, A wins by presenting a batch nobody can colour.  In
restricted mode A's batches must additionally pass the previsibility check
against the current board, which guarantees B a constructive answer.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from typing import Dict, Optional, Tuple, Union

from .colourer import extend_colouring
from .criteria import check_homogeneous, check_previsible
from .errors import IllegalMoveError, PreconditionError
from .intervals import Colouring, DyadicInterval, HomogeneityParams, IntervalSet
from .oracle import oracle_extensions


class GameStatus(str, Enum):
    AWAITING_A = "awaiting_A"
    AWAITING_B = "awaiting_B"
    A_WINS = "A_wins"
    B_WINS = "B_wins"


@dataclass(frozen=True)
class MoveA:
    """One enlargement: the batch of leaves A presents."""

    intervals: IntervalSet


@dataclass(frozen=True)
class MoveB:
    """B's answer: colour per presented leaf.  Empty means B had no answer."""

    assignment: Tuple[Tuple[DyadicInterval, int], ...]


Move = Union[MoveA, MoveB]


@dataclass(frozen=True)
class GameConfig:
    j: int
    d: int
    eta: Fraction
    restricted: bool = False
    engine_b: bool = True
    script: Tuple[IntervalSet, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "eta", Fraction(self.eta))
        self.params  # validates eta and d
        for entry in self.script:
            if entry.level != self.j:
                raise PreconditionError(
                    f"script entry at level {entry.level}, board is level {self.j}"
                )

    @property
    def params(self) -> HomogeneityParams:
        return HomogeneityParams(self.eta, self.d)


@dataclass(frozen=True)
class GameState:
    config: GameConfig
    board: Colouring
    pending: Optional[IntervalSet]
    status: GameStatus
    history: Tuple[Move, ...]

    @property
    def stage(self) -> int:
        """Index of the most recent enlargement; the opening batch is stage 0, -1 before it."""
        return sum(1 for move in self.history if isinstance(move, MoveA)) - 1

    @property
    def board_full(self) -> bool:
        return len(self.board.base) == 1 << self.config.j


def new_game(config: GameConfig) -> GameState:
    board = Colouring(IntervalSet.empty(config.j), config.d, {})
    return GameState(config, board, None, GameStatus.AWAITING_A, ())


def apply_move_A(state: GameState, intervals: IntervalSet) -> GameState:
    if state.status is not GameStatus.AWAITING_A:
        raise IllegalMoveError(f"not A's turn (status {state.status.value})")
    config = state.config
    if intervals.level != config.j:
        raise IllegalMoveError(
            f"batch at level {intervals.level}, board is level {config.j}"
        )
    if not intervals:
        raise IllegalMoveError("batch must be non-empty")
    if not intervals.is_disjoint_from(state.board.base):
        raise IllegalMoveError("batch overlaps already-coloured leaves")
    if config.restricted:
        ok, violation = check_previsible(state.board.base, intervals, config.d)
        if not ok:
            raise IllegalMoveError(
                "batch is not previsible against the current board",
                violation=violation,
            )
    return replace(
        state,
        pending=intervals,
        status=GameStatus.AWAITING_B,
        history=state.history + (MoveA(intervals),),
    )


def _answered(state: GameState, coloured: Colouring, record: MoveB) -> GameState:
    full = len(coloured.base) == 1 << state.config.j
    return replace(
        state,
        board=coloured,
        pending=None,
        status=GameStatus.B_WINS if full else GameStatus.AWAITING_A,
        history=state.history + (record,),
    )


def respond_B(
    state: GameState,
    assignments: Optional[Dict[DyadicInterval, int]] = None,
    *,
    budget: Optional[int] = None,
) -> GameState:
    """B's turn.  With explicit assignments the move is validated; without,
    the engine answers (constructively when the batch is previsible, by
    exhaustive search otherwise, conceding if the search comes up empty)."""
    if state.status is not GameStatus.AWAITING_B:
        raise IllegalMoveError(f"not B's turn (status {state.status.value})")
    pending = state.pending
    assert pending is not None
    config = state.config
    params = config.params

    if assignments is None:
        previsible, _ = check_previsible(state.board.base, pending, config.d)
        if previsible:
            coloured = extend_colouring(state.board, pending, params)
            record = MoveB(tuple(sorted(
                (member, coloured.colour_of(member)) for member in pending
            )))
            return _answered(state, coloured, record)
        base = Colouring(
            state.board.base.union(pending), config.d, state.board.assignment
        )
        report = oracle_extensions(base, params, limit=1, budget=budget)
        if report.count == 0:
            return replace(
                state,
                status=GameStatus.A_WINS,
                history=state.history + (MoveB(()),),
            )
        witness = report.witnesses[0]
        record = MoveB(tuple(sorted(
            (member, witness.colour_of(member)) for member in pending
        )))
        return _answered(state, witness, record)

    extra = dict(assignments)
    if set(extra) != set(pending):
        raise IllegalMoveError("assignments must cover exactly the presented batch")
    for member, colour in extra.items():
        if not isinstance(colour, int) or not 1 <= colour <= config.d:
            raise IllegalMoveError(f"colour {colour!r} for {member} outside 1..{config.d}")
    merged = dict(state.board.assignment)
    merged.update(extra)
    candidate = Colouring(state.board.base.union(pending), config.d, merged)
    ok, violation = check_homogeneous(candidate, params)
    if not ok:
        raise IllegalMoveError(
            "colouring breaks the balance requirement", violation=violation
        )
    record = MoveB(tuple(sorted(extra.items())))
    return _answered(state, candidate, record)


def concede(state: GameState, actor: str) -> GameState:
    if state.status not in (GameStatus.AWAITING_A, GameStatus.AWAITING_B):
        raise IllegalMoveError(f"game already over (status {state.status.value})")
    if actor == "A":
        return replace(state, status=GameStatus.B_WINS)
    if actor == "B":
        return replace(state, status=GameStatus.A_WINS)
    raise IllegalMoveError(f"unknown actor {actor!r}")


def legal_previsible_extension_exists(state: GameState) -> bool:
    """Whether A has any previsible batch left.

    The whole remaining row is always previsible: adding every missing leaf
    makes both children of any parent carry equally many touched leaves, so
    no light/heavy split can arise.  A previsible batch therefore exists
    exactly while the board has room.
    """
    return not state.board_full


def random_previsible_move(
    state: GameState, rng: random.Random, tries: int = 32
) -> IntervalSet:
    """A random batch that passes the previsibility check (full complement as fallback)."""
    if state.board_full:
        raise PreconditionError("board is full, no batch available")
    config = state.config
    complement = IntervalSet.full(config.j).difference(state.board.base)
    pool = list(complement)
    for _ in range(tries):
        size = rng.randrange(1, len(pool) + 1)
        batch = IntervalSet.from_intervals(config.j, rng.sample(pool, size))
        ok, _ = check_previsible(state.board.base, batch, config.d)
        if ok:
            return batch
    return complement


def hint_A(
    state: GameState,
    rng: Optional[random.Random] = None,
    *,
    killer_scan_cap: int = 512,
    budget: Optional[int] = None,
) -> Optional[IntervalSet]:
    """Suggest a batch for A, or None when the board is full.

    Scripted games follow their script.  Otherwise the hint scans single
    leaves for one B cannot answer, and falls back to a random previsible
    batch so the game keeps moving.
    """
    if state.status is not GameStatus.AWAITING_A:
        raise IllegalMoveError(f"not A's turn (status {state.status.value})")
    if state.board_full:
        return None
    config = state.config
    next_index = state.stage + 1
    if next_index < len(config.script):
        return config.script[next_index]
    if not config.restricted:
        complement = IntervalSet.full(config.j).difference(state.board.base)
        for member in list(complement)[:killer_scan_cap]:
            batch = IntervalSet.from_intervals(config.j, (member,))
            base = Colouring(
                state.board.base.union(batch), config.d, state.board.assignment
            )
            report = oracle_extensions(base, config.params, limit=1, budget=budget)
            if report.count == 0:
                return batch
    return random_previsible_move(state, rng or random.Random(0))


def replay(config: GameConfig, moves: Tuple[Move, ...], *, budget: Optional[int] = None) -> GameState:
    """Re-run a recorded move list from scratch, enforcing every rule again."""
    state = new_game(config)
    for move in moves:
        if isinstance(move, MoveA):
            state = apply_move_A(state, move.intervals)
        elif isinstance(move, MoveB):
            if move.assignment:
                state = respond_B(state, dict(move.assignment), budget=budget)
            else:
                # recorded concession by search: re-run the engine and demand
                # it still finds nothing
                state = respond_B(state, budget=budget)
                if state.status is not GameStatus.A_WINS:
                    raise PreconditionError(
                        "recorded no-answer move, but an answer exists on replay"
                    )
        else:
            raise PreconditionError(f"unknown move record {move!r}")
    return state
