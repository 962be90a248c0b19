"""JSON codecs for every wire shape the CLI and the service speak.

One envelope everywhere: an interval is ``{"level", "index"}`` (plus
``"colour"`` when assigned), a collection is ``{"j", "d", "eta", "intervals"}``
with ``eta`` as ``{"num", "den"}``.  A partial colouring is the same envelope
with the coloured members carrying ``"colour"`` and the rest omitting it.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from .criteria import Violation
from .errors import PreconditionError
from .game import GameConfig, GameState, Move, MoveA, MoveB
from .intervals import Colouring, DyadicInterval, HomogeneityParams, IntervalSet


def canonical_dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _require(obj: Dict[str, Any], key: str) -> Any:
    if key not in obj:
        raise PreconditionError(f"missing field {key!r}")
    return obj[key]


def _int_field(obj: Dict[str, Any], key: str) -> int:
    value = _require(obj, key)
    if isinstance(value, bool) or not isinstance(value, int):
        raise PreconditionError(f"field {key!r} must be an integer, got {value!r}")
    return value


def interval_to_json(interval: DyadicInterval) -> Dict[str, int]:
    return {"level": interval.level, "index": interval.index}


def interval_from_json(obj: Dict[str, Any]) -> DyadicInterval:
    return DyadicInterval(_int_field(obj, "level"), _int_field(obj, "index"))


def eta_to_json(eta: Fraction) -> Dict[str, int]:
    return {"num": eta.numerator, "den": eta.denominator}


def eta_from_json(obj: Dict[str, Any]) -> Fraction:
    return Fraction(_int_field(obj, "num"), _int_field(obj, "den"))


def collection_to_json(
    members: IntervalSet, params: HomogeneityParams
) -> Dict[str, Any]:
    return {
        "j": members.level,
        "d": params.d,
        "eta": eta_to_json(params.eta),
        "intervals": [interval_to_json(member) for member in members],
    }


def collection_from_json(obj: Dict[str, Any]) -> Tuple[IntervalSet, HomogeneityParams]:
    j = _int_field(obj, "j")
    params = HomogeneityParams(eta_from_json(_require(obj, "eta")), _int_field(obj, "d"))
    members = [interval_from_json(entry) for entry in _require(obj, "intervals")]
    for member in members:
        if member.level != j:
            raise PreconditionError(
                f"interval at level {member.level} in a level-{j} collection"
            )
    return IntervalSet.from_intervals(j, members), params


def colouring_to_json(colouring: Colouring, eta: Fraction) -> Dict[str, Any]:
    intervals: List[Dict[str, int]] = []
    for member in colouring.base:
        entry = interval_to_json(member)
        colour = colouring.assignment.get(member)
        if colour is not None:
            entry["colour"] = colour
        intervals.append(entry)
    return {
        "j": colouring.base.level,
        "d": colouring.d,
        "eta": eta_to_json(eta),
        "intervals": intervals,
    }


def colouring_from_json(obj: Dict[str, Any]) -> Tuple[Colouring, HomogeneityParams]:
    j = _int_field(obj, "j")
    d = _int_field(obj, "d")
    params = HomogeneityParams(eta_from_json(_require(obj, "eta")), d)
    members = []
    assignment: Dict[DyadicInterval, int] = {}
    for entry in _require(obj, "intervals"):
        member = interval_from_json(entry)
        if member.level != j:
            raise PreconditionError(
                f"interval at level {member.level} in a level-{j} collection"
            )
        members.append(member)
        if "colour" in entry:
            assignment[member] = _int_field(entry, "colour")
    base = IntervalSet.from_intervals(j, members)
    if len(base) != len(members):
        raise PreconditionError("duplicate intervals in colouring")
    return Colouring(base, d, assignment), params


def violation_to_json(violation: Violation) -> Dict[str, Any]:
    return {
        "kind": violation.kind,
        "testing_interval": interval_to_json(violation.testing_interval),
        "detail": dict(violation.detail),
    }


def move_to_json(move: Move) -> Dict[str, Any]:
    if isinstance(move, MoveA):
        return {
            "actor": "A",
            "intervals": [interval_to_json(member) for member in move.intervals],
        }
    if isinstance(move, MoveB):
        return {
            "actor": "B",
            "assignment": [
                {**interval_to_json(member), "colour": colour}
                for member, colour in move.assignment
            ],
        }
    raise PreconditionError(f"unknown move {move!r}")


def move_from_json(obj: Dict[str, Any], j: int) -> Move:
    actor = _require(obj, "actor")
    if actor == "A":
        members = [interval_from_json(entry) for entry in _require(obj, "intervals")]
        return MoveA(IntervalSet.from_intervals(j, members))
    if actor == "B":
        pairs = []
        for entry in _require(obj, "assignment"):
            pairs.append((interval_from_json(entry), _int_field(entry, "colour")))
        return MoveB(tuple(sorted(pairs)))
    raise PreconditionError(f"unknown actor {actor!r}")


def config_to_json(config: GameConfig) -> Dict[str, Any]:
    return {
        "j": config.j,
        "d": config.d,
        "eta": eta_to_json(config.eta),
        "restricted": config.restricted,
        "engine_b": config.engine_b,
        "script": [
            [interval_to_json(member) for member in batch] for batch in config.script
        ],
    }


def config_from_json(obj: Dict[str, Any]) -> GameConfig:
    j = _int_field(obj, "j")
    script = tuple(
        IntervalSet.from_intervals(j, [interval_from_json(e) for e in batch])
        for batch in obj.get("script", [])
    )
    restricted = obj.get("restricted", False)
    engine_b = obj.get("engine_b", True)
    if not isinstance(restricted, bool) or not isinstance(engine_b, bool):
        raise PreconditionError("restricted and engine_b must be booleans")
    return GameConfig(
        j=j,
        d=_int_field(obj, "d"),
        eta=eta_from_json(_require(obj, "eta")),
        restricted=restricted,
        engine_b=engine_b,
        script=script,
    )


def snapshot_to_json(state: GameState) -> Dict[str, Any]:
    pending: Optional[List[Dict[str, int]]] = None
    if state.pending is not None:
        pending = [interval_to_json(member) for member in state.pending]
    return {
        "config": config_to_json(state.config),
        "status": state.status.value,
        "stage": state.stage,
        "board": colouring_to_json(state.board, state.config.eta),
        "pending": pending,
        "moves": [move_to_json(move) for move in state.history],
    }


def state_hash(state: GameState) -> str:
    return hashlib.sha256(canonical_dumps(snapshot_to_json(state)).encode()).hexdigest()


def transcript_to_json(state: GameState) -> Dict[str, Any]:
    return {
        "config": config_to_json(state.config),
        "moves": [move_to_json(move) for move in state.history],
        "status": state.status.value,
        "stage": state.stage,
        "state_hash": state_hash(state),
    }


def transcript_from_json(
    obj: Dict[str, Any]
) -> Tuple[GameConfig, Tuple[Move, ...], str, str]:
    """Returns (config, moves, declared status, declared state hash)."""
    config = config_from_json(_require(obj, "config"))
    moves = tuple(move_from_json(entry, config.j) for entry in _require(obj, "moves"))
    return config, moves, _require(obj, "status"), _require(obj, "state_hash")
