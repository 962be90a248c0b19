"""HTTP front door for the duel engine.

Each game lives in memory under a short id, guarded by its own lock.  When a
game is configured with an engine opponent, posting A's batch advances the
game through B's reply in the same request, so the response always shows a
state where it is A's turn again (or the game is over).
"""

from __future__ import annotations

import threading
import uuid
from collections import OrderedDict
from typing import Any, Dict, Optional, Tuple

from fastapi import Body, FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .errors import BudgetExceededError, IllegalMoveError, PreconditionError
from .game import GameState, GameStatus, apply_move_A, concede, hint_A, new_game, respond_B
from .intervals import IntervalSet
from .jsonio import (
    config_from_json,
    interval_from_json,
    interval_to_json,
    snapshot_to_json,
    state_hash,
    violation_to_json,
)
from .oracle import budget_from_env

MAX_GAMES = 512


class SessionStore:
    """In-memory game table with per-game locks and oldest-first eviction."""

    def __init__(self, max_games: int = MAX_GAMES):
        self._games: "OrderedDict[str, Tuple[GameState, threading.RLock]]" = OrderedDict()
        self._table_lock = threading.Lock()
        self._max_games = max_games

    def create(self, state: GameState) -> str:
        game_id = uuid.uuid4().hex[:12]
        with self._table_lock:
            while len(self._games) >= self._max_games:
                self._evict_locked()
            self._games[game_id] = (state, threading.RLock())
        return game_id

    def _evict_locked(self) -> None:
        for gid, (state, _) in self._games.items():
            if state.status in (GameStatus.A_WINS, GameStatus.B_WINS):
                del self._games[gid]
                return
        self._games.popitem(last=False)

    def lock_for(self, game_id: str) -> threading.RLock:
        with self._table_lock:
            entry = self._games.get(game_id)
        if entry is None:
            raise KeyError(game_id)
        return entry[1]

    def get(self, game_id: str) -> GameState:
        with self._table_lock:
            entry = self._games.get(game_id)
        if entry is None:
            raise KeyError(game_id)
        return entry[0]

    def put(self, game_id: str, state: GameState) -> None:
        with self._table_lock:
            entry = self._games.get(game_id)
            if entry is None:
                raise KeyError(game_id)
            self._games[game_id] = (state, entry[1])

    def __len__(self) -> int:
        with self._table_lock:
            return len(self._games)


def _payload(state: GameState, game_id: str) -> Dict[str, Any]:
    body = snapshot_to_json(state)
    body["game_id"] = game_id
    body["state_hash"] = state_hash(state)
    return body


def create_app(store: Optional[SessionStore] = None) -> FastAPI:
    app = FastAPI(title="dyadcol duel service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    games = store if store is not None else SessionStore()
    app.state.store = games
    budget = budget_from_env()

    @app.exception_handler(IllegalMoveError)
    async def _illegal(request: Request, exc: IllegalMoveError):
        detail: Dict[str, Any] = {"detail": str(exc), "violation": None}
        if exc.violation is not None:
            detail["violation"] = violation_to_json(exc.violation)
        return JSONResponse(status_code=409, content=detail)

    @app.exception_handler(PreconditionError)
    async def _bad_input(request: Request, exc: PreconditionError):
        detail: Dict[str, Any] = {"detail": str(exc), "violation": None}
        if exc.violation is not None:
            detail["violation"] = violation_to_json(exc.violation)
        return JSONResponse(status_code=422, content=detail)

    @app.exception_handler(BudgetExceededError)
    async def _too_big(request: Request, exc: BudgetExceededError):
        return JSONResponse(status_code=503, content={"detail": str(exc)})

    @app.exception_handler(KeyError)
    async def _missing(request: Request, exc: KeyError):
        return JSONResponse(status_code=404, content={"detail": "no such game"})

    @app.get("/health")
    def health() -> Dict[str, Any]:
        return {"status": "ok", "games": len(games)}

    @app.post("/games", status_code=201)
    def create_game(payload: Dict[str, Any] = Body(...)) -> Dict[str, Any]:
        config = config_from_json(payload)
        state = new_game(config)
        game_id = games.create(state)
        return _payload(state, game_id)

    @app.get("/games/{game_id}")
    def get_game(game_id: str) -> Dict[str, Any]:
        return _payload(games.get(game_id), game_id)

    @app.post("/games/{game_id}/moves")
    def post_move(game_id: str, payload: Dict[str, Any] = Body(...)) -> Dict[str, Any]:
        lock = games.lock_for(game_id)
        with lock:
            state = games.get(game_id)
            entries = payload.get("intervals")
            if not isinstance(entries, list):
                raise PreconditionError("body must carry an 'intervals' list")
            batch = IntervalSet.from_intervals(
                state.config.j, [interval_from_json(entry) for entry in entries]
            )
            state = apply_move_A(state, batch)
            if state.config.engine_b and state.status is GameStatus.AWAITING_B:
                state = respond_B(state, budget=budget)
            games.put(game_id, state)
        return _payload(state, game_id)

    @app.post("/games/{game_id}/colourings")
    def post_colouring(game_id: str, payload: Dict[str, Any] = Body(...)) -> Dict[str, Any]:
        lock = games.lock_for(game_id)
        with lock:
            state = games.get(game_id)
            entries = payload.get("assignment")
            if not isinstance(entries, list):
                raise PreconditionError("body must carry an 'assignment' list")
            assignments = {}
            for entry in entries:
                member = interval_from_json(entry)
                colour = entry.get("colour")
                if not isinstance(colour, int) or isinstance(colour, bool):
                    raise PreconditionError(f"missing or bad colour on {entry!r}")
                assignments[member] = colour
            state = respond_B(state, assignments, budget=budget)
            games.put(game_id, state)
        return _payload(state, game_id)

    @app.get("/games/{game_id}/hint")
    def get_hint(game_id: str) -> Dict[str, Any]:
        lock = games.lock_for(game_id)
        with lock:
            state = games.get(game_id)
            batch = hint_A(state, budget=budget)
        if batch is None:
            return {"intervals": None}
        return {"intervals": [interval_to_json(member) for member in batch]}

    @app.post("/games/{game_id}/concede")
    def post_concede(game_id: str, payload: Dict[str, Any] = Body(...)) -> Dict[str, Any]:
        actor = payload.get("actor")
        if actor not in ("A", "B"):
            raise PreconditionError("actor must be 'A' or 'B'")
        lock = games.lock_for(game_id)
        with lock:
            state = concede(games.get(game_id), actor)
            games.put(game_id, state)
        return _payload(state, game_id)

    return app
