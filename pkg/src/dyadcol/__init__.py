"""Balanced colourings of dyadic interval collections.

The package answers four questions about finite collections of same-length
dyadic intervals: whether a colouring is balance-checked at every scale
(``check_homogeneous``), whether an enlargement is tame enough to colour
constructively (``check_previsible``), how to produce such a colouring
(``colour_modulo_d``, ``extend_colouring``), and how badly things break when
the enlargement is adversarial (``adversary`` module, duel in ``game``).
"""

from .adversary import (
    ChainSpec,
    CounterexampleReport,
    StageFamily,
    build_counterexample,
    game_script,
    previsibility_profile,
    random_chain_spec,
    verify_counterexample,
)
from .colourer import CaseLabel, dispatch_case, extend_colouring
from .criteria import (
    HOM1,
    HOM2,
    PREVIS,
    Violation,
    check_homogeneous,
    check_previsible,
    colour_modulo_d,
)
from .errors import (
    BudgetExceededError,
    DyadcolError,
    IllegalMoveError,
    InternalBreachError,
    PreconditionError,
)
from .game import (
    GameConfig,
    GameState,
    GameStatus,
    MoveA,
    MoveB,
    apply_move_A,
    concede,
    hint_A,
    legal_previsible_extension_exists,
    new_game,
    random_previsible_move,
    replay,
    respond_B,
)
from .intervals import (
    MAX_LEVEL,
    Colouring,
    CountTable,
    DyadicInterval,
    HomogeneityParams,
    IntervalSet,
    aggregate_counts,
    count_table,
)
from .oracle import (
    DEFAULT_BUDGET,
    ExtensionReport,
    budget_from_env,
    canonicalize,
    oracle_extensions,
)

__version__ = "0.1.0"

__all__ = [
    "MAX_LEVEL",
    "DEFAULT_BUDGET",
    "HOM1",
    "HOM2",
    "PREVIS",
    "DyadicInterval",
    "IntervalSet",
    "HomogeneityParams",
    "Colouring",
    "CountTable",
    "aggregate_counts",
    "count_table",
    "Violation",
    "check_homogeneous",
    "check_previsible",
    "colour_modulo_d",
    "CaseLabel",
    "dispatch_case",
    "extend_colouring",
    "ExtensionReport",
    "budget_from_env",
    "canonicalize",
    "oracle_extensions",
    "ChainSpec",
    "StageFamily",
    "CounterexampleReport",
    "build_counterexample",
    "game_script",
    "previsibility_profile",
    "random_chain_spec",
    "verify_counterexample",
    "GameConfig",
    "GameState",
    "GameStatus",
    "MoveA",
    "MoveB",
    "new_game",
    "apply_move_A",
    "respond_B",
    "concede",
    "hint_A",
    "legal_previsible_extension_exists",
    "random_previsible_move",
    "replay",
    "DyadcolError",
    "PreconditionError",
    "BudgetExceededError",
    "IllegalMoveError",
    "InternalBreachError",
]
