"""Command line front end.

Machine-readable JSON goes to stdout, diagnostics to stderr.  Exit codes:
0 for success / a passing check, 1 for a failing check or an empty search,
2 for bad usage, bad input, or a blown search budget.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import random
import sys
from fractions import Fraction
from typing import Any, Dict, List, Optional

from .adversary import (
    ChainSpec,
    build_counterexample,
    game_script,
    previsibility_profile,
    random_chain_spec,
    verify_counterexample,
)
from .colourer import extend_colouring
from .criteria import check_homogeneous, check_previsible, colour_modulo_d
from .errors import BudgetExceededError, IllegalMoveError, PreconditionError
from .game import (
    GameConfig,
    GameState,
    GameStatus,
    MoveA,
    apply_move_A,
    new_game,
    random_previsible_move,
    replay,
    respond_B,
)
from .intervals import Colouring, IntervalSet
from .jsonio import (
    canonical_dumps,
    collection_from_json,
    colouring_from_json,
    colouring_to_json,
    state_hash,
    transcript_from_json,
    transcript_to_json,
    violation_to_json,
)
from .oracle import budget_from_env, oracle_extensions
from .render import MAX_RENDER_LEVEL, render_board, render_game


def _read_json(path: str) -> Any:
    if path == "-":
        return json.load(sys.stdin)
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)


def _emit(obj: Any) -> None:
    print(json.dumps(obj, sort_keys=True))


def _parse_eta(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise PreconditionError(f"cannot parse ratio {text!r}: {exc}") from exc


def _ensure_parent(path: str) -> None:
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)


def _maybe_figure(args: argparse.Namespace) -> Optional[str]:
    figure = getattr(args, "figure", None)
    if figure is not None:
        _ensure_parent(figure)
    return figure


def cmd_check(args: argparse.Namespace) -> int:
    colouring, params = colouring_from_json(_read_json(args.input))
    ok, violation = check_homogeneous(colouring, params)
    out: Dict[str, Any] = {"homogeneous": ok, "violation": None}
    if violation is not None:
        out["violation"] = violation_to_json(violation)
    figure = _maybe_figure(args)
    if figure is not None:
        render_board(colouring, figure, violation=violation, eta=params.eta)
        print(f"figure written to {figure}", file=sys.stderr)
    _emit(out)
    return 0 if ok else 1


def cmd_previsible(args: argparse.Namespace) -> int:
    colouring, params = colouring_from_json(_read_json(args.input))
    coloured = IntervalSet.from_intervals(
        colouring.base.level, list(colouring.assignment)
    )
    fresh = colouring.uncoloured()
    ok, violation = check_previsible(coloured, fresh, params.d)
    out: Dict[str, Any] = {"previsible": ok, "violation": None}
    if violation is not None:
        out["violation"] = violation_to_json(violation)
    figure = _maybe_figure(args)
    if figure is not None:
        base_only = Colouring(coloured, params.d, colouring.assignment)
        render_board(
            base_only, figure, pending=fresh, violation=violation, eta=params.eta
        )
        print(f"figure written to {figure}", file=sys.stderr)
    _emit(out)
    return 0 if ok else 1


def cmd_modd(args: argparse.Namespace) -> int:
    members, params = collection_from_json(_read_json(args.input))
    order = None
    if args.order:
        order = tuple(int(part) for part in args.order.split(","))
    colouring = colour_modulo_d(members, params.d, colour_order=order)
    ok, violation = check_homogeneous(colouring, params)
    out = colouring_to_json(colouring, params.eta)
    out["homogeneous"] = ok
    if violation is not None:
        out["violation"] = violation_to_json(violation)
    figure = _maybe_figure(args)
    if figure is not None:
        render_board(colouring, figure, eta=params.eta)
        print(f"figure written to {figure}", file=sys.stderr)
    _emit(out)
    return 0 if ok else 1


def cmd_colour(args: argparse.Namespace) -> int:
    partial, params = colouring_from_json(_read_json(args.input))
    coloured = IntervalSet.from_intervals(
        partial.base.level, list(partial.assignment)
    )
    base = Colouring(coloured, params.d, partial.assignment)
    fresh = partial.uncoloured()
    result = extend_colouring(base, fresh, params)
    out = colouring_to_json(result, params.eta)
    out["homogeneous"] = True
    figure = _maybe_figure(args)
    if figure is not None:
        render_board(result, figure, eta=params.eta)
        print(f"figure written to {figure}", file=sys.stderr)
    _emit(out)
    return 0


def cmd_oracle(args: argparse.Namespace) -> int:
    partial, params = colouring_from_json(_read_json(args.input))
    budget = args.budget if args.budget is not None else budget_from_env()
    report = oracle_extensions(
        partial,
        params,
        limit=args.limit,
        max_witnesses=args.witnesses,
        budget=budget,
    )
    out: Dict[str, Any] = {
        "count": report.count,
        "capped": report.capped,
        "canonical_count": report.canonical_count,
        "nodes_visited": report.nodes_visited,
        "witnesses": [
            colouring_to_json(witness, params.eta) for witness in report.witnesses
        ],
    }
    _emit(out)
    return 0 if report.count > 0 else 1


def _counterexample_report_json(spec: ChainSpec, report) -> Dict[str, Any]:
    return {
        "spec": {
            "a": spec.a,
            "n": spec.n,
            "j": spec.j,
            "anchor": spec.anchor,
            "i_slots": list(spec.i_slots),
            "j_slots": list(spec.j_slots),
            "d": spec.d,
            "eta": {"num": spec.eta.numerator, "den": spec.eta.denominator},
        },
        "report": {
            "ok": report.ok,
            "stage0_homogeneous": report.stage0_homogeneous,
            "counts_formula_ok": report.counts_formula_ok,
            "boundary_counts": list(report.boundary_table.counts),
            "boundary_weaker_eta_passes": report.boundary_weaker_eta_passes,
            "boundary_target_eta_fails": report.boundary_target_eta_fails,
            "previsibility_profile": list(report.profile),
            "stage0_canonical_count": report.stage0_canonical_count,
            "stage_counts": (
                None if report.stage_counts is None else list(report.stage_counts)
            ),
            "stage_witnesses_forced": report.stage_witnesses_forced,
            "final_count": report.final_count,
        },
    }


def _counterexample_report_dir(family, report, directory: str) -> None:
    os.makedirs(directory, exist_ok=True)
    spec = family.spec
    profile = report.profile
    rows = []
    for k in range(spec.n + 1):
        stage_set = family.stage(k)
        row: Dict[str, Any] = {
            "stage": k,
            "collection_size": len(stage_set),
            "added_level": "" if k == 0 else spec.j,
            "added_index": "" if k == 0 else family.added(k).index,
            "previsible_next": profile[k] if k < len(profile) else "",
        }
        if report.stage_counts is not None and 1 <= k <= spec.n - 1:
            row["extension_count"] = report.stage_counts[k - 1]
        elif report.final_count is not None and k == spec.n:
            row["extension_count"] = report.final_count
        elif report.stage0_canonical_count is not None and k == 0:
            row["extension_count"] = report.stage0_canonical_count
        else:
            row["extension_count"] = ""
        rows.append(row)
    csv_path = os.path.join(directory, "stages.csv")
    with open(csv_path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.DictWriter(handle, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        writer.writerows(rows)

    if spec.j <= MAX_RENDER_LEVEL:
        for k in range(spec.n):
            render_board(
                family.stage_colouring(k),
                os.path.join(directory, f"stage_{k:02d}.png"),
                eta=spec.eta,
                title=f"stage {k}, colourable",
            )
        final = family.stage_colouring(spec.n)
        _, violation = check_homogeneous(final, spec.params)
        render_board(
            final,
            os.path.join(directory, f"stage_{spec.n:02d}.png"),
            eta=spec.eta,
            violation=violation,
            title=f"stage {spec.n}, forced colours fail",
        )
    print(f"report written to {directory}", file=sys.stderr)


def cmd_counterexample(args: argparse.Namespace) -> int:
    if args.seed is not None:
        spec = random_chain_spec(args.a, args.n, args.j, random.Random(args.seed))
    else:
        spec = ChainSpec(a=args.a, n=args.n, j=args.j, anchor=args.anchor)
    family = build_counterexample(spec)
    budget = args.budget if args.budget is not None else budget_from_env()
    report = verify_counterexample(
        family, use_oracle=not args.no_oracle, budget=budget
    )
    if args.report_dir:
        _counterexample_report_dir(family, report, args.report_dir)
    _emit(_counterexample_report_json(spec, report))
    return 0 if report.ok else 1


def _selfplay_report_dir(
    states: List[GameState], directory: str, *, png_cap: int = 64
) -> None:
    os.makedirs(directory, exist_ok=True)
    rows = []
    for idx, state in enumerate(states):
        last = state.history[-1] if state.history else None
        if last is None:
            detail = "start"
            actor = ""
        elif isinstance(last, MoveA):
            actor = "A"
            detail = f"batch of {len(last.intervals)}"
        else:
            actor = "B"
            detail = f"coloured {len(last.assignment)}" if last.assignment else "no answer"
        rows.append({
            "step": idx,
            "actor": actor,
            "detail": detail,
            "status": state.status.value,
            "board_size": len(state.board.base),
        })
    csv_path = os.path.join(directory, "moves.csv")
    with open(csv_path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.DictWriter(handle, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        writer.writerows(rows)
    if states and states[0].config.j <= MAX_RENDER_LEVEL:
        for idx, state in enumerate(states[:png_cap]):
            render_game(state, os.path.join(directory, f"board_{idx:03d}.png"))
    print(f"report written to {directory}", file=sys.stderr)


def _drive_engine_game(
    state: GameState,
    batches,
    *,
    budget: Optional[int],
    collect: List[GameState],
) -> GameState:
    for batch in batches:
        state = apply_move_A(state, batch)
        collect.append(state)
        if state.status is not GameStatus.AWAITING_B:
            break
        state = respond_B(state, budget=budget)
        collect.append(state)
        if state.status in (GameStatus.A_WINS, GameStatus.B_WINS):
            break
    return state


def cmd_selfplay(args: argparse.Namespace) -> int:
    budget = args.budget if args.budget is not None else budget_from_env()
    states: List[GameState] = []

    if args.mode == "scripted":
        if args.seed is not None:
            spec = random_chain_spec(args.a, args.n, args.j, random.Random(args.seed))
        else:
            spec = ChainSpec(a=args.a, n=args.n, j=args.j, anchor=args.anchor)
        family = build_counterexample(spec)
        config = GameConfig(
            j=spec.j, d=spec.d, eta=spec.eta, restricted=False,
            engine_b=True, script=game_script(family),
        )
        state = new_game(config)
        states.append(state)
        state = _drive_engine_game(
            state, config.script, budget=budget, collect=states
        )
        out = transcript_to_json(state)
        out["chain"] = {
            "a": spec.a, "n": spec.n, "j": spec.j, "anchor": spec.anchor,
            "i_slots": list(spec.i_slots), "j_slots": list(spec.j_slots),
        }
        out["previsibility_profile"] = list(previsibility_profile(family))
    elif args.mode == "random":
        config = GameConfig(
            j=args.j, d=args.d, eta=_parse_eta(args.eta),
            restricted=True, engine_b=True,
        )
        rng = random.Random(args.seed if args.seed is not None else 0)
        state = new_game(config)
        states.append(state)
        moves = 0
        while state.status is GameStatus.AWAITING_A:
            if args.max_moves is not None and moves >= args.max_moves:
                break
            batch = random_previsible_move(state, rng)
            state = apply_move_A(state, batch)
            states.append(state)
            state = respond_B(state, budget=budget)
            states.append(state)
            moves += 1
        out = transcript_to_json(state)
        out["capped"] = state.status not in (GameStatus.A_WINS, GameStatus.B_WINS)
    elif args.mode == "replay":
        if not args.transcript:
            raise PreconditionError("replay mode needs --transcript")
        config, moves, declared_status, declared_hash = transcript_from_json(
            _read_json(args.transcript)
        )
        state = replay(config, moves, budget=budget)
        actual_hash = state_hash(state)
        matches = (
            state.status.value == declared_status and actual_hash == declared_hash
        )
        _emit({
            "replayed": True,
            "status": state.status.value,
            "stage": state.stage,
            "state_hash": actual_hash,
            "matches": matches,
        })
        return 0 if matches else 1
    else:  # pragma: no cover - argparse restricts choices
        raise PreconditionError(f"unknown mode {args.mode!r}")

    if args.report_dir:
        _selfplay_report_dir(states, args.report_dir)
    if args.transcript_out:
        _ensure_parent(args.transcript_out)
        with open(args.transcript_out, "w", encoding="utf-8") as handle:
            handle.write(canonical_dumps(out))
        print(f"transcript written to {args.transcript_out}", file=sys.stderr)
    _emit(out)
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dyadcol",
        description="balanced colourings of dyadic interval collections",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_input(p: argparse.ArgumentParser) -> None:
        p.add_argument("--input", "-i", default="-", help="JSON file, - for stdin")

    def add_figure(p: argparse.ArgumentParser) -> None:
        p.add_argument("--figure", help="write a board PNG here")

    def add_budget(p: argparse.ArgumentParser) -> None:
        p.add_argument(
            "--budget", type=int, default=None,
            help="search budget override (env DYAD_BUDGET otherwise)",
        )

    p = sub.add_parser("check", help="test a total colouring for balance")
    add_input(p)
    add_figure(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("previsible", help="test an enlargement for previsibility")
    add_input(p)
    add_figure(p)
    p.set_defaults(func=cmd_previsible)

    p = sub.add_parser("modd", help="colour a collection cyclically left to right")
    add_input(p)
    add_figure(p)
    p.add_argument("--order", help="comma-separated colour permutation, e.g. 2,3,1")
    p.set_defaults(func=cmd_modd)

    p = sub.add_parser("colour", help="extend a colouring over a previsible enlargement")
    add_input(p)
    add_figure(p)
    p.set_defaults(func=cmd_colour)

    p = sub.add_parser("oracle", help="enumerate all balanced total extensions")
    add_input(p)
    add_budget(p)
    p.add_argument("--limit", type=int, default=None, help="stop after this many")
    p.add_argument("--witnesses", type=int, default=8, help="witnesses to keep")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser(
        "counterexample",
        help="build and verify a staged family that defeats a fixed ratio",
    )
    p.add_argument("--a", type=int, required=True, help="colour exponent, d = 2**a")
    p.add_argument("--n", type=int, required=True, help="chain depth, ratio 1/n")
    p.add_argument("--j", type=int, required=True, help="leaf level")
    p.add_argument("--anchor", type=int, default=0, help="index of the innermost chain interval")
    p.add_argument("--seed", type=int, default=None, help="randomise the placement")
    p.add_argument("--no-oracle", action="store_true", help="skip exhaustive counts")
    p.add_argument("--report-dir", help="write stage boards and a CSV here")
    add_budget(p)
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("selfplay", help="drive a complete game")
    p.add_argument(
        "--mode", choices=("scripted", "random", "replay"), default="random"
    )
    p.add_argument("--j", type=int, default=4)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--eta", default="1/2", help="ratio, e.g. 1/2")
    p.add_argument("--a", type=int, default=1, help="scripted: colour exponent")
    p.add_argument("--n", type=int, default=2, help="scripted: chain depth")
    p.add_argument("--anchor", type=int, default=0, help="scripted: chain placement")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--max-moves", type=int, default=None)
    p.add_argument("--transcript", help="replay: transcript JSON to re-run")
    p.add_argument("--transcript-out", help="write the finished transcript here")
    p.add_argument("--report-dir", help="write per-move boards and a CSV here")
    add_budget(p)
    p.set_defaults(func=cmd_selfplay)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8737)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (PreconditionError, IllegalMoveError) as exc:
        out: Dict[str, Any] = {"error": str(exc), "violation": None}
        violation = getattr(exc, "violation", None)
        if violation is not None:
            out["violation"] = violation_to_json(violation)
        _emit(out)
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceededError as exc:
        _emit({"error": str(exc), "violation": None})
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
