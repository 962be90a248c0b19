"""Board pictures: one row per level, leaves filled by colour.

Pure file output (Agg backend), no interactive windows.  Boards beyond level
12 are refused rather than rendered into invisibility.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.patches import Patch, Rectangle

from .criteria import Violation
from .errors import PreconditionError
from .game import GameState
from .intervals import Colouring, IntervalSet

MAX_RENDER_LEVEL = 12

_GRID = "#cccccc"
_UNCOLOURED_FACE = "#e8e8e8"
_PENDING_EDGE = "#e07b00"
_VIOLATION_EDGE = "#c00000"


def colour_palette(d: int) -> List[tuple]:
    if d <= 10:
        cmap = matplotlib.colormaps["tab10"]
        return [cmap(i) for i in range(d)]
    cmap = matplotlib.colormaps["hsv"]
    return [cmap(i / d) for i in range(d)]


def render_board(
    colouring: Colouring,
    path: str,
    *,
    pending: Optional[IntervalSet] = None,
    violation: Optional[Violation] = None,
    title: Optional[str] = None,
    eta: Optional[Fraction] = None,
) -> str:
    j = colouring.base.level
    if j > MAX_RENDER_LEVEL:
        raise PreconditionError(
            f"rendering capped at level {MAX_RENDER_LEVEL}, got {j}"
        )
    d = colouring.d
    palette = colour_palette(d)

    fig_width = min(14.0, max(6.0, (1 << j) * 0.35))
    fig_height = max(2.5, (j + 1) * 0.55 + 1.2)
    fig, ax = plt.subplots(figsize=(fig_width, fig_height))

    # grid of all intervals, root row on top
    for level in range(j + 1):
        y = j - level
        width = 1.0 / (1 << level)
        for k in range(1 << level):
            ax.add_patch(Rectangle(
                (k * width, y), width, 0.8,
                facecolor="none", edgecolor=_GRID, linewidth=0.6,
            ))

    leaf_width = 1.0 / (1 << j)
    for member in colouring.base:
        x = member.index * leaf_width
        colour = colouring.assignment.get(member)
        if colour is None:
            ax.add_patch(Rectangle(
                (x, 0), leaf_width, 0.8,
                facecolor=_UNCOLOURED_FACE, edgecolor="#888888",
                hatch="//", linewidth=0.8,
            ))
        else:
            ax.add_patch(Rectangle(
                (x, 0), leaf_width, 0.8,
                facecolor=palette[colour - 1], edgecolor="#333333", linewidth=0.8,
            ))

    if pending is not None:
        for member in pending:
            x = member.index * leaf_width
            ax.add_patch(Rectangle(
                (x, 0), leaf_width, 0.8,
                facecolor="none", edgecolor=_PENDING_EDGE,
                hatch="xx", linewidth=1.4,
            ))

    if violation is not None:
        target = violation.testing_interval
        width = 1.0 / (1 << target.level)
        ax.add_patch(Rectangle(
            (target.index * width, j - target.level), width, 0.8,
            facecolor="none", edgecolor=_VIOLATION_EDGE, linewidth=2.2,
        ))

    handles = [
        Patch(facecolor=palette[c], edgecolor="#333333", label=f"colour {c + 1}")
        for c in range(d)
    ]
    if pending is not None and len(pending):
        handles.append(Patch(
            facecolor="none", edgecolor=_PENDING_EDGE, hatch="xx", label="pending"
        ))
    if violation is not None:
        handles.append(Patch(
            facecolor="none", edgecolor=_VIOLATION_EDGE, label=violation.kind
        ))
    ax.legend(handles=handles, loc="upper left", bbox_to_anchor=(1.01, 1.0),
              fontsize=8, frameon=False)

    ax.set_xlim(-0.01, 1.01)
    ax.set_ylim(-0.3, j + 1.1)
    ax.set_yticks([j - level for level in range(j + 1)])
    ax.set_yticklabels([f"level {level}" for level in range(j + 1)], fontsize=8)
    ax.set_xticks([0, 0.25, 0.5, 0.75, 1.0])
    ax.tick_params(axis="x", labelsize=8)
    if title is None:
        title = f"level-{j} board, {d} colours"
        if eta is not None:
            title += f", ratio {eta.numerator}/{eta.denominator}"
    ax.set_title(title, fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def render_game(state: GameState, path: str, *, title: Optional[str] = None) -> str:
    if title is None:
        title = (
            f"stage {state.stage}, {state.status.value}, "
            f"{len(state.board.base)}/{1 << state.config.j} leaves"
        )
    return render_board(
        state.board, path,
        pending=state.pending, title=title, eta=state.config.eta,
    )


def render_stages(
    colourings: Sequence[Colouring],
    directory: str,
    *,
    prefix: str = "stage",
    eta: Optional[Fraction] = None,
) -> List[str]:
    """One PNG per colouring, numbered; returns the written paths."""
    import os

    paths = []
    for k, colouring in enumerate(colourings):
        path = os.path.join(directory, f"{prefix}_{k:02d}.png")
        render_board(colouring, path, eta=eta, title=f"{prefix} {k}")
        paths.append(path)
    return paths
