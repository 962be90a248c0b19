from fractions import Fraction

import pytest

from dyadcol.criteria import check_homogeneous, check_previsible
from dyadcol.errors import PreconditionError
from dyadcol.game import GameConfig, apply_move_A, new_game
from dyadcol.intervals import Colouring, DyadicInterval, HomogeneityParams, IntervalSet
from dyadcol.render import MAX_RENDER_LEVEL, colour_palette, render_board, render_game, render_stages

HALF = Fraction(1, 2)

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def _is_png(path):
    with open(path, "rb") as handle:
        return handle.read(8) == PNG_MAGIC


class TestRenderBoard:
    def test_total_colouring(self, tmp_path):
        col = Colouring(IntervalSet.from_indices(3, [0, 3, 6]), 2, {
            DyadicInterval(3, 0): 1, DyadicInterval(3, 3): 2,
            DyadicInterval(3, 6): 1,
        })
        out = tmp_path / "board.png"
        render_board(col, str(out), eta=HALF)
        assert _is_png(out)

    def test_partial_with_pending_and_violation(self, tmp_path):
        c = IntervalSet.from_indices(4, [0, 8])
        col = Colouring(c, 2, {DyadicInterval(4, 0): 1, DyadicInterval(4, 8): 2})
        u = IntervalSet.from_indices(4, [4])
        _, violation = check_previsible(c, u, 2)
        out = tmp_path / "pending.png"
        render_board(col, str(out), pending=u, violation=violation)
        assert _is_png(out)

    def test_homogeneity_violation_overlay(self, tmp_path):
        col = Colouring(IntervalSet.from_indices(3, [0, 1]), 2, {
            DyadicInterval(3, 0): 1, DyadicInterval(3, 1): 1,
        })
        _, violation = check_homogeneous(col, HomogeneityParams(HALF, 2))
        out = tmp_path / "violation.png"
        render_board(col, str(out), violation=violation)
        assert _is_png(out)

    def test_level_cap(self, tmp_path):
        col = Colouring(IntervalSet.empty(MAX_RENDER_LEVEL + 1), 2, {})
        with pytest.raises(PreconditionError):
            render_board(col, str(tmp_path / "too_deep.png"))

    def test_empty_board(self, tmp_path):
        col = Colouring(IntervalSet.empty(2), 3, {})
        out = tmp_path / "empty.png"
        render_board(col, str(out))
        assert _is_png(out)


class TestPalette:
    def test_distinct_for_small_d(self):
        for d in (1, 2, 4, 10, 16):
            palette = colour_palette(d)
            assert len(palette) == d
            assert len(set(palette)) == d


class TestGameRendering:
    def test_render_game_with_pending(self, tmp_path):
        state = new_game(GameConfig(j=3, d=2, eta=HALF))
        state = apply_move_A(state, IntervalSet.from_indices(3, [0, 5]))
        out = tmp_path / "game.png"
        render_game(state, str(out))
        assert _is_png(out)

    def test_render_stages(self, tmp_path):
        cols = [
            Colouring(IntervalSet.from_indices(2, [0]), 2, {DyadicInterval(2, 0): 1}),
            Colouring(IntervalSet.from_indices(2, [0, 2]), 2, {
                DyadicInterval(2, 0): 1, DyadicInterval(2, 2): 2,
            }),
        ]
        paths = render_stages(cols, str(tmp_path), eta=HALF)
        assert len(paths) == 2
        for path in paths:
            assert _is_png(path)
