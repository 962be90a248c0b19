import json
from fractions import Fraction

import pytest
from hypothesis import given, settings

from dyadcol.errors import PreconditionError
from dyadcol.game import (
    GameConfig,
    GameStatus,
    MoveB,
    apply_move_A,
    new_game,
    respond_B,
)
from dyadcol.intervals import Colouring, DyadicInterval, HomogeneityParams, IntervalSet
from dyadcol.jsonio import (
    canonical_dumps,
    collection_from_json,
    collection_to_json,
    colouring_from_json,
    colouring_to_json,
    config_from_json,
    config_to_json,
    eta_from_json,
    eta_to_json,
    interval_from_json,
    interval_to_json,
    move_from_json,
    move_to_json,
    snapshot_to_json,
    state_hash,
    transcript_from_json,
    transcript_to_json,
    violation_to_json,
)
from dyadcol.criteria import check_homogeneous

from conftest import total_colourings

HALF = Fraction(1, 2)


class TestPrimitiveCodecs:
    def test_interval_round_trip(self):
        original = DyadicInterval(5, 19)
        assert interval_from_json(interval_to_json(original)) == original

    def test_interval_rejects_garbage(self):
        with pytest.raises(PreconditionError):
            interval_from_json({"level": 3})
        with pytest.raises(PreconditionError):
            interval_from_json({"level": "3", "index": 0})
        with pytest.raises(PreconditionError):
            interval_from_json({"level": True, "index": 0})
        with pytest.raises(PreconditionError):
            interval_from_json({"level": 2, "index": 9})

    def test_eta_round_trip(self):
        assert eta_from_json(eta_to_json(Fraction(2, 5))) == Fraction(2, 5)

    def test_collection_round_trip(self):
        members = IntervalSet.from_indices(4, [1, 7, 12])
        params = HomogeneityParams(Fraction(1, 3), 3)
        doc = collection_to_json(members, params)
        back_members, back_params = collection_from_json(doc)
        assert back_members == members
        assert back_params == params

    def test_collection_level_mismatch(self):
        doc = {"j": 3, "d": 2, "eta": {"num": 1, "den": 2},
               "intervals": [{"level": 2, "index": 0}]}
        with pytest.raises(PreconditionError):
            collection_from_json(doc)


class TestColouringCodec:
    @given(total_colourings(max_j=5, max_d=4))
    @settings(max_examples=60)
    def test_round_trip_total(self, colouring):
        doc = colouring_to_json(colouring, HALF)
        back, params = colouring_from_json(doc)
        assert back == colouring
        assert params.eta == HALF

    def test_partial_members_keep_their_gap(self):
        base = IntervalSet.from_indices(3, [0, 2, 5])
        partial = Colouring(base, 2, {DyadicInterval(3, 0): 1})
        doc = colouring_to_json(partial, HALF)
        coloured_entries = [e for e in doc["intervals"] if "colour" in e]
        assert len(coloured_entries) == 1
        back, _ = colouring_from_json(doc)
        assert back == partial
        assert list(back.uncoloured().indices) == [2, 5]

    def test_duplicate_members_rejected(self):
        doc = {"j": 2, "d": 2, "eta": {"num": 1, "den": 2}, "intervals": [
            {"level": 2, "index": 1, "colour": 1},
            {"level": 2, "index": 1},
        ]}
        with pytest.raises(PreconditionError):
            colouring_from_json(doc)


class TestViolationCodec:
    def test_shape(self):
        col = Colouring(IntervalSet.from_indices(2, [0, 1]), 2, {
            DyadicInterval(2, 0): 1, DyadicInterval(2, 1): 1,
        })
        _, violation = check_homogeneous(col, HomogeneityParams(HALF, 2))
        doc = violation_to_json(violation)
        assert doc["kind"] == "HOM1"
        assert doc["testing_interval"] == {"level": 0, "index": 0}
        json.dumps(doc)  # fully serialisable


class TestGameCodecs:
    def _finished_game(self):
        config = GameConfig(j=2, d=2, eta=HALF)
        state = new_game(config)
        state = apply_move_A(state, IntervalSet.from_indices(2, [0, 3]))
        state = respond_B(state)
        return state

    def test_move_round_trip(self):
        state = self._finished_game()
        for move in state.history:
            doc = move_to_json(move)
            assert move_from_json(doc, 2) == move

    def test_no_answer_marker_round_trips(self):
        move = MoveB(())
        assert move_from_json(move_to_json(move), 3) == move

    def test_config_round_trip(self):
        config = GameConfig(
            j=4, d=2, eta=HALF, restricted=True, engine_b=False,
            script=(IntervalSet.from_indices(4, [0, 8]),
                    IntervalSet.from_indices(4, [4])),
        )
        assert config_from_json(config_to_json(config)) == config

    def test_snapshot_shape(self):
        state = self._finished_game()
        doc = snapshot_to_json(state)
        assert doc["status"] == GameStatus.AWAITING_A.value
        assert doc["stage"] == 0
        assert doc["pending"] is None
        assert len(doc["moves"]) == 2
        assert len(doc["board"]["intervals"]) == 2
        json.dumps(doc)

    def test_state_hash_stable_and_distinct(self):
        a = self._finished_game()
        b = self._finished_game()
        assert state_hash(a) == state_hash(b)
        other = apply_move_A(a, IntervalSet.from_indices(2, [1]))
        assert state_hash(other) != state_hash(a)

    def test_transcript_round_trip(self):
        state = self._finished_game()
        doc = transcript_to_json(state)
        config, moves, status, declared = transcript_from_json(doc)
        assert config == state.config
        assert moves == state.history
        assert status == state.status.value
        assert declared == state_hash(state)


class TestCanonicalDumps:
    def test_key_order_fixed(self):
        assert canonical_dumps({"b": 1, "a": 2}) == '{"a":2,"b":1}'
