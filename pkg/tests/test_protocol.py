import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gsdsim.circuit import int_to_bits, leaf_delay, parity_route
from gsdsim.optics import StageNoise
from gsdsim.protocol import (
    Agent,
    Click,
    DetectorAssignment,
    check_win,
    decode_clicker,
    decode_silent,
    decode_timed,
    level_parity_assignment,
    play_round,
    run_game,
    single_alice_assignment,
    two_detector_assignment,
)

from conftest import all_bits


class TestAssignment:
    def test_pattern_roundtrip(self):
        a = DetectorAssignment.from_pattern("A,B,B,A")
        assert a.pattern == "ABBA" and a.n == 2 and a.m == 2
        assert a.leaves_of(Agent.ALICE) == (1, 4)

    def test_rejects_bad_size(self):
        with pytest.raises(ValueError):
            DetectorAssignment.from_pattern("ABA")
        with pytest.raises(ValueError):
            DetectorAssignment.from_pattern("AXBB")

    @pytest.mark.parametrize("n, k, alice, bob", [
        (2, 1, (3, 4), (1, 2)),
        (2, 2, (2, 4), (1, 3)),
        (1, 1, (2,), (1,)),
    ])
    def test_level_parity(self, n, k, alice, bob):
        a = level_parity_assignment(n, k)
        assert a.leaves_of(Agent.ALICE) == alice
        assert a.leaves_of(Agent.BOB) == bob

    @pytest.mark.parametrize("n", [1, 3, 5])
    def test_level_parity_balanced(self, n):
        for k in range(1, n + 1):
            assert level_parity_assignment(n, k).m == 1 << (n - 1)

    def test_level_parity_range(self):
        with pytest.raises(ValueError):
            level_parity_assignment(2, 3)

    def test_single_alice(self):
        a = single_alice_assignment(3)
        assert a.leaves_of(Agent.ALICE) == (1,) and a.m == 7


class TestRunGame:
    def test_sd_game(self):
        out = run_game("0", "0", level_parity_assignment(1, 1))
        assert out.result.owner is Agent.ALICE
        assert out.alice_view.clicked and not out.bob_view.clicked

    @pytest.mark.parametrize("pattern", ["AAAA", "ABBA", "BBBB"])
    def test_xor_leaf(self, pattern):
        out = run_game("10", "01", DetectorAssignment.from_pattern(pattern))
        assert out.result.leaf == 1
        assert out.result.delay == leaf_delay(2, 1)

    def test_total_loss(self):
        out = run_game("10", "01", level_parity_assignment(2, 1),
                       StageNoise(loss_per_stage=1.0), np.random.default_rng(0))
        assert out.lost
        assert not out.alice_view.clicked and not out.bob_view.clicked

    def test_noisy_run_needs_rng(self):
        with pytest.raises(ValueError):
            run_game("1", "1", level_parity_assignment(1, 1), StageNoise(0.1))

    def test_sampled_loss_rate(self):
        rng = np.random.default_rng(11)
        a = level_parity_assignment(3, 2)
        noise = StageNoise(loss_per_stage=0.1)
        lost = sum(run_game("010", "111", a, noise, rng).lost for _ in range(4000))
        p = 1 - 0.9 ** 3
        assert abs(lost / 4000 - p) < 4 * math.sqrt(p * (1 - p) / 4000)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_exactly_one_click(self, n):
        a = DetectorAssignment(tuple(Agent(i % 3 == 0) for i in range(1 << n)))
        for x in all_bits(n):
            for y in all_bits(n):
                out = run_game(x, y, a)
                assert isinstance(out.result, Click)
                assert out.alice_view.clicked != out.bob_view.clicked
                assert out.view(out.result.owner).clicked


class TestDecode:
    def test_even_leaf(self):
        assert decode_clicker(4, "01") == (0, 1)

    def test_odd_leaf(self):
        assert decode_clicker(1, "01") == (1, 0)

    def test_three_levels(self):
        # inverse of parity_route("101", "011") == leaf 2
        assert decode_clicker(2, "101") == (0, 1, 1)

    @pytest.mark.parametrize("n", range(1, 7))
    def test_round_trip(self, n):
        for x in all_bits(n):
            for y in all_bits(n):
                assert decode_clicker(parity_route(x, y)[1], y) == x

    def test_case7_alice_click(self):
        a = DetectorAssignment.from_pattern("ABBB")
        k = decode_silent(a, "01", Agent.BOB)
        assert len(k.compatible) == 1 and k.bits_gained == 2.0

    def test_case8_alice_click(self):
        a = DetectorAssignment.from_pattern("BAAA")
        k = decode_silent(a, "01", Agent.BOB)
        assert len(k.compatible) == 3
        assert k.bits_gained == pytest.approx(2 - math.log2(3), abs=1e-12)

    def test_case1_bob_learns_first_parity(self):
        a = DetectorAssignment.from_pattern("AABB")
        k = decode_silent(a, "00", "Bob")
        assert k.bits_gained == 1.0
        # x1 != y1 for every compatible x
        assert all(s[0] == 1 for s in k.compatible)

    def test_all_leaves_rejected(self):
        with pytest.raises(ValueError):
            decode_silent(DetectorAssignment.from_pattern("AAAA"), "00", Agent.ALICE)

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_silence_consistency(self, n):
        rng = np.random.default_rng(n)
        a = DetectorAssignment(tuple(Agent(int(b)) for b in rng.integers(0, 2, 1 << n)))
        if a.m in (0, 1 << n):
            a = level_parity_assignment(n, 1)
        for x in all_bits(n):
            for y in all_bits(n):
                click = run_game(x, y, a).result
                silent = click.owner.other
                own, truth = (y, x) if silent is Agent.BOB else (x, y)
                assert truth in decode_silent(a, own, silent).compatible

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_level_parity_gives_one_bit(self, n):
        for k in range(1, n + 1):
            a = level_parity_assignment(n, k)
            for x in all_bits(n):
                for y in all_bits(n):
                    r = play_round(x, y, a)
                    assert r.silent_knowledge.bits_gained == pytest.approx(1.0, abs=1e-12)
                    assert r.win

    @pytest.mark.parametrize("n", range(1, 6))
    def test_timed_decode_matches_leaf_decode(self, n):
        a = two_detector_assignment(n)
        for x in all_bits(n):
            for y in all_bits(n):
                click = run_game(x, y, a).result
                own = x if click.owner is Agent.ALICE else y
                assert decode_timed(click.owner, click.delay, own) == decode_clicker(click.leaf, own)


class TestWin:
    def test_single_alice_win_when_alice_clicks(self):
        a = single_alice_assignment(3)
        r = play_round("101", "010", a)  # all odd -> leaf 1
        assert r.outcome.result.owner is Agent.ALICE
        assert r.win and r.silent_knowledge.exact

    def test_single_alice_no_win_when_bob_clicks(self):
        a = single_alice_assignment(3)
        r = play_round("000", "000", a)
        assert r.outcome.result.owner is Agent.BOB
        assert r.silent_knowledge.bits_gained == pytest.approx(3 - math.log2(7), abs=1e-12)
        assert not r.win

    def test_lost_never_wins(self):
        a = level_parity_assignment(2, 1)
        r = play_round("00", "11", a, StageNoise(1.0), np.random.default_rng(0))
        assert not r.win and r.clicker_decode is None
        assert not check_win(r.outcome, None, None, None)

    def test_record(self):
        rec = play_round("10", "01", level_parity_assignment(2, 2)).to_dict()
        assert rec["leaf"] == 1 and rec["owner"] == "Bob" and rec["clicker_decode"] == "10"

    @settings(max_examples=50, deadline=None)
    @given(n=st.integers(1, 6), xv=st.integers(0, 63), yv=st.integers(0, 63), k=st.integers(1, 6))
    def test_level_parity_always_wins(self, n, xv, yv, k):
        k = min(k, n)
        x = int_to_bits(xv % (1 << n), n)
        y = int_to_bits(yv % (1 << n), n)
        assert play_round(x, y, level_parity_assignment(n, k)).win
