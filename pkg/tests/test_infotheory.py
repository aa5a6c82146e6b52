import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, strategies as st

from gsdsim.circuit import parity_route
from gsdsim.infotheory import (
    analytic_H_B,
    analytic_total,
    click_probability,
    enumerate_gains,
    observation_entropy,
    optimal_m,
    shannon_entropy,
    silent_gain_given_click,
    table1_report,
)
from gsdsim.protocol import Agent, DetectorAssignment, level_parity_assignment, single_alice_assignment

from conftest import all_bits


def _H(counter):
    total = sum(counter.values())
    return -sum(c / total * math.log2(c / total) for c in counter.values())


def oracle_cmi(assignment, agent):
    """I(Other; Obs | Own) = H(Obs|Own) - H(Obs|Own,Other) from the joint table."""
    n = assignment.n
    joint = []
    for x in all_bits(n):
        for y in all_bits(n):
            leaf = parity_route(x, y)[1]
            obs = leaf if assignment.owner(leaf) is agent else None
            own, other = (x, y) if agent is Agent.ALICE else (y, x)
            joint.append((own, other, obs))
    h_given_own = 0.0
    for own in set(j[0] for j in joint):
        rows = [j for j in joint if j[0] == own]
        h_given_own += len(rows) / len(joint) * _H(Counter(j[2] for j in rows))
    h_given_both = 0.0
    for key in set((j[0], j[1]) for j in joint):
        rows = [j for j in joint if (j[0], j[1]) == key]
        h_given_both += len(rows) / len(joint) * _H(Counter(j[2] for j in rows))
    return h_given_own - h_given_both


class TestEntropy:
    @pytest.mark.parametrize("dist, expected", [
        ([0.5, 0.5], 1.0),
        ([0.25] * 4, 2.0),
        ([0.25, 0.25, 0.25, 0.125, 0.125], 2.25),
        ({"a": 1.0, "b": 0.0}, 0.0),
    ])
    def test_values(self, dist, expected):
        assert shannon_entropy(dist) == pytest.approx(expected, abs=1e-12)

    @pytest.mark.parametrize("bad", [[], [0.5, 0.6], [-0.1, 1.1], [float("nan"), 1.0]])
    def test_invalid(self, bad):
        with pytest.raises(ValueError):
            shannon_entropy(bad)


class TestClosedForms:
    def test_h_b(self):
        assert analytic_H_B(2, 2) == pytest.approx(1.5, abs=1e-12)
        assert analytic_H_B(2, 4) == 2.0
        assert analytic_H_B(2, 0) == 0.0

    def test_total(self):
        assert analytic_total(2, 2) == pytest.approx(3.0, abs=1e-12)
        assert analytic_total(2, 1) == pytest.approx(4 - 0.75 * math.log2(3), abs=1e-12)
        assert analytic_total(1, 0) == pytest.approx(1.0, abs=1e-12)

    def test_range(self):
        with pytest.raises(ValueError):
            analytic_total(2, 5)
        with pytest.raises(ValueError):
            analytic_H_B(2, -1)

    @pytest.mark.parametrize("n, m", [(1, 1), (2, 2), (5, 16)])
    def test_optimal_m(self, n, m):
        assert optimal_m(n) == m

    @given(st.integers(1, 12), st.data())
    def test_bound_and_symmetry(self, n, data):
        m = data.draw(st.integers(0, 1 << n))
        t = analytic_total(n, m)
        assert n - 1e-12 <= t <= n + 1 + 1e-12
        assert t == pytest.approx(analytic_total(n, (1 << n) - m), abs=1e-12)


class TestEnumeration:
    def test_balanced_n2(self):
        assert enumerate_gains(2, level_parity_assignment(2, 1)).total == pytest.approx(3.0, abs=1e-12)

    def test_alice_holds_everything(self):
        r = enumerate_gains(2, DetectorAssignment.from_pattern("AAAA"))
        assert r.alice == pytest.approx(2.0) and r.bob == pytest.approx(0.0)

    def test_sd_game(self):
        r = enumerate_gains(1, level_parity_assignment(1, 1))
        assert r.alice == pytest.approx(1.0) and r.bob == pytest.approx(1.0)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_against_joint_table_oracle(self, n):
        rng = np.random.default_rng(100 + n)
        for _ in range(6):
            a = DetectorAssignment(tuple(Agent(int(b)) for b in rng.integers(0, 2, 1 << n)))
            r = enumerate_gains(n, a)
            assert r.alice == pytest.approx(oracle_cmi(a, Agent.ALICE), abs=1e-12)
            assert r.bob == pytest.approx(oracle_cmi(a, Agent.BOB), abs=1e-12)

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_equals_unconditioned_entropy(self, n):
        rng = np.random.default_rng(n)
        a = DetectorAssignment(tuple(Agent(int(b)) for b in rng.integers(0, 2, 1 << n)))
        r = enumerate_gains(n, a)
        assert r.bob == pytest.approx(observation_entropy(n, a, Agent.BOB), abs=1e-12)
        assert r.bob == pytest.approx(analytic_H_B(n, a.m), abs=1e-9)

    def test_guard(self):
        with pytest.raises(ValueError):
            enumerate_gains(13, DetectorAssignment(tuple(Agent.ALICE for _ in range(1 << 13))))
        with pytest.raises(ValueError):
            enumerate_gains(3, level_parity_assignment(2, 1))

    @pytest.mark.parametrize("n", range(1, 7))
    def test_single_detector(self, n):
        a = single_alice_assignment(n)
        assert click_probability(a, Agent.ALICE) == pytest.approx(2.0 ** -n, abs=1e-15)
        expected = n - math.log2((1 << n) - 1) if n > 0 else 0
        assert silent_gain_given_click(a, Agent.BOB) == pytest.approx(expected, abs=1e-12)


class TestTable1:
    def test_values(self):
        gains = [row.bob_gain for row in table1_report()]
        expected = [1, 1, 1, 1, 1, 1, 2, 2 - math.log2(3)]
        assert gains == pytest.approx(expected, abs=1e-12)
        assert gains[-1] == pytest.approx(0.415037, abs=1e-6)

    def test_patterns(self):
        assert [r.pattern for r in table1_report()][:2] == ["AABB", "BBAA"]
