import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jugglechain.chain import (
    CoinConfig,
    backward_dist,
    backward_step,
    simulate,
    stationary_weight,
    tv_distance,
    verify_stationarity,
)
from jugglechain.rng import ChainRng, ScriptedRng
from jugglechain.states import (
    JugglingState,
    ground_state,
    inversions,
    parse_state,
    prepend_empty,
    recover_throw,
    states_up_to_inversions,
)

Q2 = CoinConfig(Fraction(2))

state_strategy = st.lists(
    st.integers(0, 15), min_size=1, max_size=4, unique=True
).map(lambda ps: JugglingState(tuple(sorted(ps))))

q_strategy = st.sampled_from(
    [Fraction(2), Fraction(3), Fraction(7, 2), Fraction(5, 4)]
)


class TestBackwardStep:
    # the worked example: from --xx-x, flip by flip
    @pytest.mark.parametrize(
        "flips,expected",
        [
            ([False], "x--xx"),
            ([True, False], "x--x--x"),
            ([True, True, False], "x---x-x"),
            ([True, True, True], "---xx-x"),
        ],
    )
    def test_worked_example(self, flips, expected):
        rng = ScriptedRng(flips)
        result, used = backward_step(parse_state("--xx-x"), Q2, rng)
        assert result == parse_state(expected)
        assert used == len(flips)

    def test_always_tails_reaches_ground_and_stays(self):
        # the always-tails limit: after b steps we sit at the ground state
        state = parse_state("--xx-x")
        for _ in range(3):
            state, _ = backward_step(state, Q2, ScriptedRng([False]))
        assert state == ground_state(3)
        again, _ = backward_step(state, Q2, ScriptedRng([False]))
        assert again == ground_state(3)


class TestBackwardDist:
    def test_one_ball(self):
        q = Fraction(3)
        dist = backward_dist(parse_state("x"), CoinConfig(q))
        assert dist.probability(parse_state("x")) == 1 - 1 / q
        assert dist.probability(parse_state("-x")) == 1 / q

    def test_worked_example_probabilities(self):
        dist = backward_dist(parse_state("--xx-x"), Q2)
        expected = {
            "x--xx": Fraction(1, 2),
            "x--x--x": Fraction(1, 4),
            "x---x-x": Fraction(1, 8),
            "---xx-x": Fraction(1, 8),
        }
        assert {str(s): p for s, p in dist.entries} == expected

    @given(state_strategy, q_strategy)
    @settings(max_examples=60, deadline=None)
    def test_b_plus_one_outcomes_summing_to_one(self, state, q):
        dist = backward_dist(state, CoinConfig(q))
        assert len(dist.entries) == state.balls + 1
        assert sum(p for _, p in dist.entries) == 1

    @given(state_strategy)
    @settings(max_examples=60, deadline=None)
    def test_support_is_predecessor_set(self, state):
        # every outcome points to the state in the digraph, and the edge's
        # throw lands exactly on the moved ball
        dist = backward_dist(state, Q2)
        for outcome, _ in dist.entries:
            throw = recover_throw(outcome, state)
            assert throw is not None

    def test_sampling_matches_dist(self):
        # pushforward consistency within 3-sigma multinomial bounds
        state = parse_state("--xx-x")
        dist = backward_dist(state, Q2).as_dict()
        rng = ChainRng(2024)
        n = 100_000
        counts = {}
        for _ in range(n):
            out, _ = backward_step(state, Q2, rng)
            counts[out] = counts.get(out, 0) + 1
        assert set(counts) == set(dist)
        for outcome, p in dist.items():
            sigma = math.sqrt(n * p * (1 - p))
            assert abs(counts[outcome] - n * float(p)) <= 3 * sigma


class TestStationaryWeight:
    def test_ground_two_balls(self):
        assert stationary_weight(ground_state(2), Q2) == Fraction(3, 8)

    def test_one_ball_shifted(self):
        assert stationary_weight(parse_state("-x"), Q2) == Fraction(1, 4)

    @given(state_strategy, q_strategy)
    @settings(max_examples=60, deadline=None)
    def test_prepend_scales_by_q_to_minus_b(self, state, q):
        coin = CoinConfig(q)
        assert stationary_weight(prepend_empty(state), coin) == stationary_weight(
            state, coin
        ) * q ** -state.balls

    def test_total_mass_approaches_one(self):
        q = Fraction(2)
        total = sum(
            stationary_weight(s, Q2) for s in states_up_to_inversions(2, 40)
        )
        assert 1 - total < Fraction(1, 10**10)
        assert total < 1


class TestStationarity:
    def test_empty_front_case(self):
        assert verify_stationarity(parse_state("-x"), Q2)

    def test_ground_two_balls(self):
        assert verify_stationarity(parse_state("xx"), Q2)

    @pytest.mark.parametrize("q", [Fraction(2), Fraction(3), Fraction(7, 2)])
    def test_small_sweep(self, q):
        coin = CoinConfig(q)
        for b in (1, 2, 3):
            for state in states_up_to_inversions(b, 5):
                assert verify_stationarity(state, coin), str(state)

    def test_term_by_term_against_dist(self):
        # every successor's backward law must put the weight the closed-form
        # computation assumes on the original state
        from jugglechain.states import forward_edges

        state = parse_state("x-x")
        q = Fraction(3)
        coin = CoinConfig(q)
        for t, successor in forward_edges(state, 12):
            prob = backward_dist(successor, coin).probability(state)
            assert prob > 0
            assert inversions(successor) == inversions(state) + t - state.balls


class TestSimulation:
    def test_seed_determinism(self):
        a = simulate(ground_state(2), Q2, 30_000, 500, ChainRng(7))
        b = simulate(ground_state(2), Q2, 30_000, 500, ChainRng(7))
        assert a == b

    def test_tv_convergence(self):
        hist = simulate(ground_state(2), Q2, 200_000, 5_000, ChainRng(11))
        assert tv_distance(hist, Q2, 2, 10) < 0.05

    def test_histogram_counts(self):
        hist = simulate(ground_state(1), Q2, 1_000, 100, ChainRng(3))
        assert hist.samples == 900
        assert sum(c for _, c in hist.counts) == 900
