import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jugglechain.errors import IllegalThrow, ParseError
from jugglechain.states import (
    FlagState,
    JugglingState,
    erase_labels,
    flag_from_parts,
    flag_inversions,
    flag_states_with_inversions,
    forward_edges,
    ground_state,
    inversions,
    parse_flag_state,
    parse_state,
    prepend_empty,
    recover_throw,
    state_count_by_inversions,
    states_with_inversions,
    throw_state,
    window_dual,
    window_duality_holds,
    window_states,
)


def brute_inversions(word: str) -> int:
    """Independent oracle: count -...x pairs in the rendered word."""
    return sum(
        1
        for i, j in itertools.combinations(range(len(word)), 2)
        if word[i] == "-" and word[j] == "x"
    )


positions_strategy = st.lists(
    st.integers(0, 20), min_size=1, max_size=5, unique=True
).map(lambda ps: JugglingState(tuple(sorted(ps))))


class TestInversions:
    def test_ground_is_zero(self):
        assert inversions(ground_state(4)) == 0

    def test_single_pair(self):
        assert inversions(parse_state("x-x")) == 1

    def test_spread_state(self):
        # brute-force pair count over the word -x--x gives 4
        assert brute_inversions("-x--x") == 4
        assert inversions(parse_state("-x--x")) == 4

    @given(positions_strategy)
    @settings(max_examples=100, deadline=None)
    def test_matches_word_oracle(self, state):
        assert inversions(state) == brute_inversions(state.word())

    @given(positions_strategy)
    @settings(max_examples=100, deadline=None)
    def test_prepend_adds_ball_count(self, state):
        assert inversions(prepend_empty(state)) == inversions(state) + state.balls

    @given(positions_strategy, positions_strategy, st.integers(0, 3))
    @settings(max_examples=100, deadline=None)
    def test_concatenation_identity(self, left, right, pad):
        # glue a c-ball window of h cells onto a shifted remainder
        h = left.positions[-1] + 1 + pad
        c = left.balls
        b = c + right.balls
        combined = JugglingState(
            left.positions + tuple(p + h for p in right.positions)
        )
        assert inversions(combined) == inversions(left) + inversions(right) + (
            b - c
        ) * (h - c)


class TestFlagInversions:
    def test_paper_example(self):
        assert flag_inversions(parse_flag_state("-3-12")) == 7

    def test_sorted_ground_is_zero(self):
        assert flag_inversions(parse_flag_state("1234")) == 0

    def test_label_pair(self):
        assert flag_inversions(parse_flag_state("21")) == 1

    def test_equal_labels_do_not_invert(self):
        assert flag_inversions(parse_flag_state("11")) == 0

    def test_splits_into_plain_plus_label_word(self):
        for state in flag_states_with_inversions((1, 2, 3), 4):
            plain = erase_labels(state)
            label_word = tuple(c for c in state.cells if c is not None)
            label_inv = sum(
                1
                for i, j in itertools.combinations(range(3), 2)
                if label_word[i] > label_word[j]
            )
            assert flag_inversions(state) == inversions(plain) + label_inv


class TestThrows:
    def test_paper_walk(self):
        s = parse_state("x-x")
        s5 = throw_state(s, 5)
        assert s5 == parse_state("-x--x")
        s0 = throw_state(s5, 0)
        assert s0 == parse_state("x--x")
        assert throw_state(s0, 1) == s

    def test_zero_from_ball_front_is_illegal(self):
        with pytest.raises(IllegalThrow):
            throw_state(parse_state("x"), 0)

    def test_nonzero_from_empty_front_is_illegal(self):
        with pytest.raises(IllegalThrow):
            throw_state(parse_state("-x"), 3)

    def test_occupied_landing_is_illegal(self):
        # a 1-throw from xx would land on the other ball
        with pytest.raises(IllegalThrow):
            throw_state(parse_state("xx"), 1)

    def test_unique_zero_edge(self):
        assert forward_edges(parse_state("-x"), 9) == [(0, parse_state("x"))]

    def test_one_ball_edges(self):
        assert forward_edges(parse_state("x"), 3) == [
            (1, parse_state("x")),
            (2, parse_state("-x")),
            (3, parse_state("--x")),
        ]

    def test_paper_edge_present(self):
        assert (5, parse_state("-x--x")) in forward_edges(parse_state("x-x"), 5)

    @given(positions_strategy, st.integers(1, 12))
    @settings(max_examples=100, deadline=None)
    def test_round_trip_recovers_throw(self, state, max_throw):
        for t, target in forward_edges(state, max_throw):
            assert recover_throw(state, target) == t
            assert throw_state(state, t) == target


class TestText:
    def test_plain_round_trip(self):
        for word in ("x", "-x", "--xx-x", "x--x"):
            assert parse_state(word).word() == word

    def test_flag_round_trip(self):
        for word in ("-3-12", "21", "1--32"):
            assert parse_flag_state(word).word() == word

    def test_wide_labels_use_tokens(self):
        state = flag_from_parts((0, 2), (12, 3))
        assert state.word() == "12 - 3"
        assert parse_flag_state("12 - 3") == state

    def test_parse_errors(self):
        with pytest.raises(ParseError):
            parse_state("")
        with pytest.raises(ParseError):
            parse_state("x?x")
        with pytest.raises(ParseError):
            parse_flag_state("12-")  # trailing empty
        with pytest.raises(ParseError):
            parse_flag_state("0")

    def test_flag_state_rejects_trailing_empty(self):
        with pytest.raises(ValueError):
            FlagState((1, None))


class TestEnumeration:
    def brute_states(self, balls, max_inv):
        out = set()
        top = max_inv + balls
        for combo in itertools.combinations(range(top), balls):
            s = JugglingState(combo)
            if inversions(s) <= max_inv:
                out.add(s)
        return out

    def test_states_with_inversions_complete(self):
        for b in (1, 2, 3):
            expected = self.brute_states(b, 6)
            got = {
                s for k in range(7) for s in states_with_inversions(b, k)
            }
            assert got == expected

    def brute_partitions(self, total, max_part):
        """Independent oracle: partitions of `total` with parts <= max_part."""
        if total == 0:
            return 1
        return sum(
            self.brute_partitions(total - part, part)
            for part in range(1, min(total, max_part) + 1)
        )

    def test_count_matches_partition_oracle(self):
        for b in (1, 2, 3, 4):
            for k in range(9):
                assert state_count_by_inversions(b, k) == self.brute_partitions(k, b)

    def test_flag_enumeration_counts(self):
        # distinct labels: counts are binomial(k + b - 1, b - 1)
        import math

        for b in (1, 2, 3):
            labels = tuple(range(1, b + 1))
            for k in range(7):
                count = sum(1 for _ in flag_states_with_inversions(labels, k))
                assert count == math.comb(k + b - 1, b - 1)

    def test_flag_enumeration_exact_inversions(self):
        for state in flag_states_with_inversions((1, 1, 2), 5):
            assert flag_inversions(state) == 5
            assert state.labels == (1, 1, 2)


class TestWindowDuality:
    def test_trivial_window(self):
        # b = n: a single state on each side
        assert window_states(3, 3) == [ground_state(3)]
        assert window_dual(ground_state(3), 3) == JugglingState(())

    def test_small_windows(self):
        assert window_duality_holds(1, 2)
        assert window_duality_holds(2, 4)
        assert len(window_states(2, 4)) == 6

    def test_explicit_map(self):
        # reverse-and-switch in the (1, 3) window
        assert window_dual(parse_state("x"), 3) == parse_state("xx")
        assert window_dual(parse_state("-x"), 3) == parse_state("x-x")
        assert window_dual(parse_state("--x"), 3) == parse_state("-xx")

    def test_all_small_cases(self):
        for n in range(7):
            for b in range(n + 1):
                assert window_duality_holds(b, n), (b, n)

    def test_dual_is_involution(self):
        for state in window_states(2, 5):
            assert window_dual(window_dual(state, 5), 5) == state
