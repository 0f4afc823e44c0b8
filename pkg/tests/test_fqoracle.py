import random
from fractions import Fraction

import pytest

from jugglechain.chain import CoinConfig, backward_dist
from jugglechain.errors import ResourceLimit
from jugglechain.flagchain import flag_backward_dist
from jugglechain.fqoracle import (
    FqMatrix,
    column_prepend_dist,
    coarse_flag_pivot_state,
    enumerate_matrices,
    flag_column_prepend_dist,
    flag_fraction_exhaustive,
    flag_fraction_sweep,
    flag_pivot_state,
    formula_flag_fraction,
    formula_group_fraction,
    formula_pivot_fraction,
    gl_order,
    group_fraction_sweep,
    matrix_for_state,
    partial_permutation_matrix,
    pivot_fraction_exhaustive,
    pivot_fraction_sweep,
    pivot_state,
)
from jugglechain.states import (
    erase_labels,
    ground_state,
    parse_flag_state,
    parse_state,
)


class TestPivotState:
    def test_identity(self):
        m = FqMatrix(2, ((1, 0), (0, 1)))
        assert pivot_state(m) == ground_state(2)

    def test_leading_zero_column(self):
        assert pivot_state(FqMatrix(2, ((0, 1, 1),))) == parse_state("-x")

    def test_rank_deficient(self):
        assert pivot_state(FqMatrix(2, ((1, 1), (1, 1)))) is None

    def test_matrix_for_state_round_trip(self):
        state = parse_state("--xx-x")
        assert pivot_state(matrix_for_state(state, 6, 2)) == state


class TestFlagPivotState:
    def test_partial_permutation_fixed_point(self):
        state = parse_flag_state("2-13")
        m = partial_permutation_matrix(state, 5, 2)
        assert flag_pivot_state(m) == state

    def test_small_matrix(self):
        # ((1,1),(1,0)) row-reduces to the identity under downward
        # operations, so both labels sit in order
        m = FqMatrix(2, ((1, 1), (1, 0)))
        assert flag_pivot_state(m) == parse_flag_state("12")

    def test_antidiagonal(self):
        m = FqMatrix(2, ((0, 1), (1, 0)))
        assert flag_pivot_state(m) == parse_flag_state("21")

    def test_rank_deficient(self):
        assert flag_pivot_state(FqMatrix(3, ((1, 2), (2, 4)))) is None

    def test_erasure_recovers_pivot_state(self):
        for m in enumerate_matrices(2, 3, 2):
            flag = flag_pivot_state(m)
            plain = pivot_state(m)
            if flag is None:
                assert plain is None
            else:
                assert erase_labels(flag) == plain

    def test_invariant_under_allowed_operations(self):
        rng = random.Random(20240)
        for _ in range(200):
            p = rng.choice((2, 3))
            rows = [
                [rng.randrange(p) for _ in range(4)] for _ in range(2)
            ]
            m = FqMatrix(p, tuple(tuple(r) for r in rows))
            before = flag_pivot_state(m)
            mutated = [list(r) for r in m.rows]
            if rng.random() < 0.5:
                # downward row operation: add a multiple of a row to a
                # lower one (or scale a row)
                i = rng.randrange(2)
                scale = rng.randrange(1, p)
                if i == 0 and rng.random() < 0.7:
                    lam = rng.randrange(p)
                    mutated[1] = [
                        (a + lam * b) % p for a, b in zip(mutated[1], mutated[0])
                    ]
                else:
                    mutated[i] = [(scale * a) % p for a in mutated[i]]
            else:
                # rightward column operation
                src = rng.randrange(3)
                dst = rng.randrange(src + 1, 4)
                lam = rng.randrange(p)
                for row in mutated:
                    row[dst] = (row[dst] + lam * row[src]) % p
            after = flag_pivot_state(FqMatrix(p, tuple(tuple(r) for r in mutated)))
            assert before == after


class TestGlOrder:
    def test_trivial(self):
        assert gl_order(1, 2) == 1

    @pytest.mark.parametrize("p,expected", [(2, 6), (3, 48)])
    def test_brute_force_two_by_two(self, p, expected):
        count = sum(
            1
            for m in enumerate_matrices(2, 2, p)
            if pivot_state(m) == ground_state(2)
        )
        assert count == expected == gl_order(2, p)


class TestFractions:
    def test_one_ball_fractions(self):
        assert pivot_fraction_exhaustive(1, 2, 2, parse_state("-x")) == Fraction(1, 4)
        assert pivot_fraction_exhaustive(1, 2, 2, parse_state("x")) == Fraction(1, 2)

    @pytest.mark.parametrize("p", [2, 3])
    @pytest.mark.parametrize("b", [1, 2])
    def test_formula_and_width_independence(self, b, p):
        sweeps = {n: pivot_fraction_sweep(b, n, p) for n in (3, 4)}
        for n, sweep in sweeps.items():
            for state, fraction in sweep.items():
                if state is None:
                    continue
                assert fraction == formula_pivot_fraction(b, p, state)
        # same fraction at both widths for targets fitting the narrower one
        for state, fraction in sweeps[3].items():
            if state is not None:
                assert sweeps[4][state] == fraction

    def test_total_mass(self):
        sweep = pivot_fraction_sweep(2, 3, 2)
        assert sum(sweep.values()) == 1

    def test_rank_deficiency_shrinks_with_width(self):
        narrow = pivot_fraction_sweep(2, 3, 2)[None]
        wide = pivot_fraction_sweep(2, 4, 2)[None]
        assert wide < narrow

    def test_flag_fraction_example(self):
        assert flag_fraction_exhaustive(2, 3, 2, parse_flag_state("21")) == Fraction(
            1, 8
        )

    def test_one_row_flag_equals_plain(self):
        flag = flag_fraction_sweep(1, 3, 2)
        plain = pivot_fraction_sweep(1, 3, 2)
        assert {
            None if s is None else erase_labels(s): f for s, f in flag.items()
        } == plain

    def test_flag_formula(self):
        sweep = flag_fraction_sweep(2, 3, 3)
        for state, fraction in sweep.items():
            if state is not None:
                assert fraction == formula_flag_fraction(2, 3, state)
        assert sum(sweep.values()) == 1

    def test_budget(self):
        with pytest.raises(ResourceLimit):
            pivot_fraction_sweep(3, 8, 5, budget=1000)


class TestGroupCoarsening:
    def test_single_group_reduces_to_plain(self):
        sweep = group_fraction_sweep((1, 1), 3, 2)
        plain = pivot_fraction_sweep(2, 3, 2)
        for state, fraction in sweep.items():
            if state is None:
                continue
            assert fraction == plain[erase_labels(state)]

    def test_all_singletons_reduce_to_flag(self):
        assert group_fraction_sweep((1, 2), 3, 2) == flag_fraction_sweep(2, 3, 2)

    def test_repeated_pair_example(self):
        sweep = group_fraction_sweep((1, 1), 3, 2)
        assert sweep[parse_flag_state("11")] == Fraction(3, 8)

    def test_formula(self):
        for labels in [(1, 1), (1, 2)]:
            sweep = group_fraction_sweep(labels, 3, 2)
            for state, fraction in sweep.items():
                if state is not None:
                    assert fraction == formula_group_fraction(labels, 2, state)

    def test_three_rows_with_repeats(self):
        sweep = group_fraction_sweep((1, 1, 2), 3, 2)
        for state, fraction in sweep.items():
            if state is not None:
                assert fraction == formula_group_fraction((1, 1, 2), 2, state)

    def test_coarse_state_labels(self):
        m = partial_permutation_matrix(parse_flag_state("213"), 4, 2)
        coarse = coarse_flag_pivot_state(m, (1, 1, 2))
        assert coarse == parse_flag_state("112")


class TestColumnPrepend:
    def test_one_ball(self):
        m = FqMatrix(2, ((1,),))
        dist = column_prepend_dist(m)
        assert dist.probability(parse_state("x")) == Fraction(1, 2)
        assert dist.probability(parse_state("-x")) == Fraction(1, 2)

    def test_worked_example_via_matrix(self):
        m = matrix_for_state(parse_state("--xx-x"), 6, 2)
        dist = column_prepend_dist(m)
        expected = backward_dist(parse_state("--xx-x"), CoinConfig(Fraction(2)))
        assert dist == expected

    def test_requires_full_rank(self):
        with pytest.raises(ValueError):
            column_prepend_dist(FqMatrix(2, ((0, 0), (0, 1))))

    @pytest.mark.parametrize("p", [2, 3])
    def test_matches_chains_everywhere(self, p):
        coin = CoinConfig(Fraction(p))
        checked = 0
        for m in enumerate_matrices(2, 3, p):
            plain = pivot_state(m)
            if plain is None:
                continue
            checked += 1
            assert column_prepend_dist(m) == backward_dist(plain, coin)
            assert flag_column_prepend_dist(m) == flag_backward_dist(
                flag_pivot_state(m), coin
            )
        assert checked > 0
