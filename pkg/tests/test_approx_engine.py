import math
import random
from fractions import Fraction

import pytest

import oracles
from dupdist import approx_engine as ae
from dupdist.errors import CapExceeded, InvalidInput
from dupdist.seqcore import (ROOTS, BinarySeq, block_distance, find_repeats, is_square_free,
                             mismatch_budget, replay)

BETAS = [Fraction(0), Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(3, 4)]


def rand_seq(rng, n):
    return BinarySeq(n, rng.getrandbits(n))


class TestBetaDistance:
    @pytest.mark.parametrize("beta", BETAS)
    def test_matches_bfs_oracle(self, beta):
        cfg = ae.BetaConfig(beta, 9)
        for n in range(1, 9):
            for w in oracles.all_words(n):
                assert ae.beta_distance(w, cfg) == oracles.bfs_distance(w, beta), w

    def test_example(self):
        assert ae.beta_distance("0110", ae.BetaConfig(0.5, 4)) == 1

    @pytest.mark.parametrize("beta", [0, 0.5, 0.75])
    def test_vectorized_levels_agree_with_search(self, beta):
        cfg = ae.BetaConfig(beta, 10)
        levels = ae.beta_levels(cfg)
        for n in range(1, 11):
            for x in range(1 << n):
                assert levels[n][x] == ae.beta_distance(BinarySeq(n, x), cfg)

    def test_beta_table_values(self):
        # n <= 9 agrees with breadth-first maxima over all words
        assert list(ae.beta_table(ae.BetaConfig(0, 12)).values()) == [
            0, 1, 2, 2, 3, 4, 4, 5, 6, 6, 7, 7]
        assert list(ae.beta_table(ae.BetaConfig(0.5, 12)).values()) == [
            0, 1, 2, 2, 3, 3, 3, 3, 4, 4, 4, 4]
        t25 = ae.beta_table(ae.BetaConfig(0.25, 12))
        t75 = ae.beta_table(ae.BetaConfig(0.75, 12))
        assert t75[12] <= t25[12]

    def test_process_is_optimal_and_valid(self):
        rng = random.Random(2)
        for _ in range(200):
            beta = rng.choice(BETAS)
            s = rand_seq(rng, rng.randint(1, 11))
            p = ae.beta_process(s, beta)
            assert len(p) == ae.beta_distance(s, ae.BetaConfig(beta, 11))
            assert str(replay(p)) in ROOTS

    def test_config_errors(self):
        with pytest.raises(InvalidInput):
            ae.BetaConfig(1)
        with pytest.raises(CapExceeded):
            ae.BetaConfig(0.5, 15)
        with pytest.raises(CapExceeded):
            ae.beta_distance("0" * 13, ae.BetaConfig(0.5, 12))


class TestPlotkin:
    def test_min_k(self):
        assert ae.min_k(0.6) == 11
        assert ae.min_k(0.75) == 5
        with pytest.raises(InvalidInput):
            ae.min_k(0.5)

    def test_all_zeros(self):
        w = ae.plotkin_repeat_finder(BinarySeq(128, 0), 0.6, 11)
        assert w.mismatches == 0 and w.B == 1 and w.h == w.ell * 1 and 1 <= w.ell <= 11

    def test_alternating(self):
        s = BinarySeq.from_str("01" * 5000)
        w = ae.plotkin_repeat_finder(s, 0.6, 11)
        assert w.mismatches == 0 and block_distance(s, w.i, w.h) == 0

    def test_witness_is_a_listed_repeat(self):
        rng = random.Random(4)
        for _ in range(30):
            n = rng.randint(121, 300)
            s = rand_seq(rng, n)
            w = ae.plotkin_repeat_finder(s, 0.6, 11)
            reps = {(r.i, r.h) for r in find_repeats(s, 0.6)}
            assert (w.i, w.h) in reps
            assert w.h == w.ell * (n // 121) and 1 <= w.ell <= 11
            assert w.mismatches == block_distance(s, w.i, w.h)

    def test_witness_schema(self):
        w = ae.plotkin_repeat_finder(BinarySeq(128, 0), 0.6)
        assert set(w.to_dict()) == {"i", "h", "mismatches", "k", "ell", "B", "pair", "r"}

    def test_preconditions(self):
        with pytest.raises(InvalidInput):
            ae.plotkin_repeat_finder(BinarySeq(200, 0), 0.5)
        with pytest.raises(InvalidInput):
            ae.plotkin_repeat_finder(BinarySeq(200, 0), 0.6, 10)
        with pytest.raises(InvalidInput):
            ae.plotkin_repeat_finder(BinarySeq(120, 0), 0.6, 11)


class TestGreedyLog:
    def test_zeros(self):
        n = 1024
        p = ae.greedy_log_dedup(BinarySeq(n, 0), 0.75)
        assert str(replay(p)) == "0"
        # measured 110 steps; the lexicographic pair rule does not halve runs
        assert len(p) <= ae.min_k(0.75) ** 2 * math.log(n) + 50

    def test_short_input_uses_exhaustive_search(self):
        rng = random.Random(8)
        for _ in range(50):
            s = rand_seq(rng, rng.randint(1, 12))
            p = ae.greedy_log_dedup(s, 0.6)
            assert len(p) == ae.beta_distance(s, ae.BetaConfig(0.6, 12))

    def test_random_valid(self):
        rng = random.Random(9)
        n = 10 ** 4
        for _ in range(5):
            p = ae.greedy_log_dedup(rand_seq(rng, n), 0.6)
            assert str(replay(p)) in ROOTS
            assert len(p) <= 122 * math.log(n) + 50


class TestNonlinear:
    def test_budget_on_witness(self):
        rng = random.Random(6)
        for n in (2000, 5000, 10 ** 4):
            for a in (0.3, 0.5):
                if not ae.nonlinear_applicable(n, a):
                    continue
                s = rand_seq(rng, n)
                w = ae.nonlinear_repeat_finder(s, a)
                assert w.mismatches <= math.floor((0.5 + w.h ** -a) * w.h)
                assert w.mismatches == block_distance(s, w.i, w.h)
                assert w.h == w.ell * (n // w.k ** 2)

    def test_witness_is_a_listed_repeat(self):
        rng = random.Random(12)
        s = rand_seq(rng, 400)
        w = ae.nonlinear_repeat_finder(s, 0.3)
        assert (w.i, w.h) in {(r.i, r.h) for r in find_repeats(s, 0, exponent=0.3)}

    def test_zeros_within_calibrated_bound(self):
        p = ae.greedy_nonlinear_dedup(BinarySeq(4096, 0), 0.5)
        assert str(replay(p)) == "0" and p.exponent == 0.5
        assert len(p) <= ae.nonlinear_step_bound(4096, 0.5)

    @pytest.mark.parametrize("a", [0.3, 0.5])
    def test_random_within_calibrated_bound(self, a):
        rng = random.Random(13)
        n = 10 ** 4
        p = ae.greedy_nonlinear_dedup(rand_seq(rng, n), a)
        assert is_square_free(replay(p))
        assert len(p) <= ae.nonlinear_step_bound(n, a)

    def test_preconditions(self):
        with pytest.raises(InvalidInput):
            ae.nonlinear_repeat_finder(BinarySeq(50, 0), 0.5)
        with pytest.raises(InvalidInput):
            ae.nonlinear_repeat_finder(BinarySeq(5000, 0), 1.0)

    def test_budget_formula(self):
        assert mismatch_budget(0, 16, exponent=0.5) == 12
