import pytest

from dupdist import generators as gen
from dupdist.errors import CapExceeded, InvalidInput
from dupdist.exact_engine import oracle_distance
from dupdist.seqcore import ROOTS, BinarySeq, kmer_count, make_process, replay


class TestDeBruijn:
    @pytest.mark.parametrize("k,word", [(1, "01"), (2, "0011"), (3, "00010111")])
    def test_small_orders(self, k, word):
        assert str(gen.de_bruijn(k)) == word

    @pytest.mark.parametrize("k", range(1, 13))
    def test_every_cyclic_kmer_once(self, k):
        s = str(gen.de_bruijn(k))
        assert len(s) == 1 << k
        wrapped = s + s[:k - 1]
        assert len({wrapped[i:i + k] for i in range(len(s))}) == 1 << k

    def test_bound(self, table20):
        from dupdist.exact_engine import f_of_seq
        assert gen.debruijn_bound(4) == 3
        assert gen.debruijn_bound(5) == 6
        s = gen.de_bruijn(4)
        assert kmer_count(s, 4) == 13
        assert f_of_seq(table20, s) >= 5 >= gen.debruijn_bound(4)
        with pytest.raises(InvalidInput):
            gen.debruijn_bound(3)

    def test_order_range(self):
        with pytest.raises(InvalidInput):
            gen.de_bruijn(0)


class TestWords:
    def test_thue_morse(self):
        assert str(gen.thue_morse(2)) == "0110"
        assert str(gen.thue_morse(3)) == "01101001"
        assert len(gen.thue_morse(10)) == 1024

    def test_fibonacci(self):
        assert str(gen.fibonacci_word(3)) == "01001"
        assert str(gen.fibonacci_word(4)) == "01001010"
        for r in range(2, 12):
            assert gen.fibonacci_word(r) == gen.fibonacci_word(r - 1) + gen.fibonacci_word(r - 2)

    def test_d0l(self):
        assert str(gen.d0l_iterate(gen.FIBONACCI, 5)) == "0100101001001"
        assert str(gen.d0l_iterate(gen.THUE_MORSE, 3)) == "01101001"
        ident = gen.LSystem("0110", "0", "1")
        assert str(gen.d0l_iterate(ident, 7)) == "0110"
        for r in range(10):
            assert gen.d0l_iterate(gen.FIBONACCI, r) == gen.fibonacci_word(r)
            assert gen.d0l_iterate(gen.THUE_MORSE, r) == gen.thue_morse(r)

    def test_d0l_cap(self):
        with pytest.raises(CapExceeded):
            gen.d0l_iterate(gen.THUE_MORSE, 12, cap=1000)

    def test_empty_image_rejected(self):
        with pytest.raises(InvalidInput):
            gen.LSystem("0", "", "1")


class TestSchedules:
    def test_tm_base(self):
        p = gen.tm_schedule(2)
        assert len(p) == 1 and str(replay(p)) == "010"
        assert oracle_distance("0110") == 1

    def test_fib_base(self):
        assert oracle_distance("01001010") == 2
        assert oracle_distance("01001") == 2
        assert len(gen.fib_schedule(4)) <= 2

    @pytest.mark.parametrize("r", range(2, 15))
    def test_tm_valid(self, r):
        p = gen.tm_schedule(r)
        assert str(replay(p)) in ROOTS and len(p) <= 2 * r

    @pytest.mark.parametrize("r", range(2, 20))
    def test_fib_valid(self, r):
        p = gen.fib_schedule(r)
        assert str(replay(p)) in ROOTS and len(p) <= r

    def test_schedule_close_to_exact(self):
        for r in range(2, 4):
            assert len(gen.tm_schedule(r)) >= oracle_distance(gen.thue_morse(r))
        for r in range(2, 6):
            assert len(gen.fib_schedule(r)) >= oracle_distance(gen.fibonacci_word(r))

    def test_rejects_small_order(self):
        with pytest.raises(InvalidInput):
            gen.tm_schedule(1)
        with pytest.raises(InvalidInput):
            gen.fib_schedule(1)


class TestLift:
    def test_lift_of_root_is_free(self):
        p = gen.d0l_lift(gen.THUE_MORSE, make_process("0", []))
        assert str(p.original) == "01" and len(p) == 0

    @pytest.mark.parametrize("system", [gen.THUE_MORSE, gen.FIBONACCI], ids=["tm", "fib"])
    def test_overhead_per_level(self, system):
        c = gen.lift_constant(system)
        p = make_process(system.axiom, [])
        for r in range(1, 11):
            q = gen.d0l_lift(system, p)
            assert q.original == gen.d0l_iterate(system, r)
            assert str(replay(q)) in ROOTS
            assert len(q) <= len(p) + c
            p = q

    def test_lifted_schedule(self):
        p = gen.lifted_schedule(gen.FIBONACCI, 8)
        assert p.original == gen.fibonacci_word(8) and str(replay(p)) in ROOTS

    def test_lift_rejects_invalid_process(self):
        from dupdist.errors import InvalidStep
        from dupdist.seqcore import DedupProcess, DedupStep
        bad = DedupProcess(BinarySeq.from_str("0110"), (DedupStep(1, 2),))
        with pytest.raises(InvalidStep):
            gen.d0l_lift(gen.THUE_MORSE, bad)
