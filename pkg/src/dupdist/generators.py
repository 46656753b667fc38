"""Sequence families with known distance behaviour and explicit schedules."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import CapExceeded, InvalidInput
from .exact_engine import ORACLE_CAP, heuristic_schedule, optimal_process
from .seqcore import (ROOTS, BinarySeq, DedupProcess, DedupStep, apply_dedup, make_process,
                      replay)

D0L_CAP = 1 << 26


@dataclass(frozen=True)
class LSystem:
    axiom: BinarySeq
    image0: BinarySeq
    image1: BinarySeq

    def __post_init__(self):
        for name in ("axiom", "image0", "image1"):
            object.__setattr__(self, name, BinarySeq.coerce(getattr(self, name)))
        if not self.image0.length or not self.image1.length:
            raise InvalidInput("both images must be non-empty")

    def apply(self, s: BinarySeq) -> BinarySeq:
        table = str.maketrans({"0": str(self.image0), "1": str(self.image1)})
        return BinarySeq.from_str(str(s).translate(table)) if s.length else s

    def image_length(self, s: BinarySeq) -> int:
        ones = s.bits.bit_count()
        return ones * self.image1.length + (s.length - ones) * self.image0.length


FIBONACCI = LSystem(BinarySeq.from_str("0"), BinarySeq.from_str("01"), BinarySeq.from_str("0"))
THUE_MORSE = LSystem(BinarySeq.from_str("0"), BinarySeq.from_str("01"), BinarySeq.from_str("10"))


def de_bruijn(k: int) -> BinarySeq:
    """Lexicographically least binary De Bruijn sequence of order k.

    Concatenation of the Lyndon words whose length divides k, in
    lexicographic order (Fredricksen-Kessler-Maiorana).
    """
    if not 1 <= k <= 24:
        raise InvalidInput(f"order must lie in [1, 24], got {k}")
    a = [0] * (k + 1)
    out = []

    def db(t: int, p: int):
        if t > k:
            if k % p == 0:
                out.extend(a[1:p + 1])
            return
        a[t] = a[t - p]
        db(t + 1, p)
        if a[t - p] == 0:
            a[t] = 1
            db(t + 1, t)

    db(1, 1)
    return BinarySeq.from_str("".join(map(str, out)))


def debruijn_bound(k: int) -> int:
    """ceil((n - log2 n) / log2 n) for n = 2**k."""
    if k < 4:
        raise InvalidInput("the De Bruijn bound needs order >= 4")
    return -(-((1 << k) - k) // k)


def thue_morse(r: int) -> BinarySeq:
    if r < 0:
        raise InvalidInput("order must be non-negative")
    t = BinarySeq(1, 0)
    for _ in range(r):
        t = t + t.complement()
    return t


def fibonacci_word(r: int) -> BinarySeq:
    if r < 0:
        raise InvalidInput("order must be non-negative")
    prev, cur = BinarySeq.from_str("0"), BinarySeq.from_str("01")
    if r == 0:
        return prev
    for _ in range(r - 1):
        prev, cur = cur, cur + prev
    return cur


def d0l_iterate(sys: LSystem, r: int, cap: int = D0L_CAP) -> BinarySeq:
    if r < 0:
        raise InvalidInput("iteration count must be non-negative")
    s = sys.axiom
    for _ in range(r):
        if sys.image_length(s) > cap:
            raise CapExceeded(f"iteration would exceed {cap} symbols")
        s = sys.apply(s)
    return s


# -- explicit schedules ---------------------------------------------------------

def _root_process(s: BinarySeq) -> DedupProcess:
    """Shortest process when the exact oracle reaches, else the run-halving schedule."""
    if s.length <= ORACLE_CAP:
        return optimal_process(s)
    return heuristic_schedule(s)


def tm_schedule(r: int) -> DedupProcess:
    """Deduplicate the r-th Thue-Morse word to its root.

    With A = t_{r-3}, the word t_r reads A Ā Ā A Ā A A Ā in blocks of
    p = |A|.  Four dedups turn it into A Ā = t_{r-2}: the central square
    (Ā A)(Ā A), then Ā Ā, then A A, then (A Ā)(A Ā).  t_2 = 0110 needs one.
    """
    if r < 2:
        raise InvalidInput("Thue-Morse schedules start at r = 2")
    steps = []
    cur = r
    while cur >= 3:
        p = 1 << (cur - 3)
        steps += [DedupStep(2 * p + 1, 2 * p), DedupStep(p + 1, p), DedupStep(2 * p + 1, p),
                  DedupStep(1, 2 * p)]
        cur -= 2
    if cur == 2:
        steps.append(DedupStep(2, 1))
    return make_process(thue_morse(r), steps)


def _fib_length(r: int) -> int:
    a, b = 1, 2
    for _ in range(r):
        a, b = b, a + b
    return a


def fib_schedule(r: int) -> DedupProcess:
    """Deduplicate the r-th Fibonacci word to its root.

    For r >= 5, u_r = u_{r-2} u_{r-2} u_{r-5} u_{r-4}; dropping the prefix
    square leaves u_{r-3} u_{r-3} u_{r-4}, and one more prefix dedup leaves
    u_{r-2}.  Words u_3, u_4 finish with a shortest process.
    """
    if r < 2:
        raise InvalidInput("Fibonacci schedules start at r = 2")
    word = fibonacci_word(r)
    steps = []
    cur = r
    while cur >= 5:
        steps += [DedupStep(1, _fib_length(cur - 2)), DedupStep(1, _fib_length(cur - 3))]
        cur -= 2
    steps += _root_process(fibonacci_word(cur)).steps
    return make_process(word, steps)


# -- lifting through a morphism ------------------------------------------------------

def lift_constant(sys: LSystem) -> int:
    """Largest number of steps needed to finish h(z) over the six roots z."""
    return max(len(_root_process(sys.apply(BinarySeq.from_str(z)))) for z in ROOTS)


def d0l_lift(sys: LSystem, p: DedupProcess) -> DedupProcess:
    """Turn a process for x into a process for h(x).

    Each dedup of a1..ak a1..ak becomes a dedup of h(a1)..h(ak) h(a1)..h(ak),
    with coordinates mapped through image lengths; the process then finishes
    h(root) with a precomputed process.
    """
    if p.beta != 0 or p.exponent is not None:
        raise InvalidInput("only exact processes can be lifted")
    replay(p)
    x = p.original
    steps = []
    for step in p.steps:
        prefix = x.sub(1, step.i - 1) if step.i > 1 else BinarySeq(0, 0)
        block = x.sub(step.i, step.h)
        steps.append(DedupStep(sys.image_length(prefix) + 1, sys.image_length(block), step.keep))
        x = apply_dedup(x, step)
    tail = _root_process(sys.apply(x))
    steps += tail.steps
    return make_process(sys.apply(p.original), steps)


def lifted_schedule(sys: LSystem, r: int) -> DedupProcess:
    """Process for h^r(axiom), built by lifting a shortest process of the axiom r times."""
    p = _root_process(sys.axiom)
    for _ in range(r):
        p = d0l_lift(sys, p)
    return p
