"""Binary sequences, tandem repeats and (de)duplication mechanics.

Positions are 1-based everywhere in the public API: a step ``(i, h)`` names
the repeat whose first block is ``s[i..i+h-1]`` and whose second block is
``s[i+h..i+2h-1]``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InvalidInput, InvalidStep

ROOTS = ("0", "1", "01", "10", "010", "101")

Beta = Fraction | float | int


@dataclass(frozen=True, order=True)
class BinarySeq:
    """Immutable binary word stored as a big integer.

    Position 1 is the most significant bit, so ``bits`` equals the integer
    encoding ``sum(s_i * 2**(length - i))``.
    """

    length: int
    bits: int = 0

    def __post_init__(self):
        if self.length < 0:
            raise InvalidInput("length must be non-negative")
        if self.bits < 0 or self.bits >> self.length:
            raise InvalidInput(f"bits {self.bits} do not fit in length {self.length}")

    @classmethod
    def from_str(cls, text: str) -> "BinarySeq":
        text = text.strip()
        if text and set(text) - {"0", "1"}:
            raise InvalidInput(f"not a binary string: {text!r}")
        return cls(len(text), int(text, 2) if text else 0)

    @classmethod
    def coerce(cls, s: "BinarySeq | str") -> "BinarySeq":
        return s if isinstance(s, BinarySeq) else cls.from_str(s)

    def __str__(self) -> str:
        return format(self.bits, f"0{self.length}b") if self.length else ""

    def __repr__(self) -> str:
        return f"BinarySeq('{self}')"

    def __len__(self) -> int:
        return self.length

    def __add__(self, other: "BinarySeq") -> "BinarySeq":
        return BinarySeq(self.length + other.length, (self.bits << other.length) | other.bits)

    def symbol(self, pos: int) -> int:
        """Symbol at 1-based position ``pos``."""
        if not 1 <= pos <= self.length:
            raise IndexError(pos)
        return (self.bits >> (self.length - pos)) & 1

    def block(self, i: int, h: int) -> int:
        """Integer value of ``s[i..i+h-1]``."""
        return (self.bits >> (self.length - i - h + 1)) & ((1 << h) - 1)

    def sub(self, i: int, h: int) -> "BinarySeq":
        return BinarySeq(h, self.block(i, h))

    def complement(self) -> "BinarySeq":
        return BinarySeq(self.length, self.bits ^ ((1 << self.length) - 1))

    @property
    def first(self) -> int:
        return self.bits >> (self.length - 1)

    @property
    def last(self) -> int:
        return self.bits & 1


@dataclass(frozen=True)
class TandemRepeat:
    i: int
    h: int


@dataclass(frozen=True)
class DedupStep:
    i: int
    h: int
    keep: str = "first"

    def __post_init__(self):
        if self.keep not in ("first", "second"):
            raise InvalidInput(f"keep must be 'first' or 'second', got {self.keep!r}")
        if self.i < 1 or self.h < 1:
            raise InvalidInput(f"step ({self.i},{self.h}) has non-positive coordinates")


@dataclass(frozen=True)
class DedupProcess:
    original: BinarySeq
    steps: tuple[DedupStep, ...] = ()
    final: BinarySeq | None = None
    beta: Fraction = field(default=Fraction(0))
    # set for processes whose mismatch budget is floor(h/2 + h**(1-a))
    exponent: float | None = None

    def __len__(self) -> int:
        return len(self.steps)

    def to_dict(self) -> dict:
        out = {
            "original": str(self.original),
            "beta": float(self.beta),
            "steps": [{"i": st.i, "h": st.h, "keep": st.keep} for st in self.steps],
            "final": "" if self.final is None else str(self.final),
        }
        if self.exponent is not None:
            out["exponent"] = self.exponent
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, obj: dict) -> "DedupProcess":
        try:
            steps = tuple(DedupStep(int(st["i"]), int(st["h"]), st.get("keep", "first"))
                          for st in obj["steps"])
            final = BinarySeq.from_str(obj["final"]) if obj.get("final") else None
            exponent = obj.get("exponent")
            return cls(BinarySeq.from_str(obj["original"]), steps, final,
                       as_fraction(obj.get("beta", 0)),
                       None if exponent is None else float(exponent))
        except (KeyError, TypeError) as exc:
            raise InvalidInput(f"malformed process object: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "DedupProcess":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"process is not valid JSON: {exc}") from exc
        return cls.from_dict(obj)


def as_fraction(beta: Beta) -> Fraction:
    # str() keeps 0.6 as 3/5 rather than the nearest binary float; the
    # denominator limit recovers 1/3 from 0.3333333333333333 after a JSON trip.
    if isinstance(beta, Fraction):
        return beta
    if isinstance(beta, float):
        return Fraction(str(beta)).limit_denominator(10**9)
    return Fraction(beta)


def mismatch_budget(beta: Beta, h: int, exponent: float | None = None) -> int:
    """Largest Hamming distance allowed between two blocks of length ``h``.

    With ``exponent`` a the allowed fraction is 1/2 + h**-a instead of beta.
    """
    if exponent is not None:
        return math.floor(h / 2 + h ** (1 - exponent))
    return math.floor(as_fraction(beta) * h)


def block_distance(s: BinarySeq, i: int, h: int) -> int:
    """Hamming distance between the blocks of the length-``h`` repeat at ``i``."""
    shift = s.length - i - 2 * h + 1
    x = (s.bits >> shift) ^ (s.bits >> (shift + h))
    return (x & ((1 << h) - 1)).bit_count()


def root_of(s: BinarySeq | str) -> BinarySeq:
    s = BinarySeq.coerce(s)
    if s.length == 0:
        raise InvalidInput("the empty sequence has no root")
    if s.bits == 0:
        return BinarySeq(1, 0)
    if s.bits == (1 << s.length) - 1:
        return BinarySeq(1, 1)
    a, b = s.first, s.last
    if a != b:
        return BinarySeq(2, (a << 1) | b)
    return BinarySeq(3, 0b010 if a == 0 else 0b101)


def is_square_free(s: BinarySeq | str) -> bool:
    s = BinarySeq.coerce(s)
    for h in range(1, s.length // 2 + 1):
        for i in range(1, s.length - 2 * h + 2):
            if block_distance(s, i, h) == 0:
                return False
    return True


def find_repeats(s: BinarySeq | str, beta: Beta = 0, exponent: float | None = None) -> list[TandemRepeat]:
    """All (beta-)repeats sorted by ``(i, h)``; naive enumeration."""
    s = BinarySeq.coerce(s)
    beta = as_fraction(beta)
    if not 0 <= beta < 1:
        raise InvalidInput(f"beta must lie in [0, 1), got {beta}")
    budgets = [mismatch_budget(beta, h, exponent) for h in range(s.length // 2 + 1)]
    out = []
    for i in range(1, s.length):
        for h in range(1, (s.length - i + 1) // 2 + 1):
            if block_distance(s, i, h) <= budgets[h]:
                out.append(TandemRepeat(i, h))
    return out


def apply_dedup(s: BinarySeq | str, step: DedupStep | tuple, beta: Beta = 0,
                exponent: float | None = None) -> BinarySeq:
    s = BinarySeq.coerce(s)
    if not isinstance(step, DedupStep):
        step = DedupStep(*step)
    i, h = step.i, step.h
    budget = mismatch_budget(beta, h, exponent)
    if i + 2 * h - 1 > s.length:
        raise InvalidStep(i, h, None, budget)
    dist = block_distance(s, i, h)
    if dist > budget:
        raise InvalidStep(i, h, dist, budget)
    tail = s.length - i - 2 * h + 1
    low = s.bits & ((1 << tail) - 1)
    if step.keep == "first":
        head = s.bits >> (tail + h)
    else:
        head = ((s.bits >> (tail + 2 * h)) << h) | ((s.bits >> tail) & ((1 << h) - 1))
    return BinarySeq(s.length - h, (head << tail) | low)


def apply_dup(s: BinarySeq | str, i: int, h: int) -> BinarySeq:
    """Insert a copy of ``s[i..i+h-1]`` right after it."""
    s = BinarySeq.coerce(s)
    if h < 1 or i < 1 or i + h - 1 > s.length:
        raise InvalidInput(f"duplication ({i},{h}) out of range for length {s.length}")
    tail = s.length - i - h + 1
    head = s.bits >> tail
    block = head & ((1 << h) - 1)
    bits = (((head << h) | block) << tail) | (s.bits & ((1 << tail) - 1))
    return BinarySeq(s.length + h, bits)


def apply_parallel(s: BinarySeq, repeats: Iterable[tuple[int, int]]) -> BinarySeq:
    """Apply pairwise non-overlapping exact dedups simultaneously.

    Coordinates refer to ``s``; second blocks are dropped right to left so
    earlier coordinates stay valid.
    """
    for i, h in sorted(repeats, reverse=True):
        s = apply_dedup(s, DedupStep(i, h))
    return s


def replay(p: DedupProcess, *, require_root: bool = True) -> BinarySeq:
    """Run every step of ``p`` from its original sequence and return the end.

    Raises ``InvalidStep`` (with ``index`` set) at the first bad step and
    ``InvalidInput`` if the end is not square-free or disagrees with ``p.final``.
    """
    cur = p.original
    for t, step in enumerate(p.steps):
        try:
            cur = apply_dedup(cur, step, p.beta, p.exponent)
        except InvalidStep as exc:
            raise InvalidStep(exc.i, exc.h, exc.distance, exc.budget, index=t) from None
    if require_root and not is_square_free(cur):
        raise InvalidInput(f"process ends at {cur}, which is not square-free")
    if p.final is not None and cur != p.final:
        raise InvalidInput(f"process ends at {cur}, declared final is {p.final}")
    return cur


def make_process(original: BinarySeq | str, steps: Sequence, beta: Beta = 0,
                 exponent: float | None = None) -> DedupProcess:
    """Build a process from raw ``(i, h[, keep])`` tuples and fill in ``final``."""
    original = BinarySeq.coerce(original)
    steps = tuple(st if isinstance(st, DedupStep) else DedupStep(*st) for st in steps)
    p = DedupProcess(original, steps, None, as_fraction(beta), exponent)
    end = replay(p, require_root=False)
    return DedupProcess(original, steps, end, p.beta, exponent)


def is_normal(steps: Sequence[DedupStep]) -> bool:
    """Every leftward jump lands within reach of the previous repeat."""
    for a, b in zip(steps, steps[1:]):
        if b.i < a.i and b.i + 2 * b.h < a.i:
            return False
    return True


def normalize_process(p: DedupProcess) -> DedupProcess:
    """Reorder an exact process into normal form by adjacent swaps.

    A far-left step ``(i', h')`` that follows ``(i, h)`` does not touch
    anything at or after ``i``, so it can run first; the earlier step then
    sits ``h'`` positions further left.
    """
    if p.beta != 0:
        raise InvalidInput("normalization is defined for exact processes only")
    end = replay(p)
    steps = list(p.steps)
    f = len(steps)
    limit = f * f
    swaps = 0
    changed = True
    while changed:
        changed = False
        for t in range(f - 1):
            a, b = steps[t], steps[t + 1]
            if b.i < a.i and b.i + 2 * b.h < a.i:
                steps[t] = DedupStep(b.i, b.h, b.keep)
                steps[t + 1] = DedupStep(a.i - b.h, a.h, a.keep)
                swaps += 1
                changed = True
                if swaps > limit:
                    raise AssertionError(f"normalization did not settle within {limit} swaps")
    out = DedupProcess(p.original, tuple(steps), end, p.beta)
    replay(out)
    return out


def kmer_count(s: BinarySeq | str, k: int) -> int:
    s = BinarySeq.coerce(s)
    if not 1 <= k <= s.length:
        raise InvalidInput(f"k={k} out of range for length {s.length}")
    mask = (1 << k) - 1
    return len({(s.bits >> sh) & mask for sh in range(s.length - k + 1)})


def kmer_lower_bound(s: BinarySeq | str, k: int = 4) -> int:
    """Lower bound on f(s) from the number of distinct k-mers (k >= 4)."""
    s = BinarySeq.coerce(s)
    if k < 4:
        raise InvalidInput("the k-mer bound needs k >= 4")
    if s.length < k:
        raise InvalidInput(f"sequence of length {s.length} has no {k}-mers")
    return -(-kmer_count(s, k) // (k - 1))


def ceil_log2_ratio(n: int, d: int) -> int:
    """Smallest e >= 0 with d * 2**e >= n."""
    e = 0
    while d << e < n:
        e += 1
    return e


def log_lower_bound(s: BinarySeq | str) -> int:
    s = BinarySeq.coerce(s)
    return ceil_log2_ratio(s.length, root_of(s).length)


def runs(s: BinarySeq) -> list[tuple[int, int]]:
    """Maximal runs as ``(start, length)`` pairs, 1-based."""
    text = str(s)
    out = []
    start = 0
    for pos in range(1, len(text) + 1):
        if pos == len(text) or text[pos] != text[start]:
            out.append((start + 1, pos - start))
            start = pos
    return out
